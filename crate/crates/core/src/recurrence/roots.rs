//! Real roots of integer polynomials with exact multiplicities.
//!
//! Multiplicities come from a square-free factorization over the rationals,
//! so they are never guessed from numerical clustering. Each square-free
//! factor is solved by Aberth iteration and polished by Newton's method in
//! multiprecision.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::{Float, Integer, Rational};

use super::RecurrenceError;

const POLISH_BITS: u32 = 256;
const CLUSTER_TOL: f64 = 1e-8;

/// Dense polynomial over `Q`, coefficients from low to high degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(Vec<Rational>);

impl Polynomial {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.cmp0() == Ordering::Equal) {
            c.pop();
        }
        Polynomial(c)
    }

    pub fn from_integers(c: &[Integer]) -> Self {
        Self::new(c.iter().map(Rational::from).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        let l = self.lead().clone();
        Polynomial(self.0.iter().map(|c| Rational::from(c / &l)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::new();
        Self::new(
            (0..n).map(|i| Rational::from(self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))).collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        if self.0.len() < d.0.len() {
            return (Polynomial(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::new(); self.0.len() - dd];
        for i in (0..q.len()).rev() {
            let f = Rational::from(&r[i + dd] / d.lead());
            if f.cmp0() != Ordering::Equal {
                for (j, c) in d.0.iter().enumerate() {
                    r[i + j] -= Rational::from(&f * c);
                }
            }
            q[i] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Yun's algorithm: `(factor, multiplicity)` with pairwise coprime square-free factors.
    pub fn square_free(&self) -> Vec<(Polynomial, usize)> {
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a).0;
            let c = d.div_rem(&a).0;
            d = c.sub(&nb.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = nb;
            i += 1;
        }
        out
    }

    fn eval_complex(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c.to_f64();
        }
        (p, dp)
    }
}

#[derive(Debug, Clone)]
pub struct CharRoot {
    pub value: Float,
    pub multiplicity: usize,
}

impl CharRoot {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>, RecurrenceError> {
    let n = p.degree();
    let lead = p.lead().to_f64();
    let bound = 1.0 + p.0[..n].iter().map(|c| (c.to_f64() / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (pv, dv) = p.eval_complex(z[k]);
            if pv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / dv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            z[k] -= step;
            worst = worst.max(step.norm() / z[k].norm().max(1.0));
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    // Aberth stalls near 1e-15 in double precision; the Newton polish
    // downstream does the rest as long as the estimates are separated.
    Ok(z)
}

fn polish(p: &Polynomial, x0: f64) -> Result<Float, RecurrenceError> {
    let coeffs: Vec<Float> = p.0.iter().map(|c| Float::with_val(POLISH_BITS, c)).collect();
    let mut x = Float::with_val(POLISH_BITS, x0);
    let eps = Float::with_val(POLISH_BITS, Float::i_exp(1, -(POLISH_BITS as i32) + 8));
    for _ in 0..100 {
        let mut v = Float::new(POLISH_BITS);
        let mut dv = Float::new(POLISH_BITS);
        for c in coeffs.iter().rev() {
            dv = dv * &x + &v;
            v = v * &x + c;
        }
        if dv.is_zero() {
            return Err(RecurrenceError::NoConvergence);
        }
        let step = v / dv;
        x -= &step;
        let scale = Float::with_val(POLISH_BITS, x.abs_ref()) + 1u32;
        if Float::with_val(POLISH_BITS, step.abs_ref()) <= eps.clone() * scale {
            return Ok(x);
        }
    }
    Err(RecurrenceError::NoConvergence)
}

/// Real roots of `sum_i poly[i] z^i`, grouped with exact multiplicity, ascending.
pub fn char_roots(poly: &[Integer]) -> Result<Vec<CharRoot>, RecurrenceError> {
    let p = Polynomial::from_integers(poly);
    if p.is_zero() {
        return Err(RecurrenceError::Degenerate);
    }
    let mut roots = Vec::new();
    for (factor, multiplicity) in p.square_free() {
        if factor.degree() == 1 {
            let r = -Rational::from(&factor.0[0] / &factor.0[1]);
            roots.push(CharRoot { value: Float::with_val(POLISH_BITS, &r), multiplicity });
            continue;
        }
        for z in aberth(&factor)? {
            if z.im.abs() > CLUSTER_TOL * z.norm().max(1.0) {
                return Err(RecurrenceError::NonRealRoot { re: z.re, im: z.im });
            }
            roots.push(CharRoot { value: polish(&factor, z.re)?, multiplicity });
        }
    }
    roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal));
    for w in roots.windows(2) {
        let (x, y) = (w[0].to_f64(), w[1].to_f64());
        if (x - y).abs() <= CLUSTER_TOL * x.abs().max(1.0) {
            return Err(RecurrenceError::UnresolvedCluster(x, y));
        }
    }
    Ok(roots)
}
