//! P-recursive sequences: `sum_i r_i(n) s_{n+i} = 0` with polynomial `r_i`.

mod asymptotic;
mod guess;
pub mod known;
mod roots;

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use asymptotic::{asymptotic_fit, exponent_estimates, AsymptoticFit, AsymptoticModel};
pub use guess::{guess, guess_default, nullspace, GuessResult};
pub use roots::{char_roots, CharRoot, Polynomial};

#[derive(Debug, Error)]
pub enum RecurrenceError {
    #[error("coefficient matrix must be a non-empty rectangle")]
    Shape,
    #[error("leading polynomial (last row) is identically zero")]
    ZeroLeadingRow,
    #[error("recurrence violated at n = {n}: residue {residue}")]
    Violation { n: usize, residue: Rational },
    #[error("need {needed} terms, only {available} available")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("{equations} equations cannot determine {unknowns} unknowns")]
    TooFewEquations { equations: usize, unknowns: usize },
    #[error("no P-recurrence of order {order} and degree {degree} fits the data")]
    NoRecurrence { order: usize, degree: usize },
    #[error("leading polynomial vanishes at n = {n}; cannot extend")]
    SingularExtension { n: usize },
    #[error("characteristic polynomial is zero (top-degree column vanishes)")]
    Degenerate,
    #[error("root {re} + {im}i is not real")]
    NonRealRoot { re: f64, im: f64 },
    #[error("roots {0} and {1} could not be separated")]
    UnresolvedCluster(f64, f64),
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("fit window {0}")]
    Window(String),
    #[error("term {index} is not positive, asymptotic fit impossible")]
    NonPositiveTerm { index: usize },
    #[error("malformed recurrence: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Row `i` of `coeffs` holds the coefficients of `r_i(n) = sum_k coeffs[i][k] n^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRecurrence", into = "RawRecurrence")]
pub struct PRecurrence {
    coeffs: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct RawRecurrence {
    order: usize,
    degree: usize,
    matrix: Vec<Vec<String>>,
}

impl From<PRecurrence> for RawRecurrence {
    fn from(rec: PRecurrence) -> Self {
        RawRecurrence {
            order: rec.order(),
            degree: rec.degree(),
            matrix: rec.coeffs.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl TryFrom<RawRecurrence> for PRecurrence {
    type Error = RecurrenceError;

    fn try_from(raw: RawRecurrence) -> Result<Self, Self::Error> {
        let coeffs = raw
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.trim().parse::<Rational>().map_err(|e| RecurrenceError::Parse(format!("{s:?}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rec = PRecurrence::new(coeffs)?;
        if rec.order() != raw.order || rec.degree() != raw.degree {
            return Err(RecurrenceError::Parse(format!(
                "declared (order, degree) = ({}, {}) but matrix is ({}, {})",
                raw.order,
                raw.degree,
                rec.order(),
                rec.degree()
            )));
        }
        Ok(rec)
    }
}

/// `num/den`, or just `num` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

fn is_zero(q: &Rational) -> bool {
    q.cmp0() == Ordering::Equal
}

impl PRecurrence {
    pub fn new(coeffs: Vec<Vec<Rational>>) -> Result<Self, RecurrenceError> {
        let width = coeffs.first().map_or(0, Vec::len);
        if width == 0 || coeffs.iter().any(|row| row.len() != width) {
            return Err(RecurrenceError::Shape);
        }
        if coeffs.last().unwrap().iter().all(is_zero) {
            return Err(RecurrenceError::ZeroLeadingRow);
        }
        Ok(Self { coeffs })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self, RecurrenceError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// `r_i(n)` by Horner's rule.
    pub fn poly_eval(&self, i: usize, n: i64) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs[i].iter().rev() {
            acc *= n;
            acc += c;
        }
        acc
    }

    /// Integer matrix with content 1 whose last row has a positive top coefficient.
    pub fn integer_matrix(&self) -> Vec<Vec<Integer>> {
        let mut den = Integer::from(1);
        for c in self.coeffs.iter().flatten() {
            den.lcm_mut(c.denom());
        }
        let mut rows: Vec<Vec<Integer>> = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.numer() * Integer::from(&den / c.denom())).collect())
            .collect();
        let mut content = Integer::new();
        for c in rows.iter().flatten() {
            content.gcd_mut(c);
        }
        let top = rows.last().unwrap().iter().rev().find(|c| c.cmp0() != Ordering::Equal).unwrap();
        if top.cmp0() == Ordering::Less {
            content = -content;
        }
        for c in rows.iter_mut().flatten() {
            c.div_exact_mut(&content);
        }
        rows
    }

    /// Same recurrence scaled to the canonical integer form.
    pub fn normalized(&self) -> Self {
        Self {
            coeffs: self
                .integer_matrix()
                .into_iter()
                .map(|row| row.into_iter().map(Rational::from).collect())
                .collect(),
        }
    }

    /// Equality up to a nonzero scalar.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Exact residues `sum_i r_i(n) s_{n+i}` for `n = 0..=n_max`; first nonzero is an error.
    pub fn check_satisfies(&self, seq: &[Rational], n_max: usize) -> Result<(), RecurrenceError> {
        let needed = n_max + self.order() + 1;
        if seq.len() < needed {
            return Err(RecurrenceError::InsufficientTerms { needed, available: seq.len() });
        }
        for n in 0..=n_max {
            let mut residue = Rational::new();
            for (i, s) in seq[n..=n + self.order()].iter().enumerate() {
                residue += self.poly_eval(i, n as i64) * s;
            }
            if !is_zero(&residue) {
                return Err(RecurrenceError::Violation { n, residue });
            }
        }
        Ok(())
    }

    /// First `count` terms from the first `r` of `initial`, solving for `s_{n+r}`.
    pub fn extend(&self, initial: &[Rational], count: usize) -> Result<Vec<Rational>, RecurrenceError> {
        let r = self.order();
        if initial.len() < r {
            return Err(RecurrenceError::InsufficientTerms { needed: r, available: initial.len() });
        }
        let m = self.integer_matrix();
        let eval = |i: usize, n: usize| -> Integer {
            let mut acc = Integer::new();
            for c in m[i].iter().rev() {
                acc *= n as u64;
                acc += c;
            }
            acc
        };
        let mut out: Vec<Rational> = initial[..r.min(count)].to_vec();
        while out.len() < count {
            let n = out.len() - r;
            let lead = eval(r, n);
            if lead.cmp0() == Ordering::Equal {
                return Err(RecurrenceError::SingularExtension { n });
            }
            let window = &out[n..];
            let mut den = Integer::from(1);
            for s in window {
                if *s.denom() != 1 {
                    den.lcm_mut(s.denom());
                }
            }
            let mut num = Integer::new();
            for (i, s) in window.iter().enumerate() {
                let scaled = s.numer() * Integer::from(&den / s.denom());
                num += eval(i, n) * scaled;
            }
            out.push(Rational::from((-num, lead * den)));
        }
        Ok(out)
    }

    /// `sum_i coeffs[i][d] z^i` as integers with content 1 and positive leading coefficient.
    pub fn characteristic_poly(&self) -> Result<Vec<Integer>, RecurrenceError> {
        let d = self.degree();
        let col: Vec<&Rational> = self.coeffs.iter().map(|row| &row[d]).collect();
        if col.iter().all(|c| is_zero(c)) {
            return Err(RecurrenceError::Degenerate);
        }
        let mut den = Integer::from(1);
        for c in &col {
            den.lcm_mut(c.denom());
        }
        let mut poly: Vec<Integer> = col.iter().map(|c| c.numer() * Integer::from(&den / c.denom())).collect();
        while poly.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            poly.pop();
        }
        let mut content = Integer::new();
        for c in &poly {
            content.gcd_mut(c);
        }
        if poly.last().unwrap().cmp0() == Ordering::Less {
            content = -content;
        }
        for c in poly.iter_mut() {
            c.div_exact_mut(&content);
        }
        Ok(poly)
    }

    pub fn to_json(&self) -> Result<String, RecurrenceError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, RecurrenceError> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for PRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.coeffs {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    AllPositive { checked: usize },
    FirstNonPositive { index: usize },
}

/// Exact sign scan of every term.
pub fn positivity_scan(seq: &[Rational]) -> Positivity {
    match seq.iter().position(|s| s.cmp0() != Ordering::Greater) {
        Some(index) => Positivity::FirstNonPositive { index },
        None => Positivity::AllPositive { checked: seq.len() },
    }
}
