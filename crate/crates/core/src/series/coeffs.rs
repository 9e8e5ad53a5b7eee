//! Direct summation of the normalized Taylor coefficients `â_j`, `v̂_j`.
//!
//! Every sum is carried out over the integers. The powers `2^((q-3p)/2)`
//! are shifted by `4^(2l+1)` so the exponent is never negative, and the radial
//! integrals `eta` are scaled by `lcm(1..=2J+2)`. Only even `s = p + q`
//! contribute because odd Wallis integrals vanish.

use rug::{Integer, Rational};

/// Binomial, Wallis and radial-integral tables for all indices `j <= max_index`.
///
/// The engine is immutable after construction and can be shared across threads.
#[derive(Debug, Clone)]
pub struct CoefficientEngine {
    max_index: usize,
    binom: Vec<Vec<Integer>>,
    /// `H[l][q] = sum_{p <= 2l+1, p+q even} C(2l+1,p) 4^(2l+1-p) G(p+q)`
    area_inner: Vec<Vec<Integer>>,
    /// `G(s) E(s, t)` for even `s`, indexed `[s / 2][t]`.
    volume_radial: Vec<Vec<Integer>>,
    /// `lcm(1..=2J+2)`, the common denominator of every `eta`.
    eta_scale: Integer,
}

impl CoefficientEngine {
    pub fn new(max_index: usize) -> Self {
        let j_max = max_index;
        let rows = 2 * j_max + 2;
        let mut binom: Vec<Vec<Integer>> = Vec::with_capacity(rows + 1);
        for n in 0..=rows {
            let mut row = Vec::with_capacity(n + 1);
            row.push(Integer::from(1));
            for k in 1..n {
                let v = Integer::from(&binom[n - 1][k - 1] + &binom[n - 1][k]);
                row.push(v);
            }
            if n > 0 {
                row.push(Integer::from(1));
            }
            binom.push(row);
        }

        // G(s) = C(s, s/2) 2^(s/2), i.e. the Wallis factor with the 2^s scaled out.
        let central = |s: usize| -> Integer { Integer::from(&binom[s][s / 2] << (s / 2) as u32) };

        let mut area_inner = Vec::with_capacity(j_max + 1);
        for l in 0..=j_max {
            let shifted = shifted_binomials(&binom, l);
            let mut row = Vec::with_capacity(j_max - l + 1);
            for q in 0..=(j_max - l) {
                let mut acc = Integer::new();
                for (p, a) in shifted.iter().enumerate().skip(q % 2).step_by(2) {
                    acc += a * central(p + q);
                }
                row.push(acc);
            }
            area_inner.push(row);
        }

        let mut eta_scale = Integer::from(1);
        for k in 1..=(2 * j_max + 2) as u32 {
            eta_scale.lcm_u_mut(k);
        }
        // E(s, t) = D * eta(s, t) over even s with s + 2t <= 2J, by
        // E(s, 0) = D / (s + 2) and E(s, t) = 2 E(s, t-1) + E(s+2, t-1).
        let n_even = j_max + 1;
        let mut eta: Vec<Vec<Integer>> =
            (0..n_even).map(|h| vec![Integer::from(eta_scale.div_exact_u_ref(2 * h as u32 + 2))]).collect();
        for t in 1..=j_max {
            for h in 0..n_even {
                if 2 * h + 2 * t > 2 * j_max {
                    break;
                }
                let v = Integer::from(&eta[h][t - 1] << 1) + &eta[h + 1][t - 1];
                eta[h].push(v);
            }
        }
        let volume_radial = eta
            .into_iter()
            .enumerate()
            .map(|(h, row)| {
                let g = central(2 * h);
                row.into_iter().map(|e| e * &g).collect()
            })
            .collect();

        Self { max_index, binom, area_inner, volume_radial, eta_scale }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    fn check(&self, j: usize) {
        assert!(j <= self.max_index, "index {j} beyond engine capacity {}", self.max_index);
    }

    /// `C(j+l; j-l, l, l) = C(j+l, j-l) C(2l, l)`
    fn multinomial(&self, j: usize, l: usize) -> Integer {
        Integer::from(&self.binom[j + l][j - l] * &self.binom[2 * l][l])
    }

    /// `â_j = a_j / (sqrt(2) pi^2)`.
    pub fn area(&self, j: usize) -> Rational {
        self.check(j);
        let mut total = Integer::new();
        for l in 0..=j {
            let m = j - l;
            let mut inner = Integer::new();
            let mut three = Integer::from(1);
            for q in (0..=m).rev() {
                // three = 3^(m - q)
                let weight = Integer::from(&self.binom[m][q] * &three);
                inner += weight * &self.area_inner[l][q];
                three *= 3;
            }
            let mut term = inner * self.multinomial(j, l) * (j + l + 1) as u32;
            term <<= 3 * (j - l) as u32;
            if (j - l) % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        Rational::from((total, Integer::from(1) << (3 * j) as u32))
    }

    /// `v̂_j = v_j / (sqrt(2) pi^2)`.
    pub fn volume(&self, j: usize) -> Rational {
        self.check(j);
        let mut total = Integer::new();
        for l in 0..=j {
            let m = j - l;
            let shifted = shifted_binomials(&self.binom, l);
            let mut outer = Integer::new();
            for q in 0..=m {
                let t = m - q;
                let mut inner = Integer::new();
                for (p, a) in shifted.iter().enumerate().skip(q % 2).step_by(2) {
                    inner += a * &self.volume_radial[(p + q) / 2][t];
                }
                outer += inner * &self.binom[m][q];
            }
            let mut term = outer * self.multinomial(j, l) * ((j + l + 1) * (j + l + 2)) as u32;
            term <<= 3 * (j - l) as u32;
            if (j - l) % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        let den = Integer::from(&self.eta_scale << (3 * j + 1) as u32);
        Rational::from((total, den))
    }

    pub fn areas(&self, count: usize) -> Vec<Rational> {
        (0..count).map(|j| self.area(j)).collect()
    }

    pub fn volumes(&self, count: usize) -> Vec<Rational> {
        (0..count).map(|j| self.volume(j)).collect()
    }
}

/// `C(2l+1, p) 4^(2l+1-p)` for `p = 0..=2l+1`.
fn shifted_binomials(binom: &[Vec<Integer>], l: usize) -> Vec<Integer> {
    let n = 2 * l + 1;
    (0..=n).map(|p| Integer::from(&binom[n][p] << (2 * (n - p)) as u32)).collect()
}

/// `â_j` by direct summation.
pub fn area_coeff(j: usize) -> Rational {
    CoefficientEngine::new(j).area(j)
}

/// `v̂_j` by direct summation.
pub fn volume_coeff(j: usize) -> Rational {
    CoefficientEngine::new(j).volume(j)
}

/// `â_0, ..., â_{count-1}`.
pub fn area_coeffs(count: usize) -> Vec<Rational> {
    if count == 0 {
        return Vec::new();
    }
    CoefficientEngine::new(count - 1).areas(count)
}

/// `v̂_0, ..., v̂_{count-1}`.
pub fn volume_coeffs(count: usize) -> Vec<Rational> {
    if count == 0 {
        return Vec::new();
    }
    CoefficientEngine::new(count - 1).volumes(count)
}
