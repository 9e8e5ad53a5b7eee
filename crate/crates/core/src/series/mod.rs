//! Exact Taylor coefficients of `A(a)`, `V(a)` for `SCT_[a,0,0](T_sqrt2)` and
//! of the numerator of the isoperimetric derivative.
//!
//! All coefficients are stored normalized so that they are rational:
//! `A(a) = sqrt(2) pi^2 sum â_j a^(2j)`, `V(a) = sqrt(2) pi^2 sum v̂_j a^(2j)`
//! and `2 V' A - 3 V A' = 4 pi^4 sum d̂_k a^(2k+1)`.

mod coeffs;
mod table;

use rug::{Integer, Rational};
use thiserror::Error;

pub use coeffs::{area_coeff, area_coeffs, volume_coeff, volume_coeffs, CoefficientEngine};
pub use table::{series_derivative, series_eval, SeriesEval, SeriesKind, SeriesTable};

use crate::recurrence::RecurrenceError;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("eta needs j - l - q >= 0, got {0}")]
    EtaDomain(i64),
    #[error("need {needed} terms, only {available} available")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("|a| = {0} is outside the disk of convergence |a| < sqrt(2) - 1")]
    OutsideDisk(f64),
    #[error("direct summation and recurrence extension disagree for {kind} at index {index}")]
    CrossCheck { kind: SeriesKind, index: usize },
    #[error("malformed series table: {0}")]
    Parse(String),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// `W(n)` with `int_0^{2 pi} sin^n = 2 pi W(n)`: `C(n, n/2) / 2^n` for even `n`, else 0.
pub fn wallis(n: u32) -> Rational {
    if n % 2 == 1 {
        return Rational::new();
    }
    let c = Integer::from(Integer::binomial_u(n, n / 2));
    Rational::from((c, Integer::from(1) << n))
}

/// `int_0^1 r^(p+q+1) (2 + r^2)^(j-l-q) dr`, expanded binomially.
pub fn eta(p: u32, q: u32, l: u32, j: u32) -> Result<Rational, SeriesError> {
    let e = j as i64 - l as i64 - q as i64;
    if e < 0 {
        return Err(SeriesError::EtaDomain(e));
    }
    let e = e as u32;
    let mut sum = Rational::new();
    for k in 0..=e {
        let num = Integer::from(Integer::binomial_u(e, k)) << (e - k);
        sum += Rational::from((num, Integer::from(2 * k + p + q + 2)));
    }
    Ok(sum)
}

/// `d̂_k = 2 sum_i (i+1) v̂_{i+1} â_{k-i} - 3 sum_i (i+1) â_{i+1} v̂_{k-i}`.
pub fn d_coeff(k: usize, area: &[Rational], volume: &[Rational]) -> Result<Rational, SeriesError> {
    let available = area.len().min(volume.len());
    if available < k + 2 {
        return Err(SeriesError::InsufficientTerms { needed: k + 2, available });
    }
    let mut left = Rational::new();
    let mut right = Rational::new();
    for i in 0..=k {
        let w = (i + 1) as u32;
        left += Rational::from(&volume[i + 1] * &area[k - i]) * w;
        right += Rational::from(&area[i + 1] * &volume[k - i]) * w;
    }
    Ok(left * 2u32 - right * 3u32)
}

/// `d̂_0, ..., d̂_{count-1}`; needs `count + 1` terms of each input.
pub fn d_coeffs(count: usize, area: &[Rational], volume: &[Rational]) -> Result<Vec<Rational>, SeriesError> {
    (0..count).map(|k| d_coeff(k, area, volume)).collect()
}
