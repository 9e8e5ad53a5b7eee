//! Fitting `s_n ~ c base^n n^theta (ln n)^k` in multiprecision.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use rug::ops::Pow;
use rug::{Float, Rational};

use super::RecurrenceError;

#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub base: Float,
    pub theta: f64,
    pub log_power: u32,
    /// Multiplies every term before the fit (undoes a normalization).
    pub scale: Float,
}

impl AsymptoticModel {
    /// `base = (sqrt(2) + 1)^2` at `precision` bits, unit scale.
    pub fn silver(theta: f64, log_power: u32, precision: u32) -> Self {
        let s = Float::with_val(precision, 2).sqrt() + 1u32;
        Self { base: s.square(), theta, log_power, scale: Float::with_val(precision, 1) }
    }

    pub fn with_scale(mut self, scale: Float) -> Self {
        self.scale = scale;
        self
    }
}

#[derive(Debug, Clone)]
pub struct AsymptoticFit {
    /// `(n, c_n)` over the window.
    pub values: Vec<(usize, f64)>,
    /// `c_n` at the end of the window.
    pub last: f64,
    /// `max c_n - min c_n` over the window.
    pub max_drift: f64,
}

impl AsymptoticFit {
    pub fn value_at(&self, n: usize) -> Option<f64> {
        let first = self.values.first()?.0;
        self.values.get(n.checked_sub(first)?).map(|&(_, c)| c)
    }
}

/// `c_n = scale s_n / (base^n n^theta (ln n)^k)` for `n` in `window`.
pub fn asymptotic_fit(
    seq: &[Rational],
    window: RangeInclusive<usize>,
    model: &AsymptoticModel,
    precision: u32,
) -> Result<AsymptoticFit, RecurrenceError> {
    let (start, end) = (*window.start(), *window.end());
    if end <= start {
        return Err(RecurrenceError::Window(format!("{start}..={end} needs at least two points")));
    }
    if end >= seq.len() {
        return Err(RecurrenceError::Window(format!("ends at {end} but only {} terms", seq.len())));
    }
    if start < 1 || (model.log_power > 0 && start < 2) {
        return Err(RecurrenceError::Window(format!("must start where ln n > 0, got {start}")));
    }
    let mut power = Float::with_val(precision, (&model.base).pow(start as u32));
    let mut values = Vec::with_capacity(end - start + 1);
    for n in window {
        let s = &seq[n];
        if s.cmp0() != Ordering::Greater {
            return Err(RecurrenceError::NonPositiveTerm { index: n });
        }
        let nf = Float::with_val(precision, n);
        let mut den = Float::with_val(precision, &power * nf.clone().pow(model.theta));
        if model.log_power > 0 {
            den *= nf.ln().pow(model.log_power);
        }
        let c = Float::with_val(precision, s) * &model.scale / den;
        values.push((n, c.to_f64()));
        power *= &model.base;
    }
    let last = values.last().unwrap().1;
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, c)| (lo.min(c), hi.max(c)));
    Ok(AsymptoticFit { values, last, max_drift: hi - lo })
}

/// Local exponent `ln(s_{n+1} / (base s_n)) / ln((n+1)/n)`, which tends to
/// `theta` when `s_n ~ c base^n n^theta`.
pub fn exponent_estimates(
    seq: &[Rational],
    base: &Float,
    window: RangeInclusive<usize>,
    precision: u32,
) -> Result<Vec<(usize, f64)>, RecurrenceError> {
    let (start, end) = (*window.start(), *window.end());
    if start == 0 || end + 1 >= seq.len() || end < start {
        return Err(RecurrenceError::Window(format!("{start}..={end} with {} terms", seq.len())));
    }
    let mut out = Vec::with_capacity(end - start + 1);
    for n in window {
        if seq[n].cmp0() != Ordering::Greater || seq[n + 1].cmp0() != Ordering::Greater {
            return Err(RecurrenceError::NonPositiveTerm { index: n });
        }
        let ratio = Float::with_val(precision, &seq[n + 1]) / Float::with_val(precision, &seq[n]) / base;
        let step = Float::with_val(precision, n + 1) / n as u32;
        out.push((n, (ratio.ln() / step.ln()).to_f64()));
    }
    Ok(out)
}
