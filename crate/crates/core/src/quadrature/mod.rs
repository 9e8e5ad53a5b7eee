//! Numerical area and volume of `SCT_[a,0,0](T_sqrt2)` and of inverted
//! tori and spheres, independent of the exact series.
//!
//! The Clifford torus is parametrized as
//! `x(u, v, r) = ((sqrt2 + r sin v) cos u, (sqrt2 + r sin v) sin u, r cos v)`,
//! so `A(a) = int Q^-2 (sqrt2 + sin v) du dv` and
//! `V(a) = int Q^-3 r (sqrt2 + r sin v) du dv dr` with
//! `Q = 1 + 2 a x_1 + |x|^2 a^2`.

mod gauss;
mod rounding;

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;
use thiserror::Error;

use crate::series::{series_derivative, series_eval, SeriesError, SeriesKind, SeriesTable};
use crate::CONVERGENCE_RADIUS;

pub use gauss::{gauss_legendre, gauss_on, graded_rule};
pub use rounding::{inverted_clifford_oracle, rounding_scan, sphere_rounding_exact, RoundingRow, Surface};

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("|a| = {0} is outside the disk |a| < sqrt(2) - 1")]
    OutsideDisk(f64),
    #[error("grid sizes must be at least 4, got {0:?}")]
    InvalidGrid([usize; 3]),
    #[error("eps must be positive and finite, got {0}")]
    InvalidEps(f64),
    #[error("torus major radius must exceed 1, got {0}")]
    InvalidTorus(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Node counts: trapezoid in `u` and `v`, Gauss–Legendre in `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub n_u: usize,
    pub n_v: usize,
    pub n_r: usize,
}

/// Scale of the periodic grid: `n_uv = GRID_C / (sqrt2 - 1 - a)`.
pub const GRID_C: f64 = 12.0;
/// Scale of the radial rule: `n_r = RADIAL_C / sqrt(sqrt2 - 1 - a)`.
pub const RADIAL_C: f64 = 5.0;

impl Grid {
    pub fn new(n_u: usize, n_v: usize, n_r: usize) -> Result<Self, QuadratureError> {
        if n_u < 4 || n_v < 4 || n_r < 4 {
            return Err(QuadratureError::InvalidGrid([n_u, n_v, n_r]));
        }
        Ok(Self { n_u, n_v, n_r })
    }

    /// Default grid for parameter `a`, refined as `a` approaches the radius.
    pub fn for_parameter(a: f64) -> Result<Self, QuadratureError> {
        let gap = check_disk(a)?;
        let n = ((GRID_C / gap).ceil() as usize).max(64);
        let n_r = ((RADIAL_C / gap.sqrt()).ceil() as usize).max(16);
        Self::new(n + n % 2, n + n % 2, n_r)
    }

    pub fn doubled(&self) -> Self {
        Self { n_u: 2 * self.n_u, n_v: 2 * self.n_v, n_r: 2 * self.n_r }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub grid: Grid,
    /// `|value - value on the doubled grid|`.
    pub error_estimate: f64,
}

pub fn conformal_q(a: f64, x: [f64; 3]) -> f64 {
    let n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    1.0 + 2.0 * x[0] * a + n2 * a * a
}

fn check_disk(a: f64) -> Result<f64, QuadratureError> {
    let gap = CONVERGENCE_RADIUS - a.abs();
    if !(gap > 0.0) {
        return Err(QuadratureError::OutsideDisk(a));
    }
    Ok(gap)
}

fn sines(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|i| (i as f64 * h).sin()).collect()
}

/// Trapezoid nodes `cos(2 pi i / n)` folded by `u -> 2 pi - u`, with multiplicity.
fn folded_cosines(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..=n / 2).map(|i| (((i as f64) * h).cos(), if i == 0 || 2 * i == n { 1.0 } else { 2.0 })).collect()
}

/// `(int Q^-2 dArea, int x1' Q^-2 dArea)` where `x1' = (x1 + |x|^2 a) / Q` is
/// the first coordinate of the transformed point.
fn surface_sums(a: f64, n_u: usize, n_v: usize) -> (f64, f64) {
    let cos_u = folded_cosines(n_u);
    let sin_v = sines(n_v);
    let (mut area, mut moment) = (0.0, 0.0);
    for &sv in &sin_v {
        let rho = SQRT_2 + sv;
        let n2 = 3.0 + 2.0 * SQRT_2 * sv;
        let (mut row_a, mut row_m) = (0.0, 0.0);
        for &(cu, mult) in &cos_u {
            let x1 = rho * cu;
            let q = 1.0 + 2.0 * a * x1 + n2 * a * a;
            let w = mult / (q * q);
            row_a += w;
            row_m += w * (x1 + n2 * a) / q;
        }
        area += rho * row_a;
        moment += rho * row_m;
    }
    let h = (2.0 * PI / n_u as f64) * (2.0 * PI / n_v as f64);
    (area * h, moment * h)
}

/// `(int Q^-3 dVol, int x1' Q^-3 dVol)`.
fn solid_sums(a: f64, grid: Grid) -> (f64, f64) {
    let cos_u = folded_cosines(grid.n_u);
    let sin_v = sines(grid.n_v);
    let (nodes, weights) = gauss_on(grid.n_r, 0.0, 1.0);
    let (mut vol, mut moment) = (0.0, 0.0);
    for (&r, &wr) in nodes.iter().zip(&weights) {
        for &sv in &sin_v {
            let rho = SQRT_2 + r * sv;
            let n2 = 2.0 + 2.0 * SQRT_2 * r * sv + r * r;
            let (mut row_v, mut row_m) = (0.0, 0.0);
            for &(cu, mult) in &cos_u {
                let x1 = rho * cu;
                let q = 1.0 + 2.0 * a * x1 + n2 * a * a;
                let w = mult / (q * q * q);
                row_v += w;
                row_m += w * (x1 + n2 * a) / q;
            }
            let jac = wr * r * rho;
            vol += jac * row_v;
            moment += jac * row_m;
        }
    }
    let h = (2.0 * PI / grid.n_u as f64) * (2.0 * PI / grid.n_v as f64);
    (vol * h, moment * h)
}

/// `A(a)` on `grid`, with the doubled grid as error estimate.
pub fn area_numeric(a: f64, grid: Grid) -> Result<QuadratureResult, QuadratureError> {
    check_disk(a)?;
    let value = surface_sums(a, grid.n_u, grid.n_v).0;
    let fine = grid.doubled();
    let finer = surface_sums(a, fine.n_u, fine.n_v).0;
    Ok(QuadratureResult { value, grid, error_estimate: (value - finer).abs() })
}

/// `V(a)` on `grid`, with the doubled grid as error estimate.
pub fn volume_numeric(a: f64, grid: Grid) -> Result<QuadratureResult, QuadratureError> {
    check_disk(a)?;
    let value = solid_sums(a, grid).0;
    let finer = solid_sums(a, grid.doubled()).0;
    Ok(QuadratureResult { value, grid, error_estimate: (value - finer).abs() })
}

/// `V / ((4 pi / 3) (A / 4 pi)^(3/2))`.
pub fn iso_from(area: f64, volume: f64) -> f64 {
    volume / (4.0 * PI / 3.0 * (area / (4.0 * PI)).powf(1.5))
}

/// Reduced volume of `SCT_[a,0,0](T_sqrt2)` from the two quadratures on `grid`.
pub fn iso_ratio(a: f64, grid: Grid) -> Result<f64, QuadratureError> {
    check_disk(a)?;
    let area = surface_sums(a, grid.n_u, grid.n_v).0;
    let vol = solid_sums(a, grid).0;
    Ok(iso_from(area, vol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoSample {
    pub a: f64,
    pub area: f64,
    pub volume: f64,
    pub iso: f64,
}

/// `samples` equispaced values `a = 0, ..., max_a` on default grids.
pub fn iso_curve(samples: usize, max_a: f64) -> Result<Vec<IsoSample>, QuadratureError> {
    check_disk(max_a)?;
    (0..samples)
        .map(|i| {
            let a = if samples == 1 { 0.0 } else { max_a * i as f64 / (samples - 1) as f64 };
            iso_sample(a, Grid::for_parameter(a)?)
        })
        .collect()
}

/// Area, volume and reduced volume at one `a` on an explicit grid.
pub fn iso_sample(a: f64, grid: Grid) -> Result<IsoSample, QuadratureError> {
    check_disk(a)?;
    let area = surface_sums(a, grid.n_u, grid.n_v).0;
    let volume = solid_sums(a, grid).0;
    Ok(IsoSample { a, area, volume, iso: iso_from(area, volume) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentersGap {
    /// `2 V'/V - 3 A'/A` from the exact series.
    pub direct: f64,
    /// `12 (x^A - x^V)` from quadrature centroids.
    pub centers: f64,
}

/// Number of exact terms so that the dropped tail is below double precision.
fn terms_for(a: f64) -> usize {
    let x = crate::SILVER_SQUARED * a * a;
    if x < 1e-3 {
        return 16;
    }
    // x^n n^4 < 1e-20 with margin for the polynomial factor
    let n = (-46.0 / x.ln()).ceil() as usize;
    (2 * n).max(16) + 40
}

/// Both sides of `Delta(a) = 12 (x^A - x^V)`.
pub fn centers_gap(a: f64, grid: Grid) -> Result<CentersGap, QuadratureError> {
    check_disk(a)?;
    let n = terms_for(a);
    let area = SeriesTable::by_recurrence(SeriesKind::Area, n)?;
    let vol = SeriesTable::by_recurrence(SeriesKind::Volume, n)?;
    let (a0, a1) = (series_eval(&area, a, n)?.normalized, series_derivative(&area, a, n)?.normalized);
    let (v0, v1) = (series_eval(&vol, a, n)?.normalized, series_derivative(&vol, a, n)?.normalized);
    let direct = 2.0 * v1 / v0 - 3.0 * a1 / a0;

    let (sa, sm) = surface_sums(a, grid.n_u, grid.n_v);
    let (va, vm) = solid_sums(a, grid);
    let centers = 12.0 * (sm / sa - vm / va);
    Ok(CentersGap { direct, centers })
}

/// Series value of `A(a)` or `V(a)` (kind `Area` or `Volume`) with enough terms
/// for double precision.
pub fn series_value(kind: SeriesKind, a: f64) -> Result<f64, QuadratureError> {
    check_disk(a)?;
    let n = terms_for(a);
    let t = SeriesTable::by_recurrence(kind, n)?;
    Ok(series_eval(&t, a, n)?.value)
}
