//! Inversions `i_q` centered just outside a surface point `p`, with
//! `q = p + eps n(p)`. The image areas and volumes blow up like `pi / eps^2`
//! and `pi / (6 eps^3)`.
//!
//! Integrals are pulled back to the source chart: the area element scales by
//! `|x - q|^-4` and the enclosed volume is `(1/3) |int (w . N) / |w|^6|` with
//! `w = x - q` and `N = x_u x x_v`. Composite Gauss–Legendre panels are
//! graded geometrically toward `p`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use super::{graded_rule, iso_from, series_value, QuadratureError};
use crate::series::SeriesKind;

const PANEL_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    /// Torus of revolution with tube radius 1, `p = (R + 1, 0, 0)`.
    Torus { major: f64 },
    /// Unit sphere, `p = (1, 0, 0)`.
    UnitSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundingRow {
    pub eps: f64,
    /// `eps^2 Area(i_q(S))`, tends to `pi`.
    pub scaled_area: f64,
    /// `eps^3 Vol(i_q(S))`, tends to `pi / 6`.
    pub scaled_volume: f64,
    /// Reduced volume of `i_q(S)`, tends to 1.
    pub iso: f64,
    /// Change in `scaled_area` when the panels get twice the nodes.
    pub area_error: f64,
    pub volume_error: f64,
}

/// Symmetric rule on `[-pi, pi]` graded toward 0.
fn centered_rule(h: f64, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = graded_rule(0.0, PI, h, per_panel);
    let mut xs: Vec<f64> = x.iter().rev().map(|t| -t).collect();
    let mut ws: Vec<f64> = w.iter().rev().copied().collect();
    xs.extend(x);
    ws.extend(w);
    (xs, ws)
}

/// `(Area, Vol)` of the image of the torus `T_R` under `i_q`.
fn torus_pullback(major: f64, eps: f64, per_panel: usize) -> (f64, f64) {
    let q = major + 1.0 + eps;
    let (us, wu) = centered_rule(eps / (4.0 * (major + 1.0)), per_panel);
    let (vs, wv) = centered_rule(eps / 4.0, per_panel);
    let trig_u: Vec<(f64, f64)> = us.iter().map(|u| (u.cos(), u.sin())).collect();
    let (mut area, mut flux) = (0.0, 0.0);
    for (v, &wvj) in vs.iter().zip(&wv) {
        let (cv, sv) = (v.cos(), v.sin());
        let rho = major + cv;
        let (mut row_a, mut row_f) = (0.0, 0.0);
        for (&(cu, su), &wui) in trig_u.iter().zip(&wu) {
            let w = [rho * cu - q, rho * su, sv];
            let d2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
            let inv4 = 1.0 / (d2 * d2);
            row_a += wui * inv4;
            // N / rho = (cos v cos u, cos v sin u, sin v)
            let wn = w[0] * cv * cu + w[1] * cv * su + w[2] * sv;
            row_f += wui * wn * inv4 / d2;
        }
        area += wvj * rho * row_a;
        flux += wvj * rho * row_f;
    }
    (area, flux.abs() / 3.0)
}

/// `(Area, Vol)` of the image of the unit sphere under `i_q`, in `tau = 1 - cos theta`.
fn sphere_pullback(eps: f64, per_panel: usize) -> (f64, f64) {
    let (ts, ws) = graded_rule(0.0, 2.0, eps * eps / 4.0, per_panel);
    let (mut area, mut flux) = (0.0, 0.0);
    for (&t, &w) in ts.iter().zip(&ws) {
        let c = 1.0 - t;
        let d2 = eps * eps + 2.0 * (1.0 + eps) * t;
        let inv4 = 1.0 / (d2 * d2);
        area += w * inv4;
        flux += w * (1.0 - (1.0 + eps) * c) * inv4 / d2;
    }
    (2.0 * PI * area, 2.0 * PI * flux.abs() / 3.0)
}

/// Closed form for the sphere: `i_q(S^2)` is a sphere of radius `1 / (eps (2 + eps))`.
pub fn sphere_rounding_exact(eps: f64) -> RoundingRow {
    let s = 2.0 + eps;
    RoundingRow {
        eps,
        scaled_area: 4.0 * PI / (s * s),
        scaled_volume: 4.0 * PI / 3.0 / (s * s * s),
        iso: 1.0,
        area_error: 0.0,
        volume_error: 0.0,
    }
}

/// `(Area, Vol)` of `i_q(T_sqrt2)` from the exact series: `i_q` is a
/// homothety of `SCT_[1/|q|,0,0]` after a reflection, so
/// `Area = A(1/|q|) / |q|^4` and `Vol = V(1/|q|) / |q|^6`.
pub fn inverted_clifford_oracle(eps: f64) -> Result<(f64, f64), QuadratureError> {
    let qn = SQRT_2 + 1.0 + eps;
    let a = 1.0 / qn;
    let area = series_value(SeriesKind::Area, a)? / qn.powi(4);
    let vol = series_value(SeriesKind::Volume, a)? / qn.powi(6);
    Ok((area, vol))
}

/// One row per `eps`, each checked against a run with doubled panel nodes.
pub fn rounding_scan(surface: Surface, eps_list: &[f64]) -> Result<Vec<RoundingRow>, QuadratureError> {
    if let Surface::Torus { major } = surface {
        if !(major > 1.0) || !major.is_finite() {
            return Err(QuadratureError::InvalidTorus(major));
        }
    }
    let pullback = |eps: f64, n: usize| match surface {
        Surface::Torus { major } => torus_pullback(major, eps, n),
        Surface::UnitSphere => sphere_pullback(eps, n),
    };
    eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(QuadratureError::InvalidEps(eps));
            }
            let (area, vol) = pullback(eps, PANEL_NODES);
            let (area2, vol2) = pullback(eps, 2 * PANEL_NODES);
            let (e2, e3) = (eps * eps, eps * eps * eps);
            Ok(RoundingRow {
                eps,
                scaled_area: e2 * area,
                scaled_volume: e3 * vol,
                iso: iso_from(area, vol),
                area_error: e2 * (area - area2).abs(),
                volume_error: e3 * (vol - vol2).abs(),
            })
        })
        .collect()
}
