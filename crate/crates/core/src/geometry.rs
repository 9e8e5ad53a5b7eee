//! Plane and space geometry of circle inversions of the torus
//! `T_R = {((R + cos v) cos u, (R + cos v) sin u, sin v)}`.
//!
//! The shape of a toroidal cyclide is determined by the cross section with
//! one of its two mirror planes. `P1` is the plane holding the two mutually
//! exterior circles, `P2` the plane where one circle lies inside the other.
//! Everything that is rational in `(rho, R)` is generic over [`Scalar`] so the
//! same code runs exactly on [`rug::Rational`] inputs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("torus major radius must exceed 1, got {0}")]
    InvalidTorus(f64),
    #[error("cannot invert the inversion center itself")]
    PoleAtCenter,
    #[error("inversion center lies on the torus (rho = {rho}, R = {major})")]
    CenterOnSurface { rho: f64, major: f64 },
    #[error("concentric circle pair has no radical axis")]
    NoRadicalAxis,
    #[error("rho = {rho} is outside the canonical range [0, sqrt(R^2 - 1)] for R = {major}")]
    OutOfCanonicalRange { rho: f64, major: f64 },
    #[error("not a toroidal cyclide: need a > L - a > f, got a = {a}, L - a = {l_minus_a}, f = {f}")]
    NonToroidal { a: f64, l_minus_a: f64, f: f64 },
    #[error("{op} needs measurements taken in plane {expected}")]
    WrongPlane { op: &'static str, expected: SymmetryPlane },
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain { what: &'static str, value: f64, domain: &'static str },
    #[error("invalid measurements: {0}")]
    InvalidMeasurements(&'static str),
    #[error("inversion center lies on the circle, its image is a line")]
    CircleThroughCenter,
}

type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

/// A point of the one-point compactified plane. Inversion swaps its center
/// with [`ExtendedPoint::Infinity`].
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedPoint<T> {
    Finite(Point2<T>),
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusParams<T> {
    major: T,
}

impl<T: Scalar> TorusParams<T> {
    pub fn new(major: T) -> Result<Self> {
        check_torus(&major)?;
        Ok(Self { major })
    }

    pub fn major(&self) -> &T {
        &self.major
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circle<T> {
    pub center: Point2<T>,
    pub radius: T,
}

/// Two circles centered on the first axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePair<T> {
    pub c1: T,
    pub r1: T,
    pub c2: T,
    pub r2: T,
}

impl<T: Scalar> CirclePair<T> {
    pub fn circles(&self) -> (Circle<T>, Circle<T>) {
        let on_axis = |c: &T, r: &T| Circle { center: Point2::new(c.clone(), T::zero()), radius: r.clone() };
        (on_axis(&self.c1, &self.r1), on_axis(&self.c2, &self.r2))
    }

    pub fn is_exterior(&self) -> bool {
        (self.c1.clone() - self.c2.clone()).abs() > self.r1.clone() + self.r2.clone()
    }

    pub fn is_nested(&self) -> bool {
        (self.c1.clone() - self.c2.clone()).abs() < (self.r1.clone() - self.r2.clone()).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryPlane {
    P1,
    P2,
}

impl fmt::Display for SymmetryPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryPlane::P1 => f.write_str("P1"),
            SymmetryPlane::P2 => f.write_str("P2"),
        }
    }
}

/// Which coordinate plane carries the `P1` cross section of
/// `i_(rho,0,0)(T_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionBranch {
    /// `rho < R - 1`: `P1` is the x-z plane.
    Exterior,
    /// `rho > R - 1`: `P1` is the x-y plane.
    Interior,
}

/// Cross-section data `(r1, r2, d)` of a cyclide with `r1 >= r2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclideMeasurements<T> {
    pub r1: T,
    pub r2: T,
    pub d: T,
    pub plane: SymmetryPlane,
}

impl<T: Scalar> CyclideMeasurements<T> {
    pub fn new(r1: T, r2: T, d: T, plane: SymmetryPlane) -> Result<Self> {
        if r1 < r2 {
            return Err(GeometryError::InvalidMeasurements("r1 must be >= r2"));
        }
        if r2 <= T::zero() {
            return Err(GeometryError::InvalidMeasurements("radii must be positive"));
        }
        if d < T::zero() {
            return Err(GeometryError::InvalidMeasurements("center distance must be >= 0"));
        }
        Ok(Self { r1, r2, d, plane })
    }

    /// The shape invariant `(r1 / r2, d / r2)`.
    pub fn normalized(&self) -> (T, T) {
        (self.r1.clone() / self.r2.clone(), self.d.clone() / self.r2.clone())
    }
}

/// Maxwell's string construction: ellipse major radius `a`, focal length `f`
/// and string length `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellData<T> {
    pub a: T,
    pub f: T,
    pub l: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterPosition {
    Outside,
    On,
    Inside,
}

/// Plain record emitted by the command line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub rho: f64,
    #[serde(rename = "R")]
    pub major: f64,
    pub r1: f64,
    pub r2: f64,
    pub d: f64,
    pub plane: SymmetryPlane,
}

impl MeasurementRecord {
    pub fn new<T: Scalar>(rho: &T, major: &T, m: &CyclideMeasurements<T>) -> Self {
        Self {
            rho: rho.to_f64(),
            major: major.to_f64(),
            r1: m.r1.to_f64(),
            r2: m.r2.to_f64(),
            d: m.d.to_f64(),
            plane: m.plane,
        }
    }
}

fn check_torus<T: Scalar>(major: &T) -> Result<()> {
    if *major > T::one() {
        Ok(())
    } else {
        Err(GeometryError::InvalidTorus(major.to_f64()))
    }
}

fn check_nonnegative<T: Scalar>(what: &'static str, v: &T) -> Result<()> {
    if *v >= T::zero() {
        Ok(())
    } else {
        Err(GeometryError::Domain { what, value: v.to_f64(), domain: "[0, inf)" })
    }
}

/// `rho^2 <= R^2 - 1`, decided without square roots.
fn in_canonical_range<T: Scalar>(rho: &T, major: &T) -> bool {
    rho.square() <= major.square() - T::one()
}

/// The cross section `pi(T_R ∩ P)`: two unit circles centered at `±R`.
pub fn torus_cross_section<T: Scalar>(major: T) -> Result<CirclePair<T>> {
    check_torus(&major)?;
    Ok(CirclePair { c1: major.clone(), r1: T::one(), c2: -major, r2: T::one() })
}

/// Inversion in the unit circle about `center`.
pub fn invert_point_2d<T: Scalar>(center: &Point2<T>, x: &Point2<T>) -> Result<Point2<T>> {
    let wx = x.x.clone() - center.x.clone();
    let wy = x.y.clone() - center.y.clone();
    let s = wx.square() + wy.square();
    if s.is_zero() {
        return Err(GeometryError::PoleAtCenter);
    }
    Ok(Point2::new(center.x.clone() + wx / s.clone(), center.y.clone() + wy / s))
}

/// Inversion on the extended plane: the center goes to infinity and back.
pub fn invert_extended<T: Scalar>(center: &Point2<T>, x: &ExtendedPoint<T>) -> ExtendedPoint<T> {
    match x {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(center.clone()),
        ExtendedPoint::Finite(p) => match invert_point_2d(center, p) {
            Ok(q) => ExtendedPoint::Finite(q),
            Err(_) => ExtendedPoint::Infinity,
        },
    }
}

/// Image of a circle under inversion in the unit circle about `center`.
pub fn invert_circle<T: Scalar>(center: &Point2<T>, circle: &Circle<T>) -> Result<Circle<T>> {
    let wx = circle.center.x.clone() - center.x.clone();
    let wy = circle.center.y.clone() - center.y.clone();
    let power = wx.square() + wy.square() - circle.radius.square();
    if power.is_zero() {
        return Err(GeometryError::CircleThroughCenter);
    }
    Ok(Circle {
        center: Point2::new(center.x.clone() + wx / power.clone(), center.y.clone() + wy / power.clone()),
        radius: circle.radius.clone() / power.abs(),
    })
}

/// The torus cross section inverted about `(rho, 0)`.
///
/// Radii `1/|(rho-R)^2-1|`, `1/((rho+R)^2-1)` and centers
/// `rho - (rho∓R)/((rho∓R)^2-1)`.
pub fn inverted_cross_section<T: Scalar>(rho: T, major: T) -> Result<CirclePair<T>> {
    check_torus(&major)?;
    check_nonnegative("rho", &rho)?;
    let minus = rho.clone() - major.clone();
    let plus = rho.clone() + major.clone();
    let minus_pow = minus.square() - T::one();
    if minus_pow.is_zero() {
        return Err(GeometryError::CenterOnSurface { rho: rho.to_f64(), major: major.to_f64() });
    }
    let plus_pow = plus.square() - T::one();
    Ok(CirclePair {
        c1: rho.clone() - minus / minus_pow.clone(),
        r1: T::one() / minus_pow.abs(),
        c2: rho - plus / plus_pow.clone(),
        r2: T::one() / plus_pow,
    })
}

/// Abscissa of the radical axis of a pair of circles centered on the axis.
pub fn radical_axis<T: Scalar>(pair: &CirclePair<T>) -> Result<T> {
    let gap = pair.c2.clone() - pair.c1.clone();
    if gap.is_zero() {
        return Err(GeometryError::NoRadicalAxis);
    }
    let num = (pair.c2.square() - pair.c1.square()) + (pair.r1.square() - pair.r2.square());
    Ok(num / (T::from_i64(2) * gap))
}

pub fn inversion_branch<T: Scalar>(rho: &T, major: &T) -> Result<InversionBranch> {
    let edge = major.clone() - T::one();
    if *rho < edge {
        Ok(InversionBranch::Exterior)
    } else if *rho > edge {
        Ok(InversionBranch::Interior)
    } else {
        Err(GeometryError::CenterOnSurface { rho: rho.to_f64(), major: major.to_f64() })
    }
}

/// `P1` measurements `(r1, r2, d)` of `i_(rho,0,0)(T_R)` for `rho` in the
/// canonical range `[0, sqrt(R^2 - 1)]`.
pub fn cyclide_measurements<T: Scalar>(rho: T, major: T) -> Result<CyclideMeasurements<T>> {
    check_torus(&major)?;
    check_nonnegative("rho", &rho)?;
    if !in_canonical_range(&rho, &major) {
        return Err(GeometryError::OutOfCanonicalRange { rho: rho.to_f64(), major: major.to_f64() });
    }
    let one = T::one();
    let (r1, r2, d) = match inversion_branch(&rho, &major)? {
        InversionBranch::Exterior => {
            let minus = rho.clone() - major.clone();
            let plus = rho + major;
            let minus_pow = minus.square() - one.clone();
            let plus_pow = plus.square() - one.clone();
            let d = plus / plus_pow.clone() - minus / minus_pow.clone();
            (one.clone() / minus_pow, one / plus_pow, d)
        }
        InversionBranch::Interior => {
            let lo = major.clone() - one.clone();
            let hi = major.clone() + one.clone();
            let r1 = lo.clone() / (rho.square() - lo.square());
            let r2 = hi.clone() / (hi.square() - rho.square());
            let d = one.clone() / ((major.clone() + rho.clone()).square() - one.clone())
                - one.clone() / ((major - rho).square() - one);
            (r1, r2, d)
        }
    };
    Ok(CyclideMeasurements { r1, r2, d, plane: SymmetryPlane::P1 })
}

/// `a = d/2`, `f = (r1-r2)/2`, `L = (d+r1+r2)/2`; rejects non-toroidal data.
pub fn maxwell_data<T: Scalar>(m: &CyclideMeasurements<T>) -> Result<MaxwellData<T>> {
    if m.plane != SymmetryPlane::P1 {
        return Err(GeometryError::WrongPlane { op: "maxwell_data", expected: SymmetryPlane::P1 });
    }
    let two = T::from_i64(2);
    let a = m.d.clone() / two.clone();
    let f = (m.r1.clone() - m.r2.clone()) / two.clone();
    let l = (m.d.clone() + m.r1.clone() + m.r2.clone()) / two;
    let l_minus_a = l.clone() - a.clone();
    if !(a > l_minus_a && l_minus_a > f) {
        return Err(GeometryError::NonToroidal { a: a.to_f64(), l_minus_a: l_minus_a.to_f64(), f: f.to_f64() });
    }
    Ok(MaxwellData { a, f, l })
}

/// Converts `P1` measurements to the `P2` cross section.
pub fn p1_to_p2<T: Scalar>(m: &CyclideMeasurements<T>) -> Result<CyclideMeasurements<T>> {
    if m.plane != SymmetryPlane::P1 {
        return Err(GeometryError::WrongPlane { op: "p1_to_p2", expected: SymmetryPlane::P1 });
    }
    let two = T::from_i64(2);
    let sum = m.r1.clone() + m.r2.clone();
    Ok(CyclideMeasurements {
        r1: (m.d.clone() + sum.clone()) / two.clone(),
        r2: (m.d.clone() - sum) / two,
        d: m.r1.clone() - m.r2.clone(),
        plane: SymmetryPlane::P2,
    })
}

/// Inverse of [`p1_to_p2`].
pub fn p2_to_p1<T: Scalar>(m: &CyclideMeasurements<T>) -> Result<CyclideMeasurements<T>> {
    if m.plane != SymmetryPlane::P2 {
        return Err(GeometryError::WrongPlane { op: "p2_to_p1", expected: SymmetryPlane::P2 });
    }
    let two = T::from_i64(2);
    let diff = m.r1.clone() - m.r2.clone();
    Ok(CyclideMeasurements {
        r1: (diff.clone() + m.d.clone()) / two.clone(),
        r2: (diff - m.d.clone()) / two,
        d: m.r1.clone() + m.r2.clone(),
        plane: SymmetryPlane::P1,
    })
}

/// `r1/r2` on the exterior branch, increasing from 1 at `rho = 0`.
pub fn lambda1<T: Scalar>(rho: T, major: T) -> Result<T> {
    check_torus(&major)?;
    if rho < T::zero() || rho >= major.clone() - T::one() {
        return Err(GeometryError::Domain { what: "rho", value: rho.to_f64(), domain: "[0, R - 1)" });
    }
    let one = T::one();
    Ok(((rho.clone() + major.clone()).square() - one.clone()) / ((rho - major).square() - one))
}

/// `r1/r2` on the interior branch, decreasing to 1 at `rho = sqrt(R^2 - 1)`.
pub fn lambda2<T: Scalar>(rho: T, major: T) -> Result<T> {
    check_torus(&major)?;
    if rho <= major.clone() - T::one() || !in_canonical_range(&rho, &major) {
        return Err(GeometryError::Domain { what: "rho", value: rho.to_f64(), domain: "(R - 1, sqrt(R^2 - 1)]" });
    }
    let lo = major.clone() - T::one();
    let hi = major + T::one();
    Ok(lo.clone() * (hi.square() - rho.square()) / (hi * (rho.square() - lo.square())))
}

/// The dual parameters `(R', rho')` giving the same cyclide shape.
pub fn duality_map(major: f64, rho: f64) -> Result<(f64, f64)> {
    check_torus(&major)?;
    check_nonnegative("rho", &rho)?;
    if !in_canonical_range(&rho, &major) {
        return Err(GeometryError::OutOfCanonicalRange { rho, major });
    }
    let s = (major * major - 1.0).sqrt();
    Ok((major / s, (s - rho) / ((s + rho) * s)))
}

/// Folds `rho > sqrt(R^2 - 1)` onto the canonical range via
/// `C(rho) = C((R^2 - 1) / rho)`.
pub fn fold_to_canonical<T: Scalar>(rho: T, major: T) -> Result<T> {
    check_torus(&major)?;
    check_nonnegative("rho", &rho)?;
    if in_canonical_range(&rho, &major) {
        Ok(rho)
    } else {
        Ok((major.square() - T::one()) / rho)
    }
}

/// Position of the torus `𝒯(rho)` relative to `T_R`. `f64::INFINITY` is
/// accepted and classified as outside.
pub fn classify_inversion_center<T: Scalar>(rho: T, major: T) -> Result<CenterPosition> {
    check_torus(&major)?;
    check_nonnegative("rho", &rho)?;
    let lo = major.clone() - T::one();
    let hi = major + T::one();
    Ok(if rho < lo || rho > hi {
        CenterPosition::Outside
    } else if rho == lo || rho == hi {
        CenterPosition::On
    } else {
        CenterPosition::Inside
    })
}

/// The two parameters `rho+ >= rho-` with `(rho_pt, z)` on `C(rho±)`.
/// Their product is `R^2 - 1`.
pub fn rho_pair_through_point(rho_pt: f64, z: f64, major: f64) -> Result<(f64, f64)> {
    check_torus(&major)?;
    if !(rho_pt > 0.0) {
        return Err(GeometryError::Domain { what: "rho", value: rho_pt, domain: "(0, inf)" });
    }
    let k = major * major - 1.0;
    let s = rho_pt * rho_pt + z * z + k;
    let disc = s * s - 4.0 * rho_pt * rho_pt * k;
    // Nonnegative by AM-GM; only rounding can push it below zero.
    assert!(disc >= -1e-12 * s * s, "negative discriminant {disc}");
    let root = disc.max(0.0).sqrt();
    // Smaller root from the product, avoiding cancellation in s - root.
    Ok(((s + root) / (2.0 * rho_pt), 2.0 * rho_pt * k / (s + root)))
}

/// `count` points on `C(rho)`, the circle with diameter
/// `[rho, (R^2 - 1) / rho]` on the first axis, avoiding the axis itself.
pub fn points_on_parameter_circle(rho: f64, major: f64, count: usize) -> Result<Vec<Point2<f64>>> {
    check_torus(&major)?;
    if !(rho > 0.0) {
        return Err(GeometryError::Domain { what: "rho", value: rho, domain: "(0, inf)" });
    }
    let other = (major * major - 1.0) / rho;
    let center = 0.5 * (rho + other);
    let radius = 0.5 * (rho - other).abs();
    Ok((0..count)
        .map(|k| {
            let t = std::f64::consts::PI * (k as f64 + 0.5) / count as f64 + 0.1;
            Point2::new(center + radius * t.cos(), radius * t.sin())
        })
        .collect())
}

/// Inverts `pi(T_R ∩ P)` about an arbitrary point of the plane.
pub fn inverted_section_at(center: &Point2<f64>, major: f64) -> Result<(Circle<f64>, Circle<f64>)> {
    let (c1, c2) = torus_cross_section(major)?.circles();
    Ok((invert_circle(center, &c1)?, invert_circle(center, &c2)?))
}

/// `(r1, r2, d)` of two circles with the larger radius first.
pub fn pair_measurements(a: &Circle<f64>, b: &Circle<f64>) -> (f64, f64, f64) {
    let d = (a.center.x - b.center.x).hypot(a.center.y - b.center.y);
    (a.radius.max(b.radius), a.radius.min(b.radius), d)
}

/// Largest relative deviation of `(r1/r2, d/r2)` among inversions of
/// `pi(T_R ∩ P)` about `samples` points of `C(rho)`.
pub fn homothety_deviation(rho: f64, major: f64, samples: usize) -> Result<f64> {
    let mut shapes = Vec::with_capacity(samples);
    for p in points_on_parameter_circle(rho, major, samples)? {
        let (a, b) = inverted_section_at(&p, major)?;
        let (r1, r2, d) = pair_measurements(&a, &b);
        shapes.push((r1 / r2, d / r2));
    }
    let Some(&(l0, d0)) = shapes.first() else {
        return Ok(0.0);
    };
    Ok(shapes.iter().map(|&(l, d)| ((l - l0) / l0).abs().max(((d - d0) / d0).abs())).fold(0.0, f64::max))
}

/// Relative change of `(r1/r2, d/r2)` under [`duality_map`].
pub fn duality_deviation(major: f64, rho: f64) -> Result<f64> {
    let (major2, rho2) = duality_map(major, rho)?;
    let (l1, d1) = cyclide_measurements(rho, major)?.normalized();
    let (l2, d2) = cyclide_measurements(rho2, major2)?.normalized();
    Ok(((l1 - l2) / l1).abs().max(((d1 - d2) / d1).abs()))
}

/// The interior-branch parameter with `lambda2(rho2) = lambda1(rho1)`.
pub fn branch_partner(rho1: f64, major: f64) -> Result<f64> {
    let lambda = lambda1(rho1, major)?;
    let (lo, hi) = (major - 1.0, major + 1.0);
    let rho2_sq = (lo * hi * hi + lambda * hi * lo * lo) / (lo + lambda * hi);
    Ok(rho2_sq.sqrt())
}

/// Relative gap between the `d/r2` of the two branches at equal `r1/r2`.
/// Zero means the interior branch repeats a shape of the exterior one.
pub fn branch_shape_gap(rho1: f64, major: f64) -> Result<f64> {
    let rho2 = branch_partner(rho1, major)?;
    let (l1, d1) = cyclide_measurements(rho1, major)?.normalized();
    let (l2, d2) = cyclide_measurements(rho2, major)?.normalized();
    debug_assert!(((l1 - l2) / l1).abs() < 1e-9);
    Ok(((d1 - d2) / d1).abs())
}
