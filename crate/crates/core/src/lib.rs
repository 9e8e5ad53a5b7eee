//! Exact and numerical tools for the Moebius images of the Clifford torus.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`geometry`]: circle inversions of torus cross sections, cyclide
//!   measurements and the shape-space maps between them.
//! * [`series`]: exact Taylor coefficients of the area and enclosed volume of
//!   `SCT_[a,0,0](T_sqrt2)` and of the isoperimetric derivative sequence.
//! * [`recurrence`]: P-recurrences: verification, guessing from a prefix,
//!   extension, characteristic roots, positivity scans and asymptotics.
//! * [`quadrature`]: independent numerical evaluation of the same area and
//!   volume integrals, the centers identity and the rounding limits.
//!
//! All exact arithmetic is done with GMP-backed [`Integer`] and [`Rational`].

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod quadrature;
pub mod recurrence;
pub mod scalar;
pub mod series;

pub use rug::{Integer, Rational};

pub use geometry::GeometryError;
pub use quadrature::QuadratureError;
pub use recurrence::RecurrenceError;
pub use series::SeriesError;

/// `sqrt(2) - 1`, the radius of the disk on which `A` and `V` are holomorphic.
pub const CONVERGENCE_RADIUS: f64 = std::f64::consts::SQRT_2 - 1.0;

/// `(sqrt(2) + 1)^2 = 3 + 2 sqrt(2)`, the dominant characteristic root.
pub const SILVER_SQUARED: f64 = 3.0 + 2.0 * std::f64::consts::SQRT_2;
