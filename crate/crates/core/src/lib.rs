//! Numerical laboratory for boundary-anisotropic (Catlin-type) Finsler metrics
//! on smoothly bounded model domains in C^2.
//!
//! The crate is organized around a pipeline:
//!
//! * [`geometry`] — defining-function domains, boundary distance, nearest-point
//!   projection, complex tangent/normal splitting, seeded interior sampling;
//! * [`metrics`] — the Catlin-type metric built from iterated Levi-form
//!   coefficients, its distance-to-boundary variant, the globally patched
//!   metric, and the lower/upper comparison shapes;
//! * [`curves`] — polyline curves, Euclidean and Finsler lengths, maximal
//!   boundary distance along a curve, resampling;
//! * [`geodesics`] — boundary-graded graph search plus local descent, producing
//!   certified quasi-geodesics;
//! * [`hyperbolicity`] — Gromov products, four-point delta estimation,
//!   Hausdorff distances, geodesic-stability measurements;
//! * [`experiments`] — verification campaigns that fit the non-explicit
//!   constants and exponents and write machine-readable reports.
//!
//! All public evaluation paths are pure over immutable domain data and safe to
//! call concurrently.

pub mod curves;
pub mod error;
pub mod experiments;
pub mod geodesics;
pub mod geometry;
pub mod hyperbolicity;
pub mod jets;
pub mod metrics;
pub mod poly;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use types::{ComplexPoint2, ComplexVector2};
