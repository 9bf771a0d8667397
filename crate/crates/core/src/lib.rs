//! Symbolic-numeric toolkit for the involutive structure on the real
//! blow-up of ℝⁿ in ℂⁿ.
//!
//! The crate is organized around a small exact/float power-series kernel:
//!
//! - [`series`]: truncated multivariate power series with exact rational or
//!   double complex coefficients, plus the shared file format in [`io`].
//! - [`geometry`]: blow-up charts, the blow-down map, the involutive frame
//!   and its rank geometry, and the flag-variety realization.
//! - [`engine`]: solution verification, holomorphic-germ reconstruction,
//!   and the inhomogeneous system with its analyticity certificates.
//! - [`bounds`]: certified coefficient bounds for real polynomials on boxes,
//!   with Chebyshev extremal witnesses.
//! - [`wedge`]: a desk-scale edge-of-the-wedge extension pipeline built on
//!   the reconstruction engine.

pub mod bounds;
pub mod coeff;
pub mod corpus;
pub mod engine;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod multiindex;
pub mod quadrature;
pub mod series;
pub mod wedge;

pub use coeff::{Coefficient, Mode, Real};
pub use multiindex::MultiIndex;
pub use series::{Series, SeriesError};
