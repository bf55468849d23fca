//! Numerical engines for two classical closure phenomena of projective
//! geometry.
//!
//! The [`pyramid`] module works in projective n-space: given a conjugate pair
//! of rational normal curves (one through the vertices of an elementary
//! pyramid, one touching each of its faces with full contact order), it
//! generates and verifies the one-parameter family of pyramids simultaneously
//! inscribed in the first curve and circumscribed about the second.
//!
//! The [`lateral`] module works in the plane, modeled as the symmetric square
//! of the projective line: given an (n+1)-lateral tangent to a fixed conic
//! and a degree-n curve through all of its vertices, it traces the
//! one-parameter family of (n+1)-laterals inscribed in the curve and tangent
//! to the conic, starting from any point.
//!
//! Everything is computed over complex double precision and verified by
//! residuals against explicit tolerances; see [`Tolerance`]. The [`cli`]
//! module wraps both engines in a reproducible report-emitting command-line
//! front end.

pub mod cli;
mod error;
pub mod lateral;
pub mod linalg;
pub mod mobius;
pub mod poly;
pub mod projective;
pub mod pyramid;
mod scalar;
mod tolerance;

pub use error::{CoreError, LateralError, PyramidError};
pub use scalar::{approx_eq, is_finite, Scalar};
pub use tolerance::Tolerance;
