use thiserror::Error;

use crate::scalar::Scalar;

/// Failures of the shared projective / polynomial layer.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("all coordinates vanish, cannot normalize")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("polynomial is numerically zero")]
    ZeroPolynomial,
    #[error("polynomial has effective degree zero, no roots to compute")]
    DegreeZero,
    #[error("cross-ratio arguments {0} and {1} coincide")]
    DegenerateQuadruple(Scalar, Scalar),
    #[error("three-point correspondence is degenerate: {0}")]
    DegenerateTriple(String),
    #[error("tolerance field must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("numerical factorization failed: {0}")]
    NumericalFailure(String),
}

/// Failures of the pyramid closure engine.
#[derive(Debug, Clone, Error)]
pub enum PyramidError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-generic parameter: {0}")]
    ClusteredRoots(String),
    #[error("closure violated at k = {k}: max off-diagonal residual {max_residual:e} exceeds {limit:e}")]
    ClosureViolation {
        k: Scalar,
        max_residual: f64,
        limit: f64,
    },
    #[error("degenerate contact: {0}")]
    DegenerateContact(String),
    #[error("pyramid degenerate: {0}")]
    DegeneratePyramid(String),
}

/// Failures of the multilateral closure engine.
#[derive(Debug, Clone, Error)]
pub enum LateralError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point has vanishing leading coordinate, outside the affine chart")]
    ChartFailure,
    #[error("the two binary forms do not span a pencil")]
    DependentPencil,
    #[error("second form unusable: {0}")]
    BadSecondForm(String),
    #[error("bivariate form is not symmetric (defect {0:e})")]
    AsymmetricInput(f64),
    #[error("restriction to the tangent line at {0} drops degree")]
    DegenerateRestriction(Scalar),
    #[error("parameters cluster: {0}")]
    ClusteredParams(String),
    #[error("curve contains the base conic")]
    ContainsDiagonal,
    #[error("interpolation rank {got} deviates from expected {expected}")]
    RankDeviation { expected: usize, got: usize },
}
