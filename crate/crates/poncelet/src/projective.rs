//! Homogeneous coordinates for points and hyperplanes of projective space,
//! projectivities acting on both, and numerical incidence.

use ndarray::Array2;

use crate::error::CoreError;
use crate::linalg::{self, CMatrix, CVector};
use crate::scalar::{is_finite, Scalar};
use crate::tolerance::Tolerance;

/// Whether a coordinate vector is read as a point or as a hyperplane.
/// Projectivities act on the two covariantly and contravariantly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorRole {
    Point,
    Hyperplane,
}

/// Projective coordinate vector, stored normalized: every vector is divided
/// by its first coordinate of maximal modulus, so that entry is exactly 1.
/// This makes equality of projective objects a plain coordinate comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousVector {
    coords: Vec<Scalar>,
    role: VectorRole,
}

impl HomogeneousVector {
    pub fn new(coords: &[Scalar], role: VectorRole, tol: &Tolerance) -> Result<Self, CoreError> {
        normalize(coords, role, tol)
    }

    pub fn point(coords: &[Scalar], tol: &Tolerance) -> Result<Self, CoreError> {
        normalize(coords, VectorRole::Point, tol)
    }

    pub fn hyperplane(coords: &[Scalar], tol: &Tolerance) -> Result<Self, CoreError> {
        normalize(coords, VectorRole::Hyperplane, tol)
    }

    /// Standard basis point `e_i` of projective `dim`-space.
    pub fn basis_point(i: usize, dim: usize) -> Self {
        let mut coords = vec![Scalar::ZERO; dim + 1];
        coords[i] = Scalar::ONE;
        HomogeneousVector {
            coords,
            role: VectorRole::Point,
        }
    }

    /// Coordinate hyperplane `x_i = 0` of projective `dim`-space.
    pub fn coordinate_hyperplane(i: usize, dim: usize) -> Self {
        let mut coords = vec![Scalar::ZERO; dim + 1];
        coords[i] = Scalar::ONE;
        HomogeneousVector {
            coords,
            role: VectorRole::Hyperplane,
        }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn role(&self) -> VectorRole {
        self.role
    }

    /// Ambient projective dimension (one less than the coordinate count).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Scales a coordinate vector by the inverse of its max-modulus entry (the
/// entry itself, not its modulus, so that entry becomes exactly 1).
pub fn normalize(
    coords: &[Scalar],
    role: VectorRole,
    tol: &Tolerance,
) -> Result<HomogeneousVector, CoreError> {
    if coords.iter().any(|&z| !is_finite(z)) {
        return Err(CoreError::NumericalFailure(
            "non-finite coordinate".to_string(),
        ));
    }
    let mut pivot = 0usize;
    let mut max = 0.0f64;
    for (i, z) in coords.iter().enumerate() {
        let m = z.norm();
        if m > max {
            max = m;
            pivot = i;
        }
    }
    if max <= tol.rel_eps {
        return Err(CoreError::ZeroVector);
    }
    let p = coords[pivot];
    let coords = coords.iter().map(|&z| z / p).collect();
    Ok(HomogeneousVector { coords, role })
}

/// `|sum p_i h_i| / (||p||_2 ||h||_2)`: zero exactly when the point lies on
/// the hyperplane. The pairing is bilinear, not sesquilinear.
pub fn incidence_residual(
    p: &HomogeneousVector,
    h: &HomogeneousVector,
) -> Result<f64, CoreError> {
    if p.coords.len() != h.coords.len() {
        return Err(CoreError::DimensionMismatch(p.coords.len(), h.coords.len()));
    }
    let pairing: Scalar = p
        .coords
        .iter()
        .zip(h.coords.iter())
        .map(|(a, b)| a * b)
        .sum();
    let np: f64 = p.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nh: f64 = h.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(pairing.norm() / (np * nh))
}

/// Invertible linear change of coordinates. Points transform by the matrix,
/// hyperplanes by its inverse transpose, so incidence is preserved.
#[derive(Debug, Clone)]
pub struct Projectivity {
    matrix: CMatrix,
    inverse_transpose: CMatrix,
}

impl Projectivity {
    pub fn new(matrix: CMatrix, tol: &Tolerance) -> Result<Self, CoreError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(CoreError::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        let s = linalg::singular_values(&matrix)?;
        let (largest, smallest) = (s[0], s[s.len() - 1]);
        let invertible = smallest.is_finite() && smallest > tol.rank_eps * largest;
        if !invertible {
            return Err(CoreError::SingularMatrix);
        }
        let inverse_transpose = linalg::inverse(&matrix)?.t().to_owned();
        Ok(Projectivity {
            matrix,
            inverse_transpose,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Projectivity {
            matrix: Array2::eye(dim + 1),
            inverse_transpose: Array2::eye(dim + 1),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Ambient projective dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn apply(
        &self,
        v: &HomogeneousVector,
        tol: &Tolerance,
    ) -> Result<HomogeneousVector, CoreError> {
        if v.coords.len() != self.matrix.ncols() {
            return Err(CoreError::DimensionMismatch(
                v.coords.len(),
                self.matrix.ncols(),
            ));
        }
        let m = match v.role {
            VectorRole::Point => &self.matrix,
            VectorRole::Hyperplane => &self.inverse_transpose,
        };
        let image: Vec<Scalar> = m
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v.coords.iter()).map(|(a, b)| a * b).sum())
            .collect();
        normalize(&image, v.role, tol)
    }
}

/// Numerical kernel of a matrix as projective vectors with the given role.
/// The underlying basis is orthonormal before projective normalization.
pub fn nullspace(
    a: &CMatrix,
    role: VectorRole,
    tol: &Tolerance,
) -> Result<Vec<HomogeneousVector>, CoreError> {
    let basis = linalg::nullspace(a, tol.rank_eps)?;
    basis
        .iter()
        .map(|v: &CVector| normalize(v.as_slice().unwrap(), role, tol))
        .collect()
}
