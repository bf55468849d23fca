//! Dense complex linear algebra on top of LAPACK: singular values, numerical
//! rank, kernels, inverses and eigenvalues for the small matrices the
//! closure engines produce.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigVals, Inverse, SVD};

use crate::error::CoreError;
use crate::scalar::Scalar;

pub type CMatrix = Array2<Scalar>;
pub type CVector = Array1<Scalar>;

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>, CoreError> {
    let (_, s, _) = a
        .svd(false, false)
        .map_err(|e| CoreError::NumericalFailure(e.to_string()))?;
    Ok(s.to_vec())
}

/// Number of singular values above `rank_eps` times the largest one.
pub fn numerical_rank(a: &CMatrix, rank_eps: f64) -> Result<usize, CoreError> {
    let s = singular_values(a)?;
    let cut = rank_eps * s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > cut).count())
}

/// Orthonormal basis of the numerical kernel: the right singular vectors
/// whose singular value is at most `rank_eps` times the largest (vectors
/// past `min(rows, cols)` have singular value zero by convention).
pub fn nullspace(a: &CMatrix, rank_eps: f64) -> Result<Vec<CVector>, CoreError> {
    let (_, s, vh) = a
        .svd(false, true)
        .map_err(|e| CoreError::NumericalFailure(e.to_string()))?;
    let vh = vh.expect("requested right singular vectors");
    let cut = rank_eps * s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&v| v > cut).count();
    let cols = a.ncols();
    let mut basis = Vec::with_capacity(cols - rank);
    for i in rank..cols {
        basis.push(vh.row(i).mapv(|z| z.conj()));
    }
    Ok(basis)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix, CoreError> {
    a.inv().map_err(|_| CoreError::SingularMatrix)
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Scalar>, CoreError> {
    let vals = a
        .eigvals()
        .map_err(|e| CoreError::NumericalFailure(e.to_string()))?;
    Ok(vals.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn kernel_of_single_row() {
        // 1x3 row [1,0,0]: kernel spanned by e_1, e_2
        let a = array![[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]];
        let basis = nullspace(&a, 1e-10).unwrap();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v[0].norm() < 1e-12);
            let residual: Scalar = a.row(0).iter().zip(v.iter()).map(|(x, y)| x * y).sum();
            assert!(residual.norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let a = CMatrix::eye(3);
        assert!(nullspace(&a, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn kernel_of_two_rows() {
        let a = array![
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]
        ];
        let basis = nullspace(&a, 1e-10).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0][2].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_counts_dominant_values() {
        let a = array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1e-14, 0.0)]
        ];
        assert_eq!(numerical_rank(&a, 1e-10).unwrap(), 1);
    }
}
