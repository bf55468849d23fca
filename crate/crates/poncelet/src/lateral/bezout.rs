//! The symmetric correspondence form of a pencil and its expression as a
//! plane curve.

use ndarray::Array2;

use super::ternary::TernaryForm;
use super::Pencil;
use crate::error::LateralError;
use crate::scalar::{re, Scalar};
use crate::tolerance::Tolerance;

/// Bivariate polynomial `B(u, v) = sum b_ij u^i v^j` with square coefficient
/// matrix; the declared bidegree is the matrix dimension minus one.
#[derive(Debug, Clone)]
pub struct BivariateForm {
    coeffs: Array2<Scalar>,
}

impl BivariateForm {
    pub fn new(coeffs: Array2<Scalar>) -> Result<Self, LateralError> {
        if coeffs.nrows() != coeffs.ncols() || coeffs.nrows() == 0 {
            return Err(LateralError::InvalidInput(format!(
                "need a nonempty square coefficient matrix, got {}x{}",
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        Ok(BivariateForm { coeffs })
    }

    pub fn bidegree(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    pub fn coeffs(&self) -> &Array2<Scalar> {
        &self.coeffs
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest difference between a coefficient and its transpose partner.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.coeffs.nrows();
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                defect = defect.max((self.coeffs[[i, j]] - self.coeffs[[j, i]]).norm());
            }
        }
        defect
    }

    pub fn eval(&self, u: Scalar, v: Scalar) -> Scalar {
        let n = self.coeffs.nrows();
        let mut up = vec![Scalar::ONE; n];
        let mut vp = vec![Scalar::ONE; n];
        for i in 1..n {
            up[i] = up[i - 1] * u;
            vp[i] = vp[i - 1] * v;
        }
        let mut acc = Scalar::ZERO;
        for ((i, j), &c) in self.coeffs.indexed_iter() {
            acc += c * up[i] * vp[j];
        }
        acc
    }
}

/// The divided difference `(F(u)G(v) - F(v)G(u)) / (u - v)` of a pencil of
/// degree-d forms: a symmetric form of bidegree (d-1, d-1) vanishing exactly
/// on the parameter pairs that share a member of the pencil.
///
/// Accumulated coefficient-wise as
/// `b_ij = -sum_p (F_p G_q - F_q G_p)` over `q = i + j + 1 - p`,
/// `p <= min(i, j)`, `q <= d`, which is the division result written out;
/// the formula is symmetric in (i, j) entry-for-entry, so the matrix is
/// exactly symmetric. The division itself leaves no remainder, which tests
/// verify against a synthetic-division oracle.
pub fn bezoutiant(pen: &Pencil) -> Result<BivariateForm, LateralError> {
    let d = pen.degree();
    if d == 0 {
        return Err(LateralError::InvalidInput(
            "pencil of constants has no correspondence".to_string(),
        ));
    }
    let f = pen.f().coeffs();
    let g = pen.g().coeffs();
    let w = |p: usize, q: usize| f[p] * g[q] - f[q] * g[p];
    let mut coeffs = Array2::<Scalar>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let mut acc = Scalar::ZERO;
            let p_min = (i + j + 1).saturating_sub(d);
            for p in p_min..=i.min(j) {
                acc -= w(p, i + j + 1 - p);
            }
            coeffs[[i, j]] = acc;
        }
    }
    BivariateForm::new(coeffs)
}

/// Rewrites a symmetric bivariate form in the elementary symmetric
/// coordinates `e1 = u + v`, `e2 = u v` and homogenizes with `x0`, giving
/// the unique degree-n plane curve with `T(1, u+v, uv) = B(u, v)`.
///
/// Power sums `u^r + v^r` are expanded through the integer recurrence
/// `P_r = e1 P_(r-1) - e2 P_(r-2)`, so the rewrite itself is exact; the
/// identity is still re-checked on an evaluation grid before returning.
pub fn to_plane_curve(b: &BivariateForm, tol: &Tolerance) -> Result<TernaryForm, LateralError> {
    let defect = b.symmetry_defect();
    if defect > tol.rel_eps * 1.0_f64.max(b.max_coeff_modulus()) {
        return Err(LateralError::AsymmetricInput(defect));
    }
    let n = b.bidegree();
    // power_sums[r][m] = coefficient of e1^(r-2m) e2^m in u^r + v^r
    let mut power_sums: Vec<Vec<f64>> = vec![vec![2.0], vec![1.0]];
    for r in 2..=n {
        let prev = &power_sums[r - 1];
        let prev2 = &power_sums[r - 2];
        let mut row = vec![0.0; r / 2 + 1];
        for (m, &c) in prev.iter().enumerate() {
            row[m] += c;
        }
        for (m, &c) in prev2.iter().enumerate() {
            row[m + 1] -= c;
        }
        power_sums.push(row);
    }
    let mut curve = TernaryForm::zeros(n);
    let coeffs = b.coeffs();
    for p in 0..=n {
        // diagonal term b_pp (uv)^p
        let c = coeffs[[p, p]];
        if c != Scalar::ZERO {
            *curve.coeff_mut(0, p) += c;
        }
        // symmetric pair b_pq (u^p v^q + u^q v^p) = b_pq (uv)^q (u^(p-q) + v^(p-q))
        for q in 0..p {
            let c = coeffs[[p, q]];
            if c == Scalar::ZERO {
                continue;
            }
            for (m, &ps) in power_sums[p - q].iter().enumerate() {
                *curve.coeff_mut(p - q - 2 * m, q + m) += c * re(ps);
            }
        }
    }
    let curve = TernaryForm::new(n, curve.coeffs().to_vec())?;
    // defining identity on an (n+2)^2 grid
    let scale = b.max_coeff_modulus();
    for a in 0..n + 2 {
        for bb in 0..n + 2 {
            let u = re(-1.3 + 0.7 * a as f64);
            let v = re(-1.1 + 0.6 * bb as f64);
            let lhs = curve.eval_chart(u + v, u * v);
            let rhs = b.eval(u, v);
            let local = scale * 1.0_f64.max(u.norm().max(v.norm())).powi(2 * n as i32);
            if (lhs - rhs).norm() > 1e3 * tol.rel_eps * local {
                return Err(LateralError::InvalidInput(format!(
                    "symmetric rewrite failed the grid identity at ({u}, {v})"
                )));
            }
        }
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lateral::BinaryForm;

    fn c(x: f64) -> Scalar {
        re(x)
    }
    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn demo_pencil() -> Pencil {
        let f = BinaryForm::from_roots(&[c(0.0), c(1.0), c(-1.0)]);
        let g = BinaryForm::constant(c(1.0), 3).unwrap();
        Pencil::new(f, g, &tol()).unwrap()
    }

    #[test]
    fn demo_bezoutiant_coefficients() {
        // F = t^3 - t, G = 1: B = u^2 + uv + v^2 - 1
        let b = bezoutiant(&demo_pencil()).unwrap();
        let m = b.coeffs();
        assert_eq!(b.bidegree(), 2);
        assert_eq!(m[[0, 0]], c(-1.0));
        assert_eq!(m[[1, 1]], c(1.0));
        assert_eq!(m[[2, 0]], c(1.0));
        assert_eq!(m[[0, 2]], c(1.0));
        assert_eq!(m[[1, 0]], c(0.0));
        assert_eq!(m[[2, 1]], c(0.0));
    }

    #[test]
    fn bezoutiant_is_exactly_symmetric() {
        let f = BinaryForm::new(vec![
            Scalar::new(0.3, 1.0),
            c(-2.0),
            Scalar::new(0.0, 0.7),
            c(1.4),
            c(0.2),
        ])
        .unwrap();
        let g = BinaryForm::new(vec![c(1.0), c(0.4), c(-0.6), Scalar::new(2.0, -1.0), c(0.9)])
            .unwrap();
        let b = bezoutiant(&Pencil::new(f, g, &tol()).unwrap()).unwrap();
        assert_eq!(b.symmetry_defect(), 0.0);
    }

    #[test]
    fn bezoutiant_vanishes_on_root_pairs_of_one_form() {
        let pen = demo_pencil();
        let b = bezoutiant(&pen).unwrap();
        for (u, v) in [(0.0, 1.0), (1.0, -1.0), (0.0, -1.0)] {
            assert!(b.eval(c(u), c(v)).norm() < 1e-14);
        }
    }

    #[test]
    fn swapping_the_pencil_negates_the_form() {
        let pen = demo_pencil();
        let swapped = Pencil::new(pen.g().clone(), pen.f().clone(), &tol()).unwrap();
        let b1 = bezoutiant(&pen).unwrap();
        let b2 = bezoutiant(&swapped).unwrap();
        for (idx, v) in b1.coeffs().indexed_iter() {
            assert_eq!(*v, -b2.coeffs()[idx]);
        }
    }

    #[test]
    fn demo_rewrite_matches_hand_expansion() {
        // u^2 + uv + v^2 - 1 = e1^2 - e2 - 1 -> x1^2 - x0 x2 - x0^2
        let b = bezoutiant(&demo_pencil()).unwrap();
        let t = to_plane_curve(&b, &tol()).unwrap();
        assert_eq!(*t.coeff(2, 0), c(1.0));
        assert_eq!(*t.coeff(0, 1), c(-1.0));
        assert_eq!(*t.coeff(0, 0), c(-1.0));
        for (j, k, coeff) in t.monomials() {
            if (j, k) != (2, 0) && (j, k) != (0, 1) && (j, k) != (0, 0) {
                assert_eq!(coeff, c(0.0));
            }
        }
    }

    #[test]
    fn constant_bivariate_form_becomes_pure_x0_power() {
        let mut m = Array2::<Scalar>::zeros((4, 4));
        m[[0, 0]] = c(2.5);
        let b = BivariateForm::new(m).unwrap();
        let t = to_plane_curve(&b, &tol()).unwrap();
        for (j, k, coeff) in t.monomials() {
            if (j, k) == (0, 0) {
                assert_eq!(coeff, c(2.5));
            } else {
                assert_eq!(coeff, c(0.0));
            }
        }
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut m = Array2::<Scalar>::zeros((2, 2));
        m[[0, 1]] = c(1.0);
        m[[1, 0]] = c(-1.0);
        let b = BivariateForm::new(m).unwrap();
        assert!(matches!(
            to_plane_curve(&b, &tol()),
            Err(LateralError::AsymmetricInput(_))
        ));
    }

    #[test]
    fn rewrite_identity_on_random_points() {
        let pen = demo_pencil();
        let b = bezoutiant(&pen).unwrap();
        let t = to_plane_curve(&b, &tol()).unwrap();
        for (u, v) in [(0.37, -1.92), (2.11, 0.05), (-0.66, -0.67)] {
            let (u, v) = (c(u), c(v));
            let diff = (t.eval_chart(u + v, u * v) - b.eval(u, v)).norm();
            assert!(diff < 1e-10);
        }
    }
}
