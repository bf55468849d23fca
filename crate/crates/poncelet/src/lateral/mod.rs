//! Closure families of (n+1)-laterals tangent to a conic and inscribed in a
//! degree-n plane curve.
//!
//! The plane is modeled as the symmetric square of the projective line: the
//! point `[x0, x1, x2]` encodes the quadratic `x0 t^2 - x1 t + x2` (note the
//! sign on the middle coordinate), so the unordered parameter pair `{u, v}`
//! sits at `[1, u+v, uv]` and the base conic is the diagonal
//! `x1^2 - 4 x0 x2 = 0`. Tangent lines of the conic correspond to fixing one
//! member of the pair; a plane curve of degree n becomes a symmetric degree-n
//! correspondence on the line, realized concretely as the quotient of
//! `F(u)G(v) - F(v)G(u)` by `u - v` for a pencil of binary forms.

mod bezout;
mod ternary;
mod trace;

pub use bezout::{bezoutiant, to_plane_curve, BivariateForm};
pub use ternary::TernaryForm;
pub use trace::{
    closure_trace, correspondence_image, darboux_verify, interpolation_system,
    matching_distance, ClosureTraceReport, InterpolationSystem, TraceOutcome,
};

use rand::Rng;

use crate::error::LateralError;
use crate::linalg::{numerical_rank, CMatrix};
use crate::poly::{self, UnivariatePolynomial};
use crate::projective::{HomogeneousVector, VectorRole};
use crate::scalar::{is_finite, re, Scalar};
use crate::tolerance::Tolerance;

/// Binary form of declared degree d, stored by its affine coefficients
/// `f(t) = sum c_j t^j` (the homogenization is implicit, so trailing zero
/// coefficients are meaningful: they put roots at infinity).
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self, LateralError> {
        if coeffs.is_empty() {
            return Err(LateralError::InvalidInput(
                "binary form needs at least one coefficient".to_string(),
            ));
        }
        if coeffs.iter().any(|z| !is_finite(*z)) {
            return Err(LateralError::InvalidInput(
                "non-finite coefficient".to_string(),
            ));
        }
        if coeffs.iter().all(|z| z.norm() == 0.0) {
            return Err(LateralError::InvalidInput(
                "binary form is identically zero".to_string(),
            ));
        }
        Ok(BinaryForm { coeffs })
    }

    /// Constant `value` carried at declared degree `degree`.
    pub fn constant(value: Scalar, degree: usize) -> Result<Self, LateralError> {
        let mut coeffs = vec![Scalar::ZERO; degree + 1];
        coeffs[0] = value;
        BinaryForm::new(coeffs)
    }

    /// Monic form vanishing exactly at the given parameters.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        BinaryForm {
            coeffs: UnivariatePolynomial::from_roots(roots).coeffs().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn eval(&self, t: Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn as_poly(&self) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.coeffs.clone())
    }
}

/// A pencil spanned by two independent binary forms of the same degree.
#[derive(Debug, Clone)]
pub struct Pencil {
    f: BinaryForm,
    g: BinaryForm,
}

impl Pencil {
    pub fn new(f: BinaryForm, g: BinaryForm, tol: &Tolerance) -> Result<Self, LateralError> {
        if f.degree() != g.degree() {
            return Err(LateralError::InvalidInput(format!(
                "pencil forms must share a degree, got {} and {}",
                f.degree(),
                g.degree()
            )));
        }
        let d = f.degree();
        let mut m = CMatrix::zeros((2, d + 1));
        for (j, &c) in f.coeffs().iter().enumerate() {
            m[[0, j]] = c;
        }
        for (j, &c) in g.coeffs().iter().enumerate() {
            m[[1, j]] = c;
        }
        if numerical_rank(&m, tol.rank_eps)? != 2 {
            return Err(LateralError::DependentPencil);
        }
        Ok(Pencil { f, g })
    }

    pub fn f(&self) -> &BinaryForm {
        &self.f
    }

    pub fn g(&self) -> &BinaryForm {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// The member through parameter `u0`, i.e. `G(u0) F - F(u0) G`.
    pub fn member_through(&self, u0: Scalar) -> UnivariatePolynomial {
        let fu = self.f.eval(u0);
        let gu = self.g.eval(u0);
        &self.f.as_poly().scaled(gu) - &self.g.as_poly().scaled(fu)
    }
}

/// n+1 distinct tangency parameters on the base conic; the corresponding
/// tangent lines form a general (n+1)-lateral whose only singular points
/// are its pairwise intersections.
#[derive(Debug, Clone, PartialEq)]
pub struct Multilateral {
    params: Vec<Scalar>,
}

impl Multilateral {
    pub fn new(params: Vec<Scalar>, tol: &Tolerance) -> Result<Self, LateralError> {
        if params.len() < 3 {
            return Err(LateralError::InvalidInput(format!(
                "need at least 3 tangency parameters, got {}",
                params.len()
            )));
        }
        if params.iter().any(|z| !is_finite(*z)) {
            return Err(LateralError::InvalidInput(
                "non-finite parameter".to_string(),
            ));
        }
        let sep = poly::min_separation(&params);
        if sep <= tol.root_sep_eps {
            return Err(LateralError::ClusteredParams(format!(
                "tangency parameters separated by only {sep:e}"
            )));
        }
        Ok(Multilateral { params })
    }

    /// Reproducible random real multilateral: parameters in [-2, 2] with
    /// pairwise separation at least 0.15.
    pub fn random_real(n: usize, rng: &mut impl Rng) -> Self {
        const SEP: f64 = 0.15;
        loop {
            let params: Vec<Scalar> =
                (0..=n).map(|_| re(rng.random_range(-2.0..2.0))).collect();
            if poly::min_separation(&params) > SEP {
                return Multilateral { params };
            }
        }
    }

    /// Number of sides minus one (the curve degree the lateral pairs with).
    pub fn n(&self) -> usize {
        self.params.len() - 1
    }

    pub fn params(&self) -> &[Scalar] {
        &self.params
    }

    pub fn is_real(&self, eps: f64) -> bool {
        self.params
            .iter()
            .all(|z| z.im.abs() <= eps * 1.0_f64.max(z.norm()))
    }

    /// The sides, as lines of the plane.
    pub fn lines(&self) -> Vec<HomogeneousVector> {
        self.params.iter().map(|&u| tangent_line(u)).collect()
    }

    /// The `(n+1 choose 2)` vertices, indexed by the side pair meeting there.
    pub fn vertices(&self) -> Vec<(usize, usize, HomogeneousVector)> {
        let mut out = Vec::new();
        for i in 0..self.params.len() {
            for j in i + 1..self.params.len() {
                out.push((i, j, pair_to_point(self.params[i], self.params[j])));
            }
        }
        out
    }
}

/// The unordered pair `{u, v}` as a plane point: `[1, u+v, uv]`.
pub fn pair_to_point(u: Scalar, v: Scalar) -> HomogeneousVector {
    let coords = [Scalar::ONE, u + v, u * v];
    HomogeneousVector::point(&coords, &Tolerance::default())
        .expect("leading coordinate is 1")
}

/// The two parameters encoded by a plane point: the roots of
/// `x0 t^2 - x1 t + x2`. Fails outside the affine chart (`x0` near zero,
/// one root at infinity).
pub fn point_to_pair(
    p: &HomogeneousVector,
    tol: &Tolerance,
) -> Result<(Scalar, Scalar), LateralError> {
    let c = p.coords();
    if c.len() != 3 {
        return Err(LateralError::InvalidInput(format!(
            "expected a plane point, got {} coordinates",
            c.len()
        )));
    }
    // coordinates are normalized, so max modulus is 1
    let (a, b, cc) = (c[0], -c[1], c[2]);
    if a.norm() <= tol.rel_eps {
        return Err(LateralError::ChartFailure);
    }
    let disc = b * b - 4.0 * a * cc;
    let mut sq = disc.sqrt();
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let q = -(b + sq) / 2.0;
    if q.norm() > 1e-300 {
        Ok((q / a, cc / q))
    } else {
        Ok((Scalar::ZERO, -b / a))
    }
}

/// The base conic: the diagonal `x1^2 - 4 x0 x2` of the symmetric-square
/// chart, through every doubled point `[1, 2u, u^2]`.
pub fn diagonal_conic() -> TernaryForm {
    let mut t = TernaryForm::zeros(2);
    *t.coeff_mut(2, 0) = Scalar::ONE; // x1^2
    *t.coeff_mut(0, 1) = re(-4.0); // x0 x2
    t
}

/// Tangent line to the base conic at the parameter `u`: the locus of pairs
/// containing `u`, with coordinates `[u^2, -u, 1]`.
pub fn tangent_line(u: Scalar) -> HomogeneousVector {
    let coords = [u * u, -u, Scalar::ONE];
    HomogeneousVector::new(&coords, VectorRole::Hyperplane, &Tolerance::default())
        .expect("last coordinate is 1")
}

/// The pencil spanned by the lateral's root form `F = prod (t - u_i)` and a
/// chosen second form of the same degree not vanishing at any tangency
/// parameter.
pub fn pencil_from_multilateral(
    lateral: &Multilateral,
    g: BinaryForm,
    tol: &Tolerance,
) -> Result<Pencil, LateralError> {
    let d = lateral.n() + 1;
    if g.degree() != d {
        return Err(LateralError::BadSecondForm(format!(
            "second form has degree {}, the lateral needs {d}",
            g.degree()
        )));
    }
    let scale = g.max_coeff_modulus();
    for &u in lateral.params() {
        let value = g.eval(u).norm();
        let local = scale * 1.0_f64.max(u.norm()).powi(d as i32);
        if value <= tol.rel_eps * local {
            return Err(LateralError::BadSecondForm(format!(
                "second form vanishes at tangency parameter {u}"
            )));
        }
    }
    let f = BinaryForm::from_roots(lateral.params());
    Pencil::new(f, g, tol)
}
