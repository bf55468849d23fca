//! Plane curves of degree n as ternary forms in the symmetric-square chart.

use crate::error::LateralError;
use crate::poly::UnivariatePolynomial;
use crate::scalar::{is_finite, Scalar};
use crate::tolerance::Tolerance;

/// Homogeneous form of degree n in `x0, x1, x2`. Coefficients are stored in
/// the fixed order: for `j` in `0..=n`, for `k` in `0..=n-j`, the monomial
/// `x0^(n-j-k) x1^j x2^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryForm {
    degree: usize,
    coeffs: Vec<Scalar>,
}

/// Number of degree-n monomials in three variables.
pub(crate) fn monomial_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

impl TernaryForm {
    pub fn new(degree: usize, coeffs: Vec<Scalar>) -> Result<Self, LateralError> {
        if coeffs.len() != monomial_count(degree) {
            return Err(LateralError::InvalidInput(format!(
                "degree {degree} needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !is_finite(*z)) {
            return Err(LateralError::InvalidInput(
                "non-finite coefficient".to_string(),
            ));
        }
        if coeffs.iter().all(|z| z.norm() == 0.0) {
            return Err(LateralError::InvalidInput(
                "ternary form is identically zero".to_string(),
            ));
        }
        Ok(TernaryForm { degree, coeffs })
    }

    /// All-zero coefficient holder; fill via [`TernaryForm::coeff_mut`].
    pub fn zeros(degree: usize) -> Self {
        TernaryForm {
            degree,
            coeffs: vec![Scalar::ZERO; monomial_count(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    fn index(&self, j: usize, k: usize) -> usize {
        debug_assert!(j + k <= self.degree);
        // rows of decreasing length: row j starts after j rows of lengths n+1, n, ...
        j * (2 * self.degree + 3 - j) / 2 + k
    }

    /// Coefficient of `x0^(n-j-k) x1^j x2^k`.
    pub fn coeff(&self, j: usize, k: usize) -> &Scalar {
        &self.coeffs[self.index(j, k)]
    }

    pub fn coeff_mut(&mut self, j: usize, k: usize) -> &mut Scalar {
        let i = self.index(j, k);
        &mut self.coeffs[i]
    }

    /// Iterates `(j, k, coefficient)` in storage order.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        let n = self.degree;
        (0..=n)
            .flat_map(move |j| (0..=n - j).map(move |k| (j, k)))
            .zip(self.coeffs.iter())
            .map(|((j, k), &c)| (j, k, c))
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Scaled by the inverse of the max-modulus coefficient (that entry
    /// becomes exactly 1), for reproducible comparisons.
    pub fn normalized(&self) -> Self {
        let pivot = self
            .coeffs
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .expect("nonempty coefficients");
        if pivot.norm() == 0.0 {
            return self.clone();
        }
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| c / pivot).collect(),
        }
    }

    pub fn eval(&self, x: &[Scalar; 3]) -> Scalar {
        let n = self.degree;
        let pow = |base: Scalar| {
            let mut p = vec![Scalar::ONE; n + 1];
            for i in 1..=n {
                p[i] = p[i - 1] * base;
            }
            p
        };
        let (p0, p1, p2) = (pow(x[0]), pow(x[1]), pow(x[2]));
        self.monomials()
            .map(|(j, k, c)| c * p0[n - j - k] * p1[j] * p2[k])
            .sum()
    }

    /// Value in the affine chart `x0 = 1` at `(x1, x2) = (e1, e2)`.
    pub fn eval_chart(&self, e1: Scalar, e2: Scalar) -> Scalar {
        self.eval(&[Scalar::ONE, e1, e2])
    }

    /// Restriction to the tangent line at `u`, via the parametrization
    /// `v -> [1, u + v, u v]`; a polynomial of degree at most n in `v`.
    pub fn restrict_to_tangent(&self, u: Scalar) -> UnivariatePolynomial {
        let n = self.degree;
        let mut upow = vec![Scalar::ONE; n + 1];
        for i in 1..=n {
            upow[i] = upow[i - 1] * u;
        }
        let binom = binomial_table(n);
        let mut coeffs = vec![Scalar::ZERO; n + 1];
        for (j, k, c) in self.monomials() {
            if c == Scalar::ZERO {
                continue;
            }
            // (u+v)^j (uv)^k = sum_m C(j,m) u^(j-m+k) v^(m+k)
            for m in 0..=j {
                coeffs[m + k] += c * binom[j][m] * upow[j - m + k];
            }
        }
        UnivariatePolynomial::new(coeffs)
    }

    /// Restriction to the diagonal conic via `u -> [1, 2u, u^2]`; vanishing
    /// identically means the conic divides the form.
    pub fn diagonal_restriction(&self) -> UnivariatePolynomial {
        let n = self.degree;
        let mut coeffs = vec![Scalar::ZERO; 2 * n + 1];
        let mut two_pow = vec![1.0f64; n + 1];
        for i in 1..=n {
            two_pow[i] = two_pow[i - 1] * 2.0;
        }
        for (j, k, c) in self.monomials() {
            coeffs[j + 2 * k] += c * two_pow[j];
        }
        UnivariatePolynomial::new(coeffs)
    }

    /// True when the diagonal conic divides the form.
    pub fn contains_diagonal(&self, tol: &Tolerance) -> bool {
        let r = self.diagonal_restriction();
        r.max_coeff_modulus() <= 1e3 * tol.rel_eps * self.max_coeff_modulus()
    }

    /// True when every coefficient is real within `eps` relative to the
    /// coefficient scale.
    pub fn is_real(&self, eps: f64) -> bool {
        let scale = 1.0_f64.max(self.max_coeff_modulus());
        self.coeffs.iter().all(|z| z.im.abs() <= eps * scale)
    }
}

/// Pascal's triangle up to row n, as scalars.
pub(crate) fn binomial_table(n: usize) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut row = vec![Scalar::ONE; j + 1];
        for m in 1..j {
            row[m] = rows[j - 1][m - 1] + rows[j - 1][m];
        }
        rows.push(row);
    }
    rows
}
