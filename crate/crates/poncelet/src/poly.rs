//! Univariate polynomials over complex doubles: arithmetic, Taylor
//! recentering and companion-matrix root finding.

use std::ops::{Add, Mul, Sub};

use crate::error::CoreError;
use crate::linalg::{self, CMatrix};
use crate::scalar::{re, Scalar};
use crate::tolerance::Tolerance;

/// Dense polynomial, coefficients stored lowest degree first. Trailing
/// zero coefficients are allowed; the effective degree is decided relative
/// to the largest coefficient modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Scalar>,
}

impl UnivariatePolynomial {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePolynomial {
            coeffs: vec![Scalar::ZERO],
        }
    }

    pub fn one() -> Self {
        UnivariatePolynomial {
            coeffs: vec![re(1.0)],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        UnivariatePolynomial { coeffs: vec![c] }
    }

    /// `coeff * x^degree`.
    pub fn monomial(degree: usize, coeff: Scalar) -> Self {
        let mut coeffs = vec![Scalar::ZERO; degree + 1];
        coeffs[degree] = coeff;
        UnivariatePolynomial { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut p = Self::one();
        for &r in roots {
            p = &p * &UnivariatePolynomial::new(vec![-r, re(1.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Index of the last coefficient above `rel_eps` times the largest
    /// modulus, or `None` when the polynomial is numerically zero.
    pub fn effective_degree(&self, rel_eps: f64) -> Option<usize> {
        let max = self.max_coeff_modulus();
        if max == 0.0 {
            return None;
        }
        let cut = rel_eps * max;
        self.coeffs.iter().rposition(|c| c.norm() > cut)
    }

    /// Drops coefficients above the effective degree.
    pub fn trimmed(&self, rel_eps: f64) -> Self {
        match self.effective_degree(rel_eps) {
            None => Self::zero(),
            Some(d) => UnivariatePolynomial::new(self.coeffs[..=d].to_vec()),
        }
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * re(i as f64))
            .collect();
        UnivariatePolynomial::new(coeffs)
    }

    pub fn scaled(&self, k: Scalar) -> Self {
        UnivariatePolynomial::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Coefficients of `p(x0 + h)` as a polynomial in `h`, computed by
    /// repeated synthetic division.
    pub fn taylor_at(&self, x0: Scalar) -> Vec<Scalar> {
        let n = self.coeffs.len();
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(n);
        for stage in 0..n {
            let mut carry = Scalar::ZERO;
            for c in work.iter_mut().skip(stage).rev() {
                carry = carry * x0 + *c;
                *c = carry;
            }
            out.push(work[stage]);
        }
        out
    }

    /// Quotient of the division by `(x - root)`, discarding the remainder.
    pub fn deflate(&self, root: Scalar) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut quotient = vec![Scalar::ZERO; self.coeffs.len() - 1];
        let mut carry = Scalar::ZERO;
        for i in (0..quotient.len()).rev() {
            carry = carry * root + self.coeffs[i + 1];
            quotient[i] = carry;
        }
        UnivariatePolynomial::new(quotient)
    }

    /// Divides by the leading effective coefficient.
    pub fn monic(&self, rel_eps: f64) -> Result<Self, CoreError> {
        let d = self
            .effective_degree(rel_eps)
            .ok_or(CoreError::ZeroPolynomial)?;
        let lead = self.coeffs[d];
        let coeffs = self.coeffs[..=d].iter().map(|&c| c / lead).collect();
        Ok(UnivariatePolynomial::new(coeffs))
    }
}

impl Add for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn add(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![Scalar::ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        UnivariatePolynomial::new(coeffs)
    }
}

impl Sub for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn sub(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![Scalar::ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        UnivariatePolynomial::new(coeffs)
    }
}

impl Mul for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut coeffs = vec![Scalar::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Scalar::ZERO {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(coeffs)
    }
}

/// All roots (with multiplicity) of the effective polynomial, computed as
/// the eigenvalues of the companion matrix of the monic normalization and
/// polished by a few Newton steps. Returned sorted by real then imaginary
/// part.
pub fn poly_roots(
    f: &UnivariatePolynomial,
    tol: &Tolerance,
) -> Result<Vec<Scalar>, CoreError> {
    let monic = f.monic(tol.rel_eps)?;
    let d = monic.coeffs().len() - 1;
    if d == 0 {
        return Err(CoreError::DegreeZero);
    }
    let mut m = CMatrix::zeros((d, d));
    for i in 1..d {
        m[[i, i - 1]] = re(1.0);
    }
    for i in 0..d {
        m[[i, d - 1]] = -monic.coeffs()[i];
    }
    let mut roots = linalg::eigenvalues(&m)?;
    let deriv = monic.derivative();
    for r in roots.iter_mut() {
        *r = polish_root(&monic, &deriv, *r);
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(roots)
}

fn polish_root(f: &UnivariatePolynomial, df: &UnivariatePolynomial, mut r: Scalar) -> Scalar {
    let mut best = r;
    let mut best_val = f.eval(r).norm();
    for _ in 0..3 {
        let d = df.eval(r);
        if d.norm() < 1e-300 {
            break;
        }
        r -= f.eval(r) / d;
        let val = f.eval(r).norm();
        if val < best_val {
            best_val = val;
            best = r;
        } else {
            break;
        }
    }
    best
}

/// Groups roots closer than `sep` into clusters and reports each with its
/// multiplicity, ordered by first occurrence.
pub fn cluster_roots(roots: &[Scalar], sep: f64) -> Vec<(Scalar, usize)> {
    let mut clusters: Vec<(Scalar, usize)> = Vec::new();
    for &r in roots {
        match clusters.iter_mut().find(|(c, _)| (*c - r).norm() <= sep) {
            Some((c, count)) => {
                // running mean keeps the representative centered
                *c = (*c * re(*count as f64) + r) / re(*count as f64 + 1.0);
                *count += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
}

/// Smallest pairwise distance in a parameter list.
pub fn min_separation(values: &[Scalar]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            min = min.min((values[i] - values[j]).norm());
        }
    }
    min
}
