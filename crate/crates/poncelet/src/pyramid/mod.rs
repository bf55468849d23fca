//! Closure families of elementary pyramids between two rational normal
//! curves.
//!
//! Everything is computed in canonical coordinates where the reference
//! pyramid is the fundamental one (faces `x_i = 0`). A configuration stores
//! the node parameters `a_i` shared by both curves together with one weight
//! per node for each curve: the inscribed curve is presented by its family
//! of fully-tangent (hyperosculating) hyperplanes, the circumscribed curve
//! by its point parametrization in dual coordinates. The closure polynomial
//! ties the two: its n+1 roots are simultaneously face parameters and
//! vertex parameters of one closed pyramid, one pyramid per value of the
//! family parameter k.

mod contact;

pub use contact::{check_hyperosculation, ContactCurve};

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, PyramidError};
use crate::mobius::{mobius_from_three_pairs, Mobius};
use crate::poly::{self, poly_roots, UnivariatePolynomial};
use crate::projective::{
    incidence_residual, HomogeneousVector, Projectivity,
};
use crate::scalar::{is_finite, re, Scalar};
use crate::tolerance::Tolerance;
use crate::linalg::{numerical_rank, CMatrix};

/// Largest modulus an affine parameter may take before a configuration is
/// considered out of chart and must be moved by [`reparametrize`].
pub const AFFINE_LIMIT: f64 = 1e6;

/// A conjugate pair of rational normal curves in canonical coordinates:
/// node parameters `a_i` (the reference pyramid corresponds to them on both
/// curves), face weights for the inscribed curve's tangent-hyperplane
/// family, and point weights for the circumscribed curve's dual point
/// family.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalConfig {
    nodes: Vec<Scalar>,
    face_weights: Vec<Scalar>,
    point_weights: Vec<Scalar>,
}

impl CanonicalConfig {
    pub fn new(
        nodes: Vec<Scalar>,
        face_weights: Vec<Scalar>,
        point_weights: Vec<Scalar>,
        tol: &Tolerance,
    ) -> Result<Self, PyramidError> {
        if nodes.len() < 3 {
            return Err(PyramidError::InvalidConfig(format!(
                "need at least 3 nodes (ambient dimension >= 2), got {}",
                nodes.len()
            )));
        }
        if face_weights.len() != nodes.len() || point_weights.len() != nodes.len() {
            return Err(PyramidError::InvalidConfig(format!(
                "weight counts {} / {} do not match node count {}",
                face_weights.len(),
                point_weights.len(),
                nodes.len()
            )));
        }
        for z in nodes
            .iter()
            .chain(face_weights.iter())
            .chain(point_weights.iter())
        {
            if !is_finite(*z) {
                return Err(PyramidError::InvalidConfig(
                    "non-finite configuration value".to_string(),
                ));
            }
        }
        if poly::min_separation(&nodes) <= tol.root_sep_eps {
            return Err(PyramidError::InvalidConfig(
                "node parameters must be pairwise distinct".to_string(),
            ));
        }
        for w in face_weights.iter().chain(point_weights.iter()) {
            if w.norm() <= tol.rel_eps {
                return Err(PyramidError::InvalidConfig(
                    "weights must be nonzero".to_string(),
                ));
            }
        }
        Ok(CanonicalConfig {
            nodes,
            face_weights,
            point_weights,
        })
    }

    /// The plane (n = 2) demonstration configuration: nodes 0, 1, 2 and all
    /// weights 1. Both curves are conics tangent to / through the
    /// fundamental triangle.
    pub fn demo_triangle() -> Self {
        let ones = vec![Scalar::ONE; 3];
        CanonicalConfig {
            nodes: vec![re(0.0), re(1.0), re(2.0)],
            face_weights: ones.clone(),
            point_weights: ones,
        }
    }

    /// Reproducible random real configuration: nodes drawn in [-2, 2] with
    /// pairwise separation at least 0.15, weights with modulus in [0.5, 2]
    /// and random sign.
    pub fn random_real(n: usize, rng: &mut impl Rng) -> Self {
        let nodes = sample_separated(n + 1, rng);
        let weights = |rng: &mut dyn rand::RngCore| -> Vec<Scalar> {
            (0..n + 1)
                .map(|_| {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    re(sign * rng.random_range(0.5..2.0))
                })
                .collect()
        };
        let face_weights = weights(rng);
        let point_weights = weights(rng);
        CanonicalConfig {
            nodes,
            face_weights,
            point_weights,
        }
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn face_weights(&self) -> &[Scalar] {
        &self.face_weights
    }

    pub fn point_weights(&self) -> &[Scalar] {
        &self.point_weights
    }

    /// True when every stored value is real within `eps` (imaginary part
    /// relative to magnitude). Real-mode configurations can be plotted.
    pub fn is_real(&self, eps: f64) -> bool {
        self.nodes
            .iter()
            .chain(self.face_weights.iter())
            .chain(self.point_weights.iter())
            .all(|z| z.im.abs() <= eps * 1.0_f64.max(z.norm()))
    }

    /// Unnormalized coefficients of the tangent hyperplane at parameter `t`:
    /// component `i` is `A_i * prod_{j != i} (t - a_j)`. Denominator-free,
    /// valid at every `t` including the nodes.
    pub fn face_raw(&self, t: Scalar) -> Vec<Scalar> {
        self.cleared_family(&self.face_weights, t)
    }

    /// Hyperosculating hyperplane of the inscribed curve at parameter `t`.
    pub fn face(&self, t: Scalar, tol: &Tolerance) -> Result<HomogeneousVector, PyramidError> {
        HomogeneousVector::hyperplane(&self.face_raw(t), tol).map_err(PyramidError::from)
    }

    /// Unnormalized coordinates of the circumscribed curve's point at
    /// parameter `s`: component `i` is `B_i * prod_{j != i} (s - a_j)`.
    pub fn vertex_raw(&self, s: Scalar) -> Vec<Scalar> {
        self.cleared_family(&self.point_weights, s)
    }

    /// Point of the circumscribed curve at parameter `s`. At `s = a_i` this
    /// is the vertex `e_i` of the fundamental pyramid.
    pub fn vertex(&self, s: Scalar, tol: &Tolerance) -> Result<HomogeneousVector, PyramidError> {
        HomogeneousVector::point(&self.vertex_raw(s), tol).map_err(PyramidError::from)
    }

    fn cleared_family(&self, weights: &[Scalar], t: Scalar) -> Vec<Scalar> {
        (0..self.nodes.len())
            .map(|i| {
                let mut prod = weights[i];
                for (j, &a) in self.nodes.iter().enumerate() {
                    if j != i {
                        prod *= t - a;
                    }
                }
                prod
            })
            .collect()
    }

    /// Coefficient polynomials of the tangent hyperplane family; component
    /// `i` has degree exactly n.
    pub fn face_polynomials(&self) -> Vec<UnivariatePolynomial> {
        self.family_polynomials(&self.face_weights)
    }

    /// Coefficient polynomials of the point family; degree n per component.
    pub fn vertex_polynomials(&self) -> Vec<UnivariatePolynomial> {
        self.family_polynomials(&self.point_weights)
    }

    fn family_polynomials(&self, weights: &[Scalar]) -> Vec<UnivariatePolynomial> {
        (0..self.nodes.len())
            .map(|i| {
                let others: Vec<Scalar> = self
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &a)| a)
                    .collect();
                UnivariatePolynomial::from_roots(&others).scaled(weights[i])
            })
            .collect()
    }

    /// The symmetric bivariate incidence form.
    pub fn incidence_form(&self) -> IncidenceForm {
        IncidenceForm::for_config(self)
    }

    /// Denominator-free incidence value: vanishes exactly when the point at
    /// parameter `s` lies on the tangent hyperplane at parameter `t`.
    pub fn incidence_value(&self, t: Scalar, s: Scalar) -> Scalar {
        self.incidence_form().eval(t, s)
    }

    /// The closure polynomial
    /// `P_k(x) = k * sum_i A_i B_i prod_{j != i}(x - a_j) - prod_j (x - a_j)`,
    /// of degree exactly n + 1 with leading coefficient -1 for every k.
    pub fn closure_polynomial(&self, k: Scalar) -> UnivariatePolynomial {
        let mut sum = UnivariatePolynomial::zero();
        for i in 0..self.nodes.len() {
            let others: Vec<Scalar> = self
                .nodes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &a)| a)
                .collect();
            let q = UnivariatePolynomial::from_roots(&others)
                .scaled(self.face_weights[i] * self.point_weights[i]);
            sum = &sum + &q;
        }
        let all = UnivariatePolynomial::from_roots(&self.nodes);
        &sum.scaled(k) - &all
    }

    /// Contact point of the tangent hyperplane at parameter `t`, recovered
    /// from the polynomial kernel of the hyperplane's derivative flag.
    pub fn contact_point(
        &self,
        t: Scalar,
        tol: &Tolerance,
    ) -> Result<HomogeneousVector, PyramidError> {
        ContactCurve::new(self, tol)?.eval(t, tol)
    }
}

fn sample_separated(count: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    const SEP: f64 = 0.15;
    loop {
        let vals: Vec<Scalar> = (0..count).map(|_| re(rng.random_range(-2.0..2.0))).collect();
        if poly::min_separation(&vals) > SEP {
            return vals;
        }
    }
}

/// The denominator-free incidence form
/// `sum_i A_i B_i prod_{j != i} (t - a_j)(s - a_j)` stored as a coefficient
/// matrix in the monomial basis `t^p s^q`. Built as a sum of outer products,
/// so the matrix is symmetric entry-for-entry, exactly.
#[derive(Debug, Clone)]
pub struct IncidenceForm {
    coeffs: Array2<Scalar>,
}

impl IncidenceForm {
    pub fn for_config(cfg: &CanonicalConfig) -> Self {
        let n1 = cfg.nodes.len();
        let mut coeffs = Array2::<Scalar>::zeros((n1, n1));
        for i in 0..n1 {
            let others: Vec<Scalar> = cfg
                .nodes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &a)| a)
                .collect();
            let q = UnivariatePolynomial::from_roots(&others);
            let w = cfg.face_weights[i] * cfg.point_weights[i];
            for (p, &cp) in q.coeffs().iter().enumerate() {
                for (r, &cr) in q.coeffs().iter().enumerate() {
                    // grouping keeps the entry bitwise symmetric in (p, r)
                    coeffs[[p, r]] += w * (cp * cr);
                }
            }
        }
        IncidenceForm { coeffs }
    }

    pub fn coeffs(&self) -> &Array2<Scalar> {
        &self.coeffs
    }

    pub fn eval(&self, t: Scalar, s: Scalar) -> Scalar {
        let n1 = self.coeffs.nrows();
        let mut tp = vec![Scalar::ONE; n1];
        let mut sp = vec![Scalar::ONE; n1];
        for i in 1..n1 {
            tp[i] = tp[i - 1] * t;
            sp[i] = sp[i - 1] * s;
        }
        let mut acc = Scalar::ZERO;
        for ((p, q), &coeff) in self.coeffs.indexed_iter() {
            acc += coeff * tp[p] * sp[q];
        }
        acc
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degrees in t and in s relative to the largest coefficient.
    pub fn degrees(&self, rel_eps: f64) -> (usize, usize) {
        let cut = rel_eps * self.max_coeff_modulus();
        let mut dt = 0;
        let mut ds = 0;
        for ((p, q), c) in self.coeffs.indexed_iter() {
            if c.norm() > cut {
                dt = dt.max(p);
                ds = ds.max(q);
            }
        }
        (dt, ds)
    }
}

/// An elementary pyramid: n+1 independent vertices and the n+1 opposite
/// faces, paired by index (vertex `i` is the one off face `i`).
#[derive(Debug, Clone)]
pub struct Pyramid {
    vertices: Vec<HomogeneousVector>,
    faces: Vec<HomogeneousVector>,
}

impl Pyramid {
    /// The fundamental pyramid of projective n-space: vertices at the
    /// standard basis points, face `i` the coordinate hyperplane `x_i = 0`
    /// (which in dual coordinates is `u_i = 0`, opposite vertex `e_i`).
    pub fn fundamental(n: usize) -> Result<Self, PyramidError> {
        if n < 2 {
            return Err(PyramidError::InvalidInput(format!(
                "ambient dimension must be at least 2, got {n}"
            )));
        }
        Ok(Pyramid {
            vertices: (0..=n).map(|i| HomogeneousVector::basis_point(i, n)).collect(),
            faces: (0..=n)
                .map(|i| HomogeneousVector::coordinate_hyperplane(i, n))
                .collect(),
        })
    }

    pub fn new(
        vertices: Vec<HomogeneousVector>,
        faces: Vec<HomogeneousVector>,
        tol: &Tolerance,
    ) -> Result<Self, PyramidError> {
        if vertices.len() != faces.len() || vertices.len() < 3 {
            return Err(PyramidError::InvalidInput(format!(
                "need matching vertex/face counts of at least 3, got {} / {}",
                vertices.len(),
                faces.len()
            )));
        }
        let n = vertices.len() - 1;
        if vertices.iter().chain(faces.iter()).any(|v| v.dim() != n) {
            return Err(PyramidError::InvalidInput(
                "ambient dimension mismatch".to_string(),
            ));
        }
        let pyramid = Pyramid { vertices, faces };
        // general position: the vertex matrix must have full rank
        let mut m = CMatrix::zeros((n + 1, n + 1));
        for (i, v) in pyramid.vertices.iter().enumerate() {
            for (j, &c) in v.coords().iter().enumerate() {
                m[[i, j]] = c;
            }
        }
        let rank = numerical_rank(&m, tol.rank_eps)?;
        if rank != n + 1 {
            return Err(PyramidError::DegeneratePyramid(format!(
                "vertices span rank {rank} < {}",
                n + 1
            )));
        }
        let res = pyramid.incidence_residuals()?;
        for i in 0..=n {
            for j in 0..=n {
                if i != j && res[[i, j]] > tol.rel_eps {
                    return Err(PyramidError::DegeneratePyramid(format!(
                        "vertex {j} misses face {i} by {:e}",
                        res[[i, j]]
                    )));
                }
                if i == j && res[[i, j]] <= 100.0 * tol.rel_eps {
                    return Err(PyramidError::DegeneratePyramid(format!(
                        "vertex {i} lies on its own face (residual {:e})",
                        res[[i, j]]
                    )));
                }
            }
        }
        Ok(pyramid)
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[HomogeneousVector] {
        &self.vertices
    }

    pub fn faces(&self) -> &[HomogeneousVector] {
        &self.faces
    }

    /// Residual matrix with entry `(i, j)` the incidence residual of vertex
    /// `j` against face `i`; off-diagonal entries vanish for a closed
    /// pyramid, diagonal entries stay away from zero.
    pub fn incidence_residuals(&self) -> Result<Array2<f64>, PyramidError> {
        let n1 = self.vertices.len();
        let mut res = Array2::<f64>::zeros((n1, n1));
        for i in 0..n1 {
            for j in 0..n1 {
                res[[i, j]] = incidence_residual(&self.vertices[j], &self.faces[i])?;
            }
        }
        Ok(res)
    }

    /// The pyramid moved by a projectivity; pairing is preserved.
    pub fn transported(
        &self,
        g: &Projectivity,
        tol: &Tolerance,
    ) -> Result<Pyramid, PyramidError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| g.apply(v, tol))
            .collect::<Result<Vec<_>, _>>()?;
        let faces = self
            .faces
            .iter()
            .map(|f| g.apply(f, tol))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pyramid { vertices, faces })
    }
}

/// One member of the closure family: the parameter `k`, the roots of the
/// closure polynomial, the pyramid they cut out, and its verification data.
#[derive(Debug, Clone)]
pub struct PyramidFamilyMember {
    pub k: Scalar,
    pub roots: Vec<Scalar>,
    pub pyramid: Pyramid,
    pub incidence_residuals: Array2<f64>,
    pub hyperosculation_orders: Vec<usize>,
}

impl PyramidFamilyMember {
    pub fn max_offdiagonal_residual(&self) -> f64 {
        let mut max = 0.0f64;
        for ((i, j), &r) in self.incidence_residuals.indexed_iter() {
            if i != j {
                max = max.max(r);
            }
        }
        max
    }

    pub fn min_diagonal_residual(&self) -> f64 {
        self.incidence_residuals
            .diag()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds and verifies the family member at parameter `k`, reusing a
/// precomputed contact parametrization.
pub fn generate_pyramid_with(
    cfg: &CanonicalConfig,
    contact: &ContactCurve,
    k: Scalar,
    tol: &Tolerance,
) -> Result<PyramidFamilyMember, PyramidError> {
    let n = cfg.n();
    let closure = cfg.closure_polynomial(k);
    let roots = poly_roots(&closure, tol)?;
    debug_assert_eq!(roots.len(), n + 1);
    if poly::min_separation(&roots) <= tol.root_sep_eps {
        return Err(PyramidError::ClusteredRoots(format!(
            "closure roots cluster at k = {k}"
        )));
    }
    if roots.iter().any(|r| r.norm() > AFFINE_LIMIT) {
        return Err(PyramidError::ClusteredRoots(format!(
            "closure root leaves the affine chart (|root| > {AFFINE_LIMIT:e}) at k = {k}; \
             reparametrize the configuration"
        )));
    }
    let vertices = roots
        .iter()
        .map(|&r| cfg.vertex(r, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let faces = roots
        .iter()
        .map(|&r| cfg.face(r, tol))
        .collect::<Result<Vec<_>, _>>()?;

    let n1 = n + 1;
    let mut residuals = Array2::<f64>::zeros((n1, n1));
    for i in 0..n1 {
        for j in 0..n1 {
            residuals[[i, j]] = incidence_residual(&vertices[j], &faces[i])?;
        }
    }
    let mut max_off = 0.0f64;
    let mut min_diag = f64::INFINITY;
    for ((i, j), &r) in residuals.indexed_iter() {
        if i == j {
            min_diag = min_diag.min(r);
        } else {
            max_off = max_off.max(r);
        }
    }
    if max_off > tol.rel_eps {
        return Err(PyramidError::ClosureViolation {
            k,
            max_residual: max_off,
            limit: tol.rel_eps,
        });
    }
    if min_diag <= 100.0 * tol.rel_eps {
        return Err(PyramidError::ClusteredRoots(format!(
            "vertex touches its own face at k = {k} (residual {min_diag:e})"
        )));
    }
    let pyramid = match Pyramid::new(vertices, faces, tol) {
        Ok(p) => p,
        Err(PyramidError::DegeneratePyramid(d)) => {
            return Err(PyramidError::ClusteredRoots(format!(
                "non-generic pyramid at k = {k}: {d}"
            )))
        }
        Err(e) => return Err(e),
    };
    let hyperosculation_orders = roots
        .iter()
        .map(|&r| contact.order_at(cfg, r, tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PyramidFamilyMember {
        k,
        roots,
        pyramid,
        incidence_residuals: residuals,
        hyperosculation_orders,
    })
}

/// Builds and verifies the family member at parameter `k`. The closure roots
/// become the vertex and face parameters; all off-diagonal incidences must
/// vanish to tolerance or the member is rejected.
pub fn generate_pyramid(
    cfg: &CanonicalConfig,
    k: Scalar,
    tol: &Tolerance,
) -> Result<PyramidFamilyMember, PyramidError> {
    let contact = ContactCurve::new(cfg, tol)?;
    generate_pyramid_with(cfg, &contact, k, tol)
}

/// Per-parameter outcome of a family sweep.
#[derive(Debug)]
pub struct SweepEntry {
    pub k: Scalar,
    pub outcome: Result<PyramidFamilyMember, PyramidError>,
}

/// A sweep over family parameters; non-generic values are skipped in-band.
#[derive(Debug)]
pub struct FamilySweep {
    pub entries: Vec<SweepEntry>,
}

impl FamilySweep {
    pub fn members(&self) -> impl Iterator<Item = &PyramidFamilyMember> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    pub fn skipped(&self) -> impl Iterator<Item = (Scalar, &PyramidError)> {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().map(|err| (e.k, err)))
    }
}

/// Generates one family member per parameter value, in input order.
pub fn family_sweep(cfg: &CanonicalConfig, ks: &[Scalar], tol: &Tolerance) -> FamilySweep {
    let contact = ContactCurve::new(cfg, tol);
    let entries = ks
        .iter()
        .map(|&k| SweepEntry {
            k,
            outcome: match &contact {
                Ok(c) => generate_pyramid_with(cfg, c, k, tol),
                Err(e) => Err(e.clone()),
            },
        })
        .collect();
    FamilySweep { entries }
}

/// Tests whether one projective reparametrization matches every vertex
/// parameter with the contact parameter of the opposite face. The map is
/// fitted on the first three pairs; with only three pairs (the plane case)
/// the test is vacuous and always succeeds.
pub fn conjugacy_check(
    vertex_params: &[Scalar],
    contact_params: &[Scalar],
    tol: &Tolerance,
) -> Result<(bool, Option<Mobius>), PyramidError> {
    if vertex_params.len() != contact_params.len() || vertex_params.len() < 3 {
        return Err(PyramidError::InvalidInput(format!(
            "need two aligned parameter lists of length >= 3, got {} / {}",
            vertex_params.len(),
            contact_params.len()
        )));
    }
    for list in [vertex_params, contact_params] {
        if poly::min_separation(list) <= tol.root_sep_eps {
            return Err(PyramidError::Core(CoreError::DegenerateTriple(
                "parameter list has coincident entries".to_string(),
            )));
        }
    }
    let map = mobius_from_three_pairs(
        [vertex_params[0], vertex_params[1], vertex_params[2]],
        [contact_params[0], contact_params[1], contact_params[2]],
        tol,
    )?;
    for (v, c) in vertex_params.iter().zip(contact_params.iter()).skip(3) {
        let image = match map.apply(*v) {
            Some(z) => z,
            None => return Ok((false, None)),
        };
        if (image - c).norm() > tol.rel_eps * 1.0_f64.max(c.norm()) {
            return Ok((false, None));
        }
    }
    Ok((true, Some(map)))
}

/// Canonical data moved to general position by a projectivity: the
/// reference pyramid together with samples of both curves. Incidence and
/// contact residuals survive the move.
#[derive(Debug)]
pub struct TransportedConfig {
    pub vertices: Vec<HomogeneousVector>,
    pub faces: Vec<HomogeneousVector>,
    pub curve_points: Vec<(Scalar, HomogeneousVector)>,
    pub curve_faces: Vec<(Scalar, HomogeneousVector)>,
}

pub fn transport_config(
    cfg: &CanonicalConfig,
    g: &Projectivity,
    tol: &Tolerance,
) -> Result<TransportedConfig, PyramidError> {
    let n = cfg.n();
    if g.dim() != n {
        return Err(PyramidError::InvalidInput(format!(
            "projectivity dimension {} does not match configuration dimension {n}",
            g.dim()
        )));
    }
    let fundamental = Pyramid::fundamental(n)?;
    let moved = fundamental.transported(g, tol)?;
    let mut params: Vec<Scalar> = cfg.nodes.clone();
    for j in 0..n + 3 {
        params.push(re(2.7 + 0.6 * j as f64));
    }
    let curve_points = params
        .iter()
        .map(|&s| Ok((s, g.apply(&cfg.vertex(s, tol)?, tol)?)))
        .collect::<Result<Vec<_>, PyramidError>>()?;
    let curve_faces = params
        .iter()
        .map(|&t| Ok((t, g.apply(&cfg.face(t, tol)?, tol)?)))
        .collect::<Result<Vec<_>, PyramidError>>()?;
    Ok(TransportedConfig {
        vertices: moved.vertices,
        faces: moved.faces,
        curve_points,
        curve_faces,
    })
}

/// Relabels the parameter line by a Möbius map `t = phi(t')`, producing a
/// configuration that presents the same two curves: new nodes are the
/// preimages of the old ones and each weight picks up the factor
/// `prod_{j != i} (alpha - a_j gamma)` coming from clearing denominators.
pub fn reparametrize(
    cfg: &CanonicalConfig,
    phi: &Mobius,
    tol: &Tolerance,
) -> Result<CanonicalConfig, PyramidError> {
    let m = phi.matrix();
    let (alpha, beta, gamma, delta) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let mut nodes = Vec::with_capacity(cfg.nodes.len());
    let mut factors = Vec::with_capacity(cfg.nodes.len());
    for &a in &cfg.nodes {
        let lead = alpha - a * gamma;
        if lead.norm() <= tol.root_sep_eps * 1.0_f64.max(a.norm()) {
            return Err(PyramidError::InvalidInput(format!(
                "node {a} sits at the pole of the reparametrization"
            )));
        }
        nodes.push((a * delta - beta) / lead);
        factors.push(lead);
    }
    let weight_factor = |i: usize| -> Scalar {
        factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &f)| f)
            .product()
    };
    let face_weights = cfg
        .face_weights
        .iter()
        .enumerate()
        .map(|(i, &w)| w * weight_factor(i))
        .collect();
    let point_weights = cfg
        .point_weights
        .iter()
        .enumerate()
        .map(|(i, &w)| w * weight_factor(i))
        .collect();
    CanonicalConfig::new(nodes, face_weights, point_weights, tol)
}

/// Moves a configuration back into the affine chart when any node exceeds
/// [`AFFINE_LIMIT`], using a seeded random Möbius map. Returns the map used,
/// if any.
pub fn preprocessed(
    cfg: &CanonicalConfig,
    seed: u64,
    tol: &Tolerance,
) -> Result<(CanonicalConfig, Option<Mobius>), PyramidError> {
    if cfg.nodes.iter().all(|a| a.norm() <= AFFINE_LIMIT) {
        return Ok((cfg.clone(), None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let entry = |rng: &mut ChaCha8Rng| {
            Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        let candidate = Mobius::new(
            [
                [entry(&mut rng), entry(&mut rng)],
                [entry(&mut rng), entry(&mut rng)],
            ],
            tol,
        );
        let phi = match candidate {
            Ok(p) => p,
            Err(_) => continue,
        };
        if let Ok(new_cfg) = reparametrize(cfg, &phi, tol) {
            if new_cfg.nodes.iter().all(|a| a.norm() <= AFFINE_LIMIT) {
                return Ok((new_cfg, Some(phi)));
            }
        }
    }
    Err(PyramidError::InvalidConfig(
        "could not move the configuration into the affine chart".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Scalar {
        re(x)
    }
    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn fundamental_pyramid_shape() {
        let p = Pyramid::fundamental(2).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.vertices()[0].coords(), &[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(p.faces()[2].coords(), &[c(0.0), c(0.0), c(1.0)]);
        let res = p.incidence_residuals().unwrap();
        for ((i, j), &r) in res.indexed_iter() {
            if i == j {
                assert!((r - 1.0).abs() < 1e-15);
            } else {
                assert_eq!(r, 0.0);
            }
        }

        let p3 = Pyramid::fundamental(3).unwrap();
        assert_eq!(p3.vertices().len(), 4);
        assert_eq!(p3.faces().len(), 4);
        assert!(Pyramid::fundamental(1).is_err());
    }

    #[test]
    fn face_at_node_is_coordinate_hyperplane() {
        let cfg = CanonicalConfig::demo_triangle();
        let f = cfg.face(c(0.0), &tol()).unwrap();
        // proportional to x_0 = 0
        assert_eq!(f.coords(), &[c(1.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn face_example_values() {
        let cfg = CanonicalConfig::demo_triangle();
        let f = cfg.face(c(3.0), &tol()).unwrap();
        // raw (2, 3, 6), normalized by the last entry
        assert!((f.coords()[0] - c(1.0 / 3.0)).norm() < 1e-15);
        assert!((f.coords()[1] - c(0.5)).norm() < 1e-15);
        assert_eq!(f.coords()[2], c(1.0));
    }

    #[test]
    fn vertex_example_values() {
        let cfg = CanonicalConfig::demo_triangle();
        let v = cfg.vertex(c(-1.0), &tol()).unwrap();
        // raw (6, 3, 2), normalized by the first entry
        assert_eq!(v.coords()[0], c(1.0));
        assert!((v.coords()[1] - c(0.5)).norm() < 1e-15);
        assert!((v.coords()[2] - c(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn vertex_at_node_is_basis_point() {
        let cfg = CanonicalConfig::demo_triangle();
        for (i, &a) in cfg.nodes().iter().enumerate() {
            let v = cfg.vertex(a, &tol()).unwrap();
            for (j, &coord) in v.coords().iter().enumerate() {
                if i == j {
                    assert_eq!(coord, c(1.0));
                } else {
                    assert!(coord.norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn family_polynomials_have_degree_n() {
        let cfg = CanonicalConfig::demo_triangle();
        for p in cfg.face_polynomials().iter().chain(cfg.vertex_polynomials().iter()) {
            assert_eq!(p.effective_degree(1e-12), Some(2));
        }
    }

    #[test]
    fn closure_polynomial_demo_expansion() {
        // k = 1 on the demo triangle: -x^3 + 6x^2 - 8x + 2
        let cfg = CanonicalConfig::demo_triangle();
        let p = cfg.closure_polynomial(c(1.0));
        let want = [c(2.0), c(-8.0), c(6.0), c(-1.0)];
        assert_eq!(p.coeffs().len(), 4);
        for (got, want) in p.coeffs().iter().zip(want.iter()) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn closure_polynomial_at_zero_recovers_nodes() {
        let cfg = CanonicalConfig::demo_triangle();
        let p = cfg.closure_polynomial(Scalar::ZERO);
        let roots = poly_roots(&p, &tol()).unwrap();
        for (r, a) in roots.iter().zip(cfg.nodes()) {
            assert!((r - a).norm() < 1e-12);
        }
    }

    #[test]
    fn closure_polynomial_leading_coefficient_is_minus_one() {
        let cfg = CanonicalConfig::demo_triangle();
        for k in [c(0.0), c(1.0), c(-3.7), Scalar::new(0.3, 2.0)] {
            let p = cfg.closure_polynomial(k);
            assert_eq!(p.coeffs()[cfg.n() + 1], c(-1.0));
        }
    }

    #[test]
    fn incidence_form_is_exactly_symmetric_and_degree_n() {
        let cfg = CanonicalConfig::demo_triangle();
        let form = cfg.incidence_form();
        let m = form.coeffs();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                assert_eq!(m[[i, j]], m[[j, i]]);
            }
        }
        assert_eq!(form.degrees(1e-12), (2, 2));
    }

    #[test]
    fn incidence_value_matches_dual_pairing() {
        let cfg = CanonicalConfig::demo_triangle();
        for (t, s) in [(0.3, -1.2), (2.5, 0.9), (-0.7, 1.4)] {
            let (t, s) = (c(t), c(s));
            let via_form = cfg.incidence_value(t, s);
            let pairing: Scalar = cfg
                .face_raw(t)
                .iter()
                .zip(cfg.vertex_raw(s).iter())
                .map(|(a, b)| a * b)
                .sum();
            assert!((via_form - pairing).norm() < 1e-10 * (1.0 + pairing.norm()));
        }
    }

    #[test]
    fn generate_demo_triangle_member() {
        let cfg = CanonicalConfig::demo_triangle();
        let member = generate_pyramid(&cfg, c(1.0), &tol()).unwrap();
        assert_eq!(member.roots.len(), 3);
        assert!(member.max_offdiagonal_residual() < 1e-9);
        assert_eq!(member.hyperosculation_orders, vec![2, 2, 2]);
    }

    #[test]
    fn generate_at_zero_gives_fundamental_pyramid() {
        let cfg = CanonicalConfig::demo_triangle();
        let member = generate_pyramid(&cfg, Scalar::ZERO, &tol()).unwrap();
        for (i, v) in member.pyramid.vertices().iter().enumerate() {
            for (j, &coord) in v.coords().iter().enumerate() {
                if i == j {
                    assert_eq!(coord, c(1.0));
                } else {
                    assert!(coord.norm() < 1e-10);
                }
            }
        }
        assert!(member.max_offdiagonal_residual() < 1e-10);
    }

    #[test]
    fn sweep_reports_empty_input() {
        let cfg = CanonicalConfig::demo_triangle();
        let sweep = family_sweep(&cfg, &[], &tol());
        assert!(sweep.entries.is_empty());
    }

    #[test]
    fn complex_family_parameters_close_too() {
        let cfg = CanonicalConfig::demo_triangle();
        let member = generate_pyramid(&cfg, Scalar::new(0.4, 0.9), &tol()).unwrap();
        assert!(member.max_offdiagonal_residual() < 1e-10);
        assert_eq!(member.hyperosculation_orders, vec![2, 2, 2]);
    }

    #[test]
    fn conjugacy_of_identical_lists_is_identity() {
        let params = [c(0.0), c(1.0), c(2.0), c(3.0)];
        let (ok, map) = conjugacy_check(&params, &params, &tol()).unwrap();
        assert!(ok);
        let map = map.unwrap();
        for &t in &params {
            assert!((map.apply(t).unwrap() - t).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugacy_in_the_plane_is_vacuous() {
        let (ok, _) = conjugacy_check(
            &[c(0.0), c(1.0), c(2.0)],
            &[c(5.0), c(-1.0), c(0.3)],
            &tol(),
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn conjugacy_detects_mismatch_in_space() {
        let (ok, map) = conjugacy_check(
            &[c(0.0), c(1.0), c(2.0), c(3.0)],
            &[c(0.0), c(1.0), c(2.0), c(3.5)],
            &tol(),
        )
        .unwrap();
        assert!(!ok);
        assert!(map.is_none());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let t = tol();
        // coincident nodes
        assert!(CanonicalConfig::new(
            vec![c(0.0), c(0.0), c(1.0)],
            vec![c(1.0); 3],
            vec![c(1.0); 3],
            &t
        )
        .is_err());
        // zero weight
        assert!(CanonicalConfig::new(
            vec![c(0.0), c(1.0), c(2.0)],
            vec![c(1.0), c(0.0), c(1.0)],
            vec![c(1.0); 3],
            &t
        )
        .is_err());
        // too small
        assert!(CanonicalConfig::new(vec![c(0.0), c(1.0)], vec![c(1.0); 2], vec![c(1.0); 2], &t)
            .is_err());
    }

    #[test]
    fn reparametrized_config_presents_the_same_curves() {
        let cfg = CanonicalConfig::demo_triangle();
        let phi = Mobius::new([[c(1.0), c(0.5)], [c(0.2), c(1.0)]], &tol()).unwrap();
        let moved = reparametrize(&cfg, &phi, &tol()).unwrap();
        let inv = phi.inverse();
        for t in [c(0.4), c(-1.3), c(2.6)] {
            let t_new = inv.apply(t).unwrap();
            let before = cfg.face(t, &tol()).unwrap();
            let after = moved.face(t_new, &tol()).unwrap();
            for (a, b) in before.coords().iter().zip(after.coords().iter()) {
                assert!((a - b).norm() < 1e-10);
            }
            let vb = cfg.vertex(t, &tol()).unwrap();
            let va = moved.vertex(t_new, &tol()).unwrap();
            for (a, b) in vb.coords().iter().zip(va.coords().iter()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn preprocessing_moves_far_nodes_into_chart() {
        let t = tol();
        let cfg = CanonicalConfig::new(
            vec![c(1e7), c(1.0), c(2.0)],
            vec![c(1.0); 3],
            vec![c(1.0); 3],
            &t,
        )
        .unwrap();
        let (moved, map) = preprocessed(&cfg, 11, &t).unwrap();
        assert!(map.is_some());
        assert!(moved.nodes().iter().all(|a| a.norm() <= AFFINE_LIMIT));

        let near = CanonicalConfig::demo_triangle();
        let (same, map) = preprocessed(&near, 11, &t).unwrap();
        assert!(map.is_none());
        assert_eq!(same, near);
    }
}
