//! Tracing the correspondence: restriction to tangent lines, closure of the
//! induced (n+1)-lateral, the interpolation system of circumscribed curves,
//! and the full closure verification.

use ndarray::Array2;

use super::ternary::{monomial_count, TernaryForm};
use super::{pair_to_point, Multilateral};
use crate::error::LateralError;
use crate::linalg::{self, CMatrix};
use crate::poly::{self, poly_roots};
use crate::scalar::Scalar;
use crate::tolerance::Tolerance;

/// The divisor the curve associates to the parameter `u`: substitute the
/// tangent-line parametrization `v -> [1, u+v, uv]` into the curve and
/// return the n roots of the resulting polynomial. These are the tangency
/// parameters of the second tangents through the intersection points of the
/// tangent line at `u` with the curve.
pub fn correspondence_image(
    curve: &TernaryForm,
    u: Scalar,
    tol: &Tolerance,
) -> Result<Vec<Scalar>, LateralError> {
    if curve.contains_diagonal(tol) {
        return Err(LateralError::ContainsDiagonal);
    }
    let n = curve.degree();
    let restriction = curve.restrict_to_tangent(u);
    if restriction.effective_degree(tol.rel_eps) != Some(n) {
        return Err(LateralError::DegenerateRestriction(u));
    }
    poly_roots(&restriction, tol).map_err(LateralError::from)
}

/// Verification record of one traced (n+1)-lateral.
#[derive(Debug, Clone)]
pub struct ClosureTraceReport {
    pub start: Scalar,
    /// The start parameter followed by its correspondence image.
    pub params: Vec<Scalar>,
    /// Curve values at the `(n+1 choose 2)` vertices, relative to the
    /// curve's coefficient scale, in lexicographic pair order.
    pub vertex_residuals: Vec<f64>,
    /// Worst mismatch between the image of any parameter and the remaining
    /// parameters, under optimal matching.
    pub symmetry_defect: f64,
    /// Residual threshold the verdict was taken against.
    pub rel_eps: f64,
    pub verdict: bool,
}

impl ClosureTraceReport {
    pub fn max_vertex_residual(&self) -> f64 {
        self.vertex_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Traces the (n+1)-lateral spawned by `u0`: the lateral on `u0` and its
/// image parameters. For a curve circumscribed about a conic-tangent
/// lateral the whole vertex set lands back on the curve and every
/// parameter's image recovers the other n parameters; the report records
/// how closely both statements hold.
pub fn closure_trace(
    curve: &TernaryForm,
    u0: Scalar,
    tol: &Tolerance,
) -> Result<ClosureTraceReport, LateralError> {
    let image = correspondence_image(curve, u0, tol)?;
    let mut params = Vec::with_capacity(image.len() + 1);
    params.push(u0);
    params.extend(image);
    let sep = poly::min_separation(&params);
    if sep <= tol.root_sep_eps {
        return Err(LateralError::ClusteredParams(format!(
            "traced parameters separated by only {sep:e} from start {u0}"
        )));
    }
    let scale = curve.max_coeff_modulus();
    let mut vertex_residuals = Vec::new();
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            let vertex = pair_to_point(params[i], params[j]);
            let coords = [
                vertex.coords()[0],
                vertex.coords()[1],
                vertex.coords()[2],
            ];
            vertex_residuals.push(curve.eval(&coords).norm() / scale);
        }
    }
    let mut symmetry_defect = 0.0f64;
    for i in 0..params.len() {
        let image_i = correspondence_image(curve, params[i], tol)?;
        let others: Vec<Scalar> = params
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &p)| p)
            .collect();
        symmetry_defect = symmetry_defect.max(matching_distance(&image_i, &others));
    }
    let verdict = vertex_residuals.iter().all(|&r| r < tol.rel_eps)
        && symmetry_defect < tol.rel_eps;
    Ok(ClosureTraceReport {
        start: u0,
        params,
        vertex_residuals,
        symmetry_defect,
        rel_eps: tol.rel_eps,
        verdict,
    })
}

/// Distance between two unordered parameter lists: the smallest possible
/// worst pairing error over all bijections (infinite when the lengths
/// differ). Lists are short, so exhaustive assignment with pruning is fine.
pub fn matching_distance(xs: &[Scalar], ys: &[Scalar]) -> f64 {
    if xs.len() != ys.len() {
        return f64::INFINITY;
    }
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = (xs[i] - ys[j]).norm();
        }
    }
    let mut used = vec![false; n];
    let mut best = f64::INFINITY;
    fn descend(
        i: usize,
        current: f64,
        n: usize,
        dist: &[f64],
        used: &mut [bool],
        best: &mut f64,
    ) {
        if current >= *best {
            return;
        }
        if i == n {
            *best = current;
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                descend(i + 1, current.max(dist[i * n + j]), n, dist, used, best);
                used[j] = false;
            }
        }
    }
    descend(0, 0.0, n, &dist, &mut used, &mut best);
    best
}

/// The linear system of degree-n curves through all vertices of a lateral:
/// the evaluation matrix of the degree-n monomials at the vertices together
/// with an orthonormal basis of its kernel. For a general lateral the
/// matrix has full row rank, leaving a kernel of projective dimension n.
#[derive(Debug)]
pub struct InterpolationSystem {
    degree: usize,
    matrix: CMatrix,
    singular_values: Vec<f64>,
    basis: Vec<TernaryForm>,
}

impl InterpolationSystem {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Kernel basis as curves (orthonormal coefficient vectors).
    pub fn basis(&self) -> &[TernaryForm] {
        &self.basis
    }

    pub fn projective_dimension(&self) -> usize {
        self.basis.len() - 1
    }

    /// Ratio between the smallest kept and the largest discarded singular
    /// value; infinite when nothing was discarded (kernel made purely of
    /// dimension count).
    pub fn gap_ratio(&self) -> f64 {
        let r = self.rank();
        let smallest_kept = self.singular_values[r - 1];
        match self.singular_values.get(r) {
            Some(&discarded) if discarded > 0.0 => smallest_kept / discarded,
            _ => f64::INFINITY,
        }
    }

    fn rank(&self) -> usize {
        self.matrix.ncols() - self.basis.len()
    }

    /// The curve with the given coordinates in the kernel basis.
    pub fn combine(&self, coeffs: &[Scalar]) -> Result<TernaryForm, LateralError> {
        if coeffs.len() != self.basis.len() {
            return Err(LateralError::InvalidInput(format!(
                "expected {} combination coefficients, got {}",
                self.basis.len(),
                coeffs.len()
            )));
        }
        let mut acc = vec![Scalar::ZERO; monomial_count(self.degree)];
        for (c, form) in coeffs.iter().zip(self.basis.iter()) {
            for (a, b) in acc.iter_mut().zip(form.coeffs().iter()) {
                *a += c * b;
            }
        }
        TernaryForm::new(self.degree, acc)
    }
}

/// Builds the vertex-interpolation system of a general (n+1)-lateral and
/// checks the rank law: row rank `(n+1 choose 2)`, kernel of projective
/// dimension exactly n.
pub fn interpolation_system(
    lateral: &Multilateral,
    degree: usize,
    tol: &Tolerance,
) -> Result<InterpolationSystem, LateralError> {
    if lateral.n() != degree {
        return Err(LateralError::InvalidInput(format!(
            "lateral with {} sides pairs with degree {}, not {degree}",
            lateral.n() + 1,
            lateral.n()
        )));
    }
    let vertices = lateral.vertices();
    let rows = vertices.len();
    let cols = monomial_count(degree);
    let mut matrix = Array2::<Scalar>::zeros((rows, cols));
    let template = TernaryForm::zeros(degree);
    for (r, (_, _, vertex)) in vertices.iter().enumerate() {
        let x = [
            vertex.coords()[0],
            vertex.coords()[1],
            vertex.coords()[2],
        ];
        let n = degree;
        let pow = |base: Scalar| {
            let mut p = vec![Scalar::ONE; n + 1];
            for i in 1..=n {
                p[i] = p[i - 1] * base;
            }
            p
        };
        let (p0, p1, p2) = (pow(x[0]), pow(x[1]), pow(x[2]));
        for (c, (j, k, _)) in template.monomials().enumerate() {
            matrix[[r, c]] = p0[n - j - k] * p1[j] * p2[k];
        }
    }
    let singular_values = linalg::singular_values(&matrix)?;
    let cut = tol.rank_eps * singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > cut).count();
    if rank != rows {
        return Err(LateralError::RankDeviation {
            expected: rows,
            got: rank,
        });
    }
    let kernel = linalg::nullspace(&matrix, tol.rank_eps)?;
    debug_assert_eq!(kernel.len(), cols - rows);
    let basis = kernel
        .into_iter()
        .map(|v| TernaryForm::new(degree, v.to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InterpolationSystem {
        degree,
        matrix,
        singular_values,
        basis,
    })
}

/// Per-start outcome of a closure verification run.
#[derive(Debug)]
pub enum TraceOutcome {
    Trace(ClosureTraceReport),
    Skipped { start: Scalar, reason: LateralError },
}

/// Selects a curve from the lateral's interpolation kernel and traces the
/// closure from every start. Non-generic starts are skipped in-band rather
/// than failed: starts sitting on a tangency parameter of the lateral,
/// degenerate restrictions, and clustered traces. The closure statement is
/// that every remaining verdict is true.
pub fn darboux_verify(
    lateral: &Multilateral,
    coeffs: &[Scalar],
    starts: &[Scalar],
    tol: &Tolerance,
) -> Result<Vec<TraceOutcome>, LateralError> {
    let system = interpolation_system(lateral, lateral.n(), tol)?;
    let curve = system.combine(coeffs)?.normalized();
    let mut outcomes = Vec::with_capacity(starts.len());
    for &start in starts {
        if let Some(hit) = lateral
            .params()
            .iter()
            .find(|&&u| (u - start).norm() <= tol.root_sep_eps)
        {
            outcomes.push(TraceOutcome::Skipped {
                start,
                reason: LateralError::DegenerateRestriction(*hit),
            });
            continue;
        }
        match closure_trace(&curve, start, tol) {
            Ok(report) => outcomes.push(TraceOutcome::Trace(report)),
            Err(
                reason @ (LateralError::DegenerateRestriction(_)
                | LateralError::ClusteredParams(_)),
            ) => outcomes.push(TraceOutcome::Skipped { start, reason }),
            Err(hard) => return Err(hard),
        }
    }
    Ok(outcomes)
}
