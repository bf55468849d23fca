//! Contact points of the tangent-hyperplane family, recovered through the
//! polynomial minors of its derivative flag, and the contact-order check.
//!
//! The hyperplane family has polynomial coefficient vector `h(t)` of degree
//! n per component. Stacking `h, h', ..., h^(n-1)` gives an n x (n+1)
//! matrix of polynomials whose kernel is one-dimensional at every parameter;
//! the signed maximal minors therefore parametrize the contact point as
//! polynomials (degree n each, after the cancellation of everything above).
//! The minor coefficients are recovered by interpolation of pointwise
//! determinants, trimmed at the construction's noise floor, and any common
//! roots are divided out before numerical evaluation. Holding the whole
//! parametrization stays stable near the nodes, where a pointwise numerical
//! kernel degrades.

use super::CanonicalConfig;
use crate::error::PyramidError;
use crate::poly::{poly_roots, UnivariatePolynomial};
use crate::projective::HomogeneousVector;
use crate::scalar::Scalar;
use crate::tolerance::Tolerance;

/// Polynomial parametrization of the contact point of the tangent
/// hyperplane at each parameter value.
#[derive(Debug, Clone)]
pub struct ContactCurve {
    components: Vec<UnivariatePolynomial>,
}

impl ContactCurve {
    pub fn new(cfg: &CanonicalConfig, tol: &Tolerance) -> Result<Self, PyramidError> {
        let n = cfg.n();
        let mut rows: Vec<Vec<UnivariatePolynomial>> = Vec::with_capacity(n);
        rows.push(cfg.face_polynomials());
        for m in 1..n {
            let prev = &rows[m - 1];
            rows.push(prev.iter().map(|p| p.derivative()).collect());
        }
        // Each maximal minor has raw degree n(n+1)/2 (everything above
        // degree n cancels). Symbolic expansion in floating point loses the
        // cancellation budget for n >= 5, so the minors are recovered by
        // interpolation instead: LU determinants at scaled roots of unity
        // followed by an inverse DFT, which is unitary up to scale.
        let bound = n * (n + 1) / 2;
        let npts = bound + 1;
        let radius = 2.0f64;
        let mut values: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(npts);
        for j in 0..npts {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / npts as f64;
            let t = Scalar::new(radius * angle.cos(), radius * angle.sin());
            values.push(
                rows.iter()
                    .map(|row| row.iter().map(|p| p.eval(t)).collect())
                    .collect(),
            );
        }
        let mut raw: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
        for drop in 0..=n {
            let mut dets = Vec::with_capacity(npts);
            for point in &values {
                let submatrix: Vec<Vec<Scalar>> = point
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != drop)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                dets.push(det_lu(submatrix));
            }
            let mut coeffs = vec![Scalar::ZERO; npts];
            let mut inv_radius_pow = 1.0;
            for (m, coeff) in coeffs.iter_mut().enumerate() {
                let mut acc = Scalar::ZERO;
                for (j, &d) in dets.iter().enumerate() {
                    let angle = -2.0 * std::f64::consts::PI * (j * m % npts) as f64 / npts as f64;
                    acc += d * Scalar::new(angle.cos(), angle.sin());
                }
                *coeff = acc / npts as f64 * inv_radius_pow;
                inv_radius_pow /= radius;
            }
            if drop % 2 == 1 {
                for c in coeffs.iter_mut() {
                    *c = -*c;
                }
            }
            raw.push(coeffs);
        }
        // trim against the global coefficient scale: everything below the
        // construction's noise floor goes, including the cancelled top
        let global_max = raw
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let cut = 1e-11 * global_max;
        let mut components: Vec<UnivariatePolynomial> = raw
            .into_iter()
            .map(|coeffs| {
                match coeffs.iter().rposition(|c| c.norm() > cut) {
                    Some(d) => UnivariatePolynomial::new(coeffs[..=d].to_vec()),
                    None => UnivariatePolynomial::zero(),
                }
            })
            .collect();
        strip_common_roots(&mut components, tol);
        if components
            .iter()
            .all(|p| p.effective_degree(tol.rel_eps).is_none())
        {
            return Err(PyramidError::DegenerateContact(
                "contact parametrization vanishes identically".to_string(),
            ));
        }
        Ok(ContactCurve { components })
    }

    pub fn components(&self) -> &[UnivariatePolynomial] {
        &self.components
    }

    fn scale_at(&self, t: Scalar) -> f64 {
        self.components
            .iter()
            .map(|p| {
                let d = p.coeffs().len().saturating_sub(1) as i32;
                p.max_coeff_modulus() * 1.0_f64.max(t.norm()).powi(d)
            })
            .fold(0.0, f64::max)
    }

    /// Contact point at parameter `t`.
    pub fn eval(&self, t: Scalar, tol: &Tolerance) -> Result<HomogeneousVector, PyramidError> {
        let coords: Vec<Scalar> = self.components.iter().map(|p| p.eval(t)).collect();
        let max = coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max <= tol.rel_eps * self.scale_at(t) {
            return Err(PyramidError::DegenerateContact(format!(
                "kernel dimension exceeds 1 at t = {t}"
            )));
        }
        HomogeneousVector::point(&coords, tol).map_err(PyramidError::from)
    }

    /// Order of vanishing at `tau = t0` of the restriction of the tangent
    /// hyperplane at `t0` to the contact parametrization, i.e. of
    /// `f(tau) = <h(t0), contact(tau)>`. Full contact means order n, with
    /// `f` proportional to `(tau - t0)^n`.
    ///
    /// The variable is rescaled by `max(1, |t0|)` before recentering, which
    /// keeps the coefficient growth of the shift bounded for parameters far
    /// from the origin.
    pub fn order_at(
        &self,
        cfg: &CanonicalConfig,
        t0: Scalar,
        tol: &Tolerance,
    ) -> Result<usize, PyramidError> {
        let face = cfg.face_raw(t0);
        let mut f = UnivariatePolynomial::zero();
        for (coeff, comp) in face.iter().zip(self.components.iter()) {
            f = &f + &comp.scaled(*coeff);
        }
        let s = 1.0_f64.max(t0.norm());
        let mut scaled_coeffs = Vec::with_capacity(f.coeffs().len());
        let mut power = 1.0;
        for &c in f.coeffs() {
            scaled_coeffs.push(c * Scalar::new(power, 0.0));
            power *= s;
        }
        let g = UnivariatePolynomial::new(scaled_coeffs);
        let taylor = g.taylor_at(t0 / s);
        let max = taylor.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max <= 1e-12 * g.max_coeff_modulus() {
            return Err(PyramidError::DegenerateContact(format!(
                "restriction vanishes identically at t = {t0}"
            )));
        }
        let cut = tol.vanish_eps() * max;
        let order = taylor
            .iter()
            .position(|c| c.norm() > cut)
            .expect("a coefficient reaches the maximum");
        Ok(order)
    }
}

/// Order of full tangency of the hyperplane at `t0` against the curve it
/// envelopes; n for every parameter of a valid configuration.
pub fn check_hyperosculation(
    cfg: &CanonicalConfig,
    t0: Scalar,
    tol: &Tolerance,
) -> Result<usize, PyramidError> {
    ContactCurve::new(cfg, tol)?.order_at(cfg, t0, tol)
}

/// Determinant of a small complex matrix by LU with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn det_lu(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut det = Scalar::ONE;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mod = m[col][col].norm();
        for r in col + 1..n {
            let v = m[r][col].norm();
            if v > pivot_mod {
                pivot_row = r;
                pivot_mod = v;
            }
        }
        if pivot_mod == 0.0 {
            return Scalar::ZERO;
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col];
        det *= pivot;
        for r in col + 1..n {
            let factor = m[r][col] / pivot;
            for cc in col + 1..n {
                let sub = factor * m[col][cc];
                m[r][cc] -= sub;
            }
        }
    }
    det
}

/// Divides out every root shared by all components (with multiplicity).
/// The maximal minors of a full-rank polynomial matrix have no common root,
/// so this is a no-op for valid configurations; it guards degenerate input.
fn strip_common_roots(components: &mut [UnivariatePolynomial], tol: &Tolerance) {
    'outer: loop {
        let lead = components
            .iter()
            .find(|p| matches!(p.effective_degree(tol.rel_eps), Some(d) if d >= 1));
        let lead = match lead {
            Some(p) => p.clone(),
            None => return,
        };
        let roots = match poly_roots(&lead, tol) {
            Ok(r) => r,
            Err(_) => return,
        };
        for r in roots {
            let common = components.iter().all(|p| {
                let d = p.coeffs().len().saturating_sub(1) as i32;
                let scale = p.max_coeff_modulus() * 1.0_f64.max(r.norm()).powi(d);
                p.eval(r).norm() <= 1e3 * tol.rel_eps * scale
            });
            if common {
                for p in components.iter_mut() {
                    *p = p.deflate(r).trimmed(tol.rel_eps);
                }
                continue 'outer;
            }
        }
        return;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::incidence_residual;
    use crate::scalar::re;

    fn c(x: f64) -> Scalar {
        re(x)
    }
    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn demo_contact_parametrization_matches_hand_minors() {
        // nodes (0,1,2), unit weights: minors of [h; h'] give components
        // proportional to (t^2, -2(t-1)^2, (t-2)^2)
        let cfg = CanonicalConfig::demo_triangle();
        let curve = ContactCurve::new(&cfg, &tol()).unwrap();
        for t in [c(0.3), c(1.7), c(-2.4)] {
            let p = curve.eval(t, &tol()).unwrap();
            let want = [
                t * t,
                c(-2.0) * (t - c(1.0)) * (t - c(1.0)),
                (t - c(2.0)) * (t - c(2.0)),
            ];
            let hv = HomogeneousVector::point(&want, &tol()).unwrap();
            for (a, b) in p.coords().iter().zip(hv.coords().iter()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn contact_point_lies_on_its_face() {
        let cfg = CanonicalConfig::demo_triangle();
        for t in [c(0.7), c(-1.1), c(3.3), Scalar::new(0.4, 0.8)] {
            let point = cfg.contact_point(t, &tol()).unwrap();
            let face = cfg.face(t, &tol()).unwrap();
            assert!(incidence_residual(&point, &face).unwrap() < 1e-10);
        }
    }

    #[test]
    fn contact_at_node_touches_only_that_coordinate_face() {
        let cfg = CanonicalConfig::demo_triangle();
        let point = cfg.contact_point(c(0.0), &tol()).unwrap();
        let own = cfg.face(c(0.0), &tol()).unwrap();
        assert!(incidence_residual(&point, &own).unwrap() < 1e-10);
        for i in 1..3 {
            let other = cfg.face(cfg.nodes()[i], &tol()).unwrap();
            assert!(incidence_residual(&point, &other).unwrap() > 1e-3);
        }
    }

    #[test]
    fn demo_order_is_two_and_restriction_is_a_pure_power() {
        let cfg = CanonicalConfig::demo_triangle();
        let t0 = c(0.7);
        assert_eq!(check_hyperosculation(&cfg, t0, &tol()).unwrap(), 2);

        // f(tau) = <h(t0), contact(tau)> must be proportional to (tau-t0)^2
        let curve = ContactCurve::new(&cfg, &tol()).unwrap();
        let face = cfg.face_raw(t0);
        let mut f = UnivariatePolynomial::zero();
        for (coeff, comp) in face.iter().zip(curve.components().iter()) {
            f = &f + &comp.scaled(*coeff);
        }
        let taylor = f.taylor_at(t0);
        let max = taylor.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (m, coeff) in taylor.iter().enumerate() {
            if m == 2 {
                assert!(coeff.norm() > 1e-6 * max);
            } else {
                assert!(coeff.norm() < 1e-9 * max, "stray coefficient at {m}");
            }
        }
    }

    #[test]
    fn order_at_nodes_is_n() {
        let cfg = CanonicalConfig::demo_triangle();
        for &a in cfg.nodes() {
            assert_eq!(check_hyperosculation(&cfg, a, &tol()).unwrap(), 2);
        }
    }
}
