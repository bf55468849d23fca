//! Möbius transformations of the projective line and the cross-ratio.

use crate::error::CoreError;
use crate::scalar::{is_finite, Scalar};
use crate::tolerance::Tolerance;

/// Fractional linear map `t -> (a t + b) / (c t + d)`, stored as a 2x2
/// matrix scaled so the max-modulus entry is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Mobius {
    m: [[Scalar; 2]; 2],
}

impl Mobius {
    pub fn new(m: [[Scalar; 2]; 2], tol: &Tolerance) -> Result<Self, CoreError> {
        let entries = [m[0][0], m[0][1], m[1][0], m[1][1]];
        if entries.iter().any(|&z| !is_finite(z)) {
            return Err(CoreError::NumericalFailure("non-finite entry".to_string()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(CoreError::SingularMatrix);
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.norm() <= tol.rel_eps * scale * scale {
            return Err(CoreError::SingularMatrix);
        }
        let pivot = entries
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        Ok(Mobius {
            m: [
                [m[0][0] / pivot, m[0][1] / pivot],
                [m[1][0] / pivot, m[1][1] / pivot],
            ],
        })
    }

    pub fn identity() -> Self {
        Mobius {
            m: [[Scalar::ONE, Scalar::ZERO], [Scalar::ZERO, Scalar::ONE]],
        }
    }

    pub fn matrix(&self) -> &[[Scalar; 2]; 2] {
        &self.m
    }

    /// Image of an affine parameter; `None` at (or numerically near) the
    /// pole. Parameters are affine throughout, infinity is never stored.
    pub fn apply(&self, t: Scalar) -> Option<Scalar> {
        let num = self.m[0][0] * t + self.m[0][1];
        let den = self.m[1][0] * t + self.m[1][1];
        let scale = 1.0_f64.max(t.norm());
        if den.norm() <= 1e-14 * scale {
            return None;
        }
        Some(num / den)
    }

    pub fn inverse(&self) -> Self {
        // adjugate, same projective map
        Mobius {
            m: [
                [self.m[1][1], -self.m[0][1]],
                [-self.m[1][0], self.m[0][0]],
            ],
        }
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &Mobius) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Mobius {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// `(t1 - t3)(t2 - t4) / ((t1 - t4)(t2 - t3))`.
pub fn cross_ratio(
    t1: Scalar,
    t2: Scalar,
    t3: Scalar,
    t4: Scalar,
    tol: &Tolerance,
) -> Result<Scalar, CoreError> {
    let all = [t1, t2, t3, t4];
    for i in 0..4 {
        for j in i + 1..4 {
            if (all[i] - all[j]).norm() <= tol.root_sep_eps {
                return Err(CoreError::DegenerateQuadruple(all[i], all[j]));
            }
        }
    }
    Ok(((t1 - t3) * (t2 - t4)) / ((t1 - t4) * (t2 - t3)))
}

/// Map sending `z1, z2, z3` to `0, 1, infinity`:
/// `z -> ((z - z1)(z2 - z3)) / ((z - z3)(z2 - z1))`.
fn to_standard_triple(z1: Scalar, z2: Scalar, z3: Scalar) -> [[Scalar; 2]; 2] {
    [
        [z2 - z3, -z1 * (z2 - z3)],
        [z2 - z1, -z3 * (z2 - z1)],
    ]
}

/// The unique Möbius map taking `src[i]` to `dst[i]` for i = 0, 1, 2.
pub fn mobius_from_three_pairs(
    src: [Scalar; 3],
    dst: [Scalar; 3],
    tol: &Tolerance,
) -> Result<Mobius, CoreError> {
    for (label, triple) in [("source", src), ("target", dst)] {
        for i in 0..3 {
            for j in i + 1..3 {
                if (triple[i] - triple[j]).norm() <= tol.root_sep_eps {
                    return Err(CoreError::DegenerateTriple(format!(
                        "{label} values {} and {} coincide",
                        triple[i], triple[j]
                    )));
                }
            }
        }
    }
    let a = Mobius::new(to_standard_triple(src[0], src[1], src[2]), tol)?;
    let b = Mobius::new(to_standard_triple(dst[0], dst[1], dst[2]), tol)?;
    let map = Mobius::new(b.inverse().compose(&a).m, tol)?;
    for (s, d) in src.iter().zip(dst.iter()) {
        let image = map.apply(*s).ok_or_else(|| {
            CoreError::DegenerateTriple(format!("pole at source value {s}"))
        })?;
        let scale = 1.0_f64.max(d.norm());
        if (image - d).norm() > tol.rel_eps * scale {
            return Err(CoreError::DegenerateTriple(format!(
                "interpolation failed at {s}: got {image}, wanted {d}"
            )));
        }
    }
    Ok(map)
}
