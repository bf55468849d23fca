use num_complex::Complex64;

/// The field the engine computes over: complex numbers in double precision.
pub type Scalar = Complex64;

/// True when both components are finite.
pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Relative comparison of two scalars: `|a - b| <= eps * max(1, |a|, |b|)`.
pub fn approx_eq(a: Scalar, b: Scalar, eps: f64) -> bool {
    let scale = 1.0_f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= eps * scale
}

pub(crate) fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}
