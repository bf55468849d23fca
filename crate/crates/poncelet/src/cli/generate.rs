//! Seeded generation of run inputs. All draws go through one ChaCha8 stream
//! per command, so a seed pins the entire run.

use rand::Rng;

use crate::error::LateralError;
use crate::lateral::{pencil_from_multilateral, BinaryForm, Multilateral, Pencil};
use crate::scalar::{re, Scalar};
use crate::tolerance::Tolerance;

/// Draws a second pencil form with coefficients in [-1, 1], retrying until
/// it is independent of the lateral's root form and avoids its parameters.
pub fn seeded_second_form(
    lateral: &Multilateral,
    rng: &mut impl Rng,
    tol: &Tolerance,
) -> Result<(BinaryForm, Pencil), LateralError> {
    for _ in 0..64 {
        let coeffs: Vec<Scalar> = (0..lateral.n() + 2)
            .map(|_| re(rng.random_range(-1.0..1.0)))
            .collect();
        let g = match BinaryForm::new(coeffs) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if let Ok(pen) = pencil_from_multilateral(lateral, g.clone(), tol) {
            return Ok((g, pen));
        }
    }
    Err(LateralError::BadSecondForm(
        "no usable second form after 64 draws".to_string(),
    ))
}

/// Complex combination coefficients for a kernel-basis curve.
pub fn seeded_combination(dim: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..dim)
        .map(|_| Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}
