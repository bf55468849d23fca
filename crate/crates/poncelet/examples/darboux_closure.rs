//! The full closure statement in the plane: every degree-n curve through
//! all vertices of a conic-tangent (n+1)-lateral spawns a closed lateral
//! from any starting point.
//!
//!     cargo run --example darboux_closure

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poncelet::lateral::{darboux_verify, interpolation_system, Multilateral, TraceOutcome};
use poncelet::{Scalar, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let lateral = Multilateral::random_real(n, &mut rng);
    println!(
        "lateral tangency parameters: {:?}",
        lateral.params().iter().map(|z| (z.re * 1e3).round() / 1e3).collect::<Vec<_>>()
    );

    let sys = interpolation_system(&lateral, n, &tol).unwrap();
    println!(
        "curves of degree {n} through all {} vertices: projective dimension {} (gap {:.1e})",
        lateral.vertices().len(),
        sys.projective_dimension(),
        sys.gap_ratio(),
    );

    // a random curve from that linear system
    let coeffs: Vec<Scalar> = (0..sys.basis().len())
        .map(|_| Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let starts: Vec<Scalar> = (0..8)
        .map(|_| Scalar::new(rng.random_range(-2.0..2.0), 0.0))
        .collect();
    let outcomes = darboux_verify(&lateral, &coeffs, &starts, &tol).unwrap();
    println!("\n{:>9}  {:>13}  {:>15}  verdict", "start", "max residual", "symmetry defect");
    for outcome in &outcomes {
        match outcome {
            TraceOutcome::Trace(report) => println!(
                "{:>9.4}  {:>13.2e}  {:>15.2e}  {}",
                report.start.re,
                report.max_vertex_residual(),
                report.symmetry_defect,
                report.verdict,
            ),
            TraceOutcome::Skipped { start, reason } => {
                println!("{:>9.4}  skipped: {reason}", start.re)
            }
        }
    }
}
