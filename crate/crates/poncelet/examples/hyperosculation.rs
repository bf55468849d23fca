//! Contact geometry of the inscribed curve: every tangent hyperplane meets
//! it with full multiplicity n at a single point.
//!
//!     cargo run --example hyperosculation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use poncelet::projective::incidence_residual;
use poncelet::pyramid::{check_hyperosculation, CanonicalConfig, ContactCurve};
use poncelet::{Scalar, Tolerance};

fn main() {
    let tol = Tolerance::default();

    let demo = CanonicalConfig::demo_triangle();
    let contact = ContactCurve::new(&demo, &tol).unwrap();
    println!("plane demo configuration (n = 2):");
    for t in [-1.5, 0.0, 0.7, 2.0, 3.3] {
        let t = Scalar::new(t, 0.0);
        let order = check_hyperosculation(&demo, t, &tol).unwrap();
        let point = contact.eval(t, &tol).unwrap();
        let face = demo.face(t, &tol).unwrap();
        println!(
            "  t = {:+.2}: contact order {order}, point-on-face residual {:.2e}",
            t.re,
            incidence_residual(&point, &face).unwrap()
        );
    }

    for n in [3usize, 4, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let cfg = CanonicalConfig::random_real(n, &mut rng);
        let order = check_hyperosculation(&cfg, Scalar::new(0.37, 0.0), &tol).unwrap();
        println!("random configuration with n = {n}: contact order {order}");
    }
}
