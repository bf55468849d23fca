//! Conjugacy of the two curves and transport of the canonical scene into
//! general position by a random projectivity.
//!
//!     cargo run --example conjugate_transport

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poncelet::projective::{incidence_residual, Projectivity};
use poncelet::pyramid::{conjugacy_check, generate_pyramid, transport_config, CanonicalConfig};
use poncelet::{Scalar, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = CanonicalConfig::random_real(3, &mut rng);

    // the canonical data is conjugate by construction: the identity map
    // matches each vertex parameter with the contact parameter opposite it
    let (ok, map) = conjugacy_check(cfg.nodes(), cfg.nodes(), &tol).unwrap();
    println!("conjugate: {ok}, map fixes the nodes: {}", map.is_some());

    // a misaligned parameter list in space is rejected
    let vertex_params = [0.0, 1.0, 2.0, 3.0].map(|x| Scalar::new(x, 0.0));
    let contact_params = [0.0, 1.0, 2.0, 3.5].map(|x| Scalar::new(x, 0.0));
    let (ok, _) = conjugacy_check(&vertex_params, &contact_params, &tol).unwrap();
    println!("deliberately misaligned lists conjugate: {ok}");

    // move a generated pyramid into general position
    let member = generate_pyramid(&cfg, Scalar::new(0.9, 0.0), &tol).unwrap();
    let mut m = Array2::<Scalar>::zeros((4, 4));
    for i in 0..4 {
        for j in 0..4 {
            m[[i, j]] = Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let g = Projectivity::new(m, &tol).unwrap();
    let moved = member.pyramid.transported(&g, &tol).unwrap();
    let res = moved.incidence_residuals().unwrap();
    let max_off = res
        .indexed_iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, &r)| r)
        .fold(0.0f64, f64::max);
    println!("transported pyramid: max off-diagonal residual {max_off:.2e}");

    // the curve point at node a_i is the moved vertex e_i: it stays on every
    // face except its own opposite one
    let scene = transport_config(&cfg, &g, &tol).unwrap();
    let (_, at_first_node) = &scene.curve_points[0];
    let on_other = incidence_residual(at_first_node, &scene.faces[1]).unwrap();
    let off_own = incidence_residual(at_first_node, &scene.faces[0]).unwrap();
    println!("moved curve vs moved faces: residual {on_other:.2e} (incident), {off_own:.2e} (opposite)");
}
