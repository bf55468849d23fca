//! Sweep the closure family of the demo configuration: two conics around
//! the fundamental triangle, one closed triangle per family parameter.
//!
//!     cargo run --example pyramid_family

use poncelet::pyramid::{family_sweep, CanonicalConfig};
use poncelet::{Scalar, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let cfg = CanonicalConfig::demo_triangle();
    println!("nodes: {:?}", cfg.nodes().iter().map(|z| z.re).collect::<Vec<_>>());

    let ks: Vec<Scalar> = (0..12).map(|j| Scalar::new(0.2 * j as f64, 0.0)).collect();
    let sweep = family_sweep(&cfg, &ks, &tol);

    println!("{:>6}  {:>44}  {:>12}  orders", "k", "closure roots (re)", "max residual");
    for entry in &sweep.entries {
        match &entry.outcome {
            Ok(member) => {
                let roots: Vec<String> = member
                    .roots
                    .iter()
                    .map(|r| {
                        if r.im.abs() < 1e-9 {
                            format!("{:+.4}", r.re)
                        } else {
                            format!("{:+.4}{:+.4}i", r.re, r.im)
                        }
                    })
                    .collect();
                println!(
                    "{:>6.2}  {:>44}  {:>12.2e}  {:?}",
                    entry.k.re,
                    roots.join(" "),
                    member.max_offdiagonal_residual(),
                    member.hyperosculation_orders,
                );
            }
            Err(e) => println!("{:>6.2}  skipped: {e}", entry.k.re),
        }
    }

    // at k = 0 the family degenerates to the reference triangle itself
    let zero = sweep.entries.first().unwrap().outcome.as_ref().unwrap();
    println!(
        "\nk = 0 recovers the fundamental triangle: vertex 0 = {:?}",
        zero.pyramid.vertices()[0].coords()
    );
}
