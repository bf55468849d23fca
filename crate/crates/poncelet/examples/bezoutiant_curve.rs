//! From a pencil of binary forms to its correspondence curve in the plane:
//! the divided difference, the symmetric rewrite, and the induced divisor
//! exchange.
//!
//!     cargo run --example bezoutiant_curve

use poncelet::lateral::{
    bezoutiant, correspondence_image, pencil_from_multilateral, to_plane_curve, BinaryForm,
    Multilateral,
};
use poncelet::{Scalar, Tolerance};

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn main() {
    let tol = Tolerance::default();

    // the classical triangle pencil: F = t^3 - t through the tangency
    // parameters {0, 1, -1}, G = 1
    let lateral = Multilateral::new(vec![c(0.0), c(1.0), c(-1.0)], &tol).unwrap();
    let g = BinaryForm::constant(c(1.0), 3).unwrap();
    let pencil = pencil_from_multilateral(&lateral, g, &tol).unwrap();

    let b = bezoutiant(&pencil).unwrap();
    println!("correspondence form coefficients (u^i v^j):");
    for i in 0..=b.bidegree() {
        let row: Vec<String> = (0..=b.bidegree())
            .map(|j| format!("{:+.1}", b.coeffs()[[i, j]].re))
            .collect();
        println!("  {}", row.join("  "));
    }

    let curve = to_plane_curve(&b, &tol).unwrap();
    println!("\nplane curve of degree {}:", curve.degree());
    for (j, k, coeff) in curve.monomials() {
        if coeff.norm() > 1e-12 {
            let i = curve.degree() - j - k;
            println!("  {:+.1} * x0^{i} x1^{j} x2^{k}", coeff.re);
        }
    }

    // the curve exchanges tangency divisors: the image of any parameter is
    // cut by the tangent line through it
    for u in [0.0, 1.0, 2.0] {
        let image = correspondence_image(&curve, c(u), &tol).unwrap();
        let printed: Vec<String> = image
            .iter()
            .map(|z| {
                if z.im.abs() < 1e-9 {
                    format!("{:+.4}", z.re)
                } else {
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                }
            })
            .collect();
        println!("image of u = {u}: {{{}}}", printed.join(", "));
    }
}
