//! Render the classical triangle scene to SVG: base conic, tangent lines,
//! vertices and the correspondence curve, plus one traced lateral.
//!
//!     cargo run --example render_svg > triangle.svg

use poncelet::cli::svg::render_scene;
use poncelet::lateral::{
    bezoutiant, closure_trace, pencil_from_multilateral, to_plane_curve, BinaryForm,
    Multilateral,
};
use poncelet::{Scalar, Tolerance};

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn main() {
    let tol = Tolerance::default();
    let lateral = Multilateral::new(vec![c(0.0), c(1.0), c(-1.0)], &tol).unwrap();
    let g = BinaryForm::constant(c(1.0), 3).unwrap();
    let pencil = pencil_from_multilateral(&lateral, g, &tol).unwrap();
    let curve = to_plane_curve(&bezoutiant(&pencil).unwrap(), &tol).unwrap();

    let mut laterals = vec![lateral.params().iter().map(|z| z.re).collect::<Vec<f64>>()];
    // one more closed triangle of the same family, traced from 0.5
    let report = closure_trace(&curve, c(0.5), &tol).unwrap();
    if report.verdict && report.params.iter().all(|z| z.im.abs() < 1e-9) {
        laterals.push(report.params.iter().map(|z| z.re).collect());
    }

    print!("{}", render_scene(&curve, &laterals));
}
