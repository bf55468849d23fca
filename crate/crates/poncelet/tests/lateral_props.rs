//! Invariants of the multilateral closure engine over seeded random draws.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poncelet::lateral::{
    bezoutiant, closure_trace, correspondence_image, darboux_verify, diagonal_conic,
    interpolation_system, matching_distance, pair_to_point, pencil_from_multilateral,
    point_to_pair, tangent_line, to_plane_curve, BinaryForm, Multilateral, Pencil,
    TernaryForm, TraceOutcome,
};
use poncelet::poly::poly_roots;
use poncelet::{Scalar, Tolerance};

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_pencil(degree: usize, rng: &mut ChaCha8Rng) -> Pencil {
    loop {
        let f: Vec<Scalar> = (0..=degree).map(|_| random_scalar(rng)).collect();
        let g: Vec<Scalar> = (0..=degree).map(|_| random_scalar(rng)).collect();
        let (Ok(f), Ok(g)) = (BinaryForm::new(f), BinaryForm::new(g)) else {
            continue;
        };
        if let Ok(pen) = Pencil::new(f, g, &tol()) {
            return pen;
        }
    }
}

/// Divided-difference oracle: synthetic division of
/// `F(u)G(v) - F(v)G(u)` by `(u - v)`, coefficients in v per power of u.
fn divided_difference_oracle(pen: &Pencil) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let d = pen.degree();
    let f = pen.f().coeffs();
    let g = pen.g().coeffs();
    // numerator[i][j] = coefficient of u^i v^j
    let mut numerator = vec![vec![Scalar::ZERO; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            numerator[i][j] = f[i] * g[j] - f[j] * g[i];
        }
    }
    // divide by (u - v), treating u as the outer variable:
    // quotient_i(v) = numerator_{i+1}(v) + v * quotient_{i+1}(v)
    let mut quotient = vec![vec![Scalar::ZERO; d + 1]; d];
    for i in (0..d).rev() {
        let upper: Vec<Scalar> = if i + 1 < d {
            quotient[i + 1].clone()
        } else {
            vec![Scalar::ZERO; d + 1]
        };
        for j in 0..=d {
            let shifted = if j > 0 { upper[j - 1] } else { Scalar::ZERO };
            quotient[i][j] = numerator[i + 1][j] + shifted;
        }
    }
    // remainder(v) = numerator_0(v) + v * quotient_0(v)
    let mut remainder = vec![Scalar::ZERO; d + 2];
    for j in 0..=d {
        remainder[j] += numerator[0][j];
        remainder[j + 1] += quotient[0][j];
    }
    (quotient, remainder)
}

#[test]
fn bezoutiant_division_is_exact_up_to_degree_nine() {
    let mut rng = ChaCha8Rng::seed_from_u64(321);
    for degree in 2..=9 {
        for _ in 0..8 {
            let pen = random_pencil(degree, &mut rng);
            let b = bezoutiant(&pen).unwrap();
            let (quotient, remainder) = divided_difference_oracle(&pen);
            let scale = b.max_coeff_modulus().max(1e-300);
            for (i, row) in quotient.iter().enumerate() {
                for (j, &q) in row.iter().enumerate() {
                    let got = if j < degree { b.coeffs()[[i, j]] } else { Scalar::ZERO };
                    assert!(
                        (got - q).norm() <= 1e-12 * scale,
                        "degree {degree}: coefficient ({i},{j}) differs by {:e}",
                        (got - q).norm()
                    );
                }
            }
            for r in remainder {
                assert!(r.norm() <= 1e-12 * scale, "remainder {:e}", r.norm());
            }
        }
    }
}

#[test]
fn rewrite_identity_on_200_random_points_per_pencil() {
    let mut rng = ChaCha8Rng::seed_from_u64(654);
    for degree in [3usize, 5, 7] {
        let pen = random_pencil(degree, &mut rng);
        let b = bezoutiant(&pen).unwrap();
        let t = to_plane_curve(&b, &tol()).unwrap();
        let scale = b.max_coeff_modulus();
        for _ in 0..200 {
            let u = random_scalar(&mut rng);
            let v = random_scalar(&mut rng);
            let lhs = t.eval_chart(u + v, u * v);
            let rhs = b.eval(u, v);
            assert!(
                (lhs - rhs).norm() <= 1e-10 * scale,
                "degree {degree}: identity off by {:e}",
                (lhs - rhs).norm() / scale
            );
        }
    }
}

#[test]
fn pencil_curves_vanish_at_every_lateral_vertex() {
    let mut rng = ChaCha8Rng::seed_from_u64(987);
    for n in 2..=6 {
        let lateral = Multilateral::random_real(n, &mut rng);
        let g = loop {
            let coeffs: Vec<Scalar> = (0..=n + 1).map(|_| c(rng.random_range(-1.0..1.0))).collect();
            if let Ok(g) = BinaryForm::new(coeffs) {
                if pencil_from_multilateral(&lateral, g.clone(), &tol()).is_ok() {
                    break g;
                }
            }
        };
        let pen = pencil_from_multilateral(&lateral, g, &tol()).unwrap();
        let curve = to_plane_curve(&bezoutiant(&pen).unwrap(), &tol()).unwrap();
        let scale = curve.max_coeff_modulus();
        for (_, _, vertex) in lateral.vertices() {
            let coords = [vertex.coords()[0], vertex.coords()[1], vertex.coords()[2]];
            let r = curve.eval(&coords).norm() / scale;
            assert!(r < 1e-10, "n={n}: vertex residual {r:e}");
        }
    }
}

#[test]
fn closure_traces_verify_for_random_kernel_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(246);
    for n in 2..=6 {
        let lateral = Multilateral::random_real(n, &mut rng);
        let sys = interpolation_system(&lateral, n, &tol()).unwrap();
        let coeffs: Vec<Scalar> = (0..sys.basis().len()).map(|_| random_scalar(&mut rng)).collect();
        let mut traced = 0;
        while traced < 10 {
            let start = c(rng.random_range(-2.0..2.0));
            let outcomes = darboux_verify(&lateral, &coeffs, &[start], &tol()).unwrap();
            match &outcomes[0] {
                TraceOutcome::Trace(report) => {
                    assert!(
                        report.verdict,
                        "n={n} start={start}: residual {:e}, defect {:e}",
                        report.max_vertex_residual(),
                        report.symmetry_defect
                    );
                    traced += 1;
                }
                TraceOutcome::Skipped { .. } => continue,
            }
        }
    }
}

#[test]
fn pencil_and_trace_agree_on_the_correspondence() {
    let mut rng = ChaCha8Rng::seed_from_u64(135);
    for n in 2..=5 {
        for _ in 0..10 {
            let lateral = Multilateral::random_real(n, &mut rng);
            let g = loop {
                let coeffs: Vec<Scalar> =
                    (0..=n + 1).map(|_| random_scalar(&mut rng)).collect();
                if let Ok(g) = BinaryForm::new(coeffs) {
                    if pencil_from_multilateral(&lateral, g.clone(), &tol()).is_ok() {
                        break g;
                    }
                }
            };
            let pen = pencil_from_multilateral(&lateral, g, &tol()).unwrap();
            let curve = to_plane_curve(&bezoutiant(&pen).unwrap(), &tol()).unwrap();
            let u0 = random_scalar(&mut rng);
            let image = match correspondence_image(&curve, u0, &tol()) {
                Ok(image) => image,
                Err(_) => continue,
            };
            let member = pen.member_through(u0);
            let mut member_roots = poly_roots(&member, &tol()).unwrap();
            // remove one copy of u0 from the member divisor
            let pos = member_roots
                .iter()
                .position(|r| (r - u0).norm() < 1e-6)
                .expect("u0 lies in its own member");
            member_roots.remove(pos);
            let d = matching_distance(&image, &member_roots);
            assert!(d < 1e-7, "n={n} u0={u0}: divisors differ by {d:e}");
        }
    }
}

#[test]
fn interpolation_rank_law_across_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(579);
    for n in 2..=6 {
        for _ in 0..5 {
            let lateral = Multilateral::random_real(n, &mut rng);
            let sys = interpolation_system(&lateral, n, &tol()).unwrap();
            assert_eq!(sys.projective_dimension(), n);
            assert!(sys.gap_ratio() > 1e6);
        }
    }
}

#[test]
fn diagonal_restriction_to_tangents_has_vanishing_discriminant() {
    let gamma = diagonal_conic();
    let mut rng = ChaCha8Rng::seed_from_u64(864);
    for _ in 0..20 {
        let u = random_scalar(&mut rng);
        let r = gamma.restrict_to_tangent(u);
        let coeffs = r.coeffs();
        let disc = coeffs[1] * coeffs[1] - 4.0 * coeffs[2] * coeffs[0];
        assert!(disc.norm() < 1e-12, "discriminant {:e}", disc.norm());
    }
}

#[test]
fn distinct_pencils_give_distinct_curves() {
    // sampled injectivity: different second forms through the same lateral
    // divisor produce non-proportional curves
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let lateral = Multilateral::random_real(3, &mut rng);
    let mut curves: Vec<TernaryForm> = Vec::new();
    while curves.len() < 5 {
        let coeffs: Vec<Scalar> = (0..=4).map(|_| random_scalar(&mut rng)).collect();
        let Ok(g) = BinaryForm::new(coeffs) else { continue };
        let Ok(pen) = pencil_from_multilateral(&lateral, g, &tol()) else {
            continue;
        };
        curves.push(to_plane_curve(&bezoutiant(&pen).unwrap(), &tol()).unwrap().normalized());
    }
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let diff: f64 = curves[i]
                .coeffs()
                .iter()
                .zip(curves[j].coeffs().iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff > 1e-6, "curves {i} and {j} coincide");
        }
    }
}

#[test]
fn darboux_verify_closes_the_pencil_curve_itself() {
    // express the pencil curve in the kernel basis (which is orthonormal in
    // coefficient space) and trace it from 20 starts
    let mut rng = ChaCha8Rng::seed_from_u64(9090);
    let lateral = Multilateral::random_real(3, &mut rng);
    let g = loop {
        let coeffs: Vec<Scalar> = (0..=4).map(|_| c(rng.random_range(-1.0..1.0))).collect();
        if let Ok(g) = BinaryForm::new(coeffs) {
            if pencil_from_multilateral(&lateral, g.clone(), &tol()).is_ok() {
                break g;
            }
        }
    };
    let pen = pencil_from_multilateral(&lateral, g, &tol()).unwrap();
    let curve = to_plane_curve(&bezoutiant(&pen).unwrap(), &tol()).unwrap();
    let sys = interpolation_system(&lateral, 3, &tol()).unwrap();
    let coeffs: Vec<Scalar> = sys
        .basis()
        .iter()
        .map(|b| {
            b.coeffs()
                .iter()
                .zip(curve.coeffs().iter())
                .map(|(e, c)| e.conj() * c)
                .sum()
        })
        .collect();
    // the projection reproduces the curve, confirming it lies in the kernel
    let projected = sys.combine(&coeffs).unwrap();
    let scale = curve.max_coeff_modulus();
    for (a, b) in curve.coeffs().iter().zip(projected.coeffs().iter()) {
        assert!((a - b).norm() < 1e-10 * scale);
    }
    let mut verified = 0;
    let mut start = -1.95;
    while verified < 20 {
        match darboux_verify(&lateral, &coeffs, &[c(start)], &tol()) {
            Ok(outcomes) => match &outcomes[0] {
                TraceOutcome::Trace(report) => {
                    assert!(report.verdict, "start {start}");
                    verified += 1;
                }
                TraceOutcome::Skipped { .. } => {}
            },
            Err(e) => panic!("hard failure at {start}: {e}"),
        }
        start += 0.19;
    }
}

#[test]
fn starts_on_the_lateral_are_skipped_not_failed() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let lateral = Multilateral::random_real(2, &mut rng);
    let sys = interpolation_system(&lateral, 2, &tol()).unwrap();
    let coeffs: Vec<Scalar> = (0..sys.basis().len()).map(|_| random_scalar(&mut rng)).collect();
    let tangency = lateral.params()[1];
    let outcomes = darboux_verify(&lateral, &coeffs, &[tangency], &tol()).unwrap();
    match &outcomes[0] {
        TraceOutcome::Skipped { start, reason } => {
            assert_eq!(*start, tangency);
            assert!(matches!(reason, poncelet::LateralError::DegenerateRestriction(_)));
        }
        TraceOutcome::Trace(_) => panic!("tangency start should be skipped by policy"),
    }
}

#[test]
fn negative_control_generic_curves_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut failures = 0;
    for _ in 0..10 {
        let n = 3;
        let coeffs: Vec<Scalar> = (0..(n + 1) * (n + 2) / 2)
            .map(|_| c(rng.random_range(-1.0..1.0)))
            .collect();
        let Ok(curve) = TernaryForm::new(n, coeffs) else {
            continue;
        };
        let Ok(report) = closure_trace(&curve, c(0.4), &tol()) else {
            continue;
        };
        if !report.verdict
            && report.max_vertex_residual().max(report.symmetry_defect) > 1e-3
        {
            failures += 1;
        }
    }
    assert!(failures >= 9, "only {failures} of 10 negative controls failed");
}

#[test]
fn image_points_lie_on_the_curve_and_the_tangent_line() {
    // geometric reading of the correspondence: each image parameter names a
    // second tangent through a curve point on the tangent line at u0
    let mut rng = ChaCha8Rng::seed_from_u64(369);
    let lateral = Multilateral::random_real(2, &mut rng);
    let sys = interpolation_system(&lateral, 2, &tol()).unwrap();
    let coeffs: Vec<Scalar> = (0..sys.basis().len()).map(|_| random_scalar(&mut rng)).collect();
    let curve = sys.combine(&coeffs).unwrap().normalized();
    let u0 = c(0.3);
    let image = correspondence_image(&curve, u0, &tol()).unwrap();
    let line = tangent_line(u0);
    for &v in &image {
        let p = pair_to_point(u0, v);
        let coords = [p.coords()[0], p.coords()[1], p.coords()[2]];
        assert!(curve.eval(&coords).norm() / curve.max_coeff_modulus() < 1e-10);
        assert!(
            poncelet::projective::incidence_residual(&p, &line).unwrap() < 1e-10
        );
        // recover the pair back from the point
        let (a, b) = point_to_pair(&p, &tol()).unwrap();
        let direct = (a - u0).norm().min((b - u0).norm());
        assert!(direct < 1e-8);
    }
}

#[test]
fn interpolation_matrix_annihilates_pencil_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(248);
    let lateral = Multilateral::random_real(4, &mut rng);
    let g = loop {
        let coeffs: Vec<Scalar> = (0..=5).map(|_| random_scalar(&mut rng)).collect();
        if let Ok(g) = BinaryForm::new(coeffs) {
            if pencil_from_multilateral(&lateral, g.clone(), &tol()).is_ok() {
                break g;
            }
        }
    };
    let pen = pencil_from_multilateral(&lateral, g, &tol()).unwrap();
    let curve = to_plane_curve(&bezoutiant(&pen).unwrap(), &tol()).unwrap().normalized();
    let sys = interpolation_system(&lateral, 4, &tol()).unwrap();
    let m: &Array2<Scalar> = sys.matrix();
    for row in m.rows() {
        let r: Scalar = row
            .iter()
            .zip(curve.coeffs().iter())
            .map(|(a, b)| a * b)
            .sum();
        assert!(r.norm() < 1e-10, "matrix-curve residual {:e}", r.norm());
    }
}
