//! The four commands behind the binary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{LateralError, PyramidError};
use crate::lateral::{
    bezoutiant, closure_trace, interpolation_system, matching_distance, to_plane_curve,
    Multilateral, TernaryForm,
};
use crate::pyramid::{family_sweep, generate_pyramid_with, CanonicalConfig, ContactCurve};
use crate::scalar::{re, Scalar};
use crate::tolerance::Tolerance;

use super::generate::{seeded_combination, seeded_second_form};
use super::report::{Aggregate, ConfigEcho, GeneratedData, ItemReport, ReportDocument};
use super::{svg, CliError, RangeSpec, RunConfig};

const REAL_EPS: f64 = 1e-9;

fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

fn echo(rc: &RunConfig, k_range: Option<RangeSpec>, start_range: Option<RangeSpec>) -> ConfigEcho {
    ConfigEcho {
        command: rc.command.name().to_string(),
        n: rc.n,
        seed: rc.seed,
        k_range,
        start_range,
        tol: rc.tol,
        format: rc.format.name().to_string(),
        tool_version: tool_version(),
    }
}

/// Seeded sweep of pyramid family members; an item verifies when its
/// off-diagonal incidences stay under tolerance and every contact order is
/// exactly n.
pub fn cmd_pyramid(rc: &RunConfig) -> Result<ReportDocument, CliError> {
    let tol = rc.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    let cfg = CanonicalConfig::random_real(rc.n, &mut rng);
    let ks: Vec<Scalar> = rc.k_values().into_iter().map(re).collect();
    let sweep = family_sweep(&cfg, &ks, &tol);
    let items: Vec<ItemReport> = sweep
        .entries
        .iter()
        .enumerate()
        .map(|(index, entry)| pyramid_item(index, entry.k, &entry.outcome, rc.n))
        .collect();
    let aggregate = Aggregate::from_items(&items);
    let k_range = Some(resolved_range(rc.k_values()));
    Ok(ReportDocument {
        version: super::report::SCHEMA_VERSION.to_string(),
        config: echo(rc, k_range, None),
        generated: GeneratedData::Pyramid {
            real_mode: cfg.is_real(REAL_EPS),
            nodes: cfg.nodes().to_vec(),
            face_weights: cfg.face_weights().to_vec(),
            point_weights: cfg.point_weights().to_vec(),
        },
        items,
        aggregate,
    })
}

fn resolved_range(values: Vec<f64>) -> RangeSpec {
    RangeSpec {
        lo: values.first().copied().unwrap_or(0.0),
        hi: values.last().copied().unwrap_or(0.0),
        count: values.len(),
    }
}

fn pyramid_item(
    index: usize,
    k: Scalar,
    outcome: &Result<crate::pyramid::PyramidFamilyMember, PyramidError>,
    n: usize,
) -> ItemReport {
    match outcome {
        Ok(member) => {
            let orders_ok = member.hyperosculation_orders.iter().all(|&o| o == n);
            ItemReport {
                index,
                parameter: k,
                params: member.roots.clone(),
                max_residual: Some(member.max_offdiagonal_residual()),
                symmetry_defect: None,
                hyperosculation_orders: Some(member.hyperosculation_orders.clone()),
                verdict: Some(orders_ok),
                status: if orders_ok {
                    "ok".to_string()
                } else {
                    "failed: contact order deviates".to_string()
                },
            }
        }
        Err(PyramidError::ClosureViolation { max_residual, .. }) => ItemReport {
            index,
            parameter: k,
            params: vec![],
            max_residual: Some(*max_residual),
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: Some(false),
            status: "failed: closure violation".to_string(),
        },
        Err(skip @ PyramidError::ClusteredRoots(_)) => ItemReport {
            index,
            parameter: k,
            params: vec![],
            max_residual: None,
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: None,
            status: format!("skipped: {skip}"),
        },
        Err(other) => ItemReport {
            index,
            parameter: k,
            params: vec![],
            max_residual: None,
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: Some(false),
            status: format!("failed: {other}"),
        },
    }
}

/// Seeded closure run: a random lateral, a random kernel curve, traces from
/// every start. Degenerate starts are skipped, not failed.
pub fn cmd_lateral(rc: &RunConfig) -> Result<ReportDocument, CliError> {
    let tol = rc.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    let lateral = Multilateral::random_real(rc.n, &mut rng);
    let (second_form, _pencil) = seeded_second_form(&lateral, &mut rng, &tol)
        .map_err(|e| CliError::Engine(e.to_string()))?;
    let system = interpolation_system(&lateral, rc.n, &tol)
        .map_err(|e| CliError::Engine(e.to_string()))?;
    let combination = seeded_combination(system.basis().len(), &mut rng);
    let curve = system
        .combine(&combination)
        .map_err(|e| CliError::Engine(e.to_string()))?
        .normalized();
    let starts = rc.start_values();
    let items: Vec<ItemReport> = starts
        .iter()
        .enumerate()
        .map(|(index, &start)| {
            lateral_item(index, re(start), &curve, lateral.params(), &tol)
        })
        .collect();
    let aggregate = Aggregate::from_items(&items);
    let start_range = Some(resolved_range(starts));
    Ok(ReportDocument {
        version: super::report::SCHEMA_VERSION.to_string(),
        config: echo(rc, None, start_range),
        generated: GeneratedData::Lateral {
            real_mode: lateral.is_real(REAL_EPS) && curve.is_real(REAL_EPS),
            params: lateral.params().to_vec(),
            second_form: second_form.coeffs().to_vec(),
            combination,
            curve_degree: curve.degree(),
            curve: curve.coeffs().to_vec(),
            interpolation_dimension: system.projective_dimension(),
        },
        items,
        aggregate,
    })
}

fn lateral_item(
    index: usize,
    start: Scalar,
    curve: &TernaryForm,
    tangency: &[Scalar],
    tol: &Tolerance,
) -> ItemReport {
    // starts on the lateral itself are non-generic by policy
    if let Some(hit) = tangency.iter().find(|&&u| (u - start).norm() <= tol.root_sep_eps) {
        let reason = LateralError::DegenerateRestriction(*hit);
        return ItemReport {
            index,
            parameter: start,
            params: vec![],
            max_residual: None,
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: None,
            status: format!("skipped: {reason}"),
        };
    }
    match closure_trace(curve, start, tol) {
        Ok(report) => ItemReport {
            index,
            parameter: start,
            params: report.params.clone(),
            max_residual: Some(report.max_vertex_residual()),
            symmetry_defect: Some(report.symmetry_defect),
            hyperosculation_orders: None,
            verdict: Some(report.verdict),
            status: if report.verdict {
                "ok".to_string()
            } else {
                "failed: closure violation".to_string()
            },
        },
        Err(
            skip @ (LateralError::DegenerateRestriction(_) | LateralError::ClusteredParams(_)),
        ) => ItemReport {
            index,
            parameter: start,
            params: vec![],
            max_residual: None,
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: None,
            status: format!("skipped: {skip}"),
        },
        Err(other) => ItemReport {
            index,
            parameter: start,
            params: vec![],
            max_residual: None,
            symmetry_defect: None,
            hyperosculation_orders: None,
            verdict: Some(false),
            status: format!("failed: {other}"),
        },
    }
}

/// Seeded SVG plot of a real configuration: the curve from the lateral's
/// pencil (real by construction), the base conic, the seed lateral, and the
/// traced laterals for any requested starts. Every drawn value must be real
/// within 1e-9.
pub fn cmd_plot(rc: &RunConfig) -> Result<String, CliError> {
    let tol = rc.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    let lateral = Multilateral::random_real(rc.n, &mut rng);
    let (_g, pencil) = seeded_second_form(&lateral, &mut rng, &tol)
        .map_err(|e| CliError::Engine(e.to_string()))?;
    let bez = bezoutiant(&pencil).map_err(|e| CliError::Engine(e.to_string()))?;
    let curve = to_plane_curve(&bez, &tol)
        .map_err(|e| CliError::Engine(e.to_string()))?
        .normalized();
    for &c in curve.coeffs() {
        if c.im.abs() > REAL_EPS * 1.0_f64.max(c.norm()) {
            return Err(CliError::NonReal {
                context: "curve coefficient".to_string(),
                value: c,
            });
        }
    }
    let mut laterals: Vec<Vec<f64>> = vec![lateral.params().iter().map(|z| z.re).collect()];
    if let Some(range) = &rc.start_range {
        for start in range.values() {
            match closure_trace(&curve, re(start), &tol) {
                Ok(report) => {
                    let mut real_params = Vec::with_capacity(report.params.len());
                    for z in &report.params {
                        if z.im.abs() > REAL_EPS * 1.0_f64.max(z.norm()) {
                            return Err(CliError::NonReal {
                                context: format!("closure trace from start {start}"),
                                value: *z,
                            });
                        }
                        real_params.push(z.re);
                    }
                    laterals.push(real_params);
                }
                Err(
                    LateralError::DegenerateRestriction(_) | LateralError::ClusteredParams(_),
                ) => continue,
                Err(hard) => return Err(CliError::Engine(hard.to_string())),
            }
        }
    }
    Ok(svg::render_scene(&curve, &laterals))
}

/// Re-verifies an emitted report from its stored generating data alone:
/// roots and traces are recomputed, never trusted, and stored parameter
/// lists must match the recomputation.
pub fn cmd_verify(rc: &RunConfig) -> Result<ReportDocument, CliError> {
    let path = rc
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("verify needs an input report file".to_string()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(e.to_string()))?;
    let stored = ReportDocument::parse_json(&text).map_err(CliError::Schema)?;
    let tol = if rc.tol_explicit { rc.tol } else { stored.config.tol };
    let items = match &stored.generated {
        GeneratedData::Pyramid {
            nodes,
            face_weights,
            point_weights,
            ..
        } => {
            let cfg = CanonicalConfig::new(
                nodes.clone(),
                face_weights.clone(),
                point_weights.clone(),
                &tol,
            )
            .map_err(|e| CliError::Schema(format!("stored configuration invalid: {e}")))?;
            let contact = ContactCurve::new(&cfg, &tol)
                .map_err(|e| CliError::Schema(format!("stored configuration degenerate: {e}")))?;
            stored
                .items
                .iter()
                .map(|item| {
                    let outcome = generate_pyramid_with(&cfg, &contact, item.parameter, &tol);
                    let mut recomputed =
                        pyramid_item(item.index, item.parameter, &outcome, stored.config.n);
                    check_stored_params(item, &mut recomputed, &tol);
                    recomputed
                })
                .collect::<Vec<_>>()
        }
        GeneratedData::Lateral {
            params,
            curve,
            curve_degree,
            ..
        } => {
            let lateral = Multilateral::new(params.clone(), &tol)
                .map_err(|e| CliError::Schema(format!("stored lateral invalid: {e}")))?;
            let curve = TernaryForm::new(*curve_degree, curve.clone())
                .map_err(|e| CliError::Schema(format!("stored curve invalid: {e}")))?;
            stored
                .items
                .iter()
                .map(|item| {
                    let mut recomputed =
                        lateral_item(item.index, item.parameter, &curve, lateral.params(), &tol);
                    check_stored_params(item, &mut recomputed, &tol);
                    recomputed
                })
                .collect::<Vec<_>>()
        }
    };
    let aggregate = Aggregate::from_items(&items);
    let mut config = stored.config.clone();
    config.tol = tol;
    config.format = rc.format.name().to_string();
    Ok(ReportDocument {
        version: stored.version.clone(),
        config,
        generated: stored.generated.clone(),
        items,
        aggregate,
    })
}

/// Marks a recomputed item failed when the stored parameter list does not
/// match the recomputed one (a tampered or stale report).
fn check_stored_params(stored: &ItemReport, recomputed: &mut ItemReport, tol: &Tolerance) {
    if recomputed.verdict.is_none() || stored.verdict.is_none() {
        return;
    }
    let distance = matching_distance(&stored.params, &recomputed.params);
    if distance > tol.root_sep_eps {
        recomputed.verdict = Some(false);
        recomputed.status = format!(
            "failed: stored parameters deviate from recomputation by {distance:e}"
        );
    }
}
