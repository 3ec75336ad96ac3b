use std::sync::Arc;

use strebel::numerics::{rational, PrecisionContext};
use strebel::pipeline::{critical_graph, render_svg, run_pipeline, write_svg, Report, RunConfig, Scene};
use strebel::qdiff::build_q1;
use strebel::ribbon::{assemble_graph, boundary_circuits, euler_genus};
use strebel::trajectory::{RuleCache, TraceConfig, Tracer};
use strebel::Error;

#[test]
fn theta_graph_from_q1() {
    let ctx = PrecisionContext::default();
    let q1 = build_q1(ctx).unwrap();
    let tr = Tracer::new(&q1, ctx).unwrap();
    let seps: Vec<_> = tr.trace_all(&TraceConfig::default()).into_iter().map(Result::unwrap).collect();
    assert_eq!(seps.len(), 6);
    // each separatrix ends at the other zero
    assert!(seps.iter().all(|s| s.terminal.0 != s.origin));
    let (g, edges) = assemble_graph(&seps, tr.zeros()).unwrap();
    assert_eq!((g.n_vertices(), g.n_edges(), edges.len()), (2, 3, 3));
    assert_eq!(euler_genus(&g).unwrap(), (0, 3));
    let circuits = boundary_circuits(&g, ctx);
    let mut used: Vec<usize> = circuits.iter().flat_map(|c| c.half_edges.clone()).collect();
    used.sort();
    assert_eq!(used, (0..6).collect::<Vec<_>>());
}

#[test]
fn missing_separatrix_is_reported() {
    let ctx = PrecisionContext::default();
    let q1 = build_q1(ctx).unwrap();
    let tr = Tracer::new(&q1, ctx).unwrap();
    let mut seps: Vec<_> = tr.trace_all(&TraceConfig::default()).into_iter().map(Result::unwrap).collect();
    seps.pop();
    assert!(matches!(assemble_graph(&seps, tr.zeros()), Err(Error::UnmatchedHalfEdge(_))));
}

#[test]
fn tampered_length_is_a_mismatch() {
    let ctx = PrecisionContext::default();
    let q1 = build_q1(ctx).unwrap();
    let tr = Tracer::new(&q1, ctx).unwrap();
    let mut seps: Vec<_> = tr.trace_all(&TraceConfig::default()).into_iter().map(Result::unwrap).collect();
    seps[0].q_length = strebel::numerics::RealBall::from_f64(1.001);
    assert!(matches!(assemble_graph(&seps, tr.zeros()), Err(Error::LengthMismatch(_))));
}

#[test]
fn quarter_run_matches_closed_form() {
    let cfg = RunConfig::with_r(rational(1, 4)).unwrap();
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    let l = report.periods.ell_quadrature.as_ref().unwrap().value();
    assert!((l - (13.0f64 / 14.0).asin() / std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(report.certificate.unwrap().a.as_deref(), Some("13/14"));
}

#[test]
fn reports_and_figures_are_deterministic() {
    let cfg = RunConfig::default();
    let a = run_pipeline(&cfg).unwrap();
    let b = run_pipeline(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let parsed: Report = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(parsed.to_json(), a.to_json());
    let sa = render_svg(&Scene::from_report(a.graph_c.as_ref().unwrap()));
    let sb = render_svg(&Scene::from_report(parsed.graph_c.as_ref().unwrap()));
    assert_eq!(sa, sb);
}

#[test]
fn figure_of_q1_marks_both_zeros() {
    let ctx = PrecisionContext::default();
    let q1 = build_q1(ctx).unwrap();
    let g = critical_graph(&q1, &TraceConfig::default(), Arc::new(RuleCache::new()), ctx).unwrap();
    let scene = g.scene();
    assert_eq!(scene.zeros.len(), 2);
    for (p, k) in &scene.zeros {
        assert_eq!(*k, 1);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1].abs() - 0.75f64.sqrt()).abs() < 1e-12);
    }
    // the pole at infinity is not drawn
    assert_eq!(scene.poles.len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.svg");
    write_svg(&scene, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches("<polyline").count(), 6);
    assert_eq!(text, render_svg(&scene));
}
