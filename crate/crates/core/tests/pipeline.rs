use strebel::numerics::rational;
use strebel::pipeline::{run_pipeline, run_q1, RunConfig};

#[test]
fn default_run_passes_every_validation() {
    let report = run_pipeline(&RunConfig::default()).unwrap();
    for v in &report.validations {
        println!("{:40} {} {} (tol {})", v.name, v.pass, v.deviation, v.tolerance);
    }
    assert!(report.passed());
    let gc = report.graph_c.as_ref().unwrap();
    assert_eq!((gc.vertices, gc.edges, gc.genus, gc.boundary_count), (5, 8, 0, 5));
    assert_eq!(report.certificate.as_ref().unwrap().verdict, "TRANSCENDENTAL");
}

#[test]
fn q1_only_run() {
    let report = run_q1(&RunConfig::default()).unwrap();
    assert!(report.report.passed());
    assert!(report.report.graph_c.is_none());
    assert_eq!(report.report.graph_y.edges, 3);
}

#[test]
fn out_of_range_r_is_rejected() {
    assert!(RunConfig::with_r(rational(3, 4)).is_err());
    assert!(RunConfig::with_r(rational(1, 2)).is_err());
    assert!(RunConfig::with_r(rational(1, 4)).is_ok());
}
