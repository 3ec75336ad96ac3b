//! End-to-end run: both differentials, their critical graphs, the periods
//! at `-c`, and the certificate, collected into one [`Report`].

mod report;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

pub use report::{
    Ball, CertificateJson, Circuit, Complex, DivisorEntry, Edge, EdgeL, FailureRecord, Graph, Inputs, Periods,
    Point, Pole, Qc, Report, Trace, Validation, Zero,
};
pub use svg::{render_svg, write_svg, Scene};

use crate::certify::{certify_transcendental, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{
    format_rational, rational, ComplexBall, PrecisionContext, Rational, RealBall, SpherePoint,
};
use crate::qdiff::{
    build_q1, build_qc, map_f, map_g, residue_sqrt, solve_c_pair, QuadraticDifferential, SParameter,
};
use crate::ribbon::{
    assemble_graph, boundary_circuits, euler_genus, match_lengths, BoundaryCircuit, ResidueValidation, RibbonGraph,
};
use crate::trajectory::{
    ell_closed_form, membership_check, segment_period_with, EdgeMeasure, RuleCache, Separatrix, TraceConfig, Tracer,
};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub r: Rational,
    pub bits: u32,
    pub trace: TraceConfig,
    pub report: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: rational(5, 11),
            bits: PrecisionContext::DEFAULT_BITS,
            trace: TraceConfig::default(),
            report: None,
            svg: None,
        }
    }
}

impl RunConfig {
    /// Rejects `r` outside `(0, 1/2)`.
    pub fn with_r(r: Rational) -> Result<RunConfig> {
        if !(r > rational(0, 1) && r < rational(1, 2)) {
            return Err(Error::Range(format!("r = {} is not in (0, 1/2)", format_rational(&r))));
        }
        Ok(RunConfig { r, ..RunConfig::default() })
    }
}

/// A stage aborted.
#[derive(Debug)]
pub struct PipelineFailure {
    pub stage: &'static str,
    pub error: Error,
}

impl fmt::Display for PipelineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for PipelineFailure {}

impl PipelineFailure {
    pub fn record(&self) -> FailureRecord {
        FailureRecord {
            stage: self.stage.into(),
            error: self.error.to_string(),
            precision_related: self.error.is_precision_related(),
        }
    }
}

fn at(stage: &'static str) -> impl Fn(Error) -> PipelineFailure {
    move |error| PipelineFailure { stage, error }
}

/// The critical graph of one differential with everything measured on it.
pub struct CriticalGraph {
    pub label: String,
    pub tracer: Tracer,
    pub separatrices: Vec<Separatrix>,
    pub graph: RibbonGraph,
    pub edges: Vec<EdgeMeasure>,
    pub circuits: Vec<BoundaryCircuit>,
    pub genus: usize,
    /// Point, order and residue of `sqrt(q)`.
    pub poles: Vec<(SpherePoint, i64, RealBall)>,
    pub residue_match: ResidueValidation,
}

/// Tolerance for the boundary/residue matching.
pub const RESIDUE_TOL: f64 = 1e-10;

pub fn critical_graph(
    q: &QuadraticDifferential,
    cfg: &TraceConfig,
    rules: Arc<RuleCache>,
    ctx: PrecisionContext,
) -> Result<CriticalGraph> {
    let tracer = Tracer::with_rules(q, rules, ctx)?;
    let separatrices = tracer.trace_all(cfg).into_iter().collect::<Result<Vec<_>>>()?;
    let (graph, edges) = assemble_graph(&separatrices, tracer.zeros())?;
    let (genus, _) = euler_genus(&graph)?;
    let circuits = boundary_circuits(&graph, ctx);
    let poles = tracer
        .divisor()
        .poles()
        .map(|p| Ok((p.point.clone(), p.order, residue_sqrt(q, &p.point, ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    let lengths: Vec<RealBall> = circuits.iter().map(|c| c.length.clone()).collect();
    let residues: Vec<RealBall> = poles.iter().map(|p| p.2.clone()).collect();
    let residue_match = match_lengths(&lengths, &residues, RESIDUE_TOL);
    Ok(CriticalGraph {
        label: q.label.clone(),
        tracer,
        separatrices,
        graph,
        edges,
        circuits,
        genus,
        poles,
        residue_match,
    })
}

impl CriticalGraph {
    pub fn total_length(&self, ctx: PrecisionContext) -> RealBall {
        self.graph.total_length(ctx)
    }

    pub fn residue_sum(&self, ctx: PrecisionContext) -> RealBall {
        self.poles.iter().fold(RealBall::zero(), |a, p| a.add(&p.2, ctx))
    }

    /// Every traced path point.
    pub fn path_points(&self) -> Vec<ComplexBall> {
        self.separatrices
            .iter()
            .flat_map(|s| s.path.iter().map(|&z| ComplexBall::from_c64(z)))
            .collect()
    }

    pub fn scene(&self) -> Scene {
        let poles: Vec<SpherePoint> = self.poles.iter().map(|p| p.0.clone()).collect();
        Scene::new(&self.graph, &self.separatrices, &poles)
    }

    /// Index of the zero whose ball overlaps `p`.
    pub fn zero_at(&self, p: &ComplexBall) -> Option<usize> {
        self.tracer.zeros().iter().position(|z| z.point.overlaps(p))
    }

    /// Edges with an end at zero `v`, listed by direction index there.
    pub fn edges_at(&self, v: usize) -> Vec<&EdgeMeasure> {
        let k = self.tracer.zeros()[v].order + 2;
        (0..k)
            .filter_map(|j| self.edges.iter().find(|e| e.ends.contains(&(v, j))))
            .collect()
    }

    fn to_report(&self, digits: usize) -> Graph {
        let tol = RESIDUE_TOL;
        let residues: Vec<f64> = self.poles.iter().map(|p| p.2.mid_f64()).collect();
        let isolated = |r: usize| {
            residues
                .iter()
                .enumerate()
                .all(|(i, x)| i == r || (x - residues[r]).abs() > tol)
        };
        Graph {
            differential: self.label.clone(),
            vertices: self.graph.n_vertices(),
            edges: self.graph.n_edges(),
            valence_histogram: self
                .graph
                .valence_histogram()
                .into_iter()
                .map(|(k, n)| (k.to_string(), n))
                .collect(),
            genus: self.genus,
            boundary_count: self.circuits.len(),
            divisor_degree: self.tracer.divisor().degree(),
            divisor: self
                .tracer
                .divisor()
                .entries
                .iter()
                .map(|e| DivisorEntry {
                    point: Point::new(&e.point, digits),
                    order: e.order,
                })
                .collect(),
            zeros: self
                .tracer
                .zeros()
                .iter()
                .map(|z| Zero {
                    point: Complex::new(&z.point, digits),
                    order: z.order,
                    directions: z.directions.iter().map(|d| Ball::new(d, digits)).collect(),
                })
                .collect(),
            poles: self
                .poles
                .iter()
                .map(|(p, o, r)| Pole {
                    point: Point::new(p, digits),
                    order: *o,
                    residue: Ball::new(r, digits),
                })
                .collect(),
            edge_list: self
                .edges
                .iter()
                .map(|e| Edge {
                    ends: e.ends.map(|(v, j)| [v, j]),
                    period: Ball::new(&e.period, digits),
                })
                .collect(),
            boundary_circuits: self
                .circuits
                .iter()
                .enumerate()
                .map(|(i, c)| Circuit {
                    half_edges: c.half_edges.clone(),
                    length: Ball::new(&c.length, digits),
                    residue_index: self
                        .residue_match
                        .pairs
                        .iter()
                        .find(|p| p.0 == i && isolated(p.1))
                        .map(|p| p.1),
                })
                .collect(),
            total_length: Ball::new(&self.graph.total_length(PrecisionContext::default()), digits),
            traces: self
                .separatrices
                .iter()
                .map(|s| Trace {
                    origin: s.origin,
                    direction: s.direction,
                    terminal: [s.terminal.0, s.terminal.1],
                    q_length: Ball::new(&s.q_length, digits),
                    points: s.path.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }
}

/// Full results of a run, for callers that need more than the report.
pub struct Run {
    pub report: Report,
    pub graph_y: CriticalGraph,
    pub graph_c: Option<CriticalGraph>,
    pub c: Option<ComplexBall>,
    pub ell: Option<RealBall>,
}

/// `|b - t|` including radii.
fn dev(b: &RealBall, t: &RealBall, ctx: PrecisionContext) -> f64 {
    b.sub(t, ctx).abs_upper().to_f64()
}

fn digits(ctx: PrecisionContext) -> usize {
    ((ctx.bits() as f64 * std::f64::consts::LOG10_2) as usize).min(160)
}

fn graph_checks(
    name: &str,
    g: &CriticalGraph,
    hist: &[(usize, usize)],
    edges: usize,
    ctx: PrecisionContext,
    out: &mut Vec<Validation>,
) {
    let h = g.graph.valence_histogram();
    let ok = h.iter().map(|(a, b)| (*a, *b)).eq(hist.iter().copied())
        && g.graph.n_edges() == edges
        && g.circuits.len() == g.poles.len()
        && g.genus == 0;
    out.push(Validation::exact(
        &format!("{name}_combinatorics"),
        ok,
        format!(
            "v = {}, e = {}, valences {:?}, boundaries = {}, genus = {}",
            g.graph.n_vertices(),
            g.graph.n_edges(),
            h,
            g.circuits.len(),
            g.genus
        ),
    ));
    let m = &g.residue_match;
    out.push(Validation::measured(
        &format!("{name}_boundary_lengths_vs_residues"),
        m.worst,
        RESIDUE_TOL,
        if m.ambiguous {
            "multiset comparison (residues collide)"
        } else {
            "per-pole pairing"
        },
    ));
    let edges2 = g.total_length(ctx).mul_2exp(1);
    let circ = g.circuits.iter().fold(RealBall::zero(), |a, c| a.add(&c.length, ctx));
    let d = dev(&circ, &edges2, ctx).max(dev(&edges2, &g.residue_sum(ctx), ctx));
    out.push(Validation::measured(
        &format!("{name}_boundary_identity"),
        d,
        RESIDUE_TOL,
        "sum of circuits = 2 x sum of edges = sum of residues",
    ));
    let speed = g
        .separatrices
        .iter()
        .map(|s| s.unit_speed_residual.max((s.traced_length - s.q_length.mid_f64()).abs()))
        .fold(0.0, f64::max);
    out.push(Validation::measured(
        &format!("{name}_unit_speed"),
        speed,
        RESIDUE_TOL,
        "flow time vs accumulated length along every trace",
    ));
}

pub fn run_q1(cfg: &RunConfig) -> std::result::Result<Run, PipelineFailure> {
    run(cfg, false)
}

pub fn run_full(cfg: &RunConfig) -> std::result::Result<Run, PipelineFailure> {
    run(cfg, true)
}

/// The full construction at `cfg.r`.
pub fn run_pipeline(cfg: &RunConfig) -> std::result::Result<Report, PipelineFailure> {
    run_full(cfg).map(|r| r.report)
}

fn run(cfg: &RunConfig, full: bool) -> std::result::Result<Run, PipelineFailure> {
    cfg.trace.validate().map_err(at("config"))?;
    let ctx = PrecisionContext::new(cfg.bits).map_err(at("config"))?;
    let nd = digits(ctx);
    let rules = Arc::new(RuleCache::new());
    let mut v = Vec::new();
    let one = RealBall::one();
    let two = RealBall::from_i64(2);

    let q1 = build_q1(ctx).map_err(at("build_q1"))?;
    let gy = critical_graph(&q1, &cfg.trace, rules.clone(), ctx).map_err(at("graph_y"))?;

    let half = RealBall::from_rational(&rational(1, 2), ctx);
    let h = RealBall::from_i64(3).sqrt(ctx).map_err(at("build_q1"))?.mul_2exp(-1);
    let expected_zeros = [
        ComplexBall::from_parts(&half, &h),
        ComplexBall::from_parts(&half, &h.neg()),
    ];
    let d = gy.tracer.divisor();
    let poles_ok = [SpherePoint::from_i64(0), SpherePoint::from_i64(1), SpherePoint::Infinity]
        .iter()
        .all(|p| d.order_at(p) == -2);
    let zeros_ok = expected_zeros.iter().all(|z| d.order_at(&SpherePoint::Finite(z.clone())) == 1);
    v.push(Validation::exact(
        "q1_divisor",
        poles_ok && zeros_ok && d.entries.len() == 5 && d.degree() == -4,
        "double poles at 0, 1, infinity; simple zeros at (1 +- i sqrt 3)/2",
    ));
    let worst = gy.poles.iter().map(|p| dev(&p.2, &two, ctx)).fold(0.0, f64::max);
    v.push(Validation::measured("q1_residues", worst, 1e-20, "every residue of sqrt(q1) is 2"));
    let worst = gy.edges.iter().map(|e| dev(&e.period, &one, ctx)).fold(0.0, f64::max);
    v.push(Validation::measured(
        "q1_periods",
        if gy.edges.len() == 3 { worst } else { f64::INFINITY },
        1e-12,
        "three traced edge periods equal 1",
    ));
    let z = gy.tracer.zeros();
    let seg = segment_period_with(&gy.tracer, &z[0].point, &z[1].point).map_err(at("periods"))?;
    let vertical: Vec<&EdgeMeasure> = gy
        .edges
        .iter()
        .filter(|e| {
            gy.separatrices
                .iter()
                .find(|s| (s.origin, s.direction) == e.ends[0])
                .is_some_and(|s| s.path.iter().all(|p| (p.re - 0.5).abs() < 1e-6))
        })
        .collect();
    let seg_dev = vertical
        .iter()
        .map(|e| dev(&e.period, &seg, ctx))
        .fold(dev(&seg, &one, ctx), f64::max);
    v.push(Validation::measured(
        "q1_vertical_segment",
        if vertical.len() == 1 { seg_dev } else { f64::INFINITY },
        1e-12,
        "straight-segment quadrature of the vertical edge vs 1 and vs the traced period",
    ));
    graph_checks("graph_y", &gy, &[(3, 2)], 3, ctx, &mut v);
    let m = membership_check(&gy.path_points(), &[map_g()], RESIDUE_TOL, ctx);
    v.push(Validation::measured("graph_y_membership", m.worst, RESIDUE_TOL, "g maps every traced point into [0, 1]"));

    let mut periods = Periods {
        q1_edges: gy.edges.iter().map(|e| Ball::new(&e.period, nd)).collect(),
        q1_vertical_segment: Some(Ball::new(&seg, nd)),
        ..Periods::default()
    };
    let inputs = Inputs {
        r: full.then(|| format_rational(&cfg.r)),
        mantissa_bits: ctx.bits(),
        step_tolerance: format!("{:e}", cfg.trace.step_tolerance),
        capture_radius: format!("{:e}", cfg.trace.capture_radius),
        max_length: format!("{:e}", cfg.trace.max_length),
        seed_offset: format!("{:e}", cfg.trace.seed_offset),
    };

    if !full {
        let report = Report {
            inputs,
            qc: None,
            graph_y: gy.to_report(nd),
            graph_c: None,
            periods,
            certificate: None,
            validations: v,
        };
        return Ok(Run {
            report,
            graph_y: gy,
            graph_c: None,
            c: None,
            ell: None,
        });
    }

    let sp = SParameter::new(cfg.r.clone(), ctx).map_err(at("solve_c"))?;
    let (_, conj) = solve_c_pair(&sp, ctx).map_err(at("solve_c"))?;
    let (qc, c) = build_qc(&sp, ctx).map_err(at("build_qc"))?;
    let c2 = c.sqr(ctx);
    let ell = ell_closed_form(&cfg.r, ctx).map_err(at("periods"))?;
    let ell_q = segment_period_with(&gy.tracer, &ComplexBall::from_real(&half), sp.w()).map_err(at("periods"))?;
    v.push(Validation::measured(
        "ell_closed_form_vs_quadrature",
        dev(&ell_q, &ell, ctx),
        1e-15,
        "segment [1/2, 1/2 + i r sqrt 3] against arcsin(a)/pi",
    ));

    let gc = critical_graph(&qc, &cfg.trace, rules, ctx).map_err(at("graph_c"))?;
    let d = gc.tracer.divisor();
    let expected = [
        (SpherePoint::from_i64(0), 2),
        (SpherePoint::from_i64(1), 2),
        (SpherePoint::Infinity, 2),
        (SpherePoint::Finite(c.clone()), 4),
        (SpherePoint::Finite(c2.clone()), 2),
    ];
    let poles_ok = expected.iter().all(|(p, _)| d.order_at(p) == -2) && d.poles().count() == 5;
    let zeros_ok = d.order_at(&SpherePoint::Finite(c.neg())) == 2 && d.zeros().filter(|z| z.order == 1).count() == 4;
    v.push(Validation::exact(
        "qc_divisor",
        poles_ok && zeros_ok && d.degree() == -4,
        format!("degree {}; double poles at 0, 1, infinity, c, c^2; double zero at -c", d.degree()),
    ));
    let mut worst: f64 = 0.0;
    for (p, want) in &expected {
        let got = gc.poles.iter().find(|q| q.0.overlaps(p)).map(|q| q.2.clone());
        worst = worst.max(got.map_or(f64::INFINITY, |r| dev(&r, &RealBall::from_i64(*want), ctx)));
    }
    v.push(Validation::measured("qc_residues", worst, 1e-12, "residues 2, 2, 2, 4, 2 at 0, 1, infinity, c, c^2"));
    graph_checks("graph_c", &gc, &[(3, 4), (4, 1)], 8, ctx, &mut v);
    v.push(Validation::measured(
        "graph_c_total_length",
        dev(&gc.total_length(ctx), &RealBall::from_i64(6), ctx),
        RESIDUE_TOL,
        "sum of edge periods is 6",
    ));
    let sum_y = gy.residue_sum(ctx);
    let sum_c = gc.residue_sum(ctx);
    v.push(Validation::measured(
        "residue_sum_doubling",
        dev(&sum_c, &RealBall::from_i64(12), ctx).max(dev(&sum_c, &sum_y.mul_2exp(1), ctx)),
        1e-12,
        "sum of residues is 12 for qc and twice that of q1",
    ));
    let f = map_f(&c, ctx).map_err(at("graph_c"))?;
    let m = membership_check(&gc.path_points(), &[f, map_g()], RESIDUE_TOL, ctx);
    v.push(Validation::measured(
        "graph_c_membership",
        m.worst,
        RESIDUE_TOL,
        "g(f(.)) maps every traced point into [0, 1]",
    ));

    let minus = RealBall::from_rational(&rational(1, 2), ctx).sub(&ell, ctx);
    let plus = RealBall::from_rational(&rational(1, 2), ctx).add(&ell, ctx);
    let mut edge_l = Vec::new();
    let mut l_dev = f64::INFINITY;
    if let Some(vc) = gc.zero_at(&c.neg()) {
        let at_c = gc.edges_at(vc);
        let signs: Vec<bool> = at_c
            .iter()
            .map(|e| dev(&e.period, &plus, ctx) < dev(&e.period, &minus, ctx))
            .collect();
        for e in &at_c {
            let (dm, dp) = (dev(&e.period, &minus, ctx), dev(&e.period, &plus, ctx));
            edge_l.push(EdgeL {
                ends: e.ends.map(|(a, b)| [a, b]),
                period: Ball::new(&e.period, nd),
                nearest: if dp < dm { "1/2 + l" } else { "1/2 - l" }.into(),
                deviation: format!("{:.3e}", dm.min(dp)),
            });
        }
        // neighbouring directions at -c lift the two halves of the vertical edge
        let alternating = signs.len() == 4 && (0..4).all(|j| signs[j] != signs[(j + 1) % 4]);
        if alternating {
            l_dev = at_c
                .iter()
                .map(|e| dev(&e.period, &minus, ctx).min(dev(&e.period, &plus, ctx)))
                .fold(0.0, f64::max);
        }
    }
    v.push(Validation::measured(
        "edge_l_periods",
        l_dev,
        RESIDUE_TOL,
        "edges at -c alternate between 1/2 - l and 1/2 + l",
    ));

    let cert = certify_transcendental(&cfg.r);
    v.push(Validation::exact(
        "certificate",
        cert.verdict == Verdict::Transcendental,
        format!("verdict {}", cert.verdict),
    ));

    periods.ell_closed_form = Some(Ball::new(&ell, nd));
    periods.ell_quadrature = Some(Ball::new(&ell_q, nd));
    periods.edge_l = edge_l;
    periods.total_length_c = Some(Ball::new(&gc.total_length(ctx), nd));
    periods.note = Some("1/2 +- l differs from l by a rational, so it is transcendental exactly when l is".into());

    let report = Report {
        inputs,
        qc: Some(Qc {
            s: Ball::new(sp.s(), nd),
            w: Complex::new(sp.w(), nd),
            c: Complex::new(&c, nd),
            c_conjugate_root: Complex::new(&conj, nd),
            c_squared: Complex::new(&c2, nd),
            minus_c: Complex::new(&c.neg(), nd),
        }),
        graph_y: gy.to_report(nd),
        graph_c: Some(gc.to_report(nd)),
        periods,
        certificate: Some(CertificateJson {
            r: cert.r.as_ref().map(format_rational),
            a: cert.a.as_ref().map(format_rational),
            verdict: cert.verdict.to_string(),
            quadratic: cert
                .quadratic
                .as_ref()
                .map(|q| [q.a.to_string(), q.b.to_string(), q.c.to_string()]),
            evidence: cert.evidence.clone(),
        }),
        validations: v,
    };
    Ok(Run {
        report,
        graph_y: gy,
        graph_c: Some(gc),
        c: Some(c),
        ell: Some(ell),
    })
}
