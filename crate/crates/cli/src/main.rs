use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use strebel::certify::{certify_transcendental, Verdict};
use strebel::numerics::{format_rational, parse_rational, PrecisionContext, Rational};
use strebel::pipeline::{run_full, run_q1, write_svg, Report, RunConfig, Scene};
use strebel::trajectory::TraceConfig;

#[derive(Parser)]
#[command(name = "strebel", version, about = "Critical graphs, periods and transcendence certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace and validate the theta graph of q1 only.
    Q1(RunArgs),
    /// The full construction for one value of r.
    Qc {
        /// Rational parameter in (0, 1/2).
        #[arg(long, default_value = "5/11", value_parser = parse_r)]
        r: Rational,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact transcendence certificate for r.
    Certify {
        #[arg(long, value_parser = parse_any_rational)]
        r: Rational,
    },
    /// Draw a graph from a saved report.
    Render {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Which graph to draw; defaults to the pulled-back one when present.
        #[arg(long, value_enum)]
        graph: Option<Which>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Y,
    C,
}

#[derive(Args)]
struct RunArgs {
    /// Working precision in bits.
    #[arg(long, default_value_t = PrecisionContext::DEFAULT_BITS)]
    bits: u32,
    /// Per-step tolerance of the tracer.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    capture_radius: Option<f64>,
    #[arg(long)]
    max_length: Option<f64>,
    #[arg(long)]
    seed_offset: Option<f64>,
    /// Write the SVG figure here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, r: Option<Rational>) -> RunConfig {
        let d = TraceConfig::default();
        RunConfig {
            r: r.unwrap_or_else(|| RunConfig::default().r),
            bits: self.bits,
            trace: TraceConfig {
                step_tolerance: self.tol.unwrap_or(d.step_tolerance),
                capture_radius: self.capture_radius.unwrap_or(d.capture_radius),
                max_length: self.max_length.unwrap_or(d.max_length),
                seed_offset: self.seed_offset.unwrap_or(d.seed_offset),
            },
            report: self.report.clone(),
            svg: self.svg.clone(),
        }
    }
}

fn parse_any_rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_r(s: &str) -> Result<Rational, String> {
    let r = parse_any_rational(s)?;
    RunConfig::with_r(r).map(|c| c.r).map_err(|e| e.to_string())
}

fn emit(json: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run(cfg: RunConfig, full: bool) -> anyhow::Result<ExitCode> {
    let out = if full { run_full(&cfg) } else { run_q1(&cfg) };
    let run = match out {
        Ok(run) => run,
        Err(f) => {
            eprintln!("{f}");
            emit(&serde_json::to_string_pretty(&f.record())?, cfg.report.as_deref())?;
            return Ok(ExitCode::from(2));
        }
    };
    let report = &run.report;
    for v in &report.validations {
        eprintln!(
            "{} {:<40} deviation {} (tolerance {})",
            if v.pass { "pass" } else { "FAIL" },
            v.name,
            v.deviation,
            v.tolerance
        );
    }
    emit(&report.to_json(), cfg.report.as_deref())?;
    if let Some(p) = &cfg.svg {
        let g = run.graph_c.as_ref().unwrap_or(&run.graph_y);
        write_svg(&g.scene(), p).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn certify(r: &Rational) -> ExitCode {
    let c = certify_transcendental(r);
    println!("r = {}", format_rational(r));
    if let Some(a) = &c.a {
        println!("sin(pi l) = {}", format_rational(a));
    }
    if let Some(q) = &c.quadratic {
        println!("primitive quadratic: {q}");
    }
    println!("verdict: {}", c.verdict);
    println!("{}", c.evidence);
    if c.verdict == Verdict::Transcendental {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn render(from: &Path, svg: &Path, which: Option<Which>) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(from).with_context(|| format!("reading {}", from.display()))?;
    let report: Report = serde_json::from_str(&text).context("not a report")?;
    let g = match (which, &report.graph_c) {
        (Some(Which::Y), _) | (None, None) => &report.graph_y,
        (_, Some(g)) => g,
        (Some(Which::C), None) => bail!("the report has no pulled-back graph"),
    };
    write_svg(&Scene::from_report(g), svg)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Q1(a) => run(a.config(None), false),
        Command::Qc { r, run: a } => run(a.config(Some(r)), true),
        Command::Certify { r } => Ok(certify(&r)),
        Command::Render { from, svg, graph } => render(&from, &svg, graph),
    };
    out.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
