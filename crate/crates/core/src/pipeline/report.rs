//! JSON report schema. Ball-valued numbers are decimal strings with an
//! explicit radius that also covers the decimal truncation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numerics::{ComplexBall, Mag, RealBall, SpherePoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub mid: String,
    pub radius: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: String,
    pub im: String,
    pub radius: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Finite(Complex),
    Infinity(String),
}

fn truncation(x: f64, digits: usize) -> Mag {
    Mag::from_f64_up(x.abs() * 10f64.powi(1 - digits as i32))
}

impl Ball {
    pub fn new(b: &RealBall, digits: usize) -> Ball {
        let rad = b.rad().add_up(truncation(b.mid_f64(), digits));
        Ball {
            mid: b.to_decimal(digits),
            radius: rad.to_sci_string(),
        }
    }

    pub fn value(&self) -> f64 {
        self.mid.parse().unwrap_or(f64::NAN)
    }

    pub fn radius(&self) -> f64 {
        self.radius.parse().unwrap_or(f64::INFINITY)
    }
}

impl Complex {
    pub fn new(z: &ComplexBall, digits: usize) -> Complex {
        let m = z.mid_c64();
        let rad = z
            .rad()
            .add_up(truncation(m.re, digits))
            .add_up(truncation(m.im, digits));
        let (re, im) = z.to_decimal_parts(digits);
        Complex {
            re,
            im,
            radius: rad.to_sci_string(),
        }
    }

    pub fn value(&self) -> [f64; 2] {
        [
            self.re.parse().unwrap_or(f64::NAN),
            self.im.parse().unwrap_or(f64::NAN),
        ]
    }
}

impl Point {
    pub fn new(p: &SpherePoint, digits: usize) -> Point {
        match p {
            SpherePoint::Finite(z) => Point::Finite(Complex::new(z, digits)),
            SpherePoint::Infinity => Point::Infinity("infinity".into()),
        }
    }

    pub fn finite(&self) -> Option<[f64; 2]> {
        match self {
            Point::Finite(c) => Some(c.value()),
            Point::Infinity(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Inputs {
    pub r: Option<String>,
    pub mantissa_bits: u32,
    pub step_tolerance: String,
    pub capture_radius: String,
    pub max_length: String,
    pub seed_offset: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Qc {
    pub s: Ball,
    pub w: Complex,
    pub c: Complex,
    /// The other root of the equation for `c`; recorded only.
    pub c_conjugate_root: Complex,
    pub c_squared: Complex,
    pub minus_c: Complex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: Point,
    pub order: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Pole {
    pub point: Point,
    pub order: i64,
    pub residue: Ball,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Zero {
    pub point: Complex,
    pub order: usize,
    pub directions: Vec<Ball>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Edge {
    /// `[zero, direction]` at each end.
    pub ends: [[usize; 2]; 2],
    pub period: Ball,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Circuit {
    pub half_edges: Vec<usize>,
    pub length: Ball,
    pub residue_index: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub origin: usize,
    pub direction: usize,
    pub terminal: [usize; 2],
    pub q_length: Ball,
    /// Uncertified path geometry.
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Graph {
    pub differential: String,
    pub vertices: usize,
    pub edges: usize,
    pub valence_histogram: BTreeMap<String, usize>,
    pub genus: usize,
    pub boundary_count: usize,
    pub divisor_degree: i64,
    pub divisor: Vec<DivisorEntry>,
    pub zeros: Vec<Zero>,
    pub poles: Vec<Pole>,
    pub edge_list: Vec<Edge>,
    pub boundary_circuits: Vec<Circuit>,
    pub total_length: Ball,
    pub traces: Vec<Trace>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeL {
    pub ends: [[usize; 2]; 2],
    pub period: Ball,
    /// `"1/2 - l"` or `"1/2 + l"`, whichever is nearer.
    pub nearest: String,
    pub deviation: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Periods {
    pub q1_edges: Vec<Ball>,
    pub q1_vertical_segment: Option<Ball>,
    pub ell_closed_form: Option<Ball>,
    pub ell_quadrature: Option<Ball>,
    pub edge_l: Vec<EdgeL>,
    pub total_length_c: Option<Ball>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub r: Option<String>,
    pub a: Option<String>,
    pub verdict: String,
    pub quadratic: Option<[String; 3]>,
    pub evidence: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Validation {
    pub name: String,
    pub pass: bool,
    pub deviation: String,
    pub tolerance: String,
    pub detail: String,
}

impl Validation {
    pub fn measured(name: &str, deviation: f64, tolerance: f64, detail: impl Into<String>) -> Validation {
        Validation {
            name: name.into(),
            pass: deviation <= tolerance,
            deviation: format!("{deviation:.3e}"),
            tolerance: format!("{tolerance:.0e}"),
            detail: detail.into(),
        }
    }

    pub fn exact(name: &str, ok: bool, detail: impl Into<String>) -> Validation {
        Validation {
            name: name.into(),
            pass: ok,
            deviation: if ok { "0" } else { "1" }.into(),
            tolerance: "0".into(),
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub inputs: Inputs,
    pub qc: Option<Qc>,
    pub graph_y: Graph,
    pub graph_c: Option<Graph>,
    pub periods: Periods,
    pub certificate: Option<CertificateJson>,
    pub validations: Vec<Validation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.validations.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Validation> {
        self.validations.iter().filter(|v| !v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Written instead of a report when a stage aborts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureRecord {
    pub stage: String,
    pub error: String,
    pub precision_related: bool,
}
