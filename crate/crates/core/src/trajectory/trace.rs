//! Double-precision tracing of separatrices in the natural parameter
//! `Z = int sqrt(phi) dz`, followed by certified measurement of the traced
//! edge.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::directions_from_leading;
use super::quad::{gauss_f64, nearest_sqrt, Chord, Integrand, Mode, RuleCache};
use crate::error::{Error, Result};
use crate::numerics::{ComplexBall, PrecisionContext, RealBall, SpherePoint};
use crate::qdiff::{divisor, Divisor, QuadraticDifferential};

const POLE_FENCE: f64 = 1e-6;
const PHI_FENCE: f64 = 1e12;
const FAR_FENCE: f64 = 1e4;
const MAX_STEPS: usize = 200_000;
const DIRECTION_SLACK: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceConfig {
    /// Relative residual accepted by the corrector in each step.
    pub step_tolerance: f64,
    /// Stop once the remaining `|q|`-distance to a zero is below this.
    pub capture_radius: f64,
    pub max_length: f64,
    /// Euclidean distance from the zero at which tracing starts.
    pub seed_offset: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            step_tolerance: 1e-12,
            capture_radius: 1e-10,
            max_length: 100.0,
            seed_offset: 1e-8,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.step_tolerance, self.capture_radius, self.max_length, self.seed_offset];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::Invalid(format!("trace settings must be positive: {self:?}")))
        }
    }
}

/// A traced critical trajectory from one zero to another.
#[derive(Clone, Debug)]
pub struct Separatrix {
    pub origin: usize,
    pub direction: usize,
    /// Polyline from the origin zero to the terminal zero (both included).
    pub path: Vec<Complex64>,
    /// `sqrt(phi)` at each path point on the branch of increasing `Z`;
    /// zero at the two end points.
    pub branches: Vec<Complex64>,
    /// `(zero, direction)` slot consumed at the far end.
    pub terminal: (usize, usize),
    /// Certified length in the metric `|phi|^(1/2) |dz|`.
    pub q_length: RealBall,
    /// Length accumulated by the tracer itself.
    pub traced_length: f64,
    /// Accumulated mismatch between the steps in `Z` and the quadrature of
    /// the accepted steps.
    pub unit_speed_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ZeroInfo {
    pub point: ComplexBall,
    pub order: usize,
    /// `c_k` in `phi(z) ~ c_k (z - p)^k`.
    pub leading: ComplexBall,
    pub directions: Vec<RealBall>,
}

struct RawPath {
    path: Vec<Complex64>,
    branches: Vec<Complex64>,
    terminal: (usize, usize),
    length: f64,
    residual: f64,
}

/// A differential prepared for tracing: zeros, poles, local data and
/// quadrature rules.
pub struct Tracer {
    integrand: Integrand,
    zeros: Vec<ZeroInfo>,
    divisor: Divisor,
    dirs: Vec<Vec<f64>>,
    leading: Vec<Complex64>,
    gl8: (Vec<f64>, Vec<f64>),
    gl16: (Vec<f64>, Vec<f64>),
    ctx: PrecisionContext,
}

impl Tracer {
    pub fn new(q: &QuadraticDifferential, ctx: PrecisionContext) -> Result<Tracer> {
        Tracer::with_rules(q, Arc::new(RuleCache::new()), ctx)
    }

    pub fn with_rules(q: &QuadraticDifferential, rules: Arc<RuleCache>, ctx: PrecisionContext) -> Result<Tracer> {
        let divisor = divisor(q, ctx)?;
        let mut zeros = Vec::new();
        for e in divisor.zeros() {
            match &e.point {
                SpherePoint::Finite(z) => zeros.push((z.clone(), e.order as usize)),
                SpherePoint::Infinity => {
                    return Err(Error::Invalid("zero at infinity is not supported".into()))
                }
            }
        }
        let poles: Vec<ComplexBall> = divisor.poles().filter_map(|e| e.point.finite().cloned()).collect();
        let integrand = Integrand::new(&q.phi, &zeros, &poles, rules, ctx)?;
        let mut infos = Vec::with_capacity(zeros.len());
        let mut dirs = Vec::new();
        let mut leading = Vec::new();
        for (i, (z, k)) in zeros.iter().enumerate() {
            let lz = &integrand.zeros[i];
            let ck = q
                .phi
                .scale()
                .mul(&lz.psi_num.eval(z, ctx).div(&q.phi.denominator().eval(z, ctx), ctx)?, ctx);
            let d = directions_from_leading(&ck, *k, ctx)?;
            dirs.push(d.iter().map(|t| t.mid_f64()).collect());
            leading.push(ck.mid_c64());
            infos.push(ZeroInfo {
                point: z.clone(),
                order: *k,
                leading: ck,
                directions: d,
            });
        }
        Ok(Tracer {
            integrand,
            zeros: infos,
            divisor,
            dirs,
            leading,
            gl8: gauss_f64(8),
            gl16: gauss_f64(16),
            ctx,
        })
    }

    pub fn zeros(&self) -> &[ZeroInfo] {
        &self.zeros
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    pub(crate) fn integrand(&self) -> &Integrand {
        &self.integrand
    }

    /// Every `(zero, direction)` slot in order.
    pub fn slots(&self) -> Vec<(usize, usize)> {
        self.zeros
            .iter()
            .enumerate()
            .flat_map(|(i, z)| (0..z.order + 2).map(move |j| (i, j)))
            .collect()
    }

    /// Traces and measures the separatrix leaving `zero` in direction `j`.
    pub fn trace_separatrix(&self, zero: usize, j: usize, cfg: &TraceConfig) -> Result<Separatrix> {
        cfg.validate()?;
        if zero >= self.zeros.len() || j >= self.zeros[zero].order + 2 {
            return Err(Error::Invalid(format!("no separatrix slot ({zero}, {j})")));
        }
        let raw = self.trace_path(zero, j, cfg)?;
        let q_length = self.certify(zero, &raw)?;
        Ok(Separatrix {
            origin: zero,
            direction: j,
            path: raw.path,
            branches: raw.branches,
            terminal: raw.terminal,
            q_length,
            traced_length: raw.length,
            unit_speed_residual: raw.residual,
        })
    }

    /// All separatrices, traced in parallel and returned in slot order.
    pub fn trace_all(&self, cfg: &TraceConfig) -> Vec<Result<Separatrix>> {
        self.slots()
            .into_par_iter()
            .map(|(i, j)| self.trace_separatrix(i, j, cfg))
            .collect()
    }

    fn sqrt_phi_near(&self, z: Complex64, prev: Complex64) -> Complex64 {
        nearest_sqrt(self.integrand.fphi.eval(z), prev)
    }

    /// `int_{z_i}^{z} sqrt(phi)` with `s = sqrt(phi(z))` fixing the branch.
    fn local_integral(&self, i: usize, z: Complex64, s: Complex64) -> Complex64 {
        let lz = &self.integrand.zeros[i];
        let k = lz.order as u32;
        let d = z - lz.mid;
        let dk2 = d.powu(k + 2);
        let (x, w) = &self.gl16;
        let mut g = d * s;
        let mut prev_v = 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for idx in (0..x.len()).rev() {
            let v = (1.0 + x[idx]) / 2.0;
            for sub in 1..=4 {
                let t = prev_v + (v - prev_v) * sub as f64 / 4.0;
                g = nearest_sqrt(dk2 * lz.fpsi.eval(lz.mid + d * t * t), g);
            }
            prev_v = v;
            sum += g * (w[idx] * v.powi(k as i32 + 1));
        }
        sum
    }

    /// `int_a^b sqrt(phi)` along the segment and the branch at `b`.
    fn step_integral(&self, a: Complex64, s: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let (x, w) = &self.gl8;
        let m = (a + b) / 2.0;
        let h = (b - a) / 2.0;
        let mut cur = s;
        let mut prev = -1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for idx in 0..x.len() {
            for sub in 1..=2 {
                let u = prev + (x[idx] - prev) * sub as f64 / 2.0;
                cur = self.sqrt_phi_near(m + h * u, cur);
            }
            prev = x[idx];
            sum += cur * w[idx];
        }
        for sub in 1..=2 {
            let u = prev + (1.0 - prev) * sub as f64 / 2.0;
            cur = self.sqrt_phi_near(m + h * u, cur);
        }
        (sum * h, cur)
    }

    fn nearest_singularity(&self, z: Complex64) -> (f64, f64) {
        let dz = self
            .integrand
            .zeros
            .iter()
            .map(|lz| (z - lz.mid).norm())
            .fold(f64::INFINITY, f64::min);
        let dp = self
            .integrand
            .poles
            .iter()
            .map(|(p, _)| (z - p).norm())
            .fold(f64::INFINITY, f64::min);
        (dz, dp)
    }

    fn trace_path(&self, zi: usize, j: usize, cfg: &TraceConfig) -> Result<RawPath> {
        let lz = &self.integrand.zeros[zi];
        let k = lz.order;
        let theta = self.dirs[zi][j];
        let dir = Complex64::from_polar(1.0, theta);
        let rho = cfg.seed_offset.min(0.01 * lz.reach);
        let target = super::endpoint_correction(self.leading[zi].norm(), k, rho);

        // seed exactly on the level Im Z = 0 through the zero
        let mut z = lz.mid + dir * rho;
        let mut s = self.integrand.fphi.eval(z).sqrt();
        if (s * dir).re < 0.0 {
            s = -s;
        }
        for _ in 0..20 {
            let r = self.local_integral(zi, z, s) - target;
            if r.norm() <= 1e-15 * target {
                break;
            }
            z -= r / s;
            s = self.sqrt_phi_near(z, s);
        }

        let mut path = vec![lz.mid, z];
        let mut branches = vec![Complex64::new(0.0, 0.0), s];
        let mut t = target;
        let mut residual: f64 = 0.0;
        for _ in 0..MAX_STEPS {
            if t > cfg.max_length {
                return Err(Error::MaxLength(cfg.max_length));
            }
            let (dz, dp) = self.nearest_singularity(z);
            if dp < POLE_FENCE || z.norm() > FAR_FENCE || self.integrand.fphi.eval(z).norm() > PHI_FENCE {
                return Err(Error::Diverged(format!(
                    "separatrix ({zi}, {j}) reached {z} after length {t}"
                )));
            }
            let step = (0.1 * dz.min(dp)).min(0.05);
            let mut h = step * s.norm();

            for (i, other) in self.integrand.zeros.iter().enumerate() {
                if (z - other.mid).norm() >= 0.25 * other.reach {
                    continue;
                }
                let delta = -self.local_integral(i, z, s);
                if !(delta.re > 0.0 && delta.im.abs() < 0.5 * delta.re) {
                    continue;
                }
                if delta.norm() < cfg.capture_radius {
                    let slot = self.match_slot(i, z).ok_or_else(|| {
                        Error::Diverged(format!(
                            "separatrix ({zi}, {j}) reached zero {i} off its separatrix directions"
                        ))
                    })?;
                    path.push(other.mid);
                    branches.push(Complex64::new(0.0, 0.0));
                    return Ok(RawPath {
                        path,
                        branches,
                        terminal: (i, slot),
                        length: t + delta.norm(),
                        residual,
                    });
                }
                h = h.min(0.5 * delta.re);
            }

            // midpoint predictor, then Newton on int_z^zn sqrt(phi) = h
            let sm = self.sqrt_phi_near(z + 0.5 * h / s, s);
            let mut zn = z + h / sm;
            let (mut best, mut sn, mut res) = (zn, sm, f64::INFINITY);
            for _ in 0..10 {
                let (val, send) = self.step_integral(z, s, zn);
                let r = val - h;
                if r.norm() >= res {
                    break;
                }
                (best, sn, res) = (zn, send, r.norm());
                if res <= cfg.step_tolerance * 1e-2 * h {
                    break;
                }
                zn -= r / send;
            }
            let zn = best;
            residual += res;
            z = zn;
            s = sn;
            t += h;
            path.push(z);
            branches.push(s);
        }
        Err(Error::Diverged(format!("separatrix ({zi}, {j}) exhausted its step budget")))
    }

    fn match_slot(&self, i: usize, z: Complex64) -> Option<usize> {
        let ang = (z - self.integrand.zeros[i].mid).arg();
        self.dirs[i].iter().position(|&th| {
            let d = (ang - th).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) < DIRECTION_SLACK
        })
    }

    /// Certified `int sqrt(phi) dz` along a path homotopic to the traced one.
    fn certify(&self, origin: usize, raw: &RawPath) -> Result<RealBall> {
        let ig = &self.integrand;
        let n = raw.path.len();
        let pts = &raw.path[1..n - 1];
        let brs = &raw.branches[1..n - 1];
        if pts.is_empty() {
            return Err(Error::Invalid("empty trace".into()));
        }
        let z0 = &ig.zeros[origin];
        let z1 = &ig.zeros[raw.terminal.0];
        let near0 = |p: &Complex64| (p - z0.mid).norm() <= 0.25 * z0.reach;
        let near1 = |p: &Complex64| (p - z1.mid).norm() <= 0.25 * z1.reach;
        let a = pts.iter().take_while(|p| near0(p)).count().max(1) - 1;
        let b = pts.len() - pts.iter().rev().take_while(|p| near1(p)).count().max(1);
        if a >= b {
            return Err(Error::Invalid("trace never leaves the neighbourhood of its ends".into()));
        }
        let ball = ComplexBall::from_c64;
        let mut chords = vec![Chord::Zero {
            zero: origin,
            end: ball(pts[a]),
            branch: brs[a],
            reversed: false,
        }];
        let mut i = a;
        while i < b {
            let mut best = i + 1;
            for jj in i + 2..=b {
                let d = ig.clearance(pts[i], pts[jj]);
                let ok = d > 0.0
                    && pts[i + 1..jj]
                        .iter()
                        .all(|p| dist_to_line(*p, pts[i], pts[jj]) <= 0.5 * d);
                if !ok {
                    break;
                }
                best = jj;
            }
            chords.push(Chord::Line {
                a: ball(pts[i]),
                b: ball(pts[best]),
                branch: brs[i],
            });
            i = best;
        }
        chords.push(Chord::Zero {
            zero: raw.terminal.0,
            end: ball(pts[b]),
            branch: brs[b],
            reversed: true,
        });
        let v = ig.integrate(chords, Mode::Sqrt, self.ctx)?;
        let (re, im) = (v.real(), v.imag());
        if !im.contains_zero() || !re.is_positive() {
            return Err(Error::Mismatch(format!(
                "period integral {:?} is not certified positive real",
                v.mid_c64()
            )));
        }
        Ok(re)
    }
}

fn dist_to_line(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;
    use crate::qdiff::build_q1;

    #[test]
    fn q1_separatrices_have_unit_length() {
        let ctx = PrecisionContext::default();
        let q1 = build_q1(ctx).unwrap();
        let tr = Tracer::new(&q1, ctx).unwrap();
        let cfg = TraceConfig::default();
        for sep in tr.trace_all(&cfg) {
            let sep = sep.unwrap();
            assert_ne!(sep.terminal.0, sep.origin);
            assert!(sep.q_length.contains_rational(&rational(1, 1)), "{:?}", sep.q_length);
            assert!(sep.q_length.rad().to_f64() < 1e-30);
            assert!((sep.traced_length - 1.0).abs() < 1e-9);
            assert!(sep.unit_speed_residual < 1e-12, "{} {:?}", sep.unit_speed_residual, sep.q_length);
        }
    }

    #[test]
    fn qc_separatrices_close_up() {
        let ctx = PrecisionContext::default();
        let sp = crate::qdiff::SParameter::new(rational(5, 11), ctx).unwrap();
        let (qc, _) = crate::qdiff::build_qc(&sp, ctx).unwrap();
        let tr = Tracer::new(&qc, ctx).unwrap();
        let seps: Vec<Separatrix> = tr.trace_all(&TraceConfig::default()).into_iter().map(|s| s.unwrap()).collect();
        assert_eq!(seps.len(), 16);
        let mut total = 0.0;
        for s in &seps {
            let back = seps.iter().find(|b| (b.origin, b.direction) == s.terminal).unwrap();
            assert_eq!(back.terminal, (s.origin, s.direction));
            assert!(s.q_length.overlaps(&back.q_length));
            total += s.q_length.mid_f64();
        }
        assert!((total - 12.0).abs() < 1e-12, "{total}");
    }
}
