//! Certified Gauss-Legendre quadrature of `sqrt(phi) dz` (or `|phi|^(1/2) |dz|`)
//! along chains of straight chords.
//!
//! A chord next to a zero of order `k` is parametrised as
//! `z = z0 + d ((1 + u) / 2)^2`, which turns the branch point into an
//! analytic factor `v^(k+1)`. The truncation error uses the bound
//! `64/15 M rho^(-2n) / (rho^2 - 1)` for functions analytic in the Bernstein
//! ellipse `E_rho`, with `M` bounded by ball evaluation on discs covering the
//! ellipse boundary.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexBall, Dyadic, FloatMap, Mag, PrecisionContext, Polynomial, RationalMap, RealBall};

const RULE_SIZES: [usize; 8] = [8, 16, 24, 32, 48, 64, 96, 128];
const MAX_SPLIT_DEPTH: u32 = 50;
const ELLIPSE_DISCS: usize = 64;

/// Gauss-Legendre nodes and weights in double precision, nodes ascending.
pub fn gauss_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, q) = legendre_f64(n, x);
            let dx = p / (n as f64 * (x * p - q) / (x * x - 1.0));
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, q) = legendre_f64(n, x);
        let dp = n as f64 * (x * p - q) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn legendre_ball(n: usize, x: &RealBall, ctx: PrecisionContext) -> (RealBall, RealBall) {
    let mut p0 = RealBall::one();
    let mut p1 = x.clone();
    for k in 1..n {
        let t = x.mul(&p1, ctx).mul_i64(2 * k as i64 + 1, ctx);
        let p2 = t.sub(&p0.mul_i64(k as i64, ctx), ctx).div_i64(k as i64 + 1, ctx);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// An `n`-point rule whose node balls each contain exactly one root of `P_n`
/// and whose weight balls contain the exact weights.
#[derive(Debug)]
pub struct GaussRule {
    nodes: Vec<RealBall>,
    weights: Vec<RealBall>,
    nodes_f64: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize, ctx: PrecisionContext) -> Result<GaussRule> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::Invalid(format!("rule size {n} must be even and positive")));
        }
        // ball radii grow geometrically along the three-term recurrence
        let wp = ctx.with_guard(64 + 2 * n as u32);
        let eps_exp = -(ctx.bits() as i64 + 30);
        let (f_nodes, _) = gauss_f64(n);
        let iters = ((wp.bits() as f64 / 40.0).log2().ceil() as usize) + 2;
        let half = n / 2;
        let mut pos_nodes = Vec::with_capacity(half);
        let mut pos_weights = Vec::with_capacity(half);
        for &x0 in &f_nodes[half..] {
            let mut x = Dyadic::from_f64(x0);
            for _ in 0..iters {
                let xb = RealBall::exact(x.clone());
                let (p, q) = legendre_ball(n, &xb, wp);
                let num = p.mul(&xb.sqr(wp).sub(&RealBall::one(), wp), wp);
                let den = xb.mul(&p, wp).sub(&q, wp).mul_i64(n as i64, wp);
                let step = num.div(&den, wp)?;
                x = xb.sub(&step, wp).mid().clone();
            }
            let eps = Dyadic::pow2(eps_exp);
            let (plo, _) = legendre_ball(n, &RealBall::exact(x.sub(&eps)), wp);
            let (phi, _) = legendre_ball(n, &RealBall::exact(x.add(&eps)), wp);
            let bracketed = (plo.is_negative() && phi.is_positive()) || (plo.is_positive() && phi.is_negative());
            if !bracketed {
                return Err(Error::PrecisionExhausted(format!(
                    "cannot isolate a node of the {n}-point rule"
                )));
            }
            let xb = RealBall::new(x, Mag::pow2(eps_exp));
            let (_, q) = legendre_ball(n, &xb, wp);
            let nq = q.mul_i64(n as i64, wp);
            let w = RealBall::one()
                .sub(&xb.sqr(wp), wp)
                .mul_2exp(1)
                .div(&nq.sqr(wp), wp)?;
            pos_nodes.push(xb);
            pos_weights.push(w);
        }
        let mut nodes: Vec<RealBall> = pos_nodes.iter().rev().map(|x| x.neg()).collect();
        nodes.extend(pos_nodes.iter().cloned());
        let mut weights: Vec<RealBall> = pos_weights.iter().rev().cloned().collect();
        weights.extend(pos_weights);
        let nodes_f64 = nodes.iter().map(|x| x.mid_f64()).collect();
        Ok(GaussRule {
            nodes,
            weights,
            nodes_f64,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[RealBall] {
        &self.nodes
    }

    pub fn weights(&self) -> &[RealBall] {
        &self.weights
    }
}

/// Rules keyed by size and precision, shared by all quadratures of one run.
#[derive(Debug, Default)]
pub struct RuleCache {
    rules: Mutex<HashMap<(usize, u32), Arc<GaussRule>>>,
}

impl RuleCache {
    pub fn new() -> RuleCache {
        RuleCache::default()
    }

    pub fn get(&self, n: usize, ctx: PrecisionContext) -> Result<Arc<GaussRule>> {
        let key = (n, ctx.bits());
        if let Some(r) = self.rules.lock().expect("rule cache poisoned").get(&key) {
            return Ok(r.clone());
        }
        let rule = Arc::new(GaussRule::new(n, ctx)?);
        let mut map = self.rules.lock().expect("rule cache poisoned");
        Ok(map.entry(key).or_insert(rule).clone())
    }
}

/// A zero of `phi` with the factor `(z - z0)^k` divided out of the numerator.
#[derive(Clone, Debug)]
pub(crate) struct LocalZero {
    pub ball: ComplexBall,
    pub mid: Complex64,
    pub order: usize,
    pub psi_num: Polynomial,
    pub fpsi: FloatMap,
    /// Distance to the nearest other zero or finite pole, less radii.
    pub reach: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// `sqrt(phi) dz` with the branch carried by the chord.
    Sqrt,
    /// `|phi|^(1/2) |dz|` on a straight segment.
    Abs,
}

#[derive(Clone, Debug)]
pub(crate) enum Chord {
    /// Straight chord from `a` to `b`; `branch` is `sqrt(phi(a))`.
    Line {
        a: ComplexBall,
        b: ComplexBall,
        branch: Complex64,
    },
    /// From the zero to `end` (negated when `reversed`); `branch` is
    /// `sqrt(phi(end))`.
    Zero {
        zero: usize,
        end: ComplexBall,
        branch: Complex64,
        reversed: bool,
    },
}

/// `phi` together with its singular set, ready for quadrature.
#[derive(Debug)]
pub(crate) struct Integrand {
    pub phi: RationalMap,
    pub fphi: FloatMap,
    pub zeros: Vec<LocalZero>,
    pub poles: Vec<(Complex64, f64)>,
    pub rules: Arc<RuleCache>,
}

fn dist_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn rad_f64(z: &ComplexBall) -> f64 {
    z.rad().to_f64() * (1.0 + 1e-12)
}

fn real_abs(z: &ComplexBall, ctx: PrecisionContext) -> RealBall {
    z.real().sqr(ctx).add(&z.imag().sqr(ctx), ctx).sqrt_nonneg(ctx)
}

/// Upper bound of `|p|` on the disc, and a lower bound (possibly 0).
fn disc_bounds(p: &Polynomial, center: Complex64, r: f64) -> (f64, f64) {
    let ctx = PrecisionContext { mantissa_bits: 64 };
    let t = p.taylor_shift(&ComplexBall::from_c64(center), ctx);
    let mut tail = 0.0;
    let mut rj = 1.0;
    for c in t.iter().skip(1) {
        rj *= r;
        tail += c.abs_upper().to_f64() * rj;
    }
    let head_up = t.first().map_or(0.0, |c| c.abs_upper().to_f64());
    let head_lo = t.first().map_or(0.0, |c| c.abs_lower().to_f64());
    let slack = 1.0 + 1e-9;
    ((head_up + tail) * slack, (head_lo / slack - tail * slack).max(0.0))
}

impl Integrand {
    pub fn new(
        phi: &RationalMap,
        zeros: &[(ComplexBall, usize)],
        poles: &[ComplexBall],
        rules: Arc<RuleCache>,
        ctx: PrecisionContext,
    ) -> Result<Integrand> {
        let fphi = phi.to_float();
        let poles: Vec<(Complex64, f64)> = poles.iter().map(|p| (p.mid_c64(), rad_f64(p))).collect();
        let mut out = Vec::with_capacity(zeros.len());
        for (i, (z, k)) in zeros.iter().enumerate() {
            let mut psi = phi.numerator().clone();
            for _ in 0..*k {
                psi = psi.deflate(z, ctx);
            }
            let mid = z.mid_c64();
            let rz = rad_f64(z);
            let mut reach = f64::INFINITY;
            for (j, (w, _)) in zeros.iter().enumerate() {
                if j != i {
                    reach = reach.min((mid - w.mid_c64()).norm() - rz - rad_f64(w));
                }
            }
            for (p, rp) in &poles {
                reach = reach.min((mid - p).norm() - rz - rp);
            }
            reach = reach.min(1e3) * (1.0 - 1e-9);
            if reach <= 0.0 {
                return Err(Error::PrecisionExhausted("zero not separated from the singular set".into()));
            }
            out.push(LocalZero {
                ball: z.clone(),
                mid,
                order: *k,
                fpsi: FloatMap {
                    scale: fphi.scale,
                    num: psi.to_c64(),
                    den: fphi.den.clone(),
                },
                psi_num: psi,
                reach,
            });
        }
        Ok(Integrand {
            phi: phi.clone(),
            fphi,
            zeros: out,
            poles,
            rules,
        })
    }

    /// Distance from the segment to every zero and finite pole.
    pub fn clearance(&self, a: Complex64, b: Complex64) -> f64 {
        let mut d = f64::INFINITY;
        for z in &self.zeros {
            d = d.min(dist_to_segment(z.mid, a, b) - rad_f64(&z.ball));
        }
        for (p, rp) in &self.poles {
            d = d.min(dist_to_segment(*p, a, b) - rp);
        }
        d * (1.0 - 1e-9) - 1e-15 * (1.0 + a.norm().max(b.norm()))
    }

    /// `sqrt(phi)` continued along the straight segment from `from` to `to`.
    pub fn continue_branch(&self, from: Complex64, s: Complex64, to: Complex64) -> Complex64 {
        let steps = 32;
        let mut cur = s;
        for i in 1..=steps {
            let z = from + (to - from) * (i as f64 / steps as f64);
            cur = nearest_sqrt(self.fphi.eval(z), cur);
        }
        cur
    }

    fn eval_phi(&self, z: &ComplexBall, ctx: PrecisionContext) -> Result<ComplexBall> {
        let n = self.phi.numerator().eval(z, ctx);
        let d = self.phi.denominator().eval(z, ctx);
        Ok(self.phi.scale().mul(&n.div(&d, ctx)?, ctx))
    }

    fn eval_psi(&self, zi: usize, z: &ComplexBall, ctx: PrecisionContext) -> Result<ComplexBall> {
        let n = self.zeros[zi].psi_num.eval(z, ctx);
        let d = self.phi.denominator().eval(z, ctx);
        Ok(self.phi.scale().mul(&n.div(&d, ctx)?, ctx))
    }

    /// Quadrature sum over one chord (truncation error not included).
    fn chord_sum(&self, chord: &Chord, mode: Mode, rule: &GaussRule, ctx: PrecisionContext) -> Result<ComplexBall> {
        let n = rule.len();
        let mut total = ComplexBall::zero();
        match chord {
            Chord::Line { a, b, branch } => {
                let m = a.add(b, ctx).mul_2exp(-1);
                let h = b.sub(a, ctx).mul_2exp(-1);
                let (mf, hf) = (m.mid_c64(), h.mid_c64());
                let habs = real_abs(&h, ctx);
                let h2 = h.sqr(ctx);
                let radicand = |u: f64| self.fphi.eval(mf + hf * u) * hf * hf;
                let mut refv = *branch * hf;
                let mut prev_u = -1.0;
                for i in 0..n {
                    let x = &rule.nodes()[i];
                    let z = m.add(&h.mul_real(x, ctx), ctx);
                    let phi = self.eval_phi(&z, ctx)?;
                    let f = match mode {
                        Mode::Sqrt => {
                            refv = walk(&radicand, prev_u, rule.nodes_f64[i], refv);
                            prev_u = rule.nodes_f64[i];
                            phi.mul(&h2, ctx).sqrt_near(&ComplexBall::from_c64(refv), ctx)?
                        }
                        Mode::Abs => ComplexBall::from_real(&real_abs(&phi, ctx).sqrt_nonneg(ctx).mul(&habs, ctx)),
                    };
                    total = total.add(&f.mul_real(&rule.weights()[i], ctx), ctx);
                }
            }
            Chord::Zero {
                zero,
                end,
                branch,
                reversed,
            } => {
                let lz = &self.zeros[*zero];
                let k = lz.order as u32;
                let d = end.sub(&lz.ball, ctx);
                let df = d.mid_c64();
                let dk2 = d.pow(k + 2, ctx);
                let dabs_k2 = real_abs(&d, ctx).pow(k + 2, ctx);
                let radicand = |u: f64| {
                    let v = (1.0 + u) / 2.0;
                    lz.fpsi.eval(lz.mid + df * v * v) * df.powu(k + 2)
                };
                let mut refv = *branch * df;
                let mut prev_u = 1.0;
                for i in (0..n).rev() {
                    let x = &rule.nodes()[i];
                    let v = x.add(&RealBall::one(), ctx).mul_2exp(-1);
                    let z = lz.ball.add(&d.mul_real(&v.sqr(ctx), ctx), ctx);
                    let psi = self.eval_psi(*zero, &z, ctx)?;
                    let vk = v.pow(k + 1, ctx);
                    let f = match mode {
                        Mode::Sqrt => {
                            refv = walk(&radicand, prev_u, rule.nodes_f64[i], refv);
                            prev_u = rule.nodes_f64[i];
                            psi.mul(&dk2, ctx)
                                .sqrt_near(&ComplexBall::from_c64(refv), ctx)?
                                .mul_real(&vk, ctx)
                        }
                        Mode::Abs => ComplexBall::from_real(
                            &real_abs(&psi, ctx).mul(&dabs_k2, ctx).sqrt_nonneg(ctx).mul(&vk, ctx),
                        ),
                    };
                    total = total.add(&f.mul_real(&rule.weights()[i], ctx), ctx);
                }
                if *reversed {
                    total = total.neg();
                }
            }
        }
        Ok(total)
    }

    /// `(log2 rho, log2 M)` for the chord, or `None` when the chord must be
    /// split first.
    fn ellipse_bound(&self, chord: &Chord) -> Result<Option<(f64, f64)>> {
        match chord {
            Chord::Line { a, b, .. } => {
                let (af, bf) = (a.mid_c64(), b.mid_c64());
                let ra = rad_f64(a).max(rad_f64(b));
                let d = self.clearance(af, bf) - ra;
                if d <= 0.0 {
                    return Err(Error::PoleOnPath(format!(
                        "segment [{af}, {bf}] meets a zero or pole of the differential"
                    )));
                }
                let hf = (bf - af) / 2.0;
                let mf = (af + bf) / 2.0;
                if hf.norm() == 0.0 {
                    return Ok(Some((1.0, f64::NEG_INFINITY)));
                }
                let bb = 0.7 * d / hf.norm();
                let rho = bb + (bb * bb + 1.0).sqrt();
                let (ea, eb) = ((rho + 1.0 / rho) / 2.0, (rho - 1.0 / rho) / 2.0);
                let ru = ea * PI / ELLIPSE_DISCS as f64 * 1.01 + 1e-12;
                let mut m: f64 = 0.0;
                for j in 0..ELLIPSE_DISCS {
                    let t = (j as f64 + 0.5) * 2.0 * PI / ELLIPSE_DISCS as f64;
                    let uc = Complex64::new(ea * t.cos(), eb * t.sin());
                    let zc = mf + hf * uc;
                    let r = hf.norm() * ru + 2.0 * ra * (1.0 + uc.norm() + ru) + 1e-15 * (1.0 + zc.norm());
                    let Some(sup) = self.sup_ratio(self.phi.numerator(), zc, r) else {
                        return Ok(None);
                    };
                    m = m.max((hf.norm() + ra) * sup.sqrt());
                }
                Ok(Some((rho.log2(), (m * (1.0 + 1e-6)).log2())))
            }
            Chord::Zero { zero, end, .. } => {
                let lz = &self.zeros[*zero];
                let ef = end.mid_c64();
                let df = ef - lz.mid;
                let rd = rad_f64(end) + rad_f64(&lz.ball);
                let dn = df.norm() + rd;
                if dn > 0.25 * lz.reach {
                    return Ok(None);
                }
                if df.norm() == 0.0 {
                    return Ok(Some((1.0, f64::NEG_INFINITY)));
                }
                let ea = 2.0 * (0.7 * lz.reach / dn).sqrt() - 1.0;
                let rho = ea + (ea * ea - 1.0).sqrt();
                let eb = (rho - 1.0 / rho) / 2.0;
                let ru = ea * PI / ELLIPSE_DISCS as f64 * 1.01 + 1e-12;
                let k = lz.order as i32;
                let mut m: f64 = 0.0;
                for j in 0..ELLIPSE_DISCS {
                    let t = (j as f64 + 0.5) * 2.0 * PI / ELLIPSE_DISCS as f64;
                    let uc = Complex64::new(ea * t.cos(), eb * t.sin());
                    let vc = (uc + 1.0) / 2.0;
                    let rv = ru / 2.0;
                    let vmax = vc.norm() + rv;
                    let zc = lz.mid + df * vc * vc;
                    let r = df.norm() * rv * (2.0 * vc.norm() + rv)
                        + rd * vmax * vmax
                        + rad_f64(&lz.ball)
                        + 1e-15 * (1.0 + zc.norm());
                    let Some(sup) = self.sup_ratio(&lz.psi_num, zc, r) else {
                        return Ok(None);
                    };
                    m = m.max(vmax.powi(k + 1) * dn.powf((k + 2) as f64 / 2.0) * sup.sqrt());
                }
                Ok(Some((rho.log2(), (m * (1.0 + 1e-6)).log2())))
            }
        }
    }

    /// Upper bound of `|scale num / den|` on a disc.
    fn sup_ratio(&self, num: &Polynomial, center: Complex64, r: f64) -> Option<f64> {
        let (nu, _) = disc_bounds(num, center, r);
        let (_, dl) = disc_bounds(self.phi.denominator(), center, r);
        if dl <= 0.0 {
            return None;
        }
        Some(self.phi.scale().abs_upper().to_f64() * (1.0 + 1e-9) * nu / dl)
    }

    fn split(&self, chord: &Chord, ctx: PrecisionContext) -> (Chord, Chord) {
        match chord {
            Chord::Line { a, b, branch } => {
                let m = a.add(b, ctx).mul_2exp(-1);
                let sm = self.continue_branch(a.mid_c64(), *branch, m.mid_c64());
                (
                    Chord::Line {
                        a: a.clone(),
                        b: m.clone(),
                        branch: *branch,
                    },
                    Chord::Line {
                        a: m,
                        b: b.clone(),
                        branch: sm,
                    },
                )
            }
            Chord::Zero {
                zero,
                end,
                branch,
                reversed,
            } => {
                let z0 = &self.zeros[*zero].ball;
                let m = ComplexBall::from_c64((z0.mid_c64() + end.mid_c64()) / 2.0);
                let sm = self.continue_branch(end.mid_c64(), *branch, m.mid_c64());
                let inner = Chord::Zero {
                    zero: *zero,
                    end: m.clone(),
                    branch: sm,
                    reversed: *reversed,
                };
                let outer = if *reversed {
                    Chord::Line {
                        a: end.clone(),
                        b: m,
                        branch: *branch,
                    }
                } else {
                    Chord::Line {
                        a: m,
                        b: end.clone(),
                        branch: sm,
                    }
                };
                (inner, outer)
            }
        }
    }

    /// Certified integral over a chain of chords, with a truncation budget of
    /// `2^(-bits/2)` per chord.
    pub fn integrate(&self, chords: Vec<Chord>, mode: Mode, ctx: PrecisionContext) -> Result<ComplexBall> {
        let target = -(ctx.bits() as f64) / 2.0;
        let mut stack: Vec<(Chord, u32)> = chords.into_iter().rev().map(|c| (c, 0)).collect();
        let mut total = ComplexBall::zero();
        while let Some((chord, depth)) = stack.pop() {
            let plan = self.ellipse_bound(&chord)?.and_then(|(lr, lm)| {
                if lm == f64::NEG_INFINITY {
                    return Some((RULE_SIZES[0], f64::NEG_INFINITY));
                }
                let rho = lr.exp2();
                let base = (64.0f64 / 15.0).log2() + lm - (rho * rho - 1.0).log2();
                RULE_SIZES
                    .iter()
                    .map(|&n| (n, base - 2.0 * n as f64 * lr))
                    .find(|&(_, e)| e <= target)
            });
            match plan {
                Some((n, err)) => {
                    let rule = self.rules.get(n, ctx)?;
                    let mut s = self.chord_sum(&chord, mode, &rule, ctx)?;
                    if err > f64::NEG_INFINITY {
                        s = s.add_error(Mag::pow2(err.ceil() as i64 + 1));
                    }
                    total = total.add(&s, ctx);
                }
                None if depth < MAX_SPLIT_DEPTH => {
                    let (c1, c2) = self.split(&chord, ctx);
                    stack.push((c2, depth + 1));
                    stack.push((c1, depth + 1));
                }
                None => {
                    return Err(Error::PrecisionExhausted(
                        "quadrature did not reach its error target".into(),
                    ))
                }
            }
        }
        Ok(total)
    }
}

/// The square root of `w` closer to `prev`.
pub(crate) fn nearest_sqrt(w: Complex64, prev: Complex64) -> Complex64 {
    let s = w.sqrt();
    if (s - prev).norm_sqr() <= (s + prev).norm_sqr() {
        s
    } else {
        -s
    }
}

/// Continues `sqrt(radicand(u))` from `u0` to `u1` in small steps.
fn walk(radicand: &impl Fn(f64) -> Complex64, u0: f64, u1: f64, start: Complex64) -> Complex64 {
    let steps = 4;
    let mut cur = start;
    for i in 1..=steps {
        let u = u0 + (u1 - u0) * (i as f64 / steps as f64);
        cur = nearest_sqrt(radicand(u), cur);
    }
    cur
}
