//! Certified root clusters of ball polynomials.
//!
//! Approximations come from Aberth iteration (first in `f64`, then at the
//! working precision). Approximations are grouped by single-linkage
//! clustering at a sequence of thresholds; for each grouping the cluster
//! centres are polished by Newton's method on `p^(m-1)` and every cluster is
//! certified with Pellet's test on the Taylor expansion at its centre:
//! `|b_m| rho^m > sum_{j != m} |b_j| rho^j` implies that the disc of radius
//! `rho` holds exactly `m` roots of every polynomial in the coefficient balls.

use num_complex::Complex64;

use super::complex::ComplexBall;
use super::context::PrecisionContext;
use super::mag::Mag;
use super::poly::{horner_c64, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCluster {
    pub root: ComplexBall,
    pub multiplicity: usize,
}

/// Roots of `p` as pairwise-disjoint certified clusters, sorted by real
/// then imaginary part of the centre.
pub fn poly_roots(p: &Polynomial, ctx: PrecisionContext) -> Result<Vec<RootCluster>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Invalid("poly_roots needs degree >= 1".into())),
    };
    let k0 = p.exact_zero_prefix();
    let q = p.shift_down(k0);
    let mut out = Vec::new();
    if k0 > 0 {
        out.push(RootCluster {
            root: ComplexBall::zero(),
            multiplicity: k0,
        });
    }
    if q.degree().unwrap_or(0) >= 1 {
        out.extend(nonzero_roots(&q, k0 > 0, ctx)?);
    }
    debug_assert_eq!(out.iter().map(|c| c.multiplicity).sum::<usize>(), deg);
    out.sort_by(|a, b| {
        let (x, y) = (a.root.mid_c64(), b.root.mid_c64());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    Ok(out)
}

fn nonzero_roots(
    q: &Polynomial,
    avoid_zero: bool,
    ctx: PrecisionContext,
) -> Result<Vec<RootCluster>> {
    let bits = ctx.bits();
    let work = ctx.with_guard(32);
    let mid = q.mid();
    let approx = aberth_f64(&mid.to_c64());
    let approx = aberth_refine(&mid, approx, work);

    let pb = bits as f64;
    let exps = [
        -0.9 * pb,
        -0.6 * pb,
        -0.45 * pb,
        -0.3 * pb,
        -0.2 * pb,
        -pb / 8.0,
        -pb / 12.0,
        -pb / 16.0,
        -20.0,
        -13.0,
        -10.0,
        -7.0,
        -3.0,
    ];
    let mut last: Option<Vec<usize>> = None;
    for e in exps {
        let labels = single_linkage(&approx, e, work);
        if last.as_ref() == Some(&labels) {
            continue;
        }
        if let Some(clusters) = certify_grouping(q, &approx, &labels, avoid_zero, ctx) {
            return Ok(clusters);
        }
        last = Some(labels);
    }
    Err(Error::PrecisionExhausted(format!(
        "could not certify root clusters of a degree {} polynomial at {} bits",
        q.degree().unwrap_or(0),
        bits
    )))
}

fn aberth_f64(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let dmonic: Vec<Complex64> = (1..=n).map(|i| monic[i] * i as f64).collect();
    let mut r: f64 = 0.0;
    for (i, a) in monic.iter().enumerate().take(n) {
        let v = a.norm().powf(1.0 / (n - i) as f64);
        if v.is_finite() {
            r = r.max(v);
        }
    }
    let r = if r > 0.0 { r } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let pz = horner_c64(&monic, z[i]);
            if pz == Complex64::new(0.0, 0.0) {
                continue;
            }
            let dz = horner_c64(&dmonic, z[i]);
            let ratio = pz / dz;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn round_mid(z: &ComplexBall, ctx: PrecisionContext) -> ComplexBall {
    let b = ctx.bits();
    ComplexBall::exact(z.re_mid().round(b).0, z.im_mid().round(b).0)
}

/// Aberth iteration at working precision on the midpoint polynomial.
/// Root differences are formed exactly and only the Aberth correction
/// factor `1/(1 - N S)` is evaluated in `f64`.
fn aberth_refine(
    p: &Polynomial,
    start: Vec<Complex64>,
    ctx: PrecisionContext,
) -> Vec<ComplexBall> {
    let dp = p.derivative(ctx);
    let n = start.len();
    let mut z: Vec<ComplexBall> = start.into_iter().map(ComplexBall::from_c64).collect();
    let tol = -(ctx.bits() as i64) + 4;
    let mut stall = 0;
    let mut best = i64::MAX;
    for _ in 0..(60 + ctx.bits() as usize / 2) {
        let mut worst = i64::MIN;
        for i in 0..n {
            let pz = p.eval(&z[i], ctx).mid();
            if pz.is_exact_zero() {
                continue;
            }
            let dz = dp.eval(&z[i], ctx).mid();
            if dz.is_exact_zero() {
                continue;
            }
            let ratio = match pz.div(&dz, ctx) {
                Ok(v) => v.mid(),
                Err(_) => continue,
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j], ctx).mid_c64();
                    if d.norm() > 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let fac = 1.0 / (1.0 - ratio.mid_c64() * s);
            let w = if fac.is_finite() {
                ratio.mul(&ComplexBall::from_c64(fac), ctx)
            } else {
                ratio
            };
            z[i] = round_mid(&z[i].sub(&w, ctx), ctx);
            let scale = z[i].mid_abs_up().max(Mag::one());
            if let Some(e) = w.mid_abs_up().div_up(scale).log2_floor() {
                worst = worst.max(e);
            }
        }
        if worst < tol {
            break;
        }
        if worst < best {
            best = worst;
            stall = 0;
        } else {
            stall += 1;
            if stall > 8 {
                break;
            }
        }
    }
    z
}

fn single_linkage(z: &[ComplexBall], log2_tol: f64, ctx: PrecisionContext) -> Vec<usize> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let nx = p[k];
            p[k] = r;
            k = nx;
        }
        r
    }
    let tol = 2f64.powf(log2_tol);
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = z[i].mid_c64().norm().max(z[j].mid_c64().norm()).max(1.0);
            let d = z[i].sub(&z[j], ctx).mid_c64().norm();
            if d <= tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

fn certify_grouping(
    p: &Polynomial,
    approx: &[ComplexBall],
    labels: &[usize],
    avoid_zero: bool,
    ctx: PrecisionContext,
) -> Option<Vec<RootCluster>> {
    let work = ctx.with_guard(64);
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        match groups.iter_mut().find(|(k, _)| *k == l) {
            Some((_, v)) => v.push(i),
            None => groups.push((l, vec![i])),
        }
    }
    let centers: Vec<ComplexBall> = groups
        .iter()
        .map(|(_, idx)| cluster_center(p, approx, idx, work))
        .collect();
    let mut out = Vec::with_capacity(groups.len());
    for (gi, (_, idx)) in groups.iter().enumerate() {
        let c = &centers[gi];
        let mut sep: Option<Mag> = None;
        for (gj, o) in centers.iter().enumerate() {
            if gj != gi {
                let d = c.dist_lower(o);
                sep = Some(sep.map_or(d, |s| s.min(d)));
            }
        }
        if avoid_zero {
            let d = c.abs_lower();
            sep = Some(sep.map_or(d, |s| s.min(d)));
        }
        let m = idx.len();
        let rho = pellet(p, c, m, sep, ctx)?;
        out.push(RootCluster {
            root: c.with_rad(rho),
            multiplicity: m,
        });
    }
    Some(out)
}

/// Centroid of the cluster polished by Newton's method on `p^(m-1)`.
fn cluster_center(
    p: &Polynomial,
    approx: &[ComplexBall],
    idx: &[usize],
    ctx: PrecisionContext,
) -> ComplexBall {
    let m = idx.len();
    let mut z = ComplexBall::zero();
    for &i in idx {
        z = z.add(&approx[i], ctx);
    }
    let mut z = round_mid(&z.div_i64(m as i64, ctx), ctx);
    let d = p.mid().nth_derivative(m - 1, ctx);
    let dd = d.derivative(ctx);
    let tol = Mag::pow2(-(ctx.bits() as i64) + 8);
    for _ in 0..40 {
        let v = d.eval(&z, ctx).mid();
        if v.is_exact_zero() {
            break;
        }
        let s = dd.eval(&z, ctx).mid();
        let step = match v.div(&s, ctx) {
            Ok(w) => w.mid(),
            Err(_) => break,
        };
        z = round_mid(&z.sub(&step, ctx), ctx);
        if step.mid_abs_up() <= tol.mul_up(z.mid_abs_up().max(Mag::one())) {
            break;
        }
    }
    z
}

/// Smallest radius (on a doubling grid) at which Pellet's test certifies
/// exactly `m` roots in the disc around `c`, staying below half of `sep`.
fn pellet(
    p: &Polynomial,
    c: &ComplexBall,
    m: usize,
    sep: Option<Mag>,
    ctx: PrecisionContext,
) -> Option<Mag> {
    let bits = if p.is_exact() {
        (ctx.bits() as usize * m + 64).min(16 * ctx.bits() as usize) as u32
    } else {
        ctx.bits() + 64
    };
    let tctx = PrecisionContext {
        mantissa_bits: bits,
    };
    let b = p.taylor_shift(c, tctx);
    let lo: Vec<Mag> = b.iter().map(|x| x.abs_lower()).collect();
    let hi: Vec<Mag> = b.iter().map(|x| x.abs_upper()).collect();
    if lo[m].is_zero() {
        return None;
    }
    let limit = sep.map(|s| s.mul_2exp(-1));
    let scale = c.mid_abs_up().max(Mag::one());
    let mut rho = scale.mul_2exp(-2 * ctx.bits() as i64 - 64);
    loop {
        if let Some(l) = limit {
            if rho >= l {
                return None;
            }
        } else if rho > scale.mul_2exp(64) {
            return None;
        }
        let lhs = lo[m].mul_down(rho.pow_down(m as u32));
        let mut rhs = Mag::ZERO;
        for (j, h) in hi.iter().enumerate() {
            if j != m {
                rhs = rhs.add_up(h.mul_up(rho.pow_up(j as u32)));
            }
        }
        if lhs > rhs {
            return Some(rho);
        }
        rho = rho.mul_2exp(1);
    }
}
