//! Checks that do not depend on the tracer.

use num_complex::Complex64;

use super::quad::{Chord, Mode};
use super::trace::Tracer;
use crate::certify::sin_pi_ell_exact;
use crate::error::Result;
use crate::numerics::elementary::{asin, pi};
use crate::numerics::{ComplexBall, PrecisionContext, Rational, RationalMap, RealBall};
use crate::qdiff::QuadraticDifferential;

/// `int |phi(y)|^(1/2) |dy|` over the straight segment `[y0, y1]`.
pub fn segment_period(
    q: &QuadraticDifferential,
    y0: &ComplexBall,
    y1: &ComplexBall,
    ctx: PrecisionContext,
) -> Result<RealBall> {
    segment_period_with(&Tracer::new(q, ctx)?, y0, y1)
}

/// As [`segment_period`], reusing a prepared tracer.
pub fn segment_period_with(tr: &Tracer, y0: &ComplexBall, y1: &ComplexBall) -> Result<RealBall> {
    let ctx = tr.context();
    let (a, b) = (y0.mid_c64(), y1.mid_c64());
    if a == b {
        return Ok(RealBall::zero());
    }
    let ig = tr.integrand();
    let at_zero = |y: &ComplexBall| ig.zeros.iter().position(|z| z.ball.overlaps(y));
    let one = Complex64::new(1.0, 0.0);
    let mut chords = Vec::new();
    let mut start = y0.clone();
    let mut end = y1.clone();
    if let Some(i) = at_zero(y0) {
        let t = (0.2 * ig.zeros[i].reach / (b - a).norm()).min(0.4);
        start = ComplexBall::from_c64(a + (b - a) * t);
        chords.push(Chord::Zero {
            zero: i,
            end: start.clone(),
            branch: one,
            reversed: false,
        });
    }
    let tail = at_zero(y1).map(|i| {
        let t = (0.2 * ig.zeros[i].reach / (b - a).norm()).min(0.4);
        end = ComplexBall::from_c64(b + (a - b) * t);
        Chord::Zero {
            zero: i,
            end: end.clone(),
            branch: one,
            reversed: false,
        }
    });
    chords.push(Chord::Line {
        a: start,
        b: end,
        branch: one,
    });
    chords.extend(tail);
    Ok(ig.integrate(chords, Mode::Abs, ctx)?.real())
}

/// `arcsin(a) / pi` with `a = 2r(3 + 4r^2) / (1 + 12r^2)`.
pub fn ell_closed_form(r: &Rational, ctx: PrecisionContext) -> Result<RealBall> {
    let a = sin_pi_ell_exact(r)?;
    let g = ctx.with_guard(16);
    let v = asin(&RealBall::from_rational(&a, g), g)?.div(&pi(g), g)?;
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub ok: bool,
    /// Largest distance outside `[0, 1]` (0 when every point is inside).
    pub worst: f64,
}

/// Maps each point through `chain` (first map first) and checks that the
/// image lies within `tol` of the segment `[0, 1]`.
pub fn membership_check(
    points: &[ComplexBall],
    chain: &[RationalMap],
    tol: f64,
    ctx: PrecisionContext,
) -> Membership {
    let mut worst: f64 = 0.0;
    for p in points {
        let mut v = Some(p.clone());
        for m in chain {
            v = v.and_then(|z| m.eval_finite(&z, ctx).ok().flatten());
        }
        let dev = match v {
            Some(zeta) => {
                let re = zeta.real();
                let r = re.rad().to_f64();
                let lo = re.mid_f64() - r;
                let hi = re.mid_f64() + r;
                let im = zeta.imag().abs_upper().to_f64();
                im.max(-lo).max(hi - 1.0).max(0.0)
            }
            None => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    Membership {
        ok: worst <= tol,
        worst,
    }
}
