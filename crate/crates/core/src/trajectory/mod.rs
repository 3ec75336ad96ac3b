//! Critical horizontal trajectories: tracing from zeros, certified periods,
//! and the independent oracles used to check them.

mod oracles;
mod quad;
mod trace;

pub use oracles::{ell_closed_form, membership_check, segment_period, segment_period_with, Membership};
pub use quad::{gauss_f64, GaussRule, RuleCache};
pub use trace::{Separatrix, TraceConfig, Tracer, ZeroInfo};

use crate::error::{Error, Result};
use crate::numerics::elementary::pi;
use crate::numerics::{ComplexBall, PrecisionContext, RealBall, SpherePoint};
use crate::qdiff::{DivisorEntry, QuadraticDifferential};

/// The two orientations of one edge and its period.
#[derive(Clone, Debug)]
pub struct EdgeMeasure {
    /// `(zero, direction)` slots at the two ends.
    pub ends: [(usize, usize); 2],
    pub period: RealBall,
}

/// `theta_j = (2 pi j - arg c_k) / (k + 2)` for `j = 0..k+2`, where
/// `phi(z) ~ c_k (z - p)^k` at the zero.
pub fn separatrix_directions(
    q: &QuadraticDifferential,
    zero: &DivisorEntry,
    ctx: PrecisionContext,
) -> Result<Vec<RealBall>> {
    if zero.order < 1 {
        return Err(Error::Invalid(format!("order {} is not a zero", zero.order)));
    }
    let SpherePoint::Finite(p) = &zero.point else {
        return Err(Error::Invalid("zero at infinity".into()));
    };
    let k = zero.order as usize;
    let mut num = q.phi.numerator().clone();
    for _ in 0..k {
        num = num.deflate(p, ctx);
    }
    let ck = q
        .phi
        .scale()
        .mul(&num.eval(p, ctx).div(&q.phi.denominator().eval(p, ctx), ctx)?, ctx);
    directions_from_leading(&ck, k, ctx)
}

pub(crate) fn directions_from_leading(
    ck: &ComplexBall,
    k: usize,
    ctx: PrecisionContext,
) -> Result<Vec<RealBall>> {
    let arg = ck.arg(ctx)?;
    let two_pi = pi(ctx).mul_2exp(1);
    Ok((0..k + 2)
        .map(|j| {
            two_pi
                .mul_i64(j as i64, ctx)
                .sub(&arg, ctx)
                .div_i64(k as i64 + 2, ctx)
        })
        .collect())
}

/// Leading-order `|q|`-length from a zero of order `k` to distance `rho`
/// along a separatrix: `|c_k|^(1/2) rho^((k+2)/2) 2/(k+2)`.
pub fn endpoint_correction(ck_abs: f64, k: usize, rho: f64) -> f64 {
    let e = (k as f64 + 2.0) / 2.0;
    ck_abs.sqrt() * rho.powf(e) / e
}

/// Combines the two orientations of an edge.
pub fn edge_period(a: &Separatrix, b: &Separatrix) -> Result<EdgeMeasure> {
    let sa = (a.origin, a.direction);
    let sb = (b.origin, b.direction);
    if a.terminal != sb || b.terminal != sa {
        return Err(Error::UnmatchedHalfEdge(format!(
            "{sa:?} -> {:?} and {sb:?} -> {:?} are not opposite orientations",
            a.terminal, b.terminal
        )));
    }
    if !a.q_length.overlaps(&b.q_length) {
        return Err(Error::Mismatch(format!(
            "orientations of edge {sa:?}-{sb:?} measure {:?} and {:?}",
            a.q_length, b.q_length
        )));
    }
    // wide enough that the average is exact
    let ctx = PrecisionContext::default().with_guard(PrecisionContext::MAX_BITS);
    Ok(EdgeMeasure {
        ends: [sa, sb],
        period: a.q_length.add(&b.q_length, ctx).mul_2exp(-1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdiff::{build_q1, divisor};

    #[test]
    fn directions_of_q1_zeros_are_spaced_by_thirds() {
        let ctx = PrecisionContext::default();
        let q1 = build_q1(ctx).unwrap();
        let d = divisor(&q1, ctx).unwrap();
        for z in d.zeros() {
            let dirs = separatrix_directions(&q1, z, ctx).unwrap();
            assert_eq!(dirs.len(), 3);
            for w in dirs.windows(2) {
                let gap = w[1].sub(&w[0], ctx).mid_f64();
                assert!((gap - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn endpoint_correction_matches_power_law() {
        // phi = z near a simple zero: integral of sqrt(t) from 0 to rho
        let rho: f64 = 1e-4;
        assert!((endpoint_correction(1.0, 1, rho) - 2.0 / 3.0 * rho.powf(1.5)).abs() < 1e-20);
        assert!((endpoint_correction(4.0, 2, rho) - rho * rho).abs() < 1e-20);
    }
}
