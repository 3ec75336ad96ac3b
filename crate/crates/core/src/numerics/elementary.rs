//! Elementary functions on real balls.
//!
//! Every function evaluates a truncated series in ball arithmetic at the
//! exact midpoint of its argument, adds a bound on the truncated tail, and
//! finally widens by a Lipschitz bound times the input radius.

use super::context::PrecisionContext;
use super::dyadic::Dyadic;
use super::mag::Mag;
use super::real::{rounded, RealBall};
use crate::error::{Error, Result};

const GUARD: u32 = 32;

/// `pi` as a ball (Machin's formula).
pub fn pi(ctx: PrecisionContext) -> RealBall {
    let g = ctx.with_guard(GUARD);
    let a = atan_series(&RealBall::one().div_i64(5, g), g);
    let b = atan_series(&RealBall::one().div_i64(239, g), g);
    let v = a.mul_i64(16, g).sub(&b.mul_i64(4, g), g);
    rounded(v.mid().clone(), v.rad(), ctx)
}

/// Alternating series for `atan(y)`, valid for `|y| <= 1/2` on the whole ball.
fn atan_series(y: &RealBall, g: PrecisionContext) -> RealBall {
    let y2 = y.sqr(g);
    let target = Mag::pow2(-(g.bits() as i64) - 8);
    let mut pow = y.clone();
    let mut sum = RealBall::zero();
    let mut n: i64 = 0;
    loop {
        let term = pow.div_i64(2 * n + 1, g);
        sum = if n % 2 == 0 {
            sum.add(&term, g)
        } else {
            sum.sub(&term, g)
        };
        pow = pow.mul(&y2, g);
        n += 1;
        let next = pow.abs_upper();
        if next < target {
            // first omitted term bounds the tail of an alternating series
            return sum.add_error(next);
        }
    }
}

/// Arctangent of an exact value.
fn atan_exact(x: &Dyadic, g: PrecisionContext) -> RealBall {
    if x.is_zero() {
        return RealBall::zero();
    }
    let xb = RealBall::exact(x.clone());
    if x.abs_mag_down() > Mag::one() {
        // atan(x) = sign(x) pi/2 - atan(1/x)
        let inv = xb.inv(g).expect("nonzero");
        let half_pi = pi(g).mul_2exp(-1);
        let t = atan_reduced(&inv, g);
        return if x.signum() > 0 {
            half_pi.sub(&t, g)
        } else {
            half_pi.neg().sub(&t, g)
        };
    }
    atan_reduced(&xb, g)
}

/// `atan(y)` for `|y| <= 1` (up to a small radius) by repeated half-angle
/// reduction `y -> y / (1 + sqrt(1 + y^2))` followed by the series.
fn atan_reduced(y: &RealBall, g: PrecisionContext) -> RealBall {
    let small = Mag::pow2(-10);
    let mut y = y.clone();
    let mut k = 0i64;
    while y.abs_upper() > small {
        let den = RealBall::one().add(&RealBall::one().add(&y.sqr(g), g).sqrt_nonneg(g), g);
        y = y.div(&den, g).expect("denominator >= 1");
        k += 1;
    }
    atan_series(&y, g).mul_2exp(k)
}

pub fn atan(x: &RealBall, ctx: PrecisionContext) -> RealBall {
    let g = ctx.with_guard(GUARD);
    let v = atan_exact(x.mid(), g);
    // |atan'| <= 1
    rounded(v.mid().clone(), v.rad().add_up(x.rad()), ctx)
}

/// Two-argument arctangent in `(-pi, pi]`.
pub fn atan2(y: &RealBall, x: &RealBall, ctx: PrecisionContext) -> Result<RealBall> {
    let g = ctx.with_guard(GUARD);
    let ax = x.mid().abs();
    let ay = y.mid().abs();
    if ax >= ay {
        if x.is_positive() {
            return Ok(atan(&y.div(x, g)?, ctx));
        }
        if x.is_negative() {
            let base = atan(&y.div(x, g)?, g);
            let p = pi(g);
            let v = if y.mid().signum() >= 0 {
                base.add(&p, g)
            } else {
                base.sub(&p, g)
            };
            return Ok(rounded(v.mid().clone(), v.rad(), ctx));
        }
    } else {
        let half_pi = pi(g).mul_2exp(-1);
        if y.is_positive() {
            let v = half_pi.sub(&atan(&x.div(y, g)?, g), g);
            return Ok(rounded(v.mid().clone(), v.rad(), ctx));
        }
        if y.is_negative() {
            let v = half_pi.neg().sub(&atan(&x.div(y, g)?, g), g);
            return Ok(rounded(v.mid().clone(), v.rad(), ctx));
        }
    }
    Err(Error::Indeterminate("atan2 at a ball containing the origin".into()))
}

/// Arcsine on `[-1, 1]`, as `2 atan(x / (1 + sqrt(1 - x^2)))`.
pub fn asin(x: &RealBall, ctx: PrecisionContext) -> Result<RealBall> {
    let g = ctx.with_guard(GUARD);
    if x.mid().abs_mag_down() > Mag::one() {
        return Err(Error::Range("asin argument outside [-1, 1]".into()));
    }
    let xm = RealBall::exact(x.mid().clone());
    let one = RealBall::one();
    let root = one.sub(&xm.sqr(g), g).sqrt_nonneg(g);
    let t = xm.div(&one.add(&root, g), g)?;
    let v = atan(&t, g).mul_2exp(1);
    if x.is_exact() {
        return Ok(rounded(v.mid().clone(), v.rad(), ctx));
    }
    // Lipschitz bound 1/sqrt(1 - (|x| + r)^2) over the ball
    let hi = x.abs_upper();
    if hi >= Mag::one() {
        return Err(Error::Indeterminate(
            "asin ball reaches the branch points +/-1".into(),
        ));
    }
    let slope = Mag::one()
        .div_up(Mag::one().sub_down(hi.mul_up(hi)).sqrt_down());
    Ok(rounded(
        v.mid().clone(),
        v.rad().add_up(x.rad().mul_up(slope)),
        ctx,
    ))
}

/// Reduces `x` modulo `2 pi` into roughly `[-pi, pi]`, in ball arithmetic.
fn reduce_2pi(x: &Dyadic, g: PrecisionContext) -> RealBall {
    let xb = RealBall::exact(x.clone());
    if x.abs_mag_up() <= Mag::from_u64(3) {
        return xb;
    }
    let two_pi = pi(g).mul_2exp(1);
    let k = xb.div(&two_pi, g).expect("pi > 0").mid().add(&Dyadic::pow2(-1)).floor();
    let kb = RealBall::exact(Dyadic::from_bigint(k));
    xb.sub(&kb.mul(&two_pi, g), g)
}

/// Taylor series `sum (-1)^n r^(2n+s) / (2n+s)!` with `s` = 1 (sin) or 0 (cos).
fn trig_series(r: &RealBall, s: i64, g: PrecisionContext) -> RealBall {
    let r2 = r.sqr(g);
    let target = Mag::pow2(-(g.bits() as i64) - 8);
    let mut term = if s == 1 { r.clone() } else { RealBall::one() };
    let mut sum = RealBall::zero();
    let mut n: i64 = 0;
    loop {
        sum = if n % 2 == 0 {
            sum.add(&term, g)
        } else {
            sum.sub(&term, g)
        };
        let a = 2 * n + s + 1;
        term = term.mul(&r2, g).div_i64(a * (a + 1), g);
        n += 1;
        // terms decrease once (2n+s+1)(2n+s+2) exceeds r^2 <= 16
        if a * (a + 1) > 32 && term.abs_upper() < target {
            return sum.add_error(term.abs_upper());
        }
    }
}

pub fn sin(x: &RealBall, ctx: PrecisionContext) -> RealBall {
    let g = ctx.with_guard(GUARD);
    let r = reduce_2pi(x.mid(), g);
    let v = trig_series(&r, 1, g);
    rounded(v.mid().clone(), v.rad().add_up(x.rad()), ctx)
}

pub fn cos(x: &RealBall, ctx: PrecisionContext) -> RealBall {
    let g = ctx.with_guard(GUARD);
    let r = reduce_2pi(x.mid(), g);
    let v = trig_series(&r, 0, g);
    rounded(v.mid().clone(), v.rad().add_up(x.rad()), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    const PI_50: &str = "3.1415926535897932384626433832795028841971693993751";

    #[test]
    fn pi_matches_reference_digits() {
        let p = pi(ctx());
        assert_eq!(&p.to_decimal(50)[..51], &PI_50[..51]);
        assert!(p.rad().log2_floor().unwrap() < -250);
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let a = atan(&RealBall::one(), ctx());
        let q = pi(ctx()).mul_2exp(-2);
        assert!(a.overlaps(&q));
        assert!(a.rad().log2_floor().unwrap() < -240);
    }

    #[test]
    fn asin_half_is_pi_over_six() {
        let a = asin(&RealBall::from_f64(0.5), ctx()).unwrap();
        let p6 = pi(ctx()).div_i64(6, ctx());
        assert!(a.overlaps(&p6));
        assert!(a.dist_upper(&p6).log2_floor().unwrap() < -240);
    }

    #[test]
    fn asin_endpoint() {
        let a = asin(&RealBall::one(), ctx()).unwrap();
        assert!(a.overlaps(&pi(ctx()).mul_2exp(-1)));
    }

    #[test]
    fn sin_cos_identities() {
        let x = RealBall::from_rational(&BigRational::new(7.into(), 3.into()), ctx());
        let s = sin(&x, ctx());
        let c = cos(&x, ctx());
        let one = s.sqr(ctx()).add(&c.sqr(ctx()), ctx());
        assert!(one.contains_rational(&BigRational::from_integer(1.into())));
        let big = RealBall::from_i64(100);
        assert!((sin(&big, ctx()).mid_f64() - 100f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn sin_of_asin_round_trips() {
        let a = BigRational::new(4630.into(), 4631.into());
        let t = asin(&RealBall::from_rational(&a, ctx()), ctx()).unwrap();
        assert!(sin(&t, ctx()).contains_rational(&a));
    }

    #[test]
    fn atan2_quadrants() {
        let one = RealBall::one();
        let m1 = RealBall::from_i64(-1);
        let p = pi(ctx());
        let v = atan2(&one, &m1, ctx()).unwrap();
        assert!(v.overlaps(&p.mul_i64(3, ctx()).mul_2exp(-2)));
        let v = atan2(&m1, &m1, ctx()).unwrap();
        assert!(v.overlaps(&p.mul_i64(-3, ctx()).mul_2exp(-2)));
        assert!(atan2(&RealBall::zero(), &RealBall::zero(), ctx()).is_err());
    }
}
