//! Real balls `[mid - rad, mid + rad]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::context::PrecisionContext;
use super::dyadic::Dyadic;
use super::mag::Mag;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RealBall {
    mid: Dyadic,
    rad: Mag,
}

pub(crate) fn rounded(mid: Dyadic, rad: Mag, ctx: PrecisionContext) -> RealBall {
    let (m, e) = mid.round(ctx.bits());
    RealBall {
        mid: m,
        rad: rad.add_up(e),
    }
}

impl RealBall {
    pub fn new(mid: Dyadic, rad: Mag) -> RealBall {
        RealBall { mid, rad }
    }

    pub fn exact(mid: Dyadic) -> RealBall {
        RealBall { mid, rad: Mag::ZERO }
    }

    pub fn zero() -> RealBall {
        RealBall::exact(Dyadic::zero())
    }

    pub fn one() -> RealBall {
        RealBall::from_i64(1)
    }

    pub fn from_i64(v: i64) -> RealBall {
        RealBall::exact(Dyadic::from_i64(v))
    }

    pub fn from_f64(x: f64) -> RealBall {
        RealBall::exact(Dyadic::from_f64(x))
    }

    pub fn from_rational(q: &BigRational, ctx: PrecisionContext) -> RealBall {
        let n = Dyadic::from_bigint(q.numer().clone());
        let d = Dyadic::from_bigint(q.denom().clone());
        let (m, e) = n.div(&d, ctx.bits());
        RealBall { mid: m, rad: e }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn add_error(&self, e: Mag) -> RealBall {
        RealBall {
            mid: self.mid.clone(),
            rad: self.rad.add_up(e),
        }
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid.abs_mag_up().add_up(self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        self.mid.abs_mag_down().sub_down(self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs_mag_down() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid.signum() > 0 && self.mid.abs_mag_down() > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.signum() < 0 && self.mid.abs_mag_down() > self.rad
    }

    /// Exact test that the rational `q` lies in the ball.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let mid = dyadic_to_rational(&self.mid);
        let rad = mag_to_rational(self.rad);
        (q - mid).abs() <= rad
    }

    /// Upper bound on `|self - other|` between any two members.
    pub fn dist_upper(&self, o: &RealBall) -> Mag {
        self.mid
            .sub(&o.mid)
            .abs_mag_up()
            .add_up(self.rad)
            .add_up(o.rad)
    }

    /// True when the two balls intersect.
    pub fn overlaps(&self, o: &RealBall) -> bool {
        self.mid.sub(&o.mid).abs_mag_down() <= self.rad.add_up(o.rad)
    }

    pub fn neg(&self) -> RealBall {
        RealBall {
            mid: self.mid.neg(),
            rad: self.rad,
        }
    }

    pub fn abs(&self) -> RealBall {
        if self.contains_zero() {
            let hi = self.abs_upper();
            let half = hi.mul_2exp(-1);
            let mid = mag_to_dyadic(half);
            RealBall { mid, rad: half }
        } else {
            RealBall {
                mid: self.mid.abs(),
                rad: self.rad,
            }
        }
    }

    pub fn mul_2exp(&self, e: i64) -> RealBall {
        RealBall {
            mid: self.mid.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
        }
    }

    pub fn add(&self, o: &RealBall, ctx: PrecisionContext) -> RealBall {
        if let Some(r) = absorb_tiny(&self.mid, self.rad, &o.mid, o.rad, ctx) {
            return r;
        }
        if let Some(r) = absorb_tiny(&o.mid, o.rad, &self.mid, self.rad, ctx) {
            return r;
        }
        rounded(self.mid.add(&o.mid), self.rad.add_up(o.rad), ctx)
    }

    pub fn sub(&self, o: &RealBall, ctx: PrecisionContext) -> RealBall {
        self.add(&o.neg(), ctx)
    }

    pub fn mul(&self, o: &RealBall, ctx: PrecisionContext) -> RealBall {
        let rad = self
            .mid
            .abs_mag_up()
            .mul_up(o.rad)
            .add_up(o.mid.abs_mag_up().mul_up(self.rad))
            .add_up(self.rad.mul_up(o.rad));
        rounded(self.mid.mul(&o.mid), rad, ctx)
    }

    pub fn sqr(&self, ctx: PrecisionContext) -> RealBall {
        self.mul(self, ctx)
    }

    pub fn div(&self, o: &RealBall, ctx: PrecisionContext) -> Result<RealBall> {
        let bl = o.mid.abs_mag_down();
        let gap = bl.sub_down(o.rad);
        if gap.is_zero() {
            return Err(Error::Indeterminate(
                "real division by a ball containing zero".into(),
            ));
        }
        let (q, e) = self.mid.div(&o.mid, ctx.bits());
        // |a/b - am/bm| <= (ra |bm| + |am| rb) / (|bm| (|bm| - rb))
        let num = self
            .rad
            .mul_up(o.mid.abs_mag_up())
            .add_up(self.mid.abs_mag_up().mul_up(o.rad));
        let rad = if num.is_zero() {
            Mag::ZERO
        } else {
            num.div_up(bl.mul_down(gap))
        };
        Ok(RealBall {
            mid: q,
            rad: rad.add_up(e),
        })
    }

    pub fn inv(&self, ctx: PrecisionContext) -> Result<RealBall> {
        RealBall::one().div(self, ctx)
    }

    pub fn div_i64(&self, d: i64, ctx: PrecisionContext) -> RealBall {
        self.div(&RealBall::from_i64(d), ctx)
            .expect("division by a nonzero integer")
    }

    pub fn mul_i64(&self, k: i64, ctx: PrecisionContext) -> RealBall {
        self.mul(&RealBall::from_i64(k), ctx)
    }

    /// Square root; fails unless the ball is certified positive (or exactly zero).
    pub fn sqrt(&self, ctx: PrecisionContext) -> Result<RealBall> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(RealBall::zero());
        }
        if !self.is_positive() {
            return Err(Error::Indeterminate(
                "square root of a ball not certified positive".into(),
            ));
        }
        Ok(self.sqrt_positive(ctx))
    }

    /// Square root of the nonnegative part of the ball.
    pub fn sqrt_nonneg(&self, ctx: PrecisionContext) -> RealBall {
        if self.is_positive() {
            return self.sqrt_positive(ctx);
        }
        let hi = if self.mid.signum() > 0 {
            self.mid.abs_mag_up().add_up(self.rad)
        } else {
            self.rad.sub_up(self.mid.abs_mag_down())
        };
        let top = hi.sqrt_up();
        let half = top.mul_2exp(-1);
        RealBall {
            mid: mag_to_dyadic(half),
            rad: half,
        }
    }

    fn sqrt_positive(&self, ctx: PrecisionContext) -> RealBall {
        let (s, e) = self.mid.sqrt(ctx.bits());
        // |sqrt(x) - sqrt(m)| <= r / sqrt(m)
        let rad = if self.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.div_up(self.mid.abs_mag_down().sqrt_down())
        };
        RealBall {
            mid: s,
            rad: rad.add_up(e),
        }
    }

    pub fn pow(&self, n: u32, ctx: PrecisionContext) -> RealBall {
        let mut acc = RealBall::one();
        for _ in 0..n {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    /// Greater-or-equal certified: every member of `self` is at least every
    /// member of `o`.
    pub fn certainly_ge(&self, o: &RealBall, ctx: PrecisionContext) -> bool {
        let d = self.sub(o, ctx);
        d.mid.signum() >= 0 && d.mid.abs_mag_down() >= d.rad
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        self.mid.to_decimal(digits)
    }
}

/// If `b` is far below the rounding unit of `a`, fold it into the radius.
pub(crate) fn absorb_tiny(
    a: &Dyadic,
    ra: Mag,
    b: &Dyadic,
    rb: Mag,
    ctx: PrecisionContext,
) -> Option<RealBall> {
    let (ta, tb) = (a.top()?, b.top()?);
    if ta - tb > ctx.bits() as i64 + 64 {
        Some(rounded(a.clone(), ra.add_up(rb).add_up(b.abs_mag_up()), ctx))
    } else {
        None
    }
}

pub(crate) fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    let m = d.mantissa().clone();
    let e = d.exponent();
    if e >= 0 {
        BigRational::from_integer(m << e as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-e) as usize)
    }
}

pub(crate) fn mag_to_dyadic(m: Mag) -> Dyadic {
    if m.is_zero() {
        Dyadic::zero()
    } else {
        Dyadic::new(BigInt::from(m.mantissa()), m.exponent())
    }
}

pub(crate) fn mag_to_rational(m: Mag) -> BigRational {
    if m.is_zero() {
        BigRational::zero()
    } else {
        dyadic_to_rational(&mag_to_dyadic(m))
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid.to_decimal(25), self.rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_conversion_contains_value() {
        let x = RealBall::from_rational(&q(1, 3), ctx());
        assert!(x.contains_rational(&q(1, 3)));
        assert!(!x.contains_rational(&q(1, 3 + 1)));
        assert!(x.rad().log2_floor().unwrap() < -250);
    }

    #[test]
    fn arithmetic_contains_exact_result() {
        let a = RealBall::from_rational(&q(2, 7), ctx());
        let b = RealBall::from_rational(&q(-5, 11), ctx());
        let s = a.mul(&b, ctx()).add(&a, ctx()).div(&b, ctx()).unwrap();
        let exact = (q(2, 7) * q(-5, 11) + q(2, 7)) / q(-5, 11);
        assert!(s.contains_rational(&exact));
    }

    #[test]
    fn sqrt_requires_positive() {
        assert!(RealBall::from_i64(-1).sqrt(ctx()).is_err());
        let two = RealBall::from_i64(2).sqrt(ctx()).unwrap();
        assert!(two.sqr(ctx()).contains_rational(&q(2, 1)));
        let z = RealBall::new(Dyadic::zero(), Mag::pow2(-10)).sqrt_nonneg(ctx());
        assert!(z.contains_zero());
        assert!(z.abs_upper() >= Mag::pow2(-5));
    }

    #[test]
    fn division_by_ball_with_zero_is_indeterminate() {
        let z = RealBall::new(Dyadic::from_f64(1e-30), Mag::pow2(-90));
        assert!(RealBall::one().div(&z, ctx()).is_err());
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let a = RealBall::one();
        let b = RealBall::exact(Dyadic::pow2(-2000));
        let s = a.add(&b, ctx());
        assert_eq!(s.mid(), &Dyadic::from_i64(1));
        assert!(!s.rad().is_zero());
    }
}
