//! Complex disc balls: every member `z` satisfies `|z - mid| <= rad`.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use super::context::PrecisionContext;
use super::dyadic::Dyadic;
use super::mag::Mag;
use super::real::{mag_to_dyadic, RealBall};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Mag,
}

fn rounded(re: Dyadic, im: Dyadic, rad: Mag, ctx: PrecisionContext) -> ComplexBall {
    let (re, e1) = re.round(ctx.bits());
    let (im, e2) = im.round(ctx.bits());
    ComplexBall {
        re,
        im,
        rad: rad.add_up(e1).add_up(e2),
    }
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Mag) -> ComplexBall {
        ComplexBall { re, im, rad }
    }

    pub fn exact(re: Dyadic, im: Dyadic) -> ComplexBall {
        ComplexBall {
            re,
            im,
            rad: Mag::ZERO,
        }
    }

    pub fn zero() -> ComplexBall {
        ComplexBall::exact(Dyadic::zero(), Dyadic::zero())
    }

    pub fn one() -> ComplexBall {
        ComplexBall::from_i64(1)
    }

    pub fn i() -> ComplexBall {
        ComplexBall::exact(Dyadic::zero(), Dyadic::from_i64(1))
    }

    pub fn from_i64(v: i64) -> ComplexBall {
        ComplexBall::exact(Dyadic::from_i64(v), Dyadic::zero())
    }

    pub fn from_real(x: &RealBall) -> ComplexBall {
        ComplexBall {
            re: x.mid().clone(),
            im: Dyadic::zero(),
            rad: x.rad(),
        }
    }

    pub fn from_parts(re: &RealBall, im: &RealBall) -> ComplexBall {
        ComplexBall {
            re: re.mid().clone(),
            im: im.mid().clone(),
            rad: re.rad().add_up(im.rad()),
        }
    }

    pub fn from_rational(q: &BigRational, ctx: PrecisionContext) -> ComplexBall {
        ComplexBall::from_real(&RealBall::from_rational(q, ctx))
    }

    /// Exact conversion of an `f64` pair.
    pub fn from_c64(z: Complex64) -> ComplexBall {
        ComplexBall::exact(Dyadic::from_f64(z.re), Dyadic::from_f64(z.im))
    }

    pub fn re_mid(&self) -> &Dyadic {
        &self.re
    }

    pub fn im_mid(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn mid(&self) -> ComplexBall {
        ComplexBall::exact(self.re.clone(), self.im.clone())
    }

    pub fn mid_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn with_rad(&self, rad: Mag) -> ComplexBall {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.clone(),
            rad,
        }
    }

    pub fn add_error(&self, e: Mag) -> ComplexBall {
        self.with_rad(self.rad.add_up(e))
    }

    pub fn real(&self) -> RealBall {
        RealBall::new(self.re.clone(), self.rad)
    }

    pub fn imag(&self) -> RealBall {
        RealBall::new(self.im.clone(), self.rad)
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn mul_2exp(&self, e: i64) -> ComplexBall {
        ComplexBall {
            re: self.re.mul_2exp(e),
            im: self.im.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
        }
    }

    /// Multiplication by `i`, exact.
    pub fn mul_i(&self) -> ComplexBall {
        ComplexBall {
            re: self.im.neg(),
            im: self.re.clone(),
            rad: self.rad,
        }
    }

    pub fn mid_abs_up(&self) -> Mag {
        Mag::hypot_up(self.re.abs_mag_up(), self.im.abs_mag_up())
    }

    pub fn mid_abs_down(&self) -> Mag {
        Mag::hypot_down(self.re.abs_mag_down(), self.im.abs_mag_down())
    }

    /// Upper bound of `|z|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid_abs_up().add_up(self.rad)
    }

    /// Lower bound of `|z|` over the ball.
    pub fn abs_lower(&self) -> Mag {
        self.mid_abs_down().sub_down(self.rad)
    }

    /// `|mid| > rad`: no member of the ball is zero.
    pub fn certifies_nonzero(&self) -> bool {
        self.mid_abs_down() > self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.certifies_nonzero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    fn mid_diff(&self, o: &ComplexBall) -> (Dyadic, Dyadic) {
        (self.re.sub(&o.re), self.im.sub(&o.im))
    }

    /// Lower bound on the distance between any member of `self` and any of `o`.
    pub fn dist_lower(&self, o: &ComplexBall) -> Mag {
        let (dr, di) = self.mid_diff(o);
        Mag::hypot_down(dr.abs_mag_down(), di.abs_mag_down())
            .sub_down(self.rad.add_up(o.rad))
    }

    /// Upper bound on the distance between any two members.
    pub fn dist_upper(&self, o: &ComplexBall) -> Mag {
        let (dr, di) = self.mid_diff(o);
        Mag::hypot_up(dr.abs_mag_up(), di.abs_mag_up())
            .add_up(self.rad)
            .add_up(o.rad)
    }

    /// Upper bound on the distance between the two midpoints.
    pub fn mid_dist_up(&self, o: &ComplexBall) -> Mag {
        let (dr, di) = self.mid_diff(o);
        Mag::hypot_up(dr.abs_mag_up(), di.abs_mag_up())
    }

    pub fn overlaps(&self, o: &ComplexBall) -> bool {
        let (dr, di) = self.mid_diff(o);
        Mag::hypot_down(dr.abs_mag_down(), di.abs_mag_down()) <= self.rad.add_up(o.rad)
    }

    /// Every member of `o` is a member of `self`.
    pub fn contains(&self, o: &ComplexBall) -> bool {
        self.mid_dist_up(o).add_up(o.rad) <= self.rad
    }

    pub fn contains_rational(&self, re: &BigRational, im: &BigRational) -> bool {
        use super::real::{dyadic_to_rational, mag_to_rational};
        let dr = dyadic_to_rational(&self.re) - re;
        let di = dyadic_to_rational(&self.im) - im;
        let r = mag_to_rational(self.rad);
        &dr * &dr + &di * &di <= &r * &r
    }

    pub fn add(&self, o: &ComplexBall, ctx: PrecisionContext) -> ComplexBall {
        if let Some(z) = self.absorb(o, ctx) {
            return z;
        }
        if let Some(z) = o.absorb(self, ctx) {
            return z;
        }
        rounded(
            self.re.add(&o.re),
            self.im.add(&o.im),
            self.rad.add_up(o.rad),
            ctx,
        )
    }

    /// Fold a negligible `o` into the radius of `self`.
    fn absorb(&self, o: &ComplexBall, ctx: PrecisionContext) -> Option<ComplexBall> {
        let ta = self.re.top().max(self.im.top())?;
        let tb = match o.re.top().max(o.im.top()) {
            Some(t) => t,
            None => {
                return Some(rounded(
                    self.re.clone(),
                    self.im.clone(),
                    self.rad.add_up(o.rad),
                    ctx,
                ))
            }
        };
        if ta - tb > ctx.bits() as i64 + 64 {
            Some(rounded(
                self.re.clone(),
                self.im.clone(),
                self.rad.add_up(o.rad).add_up(o.mid_abs_up()),
                ctx,
            ))
        } else {
            None
        }
    }

    pub fn sub(&self, o: &ComplexBall, ctx: PrecisionContext) -> ComplexBall {
        self.add(&o.neg(), ctx)
    }

    pub fn mul(&self, o: &ComplexBall, ctx: PrecisionContext) -> ComplexBall {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Mag::ZERO
        } else {
            self.mid_abs_up()
                .mul_up(o.rad)
                .add_up(o.mid_abs_up().mul_up(self.rad))
                .add_up(self.rad.mul_up(o.rad))
        };
        rounded(re, im, rad, ctx)
    }

    pub fn mul_real(&self, x: &RealBall, ctx: PrecisionContext) -> ComplexBall {
        self.mul(&ComplexBall::from_real(x), ctx)
    }

    pub fn mul_i64(&self, k: i64, ctx: PrecisionContext) -> ComplexBall {
        self.mul(&ComplexBall::from_i64(k), ctx)
    }

    pub fn sqr(&self, ctx: PrecisionContext) -> ComplexBall {
        self.mul(self, ctx)
    }

    pub fn pow(&self, n: u32, ctx: PrecisionContext) -> ComplexBall {
        let mut acc = ComplexBall::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(ctx);
            }
        }
        acc
    }

    pub fn inv(&self, ctx: PrecisionContext) -> Result<ComplexBall> {
        let lo = self.mid_abs_down();
        let gap = lo.sub_down(self.rad);
        if gap.is_zero() {
            return Err(Error::Indeterminate(
                "complex inverse of a ball containing zero".into(),
            ));
        }
        let d = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let prec = ctx.bits() + 8;
        let (re, e1) = self.re.div(&d, prec);
        let (im, e2) = self.im.neg().div(&d, prec);
        let rad = if self.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.div_up(lo.mul_down(gap))
        };
        Ok(rounded(re, im, rad.add_up(e1).add_up(e2), ctx))
    }

    pub fn div(&self, o: &ComplexBall, ctx: PrecisionContext) -> Result<ComplexBall> {
        let inv = o.inv(ctx.with_guard(16))?;
        Ok(self.mul(&inv, ctx))
    }

    pub fn div_i64(&self, d: i64, ctx: PrecisionContext) -> ComplexBall {
        self.div(&ComplexBall::from_i64(d), ctx)
            .expect("division by a nonzero integer")
    }

    pub fn div_real(&self, x: &RealBall, ctx: PrecisionContext) -> Result<ComplexBall> {
        self.div(&ComplexBall::from_real(x), ctx)
    }

    /// Square root on the branch nearest to `reference` (which must be
    /// nonzero). Fails when `self / reference^2` is not certified to lie in
    /// the open right half-plane.
    pub fn sqrt_near(&self, reference: &ComplexBall, ctx: PrecisionContext) -> Result<ComplexBall> {
        let guard = ctx.with_guard(16);
        let r = reference.mid();
        if r.is_exact_zero() {
            return Err(Error::Indeterminate("zero branch reference".into()));
        }
        let w = self.div(&r.sqr(guard), guard)?;
        let s = w.sqrt_right_half(guard)?;
        Ok(r.mul(&s, ctx))
    }

    /// Square root continuing the principal branch at the midpoint. A ball
    /// containing zero yields a ball around zero.
    pub fn sqrt(&self, ctx: PrecisionContext) -> Result<ComplexBall> {
        if self.contains_zero() {
            let hi = self.abs_upper().sqrt_up();
            return Ok(ComplexBall::new(Dyadic::zero(), Dyadic::zero(), hi));
        }
        let (sr, si) = sqrt_mid_approx(&self.re, &self.im, ctx.bits() / 2 + 16);
        self.sqrt_near(&ComplexBall::exact(sr, si), ctx)
    }

    fn sqrt_right_half(&self, ctx: PrecisionContext) -> Result<ComplexBall> {
        if !(self.re.signum() > 0 && self.re.abs_mag_down() > self.rad) {
            return Err(Error::Indeterminate(
                "square root argument not certified in the right half-plane".into(),
            ));
        }
        let (sr, si) = sqrt_mid_approx(&self.re, &self.im, ctx.bits() + 8);
        let (sr, _) = sr.round(ctx.bits() + 8);
        let (si, _) = si.round(ctx.bits() + 8);
        // |s - sqrt(m)| <= |s^2 - m| / |s|  (both roots in |arg| < pi/4)
        let s2r = sr.mul(&sr).sub(&si.mul(&si)).sub(&self.re);
        let s2i = sr.mul(&si).mul_2exp(1).sub(&self.im);
        let res = Mag::hypot_up(s2r.abs_mag_up(), s2i.abs_mag_up());
        let s_abs = Mag::hypot_down(sr.abs_mag_down(), si.abs_mag_down());
        let mut rad = if res.is_zero() {
            Mag::ZERO
        } else {
            res.div_up(s_abs)
        };
        if !self.rad.is_zero() {
            // |sqrt(z) - sqrt(m)| <= r / |sqrt(m)|
            rad = rad.add_up(self.rad.div_up(self.mid_abs_down().sqrt_down()));
        }
        Ok(rounded(sr, si, rad, ctx))
    }

    /// Argument in `(-pi, pi]` of the midpoint, widened to cover the disc.
    pub fn arg(&self, ctx: PrecisionContext) -> Result<RealBall> {
        if !self.certifies_nonzero() {
            return Err(Error::Indeterminate(
                "argument of a ball containing zero".into(),
            ));
        }
        let g = ctx.with_guard(16);
        let x = RealBall::exact(self.re.clone());
        let y = RealBall::exact(self.im.clone());
        let base = super::elementary::atan2(&y, &x, g)?;
        // sup over the disc of |arg z - arg m| <= asin(r/|m|) <= (pi/2) r/|m|
        let spread = if self.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad
                .div_up(self.mid_abs_down())
                .mul_up(Mag::from_f64_up(std::f64::consts::FRAC_PI_2 * (1.0 + 1e-12)))
        };
        let out = base.add_error(spread);
        Ok(super::real::rounded(out.mid().clone(), out.rad(), ctx))
    }

    /// `exp(i theta)` for a real ball `theta`.
    pub fn cis(theta: &RealBall, ctx: PrecisionContext) -> ComplexBall {
        let c = super::elementary::cos(theta, ctx);
        let s = super::elementary::sin(theta, ctx);
        ComplexBall::from_parts(&c, &s)
    }

    pub fn to_decimal_parts(&self, digits: usize) -> (String, String) {
        (self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

/// Approximate principal square root of `re + i im` (no error bound).
pub(crate) fn sqrt_mid_approx(re: &Dyadic, im: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    if im.is_zero() {
        return if re.signum() >= 0 {
            (re.sqrt(prec).0, Dyadic::zero())
        } else {
            (Dyadic::zero(), re.neg().sqrt(prec).0)
        };
    }
    let norm2 = re.mul(re).add(&im.mul(im));
    let (abs, _) = norm2.sqrt(prec + 8);
    if re.signum() >= 0 {
        let (t, _) = abs.add(re).mul_2exp(-1).sqrt(prec + 4);
        let (u, _) = im.div(&t.mul_2exp(1), prec);
        (t, u)
    } else {
        let (t, _) = abs.sub(re).mul_2exp(-1).sqrt(prec + 4);
        let (u, _) = im.abs().div(&t.mul_2exp(1), prec);
        if im.signum() >= 0 {
            (u, t)
        } else {
            (u, t.neg())
        }
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i +/- {})",
            self.re.to_decimal(20),
            self.im.to_decimal(20),
            self.rad
        )
    }
}

#[allow(dead_code)]
pub(crate) fn mag_ball(m: Mag) -> ComplexBall {
    ComplexBall::new(mag_to_dyadic(m), Dyadic::zero(), Mag::ZERO)
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

    fn cq(a: (i64, i64), b: (i64, i64)) -> ComplexBall {
        ComplexBall::from_parts(
            &RealBall::from_rational(&q(a.0, a.1), ctx()),
            &RealBall::from_rational(&q(b.0, b.1), ctx()),
        )
    }

    #[test]
    fn field_operations_contain_exact_values() {
        let a = cq((1, 3), (2, 5));
        let b = cq((-7, 2), (1, 9));
        let p = a.mul(&b, ctx());
        // (1/3 + 2/5 i)(-7/2 + 1/9 i) = (-7/6 - 2/45) + (1/27 - 7/5) i
        assert!(p.contains_rational(&(q(-7, 6) - q(2, 45)), &(q(1, 27) - q(7, 5))));
        let back = p.div(&b, ctx()).unwrap();
        assert!(back.contains_rational(&q(1, 3), &q(2, 5)));
    }

    #[test]
    fn sqrt_of_minus_one_is_i_on_principal_branch() {
        let s = ComplexBall::from_i64(-1).sqrt(ctx()).unwrap();
        assert!(s.contains_rational(&q(0, 1), &q(1, 1)));
        assert!(s.rad().log2_floor().is_none_or(|e| e < -200));
    }

    #[test]
    fn sqrt_near_picks_requested_branch() {
        let z = cq((-3, 1), (4, 1)); // sqrt = +/-(1 + 2i)
        let r = ComplexBall::from_c64(Complex64::new(-1.0, -2.1));
        let s = z.sqrt_near(&r, ctx()).unwrap();
        assert!(s.contains_rational(&q(-1, 1), &q(-2, 1)));
    }

    #[test]
    fn inverse_of_ball_around_zero_fails() {
        let z = ComplexBall::new(Dyadic::zero(), Dyadic::zero(), Mag::pow2(-10));
        assert!(z.inv(ctx()).is_err());
        assert!(z.contains_zero());
    }

    #[test]
    fn overlap_and_containment() {
        let a = ComplexBall::new(Dyadic::zero(), Dyadic::zero(), Mag::one());
        let b = ComplexBall::new(Dyadic::from_f64(0.5), Dyadic::zero(), Mag::pow2(-2));
        let c = ComplexBall::new(Dyadic::from_i64(3), Dyadic::zero(), Mag::pow2(-2));
        assert!(a.contains(&b));
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
        assert!(c.dist_lower(&a).to_f64() > 1.7);
    }

    #[test]
    fn arg_of_negative_imaginary_axis() {
        let z = ComplexBall::from_i64(-2).mul_i();
        let a = z.arg(ctx()).unwrap();
        assert!((a.mid_f64() + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
