//! Rational maps `scale * num / den` of the Riemann sphere.
//!
//! The scalar factor is kept apart from the polynomials so that maps with
//! exact integer coefficients and a transcendental constant (such as
//! `1/(4 pi^2)`) keep exact polynomial parts, which keeps root clusters tight.

use num_complex::Complex64;

use super::complex::ComplexBall;
use super::context::PrecisionContext;
use super::poly::{horner_c64, Polynomial};
use super::roots::{poly_roots, RootCluster};
use super::sphere::SpherePoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    scale: ComplexBall,
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Builds `num / den` as given. The caller is responsible for the two
    /// polynomials having no common root; see [`RationalMap::reduce`].
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalMap> {
        RationalMap::with_scale(ComplexBall::one(), num, den)
    }

    pub fn with_scale(scale: ComplexBall, num: Polynomial, den: Polynomial) -> Result<RationalMap> {
        if den.is_zero() {
            return Err(Error::Invalid("rational map with zero denominator".into()));
        }
        if scale.contains_zero() && !scale.is_exact_zero() {
            return Err(Error::Indeterminate("scale factor not certified nonzero".into()));
        }
        if scale.is_exact_zero() || num.is_zero() {
            return Ok(RationalMap::constant(ComplexBall::zero()));
        }
        Ok(RationalMap { scale, num, den })
    }

    pub fn identity() -> RationalMap {
        RationalMap {
            scale: ComplexBall::one(),
            num: Polynomial::x(),
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: ComplexBall) -> RationalMap {
        RationalMap {
            scale: ComplexBall::one(),
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn scale(&self) -> &ComplexBall {
        &self.scale
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator with the scale folded in.
    pub fn scaled_numerator(&self, ctx: PrecisionContext) -> Polynomial {
        if self.scale == ComplexBall::one() {
            self.num.clone()
        } else {
            self.num.scale(&self.scale, ctx)
        }
    }

    pub fn num_degree(&self) -> usize {
        self.num.degree().unwrap_or(0)
    }

    pub fn den_degree(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }

    /// Degree as a map of the sphere.
    pub fn degree(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.num_degree().max(self.den_degree())
        }
    }

    /// Evaluation, switching to the chart `w = 1/z` at infinity.
    pub fn eval(&self, p: &SpherePoint, ctx: PrecisionContext) -> Result<SpherePoint> {
        match p {
            SpherePoint::Infinity => Ok(self.eval_infinity(ctx)),
            SpherePoint::Finite(z) => {
                let n = self.num.eval(z, ctx);
                let d = self.den.eval(z, ctx);
                if d.certifies_nonzero() {
                    Ok(SpherePoint::Finite(self.scale.mul(&n.div(&d, ctx)?, ctx)))
                } else if n.certifies_nonzero() {
                    Ok(SpherePoint::Infinity)
                } else if self.num.is_zero() {
                    Ok(SpherePoint::Finite(ComplexBall::zero()))
                } else {
                    Err(Error::Indeterminate(
                        "neither value nor pole certified at this precision".into(),
                    ))
                }
            }
        }
    }

    fn eval_infinity(&self, ctx: PrecisionContext) -> SpherePoint {
        if self.num.is_zero() {
            return SpherePoint::Finite(ComplexBall::zero());
        }
        let (dn, dd) = (self.num_degree(), self.den_degree());
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => SpherePoint::Infinity,
            std::cmp::Ordering::Less => SpherePoint::Finite(ComplexBall::zero()),
            std::cmp::Ordering::Equal => {
                let q = self.num.lead().unwrap().div(self.den.lead().unwrap(), ctx);
                SpherePoint::Finite(self.scale.mul(&q.expect("leading term nonzero"), ctx))
            }
        }
    }

    /// Finite-point evaluation returning `None` at a certified pole.
    pub fn eval_finite(&self, z: &ComplexBall, ctx: PrecisionContext) -> Result<Option<ComplexBall>> {
        Ok(match self.eval(&SpherePoint::Finite(z.clone()), ctx)? {
            SpherePoint::Finite(v) => Some(v),
            SpherePoint::Infinity => None,
        })
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self, ctx: PrecisionContext) -> Result<RationalMap> {
        if self.is_zero() {
            return Ok(RationalMap::constant(ComplexBall::zero()));
        }
        let n = self
            .num
            .derivative(ctx)
            .mul(&self.den, ctx)
            .sub(&self.num.mul(&self.den.derivative(ctx), ctx), ctx);
        let d = self.den.mul(&self.den, ctx);
        RationalMap::with_scale(self.scale.clone(), n, d)?.reduce(ctx)
    }

    /// `self o inner`, reduced.
    pub fn compose(&self, inner: &RationalMap, ctx: PrecisionContext) -> Result<RationalMap> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let a = inner.scaled_numerator(ctx);
        let b = &inner.den;
        let (dn, dd) = (self.num_degree(), self.den_degree());
        let mut n = self.num.homogenize(&a, b, dn, ctx);
        let mut d = self.den.homogenize(&a, b, dd, ctx);
        if dd >= dn {
            n = n.mul(&b.pow((dd - dn) as u32, ctx), ctx);
        } else {
            d = d.mul(&b.pow((dn - dd) as u32, ctx), ctx);
        }
        RationalMap::with_scale(self.scale.clone(), n, d)?.reduce(ctx)
    }

    /// Product of two maps, reduced.
    pub fn mul(&self, o: &RationalMap, ctx: PrecisionContext) -> Result<RationalMap> {
        RationalMap::with_scale(
            self.scale.mul(&o.scale, ctx),
            self.num.mul(&o.num, ctx),
            self.den.mul(&o.den, ctx),
        )?
        .reduce(ctx)
    }

    /// Removes common roots: exact powers of `z` first, then every pair of
    /// overlapping numerator/denominator root clusters, deflating both
    /// polynomials by the tighter of the two balls.
    pub fn reduce(&self, ctx: PrecisionContext) -> Result<RationalMap> {
        if self.num.is_zero() {
            return Ok(RationalMap::constant(ComplexBall::zero()));
        }
        let k = self.num.exact_zero_prefix().min(self.den.exact_zero_prefix());
        let mut num = self.num.shift_down(k);
        let mut den = self.den.shift_down(k);
        if num.degree().unwrap_or(0) >= 1 && den.degree().unwrap_or(0) >= 1 {
            let nr = poly_roots(&num, ctx)?;
            let mut dr = poly_roots(&den, ctx)?;
            for RootCluster {
                root: a,
                multiplicity: ma,
            } in nr
            {
                let mut left = ma;
                for b in dr.iter_mut() {
                    if left == 0 {
                        break;
                    }
                    if b.multiplicity == 0 || !a.overlaps(&b.root) {
                        continue;
                    }
                    let t = left.min(b.multiplicity);
                    let r = if a.rad() <= b.root.rad() { &a } else { &b.root };
                    for _ in 0..t {
                        num = num.deflate(r, ctx);
                        den = den.deflate(r, ctx);
                    }
                    left -= t;
                    b.multiplicity -= t;
                }
            }
        }
        RationalMap::with_scale(self.scale.clone(), num, den)
    }

    /// Same map with a monic denominator and the scale folded into the
    /// numerator; used for comparisons.
    pub fn normalized(&self, ctx: PrecisionContext) -> Result<RationalMap> {
        let lead = self.den.lead().expect("denominator nonzero").clone();
        let inv = lead.inv(ctx)?;
        let f = self.scale.mul(&inv, ctx);
        Ok(RationalMap {
            scale: ComplexBall::one(),
            num: self.num.scale(&f, ctx),
            den: self.den.scale(&inv, ctx),
        })
    }

    /// Whether the two maps can be equal: same degrees and overlapping
    /// coefficients after normalisation.
    pub fn overlaps(&self, o: &RationalMap, ctx: PrecisionContext) -> Result<bool> {
        let a = self.normalized(ctx)?;
        let b = o.normalized(ctx)?;
        Ok(a.num.degree() == b.num.degree()
            && a.den.degree() == b.den.degree()
            && a.num.overlaps(&b.num)
            && a.den.overlaps(&b.den))
    }

    /// Largest coefficient radius after normalisation.
    pub fn max_radius(&self, ctx: PrecisionContext) -> Result<f64> {
        let a = self.normalized(ctx)?;
        Ok(a.num
            .coeffs()
            .iter()
            .chain(a.den.coeffs())
            .map(|c| c.rad().to_f64())
            .fold(0.0, f64::max))
    }

    pub fn to_float(&self) -> FloatMap {
        FloatMap {
            scale: self.scale.mid_c64(),
            num: self.num.to_c64(),
            den: self.den.to_c64(),
        }
    }
}

/// Double-precision copy of a rational map for path tracing.
#[derive(Clone, Debug)]
pub struct FloatMap {
    pub scale: Complex64,
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl FloatMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.scale * horner_c64(&self.num, z) / horner_c64(&self.den, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fin(v: i64) -> SpherePoint {
        SpherePoint::from_i64(v)
    }

    /// 4(y^2 - y + 1)^3 / (27 y^2 (1 - y)^2)
    fn g() -> RationalMap {
        let c = ctx();
        let base = Polynomial::from_i64s(&[1, -1, 1]);
        let num = base.pow(3, c).scale(&ComplexBall::from_i64(4), c);
        let den = Polynomial::from_i64s(&[0, 0, 1])
            .mul(&Polynomial::from_i64s(&[1, -1]).pow(2, c), c)
            .scale(&ComplexBall::from_i64(27), c);
        RationalMap::new(num, den).unwrap()
    }

    #[test]
    fn g_at_minus_one_and_poles() {
        let c = ctx();
        let v = g().eval(&fin(-1), c).unwrap();
        assert!(v.finite().unwrap().contains_rational(&q(1, 1), &q(0, 1)));
        assert!(g().eval(&fin(0), c).unwrap().is_infinity());
        assert!(g().eval(&fin(1), c).unwrap().is_infinity());
        assert!(g().eval(&SpherePoint::Infinity, c).unwrap().is_infinity());
        let v = g().eval(&fin(3), c).unwrap();
        assert!(v.finite().unwrap().contains_rational(&q(343, 243), &q(0, 1)));
    }

    #[test]
    fn compose_polynomials() {
        let c = ctx();
        let sq = RationalMap::new(Polynomial::from_i64s(&[0, 0, 1]), Polynomial::one()).unwrap();
        let sh = RationalMap::new(Polynomial::from_i64s(&[1, 1]), Polynomial::one()).unwrap();
        let h = sq.compose(&sh, c).unwrap();
        assert_eq!(h.numerator(), &Polynomial::from_i64s(&[1, 2, 1]));
        assert_eq!(h.denominator(), &Polynomial::one());
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let c = ctx();
        // (z-1)(z+2) / ((z-1)^2 z)
        let n = Polynomial::from_i64s(&[-2, 1, 1]);
        let d = Polynomial::from_i64s(&[0, 1, -2, 1]);
        let m = RationalMap::new(n, d).unwrap().reduce(c).unwrap();
        assert_eq!(m.num_degree(), 1);
        assert_eq!(m.den_degree(), 2);
        let v = m.eval(&fin(2), c).unwrap();
        assert!(v.finite().unwrap().contains_rational(&q(2, 1), &q(0, 1)));
    }

    #[test]
    fn derivative_of_g_vanishes_at_sixth_roots() {
        let c = ctx();
        let dg = g().derivative(c).unwrap();
        let roots = poly_roots(dg.numerator(), c).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        for t in [Complex64::new(0.5, s3), Complex64::new(0.5, -s3)] {
            let hit = roots.iter().find(|r| (r.root.mid_c64() - t).norm() < 1e-12);
            assert_eq!(hit.map(|r| r.multiplicity), Some(2));
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let m = RationalMap::constant(ComplexBall::from_i64(7));
        assert!(m.derivative(ctx()).unwrap().is_zero());
    }

    #[test]
    fn identity_is_neutral_for_compose() {
        let c = ctx();
        let h = g().compose(&RationalMap::identity(), c).unwrap();
        assert!(h.overlaps(&g(), c).unwrap());
        let h = RationalMap::identity().compose(&g(), c).unwrap();
        assert!(h.overlaps(&g(), c).unwrap());
    }
}
