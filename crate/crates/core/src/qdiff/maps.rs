//! The two rational maps of the construction and the parameter `c`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{
    format_rational, rational, ComplexBall, PrecisionContext, Polynomial, Rational, RationalMap,
    RealBall, SpherePoint,
};

/// `r` in `(0, 1/2)` with `s = r sqrt(3)` and `w = 1/2 + i s`.
#[derive(Clone, Debug)]
pub struct SParameter {
    r: Rational,
    s: RealBall,
    w: ComplexBall,
}

impl SParameter {
    pub fn new(r: Rational, ctx: PrecisionContext) -> Result<SParameter> {
        if !(r > Rational::zero() && r < rational(1, 2)) {
            return Err(Error::Range(format!(
                "r = {} is not in (0, 1/2)",
                format_rational(&r)
            )));
        }
        let s = RealBall::from_rational(&r, ctx).mul(&RealBall::from_i64(3).sqrt(ctx)?, ctx);
        let w = ComplexBall::from_parts(&RealBall::from_rational(&rational(1, 2), ctx), &s);
        Ok(SParameter { r, s, w })
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn s(&self) -> &RealBall {
        &self.s
    }

    pub fn w(&self) -> &ComplexBall {
        &self.w
    }
}

/// `g(y) = 4 (y^2 - y + 1)^3 / (27 y^2 (1 - y)^2)`.
pub fn map_g() -> RationalMap {
    // exact integer coefficients need no rounding
    let ctx = PrecisionContext::default();
    let num = Polynomial::from_i64s(&[1, -1, 1])
        .pow(3, ctx)
        .scale(&ComplexBall::from_i64(4), ctx);
    let den = Polynomial::from_i64s(&[0, 0, 1])
        .mul(&Polynomial::from_i64s(&[1, -1]).pow(2, ctx), ctx)
        .scale(&ComplexBall::from_i64(27), ctx);
    RationalMap::new(num, den).expect("nonzero denominator")
}

/// `f(x) = (x - c)^2 / ((1 - c)^2 x)`.
pub fn map_f(c: &ComplexBall, ctx: PrecisionContext) -> Result<RationalMap> {
    let one_minus = ComplexBall::one().sub(c, ctx);
    let scale = one_minus.sqr(ctx).inv(ctx)?;
    let num = Polynomial::new(vec![c.sqr(ctx), c.mul_i64(-2, ctx), ComplexBall::one()]);
    RationalMap::with_scale(scale, num, Polynomial::x())
}

/// Both roots of `w c^2 + (4 - 2w) c + w = 0`, inside root first.
pub fn solve_c_pair(sp: &SParameter, ctx: PrecisionContext) -> Result<(ComplexBall, ComplexBall)> {
    let w = sp.w();
    let one = ComplexBall::one();
    let root = one.sub(w, ctx).sqrt(ctx)?.mul_i64(2, ctx);
    let base = w.sub(&ComplexBall::from_i64(2), ctx);
    let c1 = base.add(&root, ctx).div(w, ctx)?;
    let c2 = base.sub(&root, ctx).div(w, ctx)?;
    let unit = crate::numerics::Mag::one();
    if c1.abs_upper() < unit && c2.abs_lower() > unit {
        Ok((c1, c2))
    } else if c2.abs_upper() < unit && c1.abs_lower() > unit {
        Ok((c2, c1))
    } else {
        Err(Error::PrecisionExhausted(
            "cannot separate the roots from the unit circle".into(),
        ))
    }
}

/// The root with `|c| < 1`, checked against `f(-c) = w`.
pub fn solve_c(sp: &SParameter, ctx: PrecisionContext) -> Result<ComplexBall> {
    let (c, _) = solve_c_pair(sp, ctx)?;
    let f = map_f(&c, ctx)?;
    match f.eval(&SpherePoint::Finite(c.neg()), ctx)? {
        SpherePoint::Finite(v) if v.overlaps(sp.w()) => Ok(c),
        other => Err(Error::Mismatch(format!(
            "f(-c) = {other:?} does not contain w"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn contains(p: &SpherePoint, re: i64) -> bool {
        p.finite()
            .is_some_and(|z| z.contains_rational(&rational(re, 1), &Rational::zero()))
    }

    #[test]
    fn roots_are_reciprocal() {
        let c = ctx();
        for (n, d) in [(1, 8), (1, 4), (2, 5), (5, 11)] {
            let sp = SParameter::new(rational(n, d), c).unwrap();
            let (a, b) = solve_c_pair(&sp, c).unwrap();
            assert!(a.mul(&b, c).contains_rational(&rational(1, 1), &Rational::zero()));
        }
    }

    #[test]
    fn value_table_of_f() {
        let c = ctx();
        let sp = SParameter::new(rational(5, 11), c).unwrap();
        let cc = solve_c(&sp, c).unwrap();
        let f = map_f(&cc, c).unwrap();
        assert!(contains(&f.eval(&SpherePoint::from_i64(1), c).unwrap(), 1));
        assert!(contains(&f.eval(&SpherePoint::Finite(cc.clone()), c).unwrap(), 0));
        assert!(contains(&f.eval(&SpherePoint::Finite(cc.sqr(c)), c).unwrap(), 1));
        assert!(f.eval(&SpherePoint::from_i64(0), c).unwrap().is_infinity());
        assert!(f.eval(&SpherePoint::Infinity, c).unwrap().is_infinity());
        let v = f.eval(&SpherePoint::Finite(cc.neg()), c).unwrap();
        assert!(v.finite().unwrap().overlaps(sp.w()));
    }

    #[test]
    fn derivative_of_f() {
        let c = ctx();
        let sp = SParameter::new(rational(5, 11), c).unwrap();
        let cc = solve_c(&sp, c).unwrap();
        let df = map_f(&cc, c).unwrap().derivative(c).unwrap();
        let one_minus = ComplexBall::one().sub(&cc, c);
        let expected = RationalMap::with_scale(
            one_minus.sqr(c).inv(c).unwrap(),
            Polynomial::new(vec![cc.sqr(c).neg(), ComplexBall::zero(), ComplexBall::one()]),
            Polynomial::from_i64s(&[0, 0, 1]),
        )
        .unwrap();
        assert!(df.overlaps(&expected, c).unwrap());
    }

    #[test]
    fn out_of_range_parameters() {
        for (n, d) in [(0, 1), (1, 2), (3, 4), (-1, 5)] {
            assert!(matches!(
                SParameter::new(rational(n, d), ctx()),
                Err(Error::Range(_))
            ));
        }
    }
}
