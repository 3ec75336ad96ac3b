//! Meromorphic quadratic differentials `phi(z) dz^2` on the sphere.

mod maps;

pub use maps::{map_f, map_g, solve_c, solve_c_pair, SParameter};

use crate::error::{Error, Result};
use crate::numerics::elementary::pi;
use crate::numerics::{
    poly_roots, ComplexBall, PrecisionContext, Polynomial, RationalMap, RealBall, SpherePoint,
};

#[derive(Clone, Debug)]
pub struct QuadraticDifferential {
    pub phi: RationalMap,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorEntry {
    pub point: SpherePoint,
    pub order: i64,
}

#[derive(Clone, Debug, Default)]
pub struct Divisor {
    pub entries: Vec<DivisorEntry>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|e| e.order).sum()
    }

    pub fn poles(&self) -> impl Iterator<Item = &DivisorEntry> {
        self.entries.iter().filter(|e| e.order < 0)
    }

    pub fn zeros(&self) -> impl Iterator<Item = &DivisorEntry> {
        self.entries.iter().filter(|e| e.order > 0)
    }

    /// Order at the entry overlapping `p` (0 when there is none).
    pub fn order_at(&self, p: &SpherePoint) -> i64 {
        self.entries
            .iter()
            .find(|e| e.point.overlaps(p))
            .map_or(0, |e| e.order)
    }
}

/// `(1 / 4 pi^2) dz^2 / (z (1 - z))`.
pub fn build_q0(ctx: PrecisionContext) -> QuadraticDifferential {
    let four_pi2 = pi(ctx).sqr(ctx).mul_i64(4, ctx);
    let scale = ComplexBall::from_real(&four_pi2.inv(ctx).expect("pi > 0"));
    let phi = RationalMap::with_scale(scale, Polynomial::one(), Polynomial::from_i64s(&[0, 1, -1]))
        .expect("valid map");
    QuadraticDifferential {
        phi,
        label: "q0".into(),
    }
}

/// `g^* q0`.
pub fn build_q1(ctx: PrecisionContext) -> Result<QuadraticDifferential> {
    pullback(&build_q0(ctx), &map_g(), ctx)
}

/// `f_c^* q1` together with the parameter `c`.
pub fn build_qc(
    sp: &SParameter,
    ctx: PrecisionContext,
) -> Result<(QuadraticDifferential, ComplexBall)> {
    let c = solve_c(sp, ctx)?;
    let f = map_f(&c, ctx)?;
    let mut q = pullback(&build_q1(ctx)?, &f, ctx)?;
    q.label = format!("{} [r={}]", q.label, crate::numerics::format_rational(sp.r()));
    Ok((q, c))
}

/// `F^* q`, with coefficient `phi(F(z)) F'(z)^2`.
///
/// With `F = A/B` and `phi = s P/Q` of degrees `dp`, `dq`, the pulled-back
/// coefficient is `s P^h(A,B) (A'B - AB')^2 B^(dq-dp-4) / Q^h(A,B)`, where
/// `^h` is homogenisation; the power of `B` goes to whichever side keeps the
/// exponent nonnegative.
pub fn pullback(
    q: &QuadraticDifferential,
    f: &RationalMap,
    ctx: PrecisionContext,
) -> Result<QuadraticDifferential> {
    let a = f.scaled_numerator(ctx);
    let b = f.denominator();
    let w = a.derivative(ctx).mul(b, ctx).sub(&a.mul(&b.derivative(ctx), ctx), ctx);
    let label = format!("F*({})", q.label);
    if q.phi.is_zero() || w.is_zero() {
        return Ok(QuadraticDifferential {
            phi: RationalMap::constant(ComplexBall::zero()),
            label,
        });
    }
    let dp = q.phi.num_degree();
    let dq = q.phi.den_degree();
    let mut num = q.phi.numerator().homogenize(&a, b, dp, ctx).mul(&w.mul(&w, ctx), ctx);
    let mut den = q.phi.denominator().homogenize(&a, b, dq, ctx);
    let e = dq as i64 - dp as i64 - 4;
    if e >= 0 {
        num = num.mul(&b.pow(e as u32, ctx), ctx);
    } else {
        den = den.mul(&b.pow((-e) as u32, ctx), ctx);
    }
    let phi = RationalMap::with_scale(q.phi.scale().clone(), num, den)?.reduce(ctx)?;
    Ok(QuadraticDifferential { phi, label })
}

/// Zeros and poles with orders; the entry at infinity has order
/// `deg den - deg num - 4`.
pub fn divisor(q: &QuadraticDifferential, ctx: PrecisionContext) -> Result<Divisor> {
    if q.phi.is_zero() {
        return Err(Error::Invalid("divisor of the zero differential".into()));
    }
    let mut entries = Vec::new();
    for (poly, sign) in [(q.phi.numerator(), 1i64), (q.phi.denominator(), -1)] {
        if poly.degree().unwrap_or(0) >= 1 {
            for c in poly_roots(poly, ctx)? {
                entries.push(DivisorEntry {
                    point: SpherePoint::Finite(c.root),
                    order: sign * c.multiplicity as i64,
                });
            }
        }
    }
    let inf = q.phi.den_degree() as i64 - q.phi.num_degree() as i64 - 4;
    if inf != 0 {
        entries.push(DivisorEntry {
            point: SpherePoint::Infinity,
            order: inf,
        });
    }
    Ok(Divisor { entries })
}

/// Leading Laurent coefficient `c_{-2}` of `phi` at a double pole.
pub fn laurent_c2(
    q: &QuadraticDifferential,
    p: &SpherePoint,
    ctx: PrecisionContext,
) -> Result<ComplexBall> {
    let phi = &q.phi;
    match p {
        SpherePoint::Infinity => {
            let ord = phi.den_degree() as i64 - phi.num_degree() as i64 - 4;
            if ord != -2 {
                return Err(Error::NotDoublePole(format!("order {ord} at infinity")));
            }
            let lead = phi
                .numerator()
                .lead()
                .expect("nonzero")
                .div(phi.denominator().lead().expect("nonzero"), ctx)?;
            Ok(phi.scale().mul(&lead, ctx))
        }
        SpherePoint::Finite(z) => {
            let den = phi.denominator();
            let cluster = if den.degree().unwrap_or(0) >= 1 {
                poly_roots(den, ctx)?.into_iter().find(|c| c.root.overlaps(z))
            } else {
                None
            };
            let cluster = match cluster {
                Some(c) if c.multiplicity == 2 => c,
                Some(c) => {
                    return Err(Error::NotDoublePole(format!(
                        "pole of order {} at {:?}",
                        c.multiplicity,
                        z.mid_c64()
                    )))
                }
                None => {
                    return Err(Error::NotDoublePole(format!(
                        "no pole at {:?}",
                        z.mid_c64()
                    )))
                }
            };
            let r = if z.rad() <= cluster.root.rad() { z } else { &cluster.root };
            let rest = den.deflate(r, ctx).deflate(r, ctx);
            let n = phi.numerator().eval(r, ctx);
            if !n.certifies_nonzero() {
                return Err(Error::NotDoublePole(
                    "numerator not certified nonzero at the pole".into(),
                ));
            }
            Ok(phi.scale().mul(&n.div(&rest.eval(r, ctx), ctx)?, ctx))
        }
    }
}

/// Residue of `sqrt(q)` at a double pole, `2 pi sqrt(-c_{-2})`.
pub fn residue_sqrt(
    q: &QuadraticDifferential,
    p: &SpherePoint,
    ctx: PrecisionContext,
) -> Result<RealBall> {
    let c2 = laurent_c2(q, p, ctx)?;
    let m = c2.neg();
    if !(m.real().is_positive() && m.imag().contains_zero()) {
        return Err(Error::NotStrebelLike(format!("c_-2 = {:?}", c2.mid_c64())));
    }
    let root = m.sqrt(ctx)?;
    let two_pi = pi(ctx).mul_2exp(1);
    Ok(root.real().mul(&two_pi, ctx))
}
