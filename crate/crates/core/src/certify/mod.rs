//! Exact decision procedure for the transcendence of `l(r)`, where
//! `sin(pi l) = 2r(3 + 4r^2) / (1 + 12r^2)`.
//!
//! Everything here is integer or rational arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numerics::{format_rational, rational, Rational};

/// `a = 2r(3 + 4r^2) / (1 + 12r^2)` for `0 < r < 1/2`.
pub fn sin_pi_ell_exact(r: &Rational) -> Result<Rational> {
    if !(r.is_positive() && *r < rational(1, 2)) {
        return Err(Error::Range(format!(
            "r = {} is not in (0, 1/2)",
            format_rational(r)
        )));
    }
    let r2 = r * r;
    let num = Rational::from_integer(2.into()) * r * (Rational::from_integer(3.into()) + &r2 * BigInt::from(4));
    let den = Rational::one() + &r2 * BigInt::from(12);
    Ok(num / den)
}

/// Integer quadratic `A x^2 + B x + C` with content 1 and `A > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveQuadratic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl PrimitiveQuadratic {
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_monic(&self) -> bool {
        self.a.is_one()
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }
}

impl fmt::Display for PrimitiveQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x^2 + {}x + {}", self.a, self.b, self.c)
    }
}

/// The primitive integer quadratic with root `-a + i sqrt(1 - a^2)`:
/// `(n, 2m, n)` for odd `n`, `(k, m, k)` for `n = 2k`.
pub fn primitive_quadratic(a: &Rational) -> Result<PrimitiveQuadratic> {
    if !(a.is_positive() && *a < Rational::one()) {
        return Err(Error::Range(format!(
            "a = {} is not in (0, 1)",
            format_rational(a)
        )));
    }
    let (m, n) = (a.numer().clone(), a.denom().clone());
    let two = BigInt::from(2);
    Ok(if n.is_odd() {
        PrimitiveQuadratic {
            a: n.clone(),
            b: &two * m,
            c: n,
        }
    } else {
        let k = &n / &two;
        PrimitiveQuadratic {
            a: k.clone(),
            b: m,
            c: k,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Transcendental,
    ExcludedHalf,
    OutOfRange,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Transcendental => "TRANSCENDENTAL",
            Verdict::ExcludedHalf => "EXCLUDED_HALF",
            Verdict::OutOfRange => "OUT_OF_RANGE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub r: Option<Rational>,
    pub a: Option<Rational>,
    pub verdict: Verdict,
    pub quadratic: Option<PrimitiveQuadratic>,
    pub evidence: String,
}

/// Decides whether `l(r)` is transcendental.
pub fn certify_transcendental(r: &Rational) -> Certificate {
    let a = match sin_pi_ell_exact(r) {
        Ok(a) => a,
        Err(_) => {
            return Certificate {
                r: Some(r.clone()),
                a: None,
                verdict: Verdict::OutOfRange,
                quadratic: None,
                evidence: format!("r = {} is not in (0, 1/2)", format_rational(r)),
            }
        }
    };
    let mut cert = certify_from_a(&a);
    cert.r = Some(r.clone());
    cert
}

/// Same decision starting from `a = sin(pi l)` directly.
pub fn certify_from_a(a: &Rational) -> Certificate {
    let out_of_range = |why: String| Certificate {
        r: None,
        a: Some(a.clone()),
        verdict: Verdict::OutOfRange,
        quadratic: None,
        evidence: why,
    };
    // 0 < l < 1/2 is equivalent to 0 < a < 1
    let quad = match primitive_quadratic(a) {
        Ok(q) => q,
        Err(_) => return out_of_range(format!("a = {} is not in (0, 1)", format_rational(a))),
    };
    if *a == rational(1, 2) {
        return Certificate {
            r: None,
            a: Some(a.clone()),
            verdict: Verdict::ExcludedHalf,
            evidence: format!(
                "a = 1/2: {quad} is monic and its root -1/2 + i sqrt(3)/2 is a primitive cube root of unity, so l = 1/6 is rational"
            ),
            quadratic: Some(quad),
        };
    }
    let n = a.denom();
    let reason = if n.is_odd() {
        format!("n = {n} is odd and n != 1 (n = 1 would force a = m >= 1)")
    } else {
        format!("n = {n} = 2k with k = {} != 1 (k = 1 would force a = 1/2)", n / 2)
    };
    debug_assert!(quad.content().is_one() && !quad.is_monic());
    Certificate {
        r: None,
        a: Some(a.clone()),
        verdict: Verdict::Transcendental,
        evidence: format!(
            "b = -a + i sqrt(1 - a^2) is a root of the primitive irreducible {quad}; {reason}, \
             so the leading coefficient {} is not 1, b is not an algebraic integer, hence not a \
             root of unity, so l is irrational; b = exp(i pi (l + 1/2)) is algebraic, so l is \
             not algebraic either",
            quad.a
        ),
        quadratic: Some(quad),
    }
}
