//! Exact dyadic numbers `man * 2^exp` used as ball midpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::mag::{decode_f64, ldexp, Mag};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(man: BigInt, exp: i64) -> Dyadic {
        Dyadic { man, exp }.normalized()
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic::new(v, 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "Dyadic::from_f64({x})");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let (m, e) = decode_f64(x.abs());
        let man = BigInt::from(m);
        Dyadic::new(if x < 0.0 { -man } else { man }, e)
    }

    pub fn pow2(e: i64) -> Dyadic {
        Dyadic {
            man: BigInt::from(1),
            exp: e,
        }
    }

    fn normalized(mut self) -> Dyadic {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of mantissa bits.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit: `2^top <= |self| < 2^(top+1)`.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &o.man << (o.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn mul_2exp(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            self.clone()
        } else {
            Dyadic {
                man: self.man.clone(),
                exp: self.exp + e,
            }
        }
    }

    /// Truncates toward zero to at most `prec` mantissa bits, returning the
    /// rounded value and an upper bound on the discarded part.
    pub fn round(&self, prec: u32) -> (Dyadic, Mag) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), Mag::ZERO);
        }
        let shift = bits - prec as u64;
        let mag = self.man.magnitude();
        let kept: BigUint = mag >> shift as usize;
        let dropped = mag - (&kept << shift as usize);
        let err = if dropped.is_zero() {
            Mag::ZERO
        } else {
            Mag::pow2(self.exp + shift as i64)
        };
        let man = BigInt::from_biguint(self.man.sign(), kept);
        (Dyadic::new(man, self.exp + shift as i64), err)
    }

    /// `self / o` truncated to about `prec` bits, with an error bound.
    pub fn div(&self, o: &Dyadic, prec: u32) -> (Dyadic, Mag) {
        assert!(!o.is_zero(), "Dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Mag::ZERO);
        }
        let k = (prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0);
        let num = &self.man << k as usize;
        let (q, r) = num.div_rem(&o.man);
        let exp = self.exp - o.exp - k;
        let err = if r.is_zero() {
            Mag::ZERO
        } else {
            Mag::pow2(exp)
        };
        let (val, e2) = Dyadic::new(q, exp).round(prec);
        (val, err.add_up(e2))
    }

    /// Square root of a nonnegative value, truncated, with an error bound.
    pub fn sqrt(&self, prec: u32) -> (Dyadic, Mag) {
        assert!(self.signum() >= 0, "Dyadic::sqrt of negative value");
        if self.is_zero() {
            return (Dyadic::zero(), Mag::ZERO);
        }
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.man.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = self.man.magnitude() << shift as usize;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let exp = (self.exp - shift) / 2;
        let err = if exact { Mag::ZERO } else { Mag::pow2(exp) };
        let (val, e2) = Dyadic::new(BigInt::from(r), exp).round(prec);
        (val, err.add_up(e2))
    }

    pub fn abs_mag_up(&self) -> Mag {
        mag_of(&self.man, self.exp, true)
    }

    pub fn abs_mag_down(&self) -> Mag {
        mag_of(&self.man, self.exp, false)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        if bits <= 60 {
            return ldexp(self.man.to_f64().unwrap_or(0.0), self.exp);
        }
        let shift = bits - 60;
        let top = (&self.man >> shift as usize).to_f64().unwrap_or(0.0);
        ldexp(top, self.exp + shift as i64)
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            self.man.div_floor(&(BigInt::from(1) << (-self.exp) as usize))
        }
    }

    /// Scientific decimal notation with `digits` significant digits
    /// (truncated toward zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.signum() < 0;
        let mag = self.man.magnitude().clone();
        // estimate of floor(log10 |x|)
        let top = self.top().unwrap() as f64;
        let mut e10 = (top * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigUint::from(10u32);
        let scaled = |e10: i64| -> BigUint {
            // floor(|x| * 10^(digits-1-e10))
            let p = digits as i64 - 1 - e10;
            let mut num = mag.clone();
            let mut den = BigUint::from(1u32);
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            if p >= 0 {
                num *= ten.pow(p as u32);
            } else {
                den *= ten.pow((-p) as u32);
            }
            num / den
        };
        let mut s = scaled(e10);
        let lower = ten.pow(digits as u32 - 1);
        let upper = ten.pow(digits as u32);
        while s >= upper {
            e10 += 1;
            s = scaled(e10);
        }
        while s < lower {
            e10 -= 1;
            s = scaled(e10);
        }
        let ds = s.to_str_radix(10);
        let (head, tail) = ds.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

fn mag_of(man: &BigInt, exp: i64, up: bool) -> Mag {
    if man.is_zero() {
        return Mag::ZERO;
    }
    let m = man.magnitude();
    let bits = m.bits();
    if bits <= 100 {
        let v = m.to_u128().unwrap();
        return if up {
            Mag::from_parts_up(v, exp)
        } else {
            Mag::from_parts_down(v, exp)
        };
    }
    let shift = bits - 100;
    let top = (m >> shift as usize).to_u128().unwrap();
    if up {
        Mag::from_parts_up(top + 1, exp + shift as i64)
    } else {
        Mag::from_parts_down(top, exp + shift as i64)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        self.sub(o).signum().cmp(&0)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}
