//! Low-precision nonnegative magnitudes with directed rounding.
//!
//! A [`Mag`] is `man * 2^exp` with a 32-bit normalized mantissa. Every
//! operation has an explicit rounding direction: the `_up` variants return
//! an upper bound of the exact result, the `_down` variants a lower bound.
//! Ball radii are always carried as upper bounds.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Roots;

const MAN_BITS: u32 = 32;
const MAN_MIN: u128 = 1 << (MAN_BITS - 1);
const MAN_LIMIT: u128 = 1 << MAN_BITS;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn one() -> Mag {
        Mag::pow2(0)
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: MAN_MIN as u64,
            exp: e - (MAN_BITS as i64 - 1),
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_parts_up(v as u128, 0)
    }

    /// Smallest representable upper bound of `m * 2^e`.
    pub fn from_parts_up(m: u128, e: i64) -> Mag {
        Self::from_parts(m, e, true)
    }

    /// Largest representable lower bound of `m * 2^e`.
    pub fn from_parts_down(m: u128, e: i64) -> Mag {
        Self::from_parts(m, e, false)
    }

    fn from_parts(m: u128, e: i64, up: bool) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        let (mut man, mut exp) = if bits > MAN_BITS {
            let shift = bits - MAN_BITS;
            let mut r = m >> shift;
            if up && (r << shift) != m {
                r += 1;
            }
            (r, e + shift as i64)
        } else {
            let shift = MAN_BITS - bits;
            (m << shift, e - shift as i64)
        };
        if man >= MAN_LIMIT {
            man >>= 1;
            exp += 1;
        }
        Mag {
            man: man as u64,
            exp,
        }
    }

    /// Upper bound of a finite nonnegative `f64`.
    pub fn from_f64_up(x: f64) -> Mag {
        assert!(x.is_finite() && x >= 0.0, "Mag::from_f64_up({x})");
        if x == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = decode_f64(x);
        Mag::from_parts_up(m as u128, e)
    }

    pub fn from_f64_down(x: f64) -> Mag {
        assert!(x.is_finite() && x >= 0.0, "Mag::from_f64_down({x})");
        if x == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = decode_f64(x);
        Mag::from_parts_down(m as u128, e)
    }

    pub fn mantissa(&self) -> u64 {
        self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// `floor(log2(self))`; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + MAN_BITS as i64 - 1)
        }
    }

    fn add_dir(self, o: Mag, up: bool) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let d = hi.exp - lo.exp;
        if d >= 64 {
            let m = if up { hi.man as u128 + 1 } else { hi.man as u128 };
            return Mag::from_parts(m, hi.exp, up);
        }
        let m = ((hi.man as u128) << d) + lo.man as u128;
        Mag::from_parts(m, lo.exp, up)
    }

    pub fn add_up(self, o: Mag) -> Mag {
        self.add_dir(o, true)
    }

    pub fn add_down(self, o: Mag) -> Mag {
        self.add_dir(o, false)
    }

    /// Lower bound of `max(self - o, 0)`.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self <= o {
            return Mag::ZERO;
        }
        let d = self.exp - o.exp;
        if d >= 64 {
            // o is far below one unit of self
            return Mag::from_parts_down(self.man as u128 - 1, self.exp);
        }
        if d >= 0 {
            let m = ((self.man as u128) << d) - o.man as u128;
            Mag::from_parts_down(m, o.exp)
        } else {
            let m = self.man as u128 - ((o.man as u128) << (-d));
            Mag::from_parts_down(m, self.exp)
        }
    }

    /// Upper bound of `max(self - o, 0)`.
    pub fn sub_up(self, o: Mag) -> Mag {
        if self <= o {
            return Mag::ZERO;
        }
        let d = self.exp - o.exp;
        if d >= 64 {
            return self;
        }
        if d >= 0 {
            let m = ((self.man as u128) << d) - o.man as u128;
            Mag::from_parts_up(m, o.exp)
        } else {
            let m = self.man as u128 - ((o.man as u128) << (-d));
            Mag::from_parts_up(m, self.exp)
        }
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::from_parts_up(self.man as u128 * o.man as u128, self.exp + o.exp)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::from_parts_down(self.man as u128 * o.man as u128, self.exp + o.exp)
    }

    /// Multiplication by `2^e`, exact.
    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag {
                man: self.man,
                exp: self.exp + e,
            }
        }
    }

    pub fn div_up(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let n = (self.man as u128) << 64;
        let d = o.man as u128;
        let mut q = n / d;
        if q * d != n {
            q += 1;
        }
        Mag::from_parts_up(q, self.exp - o.exp - 64)
    }

    pub fn div_down(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let n = (self.man as u128) << 64;
        Mag::from_parts_down(n / o.man as u128, self.exp - o.exp - 64)
    }

    fn sqrt_dir(self, up: bool) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (mut m, mut e) = (self.man as u128, self.exp);
        if e.rem_euclid(2) != 0 {
            m <<= 1;
            e -= 1;
        }
        m <<= 64;
        e -= 64;
        let mut r = m.sqrt();
        if up && r * r != m {
            r += 1;
        }
        Mag::from_parts(r, e / 2, up)
    }

    pub fn sqrt_up(self) -> Mag {
        self.sqrt_dir(true)
    }

    pub fn sqrt_down(self) -> Mag {
        self.sqrt_dir(false)
    }

    pub fn pow_up(self, n: u32) -> Mag {
        let mut acc = Mag::one();
        for _ in 0..n {
            acc = acc.mul_up(self);
        }
        acc
    }

    pub fn pow_down(self, n: u32) -> Mag {
        let mut acc = Mag::one();
        for _ in 0..n {
            acc = acc.mul_down(self);
        }
        acc
    }

    /// Upper bound of `sqrt(a^2 + b^2)`.
    pub fn hypot_up(a: Mag, b: Mag) -> Mag {
        a.mul_up(a).add_up(b.mul_up(b)).sqrt_up()
    }

    pub fn hypot_down(a: Mag, b: Mag) -> Mag {
        a.mul_down(a).add_down(b.mul_down(b)).sqrt_down()
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Mag) -> Mag {
        if self <= o {
            self
        } else {
            o
        }
    }

    /// Nearest `f64`; may underflow to zero or overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.man as f64, self.exp)
    }

    /// Decimal scientific notation with four significant digits, rounded up.
    pub fn to_sci_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let log10 = (self.man as f64).log10() + self.exp as f64 * std::f64::consts::LOG10_2;
        let mut e10 = log10.floor();
        let mut lead = 10f64.powf(log10 - e10);
        // round up to 4 significant digits so the printed value stays an upper bound
        lead = (lead * 1000.0 * (1.0 + 1e-12)).ceil() / 1000.0;
        if lead >= 10.0 {
            lead /= 10.0;
            e10 += 1.0;
        }
        format!("{lead:.3}e{}", e10 as i64)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&o.exp).then(self.man.cmp(&o.man)),
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mag({})", self.to_sci_string())
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string())
    }
}

/// `x = m * 2^e` exactly, for finite positive `x`.
pub(crate) fn decode_f64(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}

/// `m * 2^e` without intermediate overflow of `powi`.
pub(crate) fn ldexp(m: f64, e: i64) -> f64 {
    let mut x = m;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}
