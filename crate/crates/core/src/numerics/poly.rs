//! Dense univariate polynomials with complex ball coefficients.

use num_complex::Complex64;
use num_rational::BigRational;

use super::complex::ComplexBall;
use super::context::PrecisionContext;

/// Coefficients lowest degree first. The leading coefficient always
/// certifies nonzero; trailing balls that contain zero are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<ComplexBall>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ComplexBall>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.contains_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexBall) -> Polynomial {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(ComplexBall::one())
    }

    /// The identity polynomial `z`.
    pub fn x() -> Polynomial {
        Polynomial::new(vec![ComplexBall::zero(), ComplexBall::one()])
    }

    pub fn from_i64s(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&v| ComplexBall::from_i64(v)).collect())
    }

    pub fn from_rationals(c: &[BigRational], ctx: PrecisionContext) -> Polynomial {
        Polynomial::new(c.iter().map(|q| ComplexBall::from_rational(q, ctx)).collect())
    }

    /// `z - r`.
    pub fn linear_root(r: &ComplexBall) -> Polynomial {
        Polynomial::new(vec![r.neg(), ComplexBall::one()])
    }

    pub fn coeffs(&self) -> &[ComplexBall] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ComplexBall {
        self.coeffs.get(i).cloned().unwrap_or_else(ComplexBall::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&ComplexBall> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    /// Number of lowest coefficients that are exactly zero.
    pub fn exact_zero_prefix(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_exact_zero()).count()
    }

    /// Drops `k` low-order exact-zero coefficients, i.e. divides by `z^k`.
    pub fn shift_down(&self, k: usize) -> Polynomial {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_exact_zero()));
        Polynomial::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![ComplexBall::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Polynomial::new(c)
    }

    pub fn mid(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.mid()).collect())
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.mid_c64()).collect()
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn add(&self, o: &Polynomial, ctx: PrecisionContext) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.add(b, ctx),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Polynomial, ctx: PrecisionContext) -> Polynomial {
        self.add(&o.neg(), ctx)
    }

    pub fn mul(&self, o: &Polynomial, ctx: PrecisionContext) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ComplexBall::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, ctx), ctx);
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: &ComplexBall, ctx: PrecisionContext) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.mul(s, ctx)).collect())
    }

    pub fn pow(&self, n: u32, ctx: PrecisionContext) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    pub fn derivative(&self, ctx: PrecisionContext) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_i64(i as i64, ctx))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize, ctx: PrecisionContext) -> Polynomial {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative(ctx);
        }
        p
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &ComplexBall, ctx: PrecisionContext) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, ctx).add(c, ctx);
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        horner_c64(&self.to_c64(), z)
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Polynomial, ctx: PrecisionContext) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner, ctx).add(&Polynomial::constant(c.clone()), ctx);
        }
        acc
    }

    /// Homogenised evaluation `sum_i c_i a^i b^(d-i)` for `d >= deg`.
    pub fn homogenize(
        &self,
        a: &Polynomial,
        b: &Polynomial,
        d: usize,
        ctx: PrecisionContext,
    ) -> Polynomial {
        let n = self.coeffs.len();
        assert!(n == 0 || d + 1 >= n, "homogenize: degree bound too small");
        let mut apow = vec![Polynomial::one()];
        for i in 1..n {
            apow.push(apow[i - 1].mul(a, ctx));
        }
        let mut bpow = vec![Polynomial::one()];
        for i in 1..=d {
            bpow.push(bpow[i - 1].mul(b, ctx));
        }
        let mut acc = Polynomial::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let term = apow[i].mul(&bpow[d - i], ctx).scale(c, ctx);
            acc = acc.add(&term, ctx);
        }
        acc
    }

    /// Quotient of synthetic division by `z - r` (the remainder is dropped).
    /// When `r` contains a root of every polynomial in the coefficient balls,
    /// the result contains the exact quotient.
    pub fn deflate(&self, r: &ComplexBall, ctx: PrecisionContext) -> Polynomial {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Polynomial::zero(),
        };
        let mut q = vec![ComplexBall::zero(); n];
        q[n - 1] = self.coeffs[n].clone();
        for i in (1..n).rev() {
            q[i - 1] = self.coeffs[i].add(&r.mul(&q[i], ctx), ctx);
        }
        Polynomial::new(q)
    }

    /// Taylor coefficients of `self(c + w)` in `w`.
    pub fn taylor_shift(&self, c: &ComplexBall, ctx: PrecisionContext) -> Vec<ComplexBall> {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for k in 0..n {
            for j in (k..n.saturating_sub(1)).rev() {
                let t = c.mul(&b[j + 1], ctx);
                b[j] = b[j].add(&t, ctx);
            }
        }
        b
    }

    /// Reversed coefficients: `z^deg p(1/z)`.
    pub fn reversed(&self) -> Polynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        Polynomial::new(c)
    }

    /// Coefficient-wise ball overlap (after padding with zeros).
    pub fn overlaps(&self, o: &Polynomial) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        (0..n).all(|i| self.coeff(i).overlaps(&o.coeff(i)))
    }
}

pub(crate) fn horner_c64(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}
