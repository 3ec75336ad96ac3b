use crate::error::{Error, Result};

/// Working precision for ball arithmetic, in mantissa bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    pub mantissa_bits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_BITS: u32 = 256;
    pub const MAX_BITS: u32 = 4096;

    pub fn new(mantissa_bits: u32) -> Result<Self> {
        if !(32..=Self::MAX_BITS).contains(&mantissa_bits) {
            return Err(Error::Range(format!(
                "mantissa_bits must lie in [32, {}], got {mantissa_bits}",
                Self::MAX_BITS
            )));
        }
        Ok(PrecisionContext { mantissa_bits })
    }

    pub fn bits(&self) -> u32 {
        self.mantissa_bits
    }

    /// Context with `extra` guard bits, uncapped (internal use only).
    pub fn with_guard(&self, extra: u32) -> Self {
        PrecisionContext {
            mantissa_bits: self.mantissa_bits + extra,
        }
    }

    pub fn doubled(&self) -> Option<Self> {
        let b = self.mantissa_bits * 2;
        (b <= Self::MAX_BITS).then_some(PrecisionContext { mantissa_bits: b })
    }

    /// Runs `f`, doubling the precision after each indeterminate or
    /// precision-exhausted failure until `MAX_BITS` is reached.
    pub fn escalate<T>(&self, mut f: impl FnMut(PrecisionContext) -> Result<T>) -> Result<T> {
        let mut ctx = *self;
        loop {
            match f(ctx) {
                Err(e) if e.is_precision_related() => match ctx.doubled() {
                    Some(next) => ctx = next,
                    None => return Err(e),
                },
                other => return other,
            }
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            mantissa_bits: Self::DEFAULT_BITS,
        }
    }
}
