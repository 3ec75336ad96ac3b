//! Points of the Riemann sphere.

use super::complex::ComplexBall;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpherePoint {
    Finite(ComplexBall),
    Infinity,
}

impl SpherePoint {
    pub fn from_i64(v: i64) -> SpherePoint {
        SpherePoint::Finite(ComplexBall::from_i64(v))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<&ComplexBall> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Whether the two points may coincide.
    pub fn overlaps(&self, o: &SpherePoint) -> bool {
        match (self, o) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => a.overlaps(b),
            _ => false,
        }
    }
}

impl From<ComplexBall> for SpherePoint {
    fn from(z: ComplexBall) -> Self {
        SpherePoint::Finite(z)
    }
}
