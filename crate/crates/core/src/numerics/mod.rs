//! Exact rationals, ball arithmetic, polynomials and rational maps on the
//! Riemann sphere.

mod complex;
mod context;
mod dyadic;
pub mod elementary;
mod mag;
mod poly;
mod rational;
mod real;
mod rmap;
mod roots;
mod sphere;

pub use complex::ComplexBall;
pub use context::PrecisionContext;
pub use dyadic::Dyadic;
pub use mag::Mag;
pub use poly::Polynomial;
pub use rational::{format_rational, parse_rational, rational, Rational};
pub use real::RealBall;
pub use rmap::{FloatMap, RationalMap};
pub use roots::{poly_roots, RootCluster};
pub use sphere::SpherePoint;
