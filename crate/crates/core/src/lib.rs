//! Explicit Strebel differentials on the Riemann sphere.
//!
//! The crate builds `q1 = g^* q0` and its pullback `q_c = f^* q1`, traces the
//! critical horizontal trajectories of both, assembles them into metric
//! ribbon graphs, and measures every edge with certified quadrature in ball
//! arithmetic. An exact module decides that the distinguished period
//! `l(r)` is transcendental for rational `r`.
//!
//! Layers, bottom up: [`numerics`], [`qdiff`], [`trajectory`], [`ribbon`],
//! [`certify`], [`pipeline`].

pub mod certify;
pub mod error;
pub mod numerics;
pub mod pipeline;
pub mod qdiff;
pub mod ribbon;
pub mod trajectory;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/balls.md")]
    mod balls {}
    #[doc = include_str!("../../../book/src/differentials.md")]
    mod differentials {}
    #[doc = include_str!("../../../book/src/trajectories.md")]
    mod trajectories {}
    #[doc = include_str!("../../../book/src/ribbon-graphs.md")]
    mod ribbon_graphs {}
    #[doc = include_str!("../../../book/src/certificate.md")]
    mod certificate {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
}
