//! Construction of constant-mean-curvature surfaces in Euclidean, spherical
//! and hyperbolic 3-space by the loop-group method: a holomorphic potential
//! is integrated to a holomorphic frame, factorized (Iwasawa or Birkhoff),
//! and turned into an immersion by a Sym-type formula. Closed-form
//! representations (Weierstrass minimal surfaces, Bryant CMC-1 surfaces and
//! flat surfaces in hyperbolic space) live alongside, and an independent
//! finite-difference verifier checks every claimed geometric property.

#![allow(clippy::needless_range_loop)]

pub mod delaunay;
pub mod error;
pub mod factor;
pub mod geomcheck;
pub mod h3reps;
pub mod holode;
pub mod loopalg;
pub mod mesh;
pub mod potential;
pub mod rational;
pub mod scene;
pub mod sym;
pub mod util;
pub mod weierstrass;

pub use error::{Error, Result};
pub use loopalg::{Mat2, ScalarLoop, TwistedLoop, UnitCirclePoint};

/// Version string embedded in reports and OBJ headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
