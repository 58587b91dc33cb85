//! Exact symbolic toolkit for torus-equivariant Poisson structures on
//! polynomial and Laurent polynomial rings over the rationals.
//!
//! The pipeline: [`polyring`] provides the arithmetic, [`bracket`] the
//! Poisson brackets, [`torus`] the grading, [`lattice`] the integer
//! linear algebra behind center computations, [`ideals`] membership and
//! stability tests, and [`strata`] the stratification of the Poisson
//! spectrum together with the primitive-ideal templates per stratum.

pub mod bracket;
pub mod config;
pub mod ideals;
pub mod lattice;
pub mod polyring;
pub mod report;
pub mod rng;
pub mod strata;
pub mod torus;
