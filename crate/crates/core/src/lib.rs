//! Numerical Clifford analysis on the upper half space `R^{n,+} = {x : x_n > 0}`.
//!
//! The crate provides a dense Clifford algebra, Vahlen (Möbius) transforms,
//! finite-difference versions of the Dirac-Hodge operator and the Weinstein
//! Laplacians, closed-form integral kernels, deterministic quadrature rules,
//! and executable integral representation formulas (Cauchy, Green,
//! Borel-Pompeiu, Teodorescu, Plemelj, Poisson) together with constant
//! calibration.
//!
//! `no_std` with `alloc`.

#![no_std]
// Float methods come from `num_traits::Float`. When std is anywhere in the
// dependency graph (tests, the CLI), its inherent float methods shadow the
// trait and leave those imports unused.
#![allow(unused_imports)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod clifford;
pub mod error;
pub mod formulas;
pub mod kernels;
pub mod mobius;
pub mod quadrature;

pub use calculus::{CliffordField, DiffConfig};
pub use clifford::{Multivector, Point, MAX_DIM, MIN_DIM};
pub use error::{Error, Result};
pub use mobius::VahlenTransform;
pub use quadrature::{RegionSpec, SurfaceRule, VolumeRule};
