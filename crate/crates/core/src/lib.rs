//! Discrete causal products of planar rotations and their continuum limit.
//!
//! The crate covers the combinatorics behind the limit kernel
//! (generalized Catalan numbers, lattice-path posets and their linear
//! extensions), the integer coefficient arrays of the kernel series,
//! closed-form kernels in terms of Bessel-type series, and the finite
//! unitary products whose limit they describe.

pub mod coefficients;
pub mod combinatorics;
pub mod discrete;
pub mod kernel;
pub mod lattice;
pub mod params;

pub use params::{ComplexParam, Interval, ParamError};
