//! Numerical laboratory for Maxwell fields on spherically symmetric,
//! asymptotically flat backgrounds (Minkowski, Schwarzschild and perturbed
//! normal-form metrics).
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: metric catalog, pointwise tensor algebra, null frames,
//!   tortoise maps, finite-difference curvature and symbol-class checks.
//! * [`tensorcalc`]: exterior calculus and Lie derivatives on sampled
//!   2-form fields, the closed-form `[*, L_X]` commutator and the
//!   wave-equation residual.
//! * [`modes`]: spherical harmonics, sphere quadrature, radial projection,
//!   charges and mode-to-tensor assembly.
//! * [`evolution`]: 1+1 master-equation evolution on `(t, r*)` with
//!   transported extreme components and the Maxwell residual gate.
//! * [`zeroresolvent`]: constructive fixed-time solver on Minkowski and the
//!   weighted bound monitors.
//! * [`diagnostics`]: local energy norms, tail fits, peeling scans and
//!   Klainerman-Sobolev monitors.
//! * [`cli`]: configuration and orchestration behind the `maxwell-lab` binary.

pub mod cli;
pub mod config;
pub mod diagnostics;
mod error;
pub mod evolution;
pub mod geometry;
pub mod modes;
pub mod tensorcalc;
pub mod zeroresolvent;

pub use error::{Error, Result};
