//! Exact-arithmetic certification of log-concavity for Duistermaat-Heckman
//! densities of complexity-two Hamiltonian torus actions.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`]: symmetric rational forms: evaluation, congruence
//!   diagonalization, inertia and the positive orthogonal class search.
//! * [`polycert`]: univariate rational polynomials and Sturm-based sign
//!   certificates on open intervals.
//! * [`dhcore`]: piecewise-quadratic DH densities along a line, the wall slope
//!   inequality and global log-concavity verdicts.
//! * [`wallcross`]: signature / Poincaré polynomial / b⁺ propagation across
//!   critical levels of a circle action on a six-manifold.
//! * [`construct`]: the non-log-concave counterexample pipeline.
//! * [`lefschetz`]: Hard Lefschetz checks for sphere bundles over 4-manifolds.

#![forbid(unsafe_code)]

pub mod construct;
pub mod dhcore;
pub mod exactlin;
pub mod lefschetz;
pub mod polycert;
pub mod rational;
pub mod wallcross;

pub use rational::{parse_rational, rat, Rational};
