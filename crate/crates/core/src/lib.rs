//! Band-limited minorants of box indicators and the extremal quantities
//! attached to them.
//!
//! Everything here revolves around one question: how large can the integral
//! of a function F be when F is integrable, has Fourier transform supported
//! in the unit cube Q_N = [-1,1]^N, and sits below the indicator of a box?
//! The crate provides
//!
//! * the scalar kernels the classical constructions are made of
//!   ([`specfun`]): the Fejér kernel K and the odd sign interpolant H;
//! * one-dimensional interval minorants/majorants at a general band limit
//!   and the extremal unit-interval minorant ([`selberg1d`]);
//! * two product constructions for boxes in N dimensions with exact
//!   closed-form integrals, their positivity thresholds, and a comparison
//!   tool ([`boxcons`]);
//! * the explicit minorants of Q_N in dimensions 2..=5 of the form
//!   F = S(x) P(x), with P a symmetric polynomial of per-variable degree
//!   at most 4, and exact corner-formula integrals ([`lowdim`]);
//! * analysis tooling used to certify all of the above: truncated Poisson
//!   summation with tail bounds, truncated Fourier transforms,
//!   interpolation from lattice jets, slicing, and a ledger of derived
//!   bounds for the extremal quantities ([`analysis`]);
//! * a deterministic LP search over symmetric-quartic coefficients that
//!   reproduces the known lower bounds ([`lpsearch`]);
//! * the large-sieve application on the torus ([`sieve`]).
//!
//! Shared report types live in [`report`]; exact rationals are re-exported
//! as [`Rat`]. All randomized sampling is seeded and deterministic.

pub mod analysis;
pub mod boxcons;
pub mod error;
pub mod lowdim;
pub mod lpsearch;
pub mod rational;
pub mod report;
pub mod repro;
pub mod sampling;
pub mod selberg1d;
pub mod sieve;
pub mod specfun;

pub use error::{Error, Result};
pub use rational::{format_ratio, parse_ratio, rat, Rat};
pub use report::{GridSpec, VerificationReport, Violation, ViolationKind, SCHEMA_VERSION};
pub use specfun::EvalConfig;
