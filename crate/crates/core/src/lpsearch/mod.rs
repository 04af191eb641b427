//! Linear-programming search for admissible box minorants F = S·P.
//!
//! The corner formula makes ∫F linear in the coefficients of the symmetric
//! quartic P, and every admissibility condition we can sample — S·P ≤ 1
//! inside the box, P ≤ 0 outside, escape-regime leading coefficients ≤ 0 —
//! is a linear inequality in the same coefficients. That turns the search
//! for good minorants into an LP: [`build_model`] samples the constraints,
//! [`solve`] runs an exact-rational simplex under a cutting-plane loop, and
//! [`certify_candidate`] re-verifies the winner on grids the LP never saw.
//!
//! A sampled LP optimum is a candidate, never a proof: the objective value
//! only upper-bounds what a verified minorant can achieve, and certification
//! is mandatory before quoting a bound.

mod model;
mod search;
mod simplex;

pub use model::{
    build_model, canonical_basis, coefficients_to_polynomial, ConstraintRow, EqualityRow,
    LPModel, RowKind, SamplingSpec,
};
pub use search::{certify_candidate, solve, LPResult, LpStatus};
