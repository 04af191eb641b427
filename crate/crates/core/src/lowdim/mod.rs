//! Explicit box minorants in dimensions 1 through 5.
//!
//! Each minorant has the product form F(x) = S(x)·P(x) where
//! S(x) = ∏ₙ (sin πxₙ / (πxₙ(xₙ²−1)))² vanishes to second order at every
//! integer point with |m| ≥ 2 and P is a symmetric polynomial, at most
//! quartic in each variable, chosen so that F interpolates the box
//! indicator on ℤ^N: F(0) = 1, F = 0 at every other lattice point except
//! the corner patterns (entries in {−1,0,1}, at least two nonzero) where
//! 0 < F(n) < 1 is allowed. The integral then comes out exactly by Poisson
//! summation, as a rational number.
//!
//! [`poly`] carries the symmetric-polynomial algebra (exact rational
//! coefficients, escape asymptotics, a compiled dense form for fast float
//! evaluation); [`minorants`] builds the envelope S, the interpolating
//! polynomials, and the exact corner-value integral; [`verify`] sweeps a
//! candidate over interior/exterior/escape grids and reports violations.

mod minorants;
mod poly;
mod verify;

pub use minorants::{
    check_identities, corner_integral, envelope, envelope_factor, envelope_factor_exact,
    exact_lattice_sum, is_corner, lattice_interpolation_check, minorant_polynomial, CornerValue,
    IdentityReport, LatticeCheck, ReferenceMinorant,
};
pub use poly::{sigma, sigma_quartic, CompiledPoly, SymmetricQuartic};
pub use verify::{verify_admissibility, verify_product_form};
