//! Large-sieve counting on the torus ℝᴺ/ℤᴺ.
//!
//! A finite set of points ξ_1, …, ξ_M, each at ∞-distance more than ε from
//! every integer lattice point, cannot be too large: averaging the periodized
//! minorant Ψ_ε(x) = εᴺ Σ_{‖n‖∞ < ε⁻¹} F̂(εn) e(n·x) over the set — it is
//! ≤ 0 at every ξ_m yet has positive mean term F̂(0)·M — pins M under a
//! weighted sum of exponential sums S(n) = Σ_m e(n·ξ_m). Two bounds come
//! out: the classical one with constant 3 over the range ‖n‖∞ ≤ Nε⁻¹, and a
//! sharper one with constant ‖F̂‖∞/F̂(0) over the shorter range ‖n‖∞ ≤ ε⁻¹.
//! For the product minorants that constant stays within a few percent of 1
//! (|F̂| peaks slightly off the origin — 1.0026 for the planar minorant,
//! 1.0269 for the cubic one), so shrinking the summation range from Nε⁻¹ to
//! ε⁻¹ costs almost nothing.

mod bounds;
mod points;
mod psi;

/// Sampling step for every discrete transform in this module. Rate 4 clears
/// twice the unit band limit with margin, so aliasing vanishes exactly.
pub(crate) const TRANSFORM_H: f64 = 0.25;
/// Spatial truncation radius for the same transforms. The slowest tail is
/// the x⁴-weighted envelope at ~1/(π²R); 256 holds the per-axis truncation
/// near 4e−4, an order below every tolerance used here.
pub(crate) const TRANSFORM_RADIUS: f64 = 256.0;

pub use bounds::{fourier_ratio, sieve_bounds, sieve_bounds_with_ratio, FourierRatio, SieveReport};
pub use points::{exponential_sum, lattice_distance, TorusPointSet};
pub use psi::{psi_epsilon, PsiSeries};
