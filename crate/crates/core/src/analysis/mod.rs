//! Band-limited numerics shared by every construction: truncated Poisson
//! summation with honest tail bounds, numeric Fourier transforms (with a
//! per-axis factored fast path for product minorants), the lattice-jet
//! interpolation formula, slicing, the fundamental inequality F̂(0) ≤ F(0),
//! and the ledger of dimension bounds derived from the constructions.

mod bandlimited;
mod jets;
mod ledger;

pub(crate) use bandlimited::Compensated;
pub use bandlimited::{
    fundamental_inequality, numeric_fourier, poisson_sum, slice, BandlimitedFunction,
    FourierValue, FundamentalReport, MinorantTransform, PoissonSummary,
};
pub use jets::{interpolate, LatticeJet};
pub use ledger::{bounds_ledger, BoundsLedger, DimensionBounds};
