//! The dimension-bound ledger: what the constructions prove about ν, Δ and
//! the critical dimension.
//!
//! ν(N) ≤ Δ(N) always (maximizing over a larger class), and Δ interpolates
//! across dimensions: for M ≤ N,
//!
//!   Δ(M) ≥ 1 − (M/N)(1 − Δ(N)),
//!
//! so one good high-dimensional construction pushes lower bounds down to
//! every smaller dimension. The critical dimension N_c (the largest N with
//! ν(N) > 0) is bounded below by any dimension with a positive construction
//! and above by ⌊2/(1−u)⌋ for any proven upper bound Δ(2) ≤ u < 1.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::report::SCHEMA_VERSION;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DimensionBounds {
    pub dimension: usize,
    /// Supplied construction bound ν(N) ≥ …
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub nu_lower: Option<Rat>,
    /// Best derived bound Δ(N) ≥ …, combining ν ≤ Δ with interpolation
    /// from every higher dimension.
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub delta_lower: Option<Rat>,
    /// Externally supplied upper bound Δ(N) ≤ … (never derived here).
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub delta_upper: Option<Rat>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundsLedger {
    pub schema_version: u32,
    pub records: Vec<DimensionBounds>,
    /// N_c ≥ this (largest dimension with a strictly positive ν bound).
    pub critical_lower: Option<usize>,
    /// N_c ≤ ⌊2/(1−u)⌋ when an upper bound Δ(2) ≤ u < 1 is supplied.
    pub critical_upper: Option<usize>,
}

impl BoundsLedger {
    pub fn record(&self, dimension: usize) -> Option<&DimensionBounds> {
        self.records.iter().find(|r| r.dimension == dimension)
    }
}

fn check_unit_interval(label: &str, q: &Rat) -> Result<()> {
    if q.is_negative() || q > &Rat::one() {
        return Err(Error::InvalidInput(format!(
            "{label} = {q} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// Assemble the ledger from construction bounds ν(N) ≥ q and an optional
/// externally proven upper bound Δ(2) ≤ u. All arithmetic is exact.
pub fn bounds_ledger(
    nu_lowers: &BTreeMap<usize, Rat>,
    delta2_upper: Option<&Rat>,
) -> Result<BoundsLedger> {
    if nu_lowers.is_empty() {
        return Err(Error::InvalidInput("no ν lower bounds supplied".into()));
    }
    for (&n, q) in nu_lowers {
        if n == 0 {
            return Err(Error::InvalidInput("dimension 0 has no ν bound".into()));
        }
        check_unit_interval(&format!("ν({n}) lower bound"), q)?;
    }
    if let Some(u) = delta2_upper {
        check_unit_interval("Δ(2) upper bound", u)?;
        if u >= &Rat::one() {
            return Err(Error::InvalidInput(
                "a Δ(2) upper bound of 1 carries no critical-dimension information".into(),
            ));
        }
    }

    let max_dim = *nu_lowers.keys().max().expect("nonempty");
    let mut records = Vec::with_capacity(max_dim);
    for m in 1..=max_dim {
        // Δ(M) ≥ 1 − (M/N)(1 − ν(N)) over every N ≥ M; N = M is ν ≤ Δ.
        let mut best: Option<Rat> = None;
        for (&n, nu) in nu_lowers.range(m..) {
            let derived = Rat::one()
                - Rat::new((m as i64).into(), (n as i64).into()) * (Rat::one() - nu.clone());
            if best.as_ref().map_or(true, |b| derived > *b) {
                best = Some(derived);
            }
        }
        records.push(DimensionBounds {
            dimension: m,
            nu_lower: nu_lowers.get(&m).cloned(),
            delta_lower: best,
            delta_upper: if m == 2 {
                delta2_upper.cloned()
            } else {
                None
            },
        });
    }

    let critical_lower = nu_lowers
        .iter()
        .filter(|(_, q)| q.is_positive())
        .map(|(&n, _)| n)
        .max();
    let critical_upper = delta2_upper.map(|u| {
        let bound = Rat::from_integer(2.into()) / (Rat::one() - u.clone());
        let floored = bound.floor();
        floored
            .to_integer()
            .try_into()
            .expect("u < 1 keeps the bound modest")
    });

    Ok(BoundsLedger {
        schema_version: SCHEMA_VERSION,
        records,
        critical_lower,
        critical_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn paper_inputs() -> BTreeMap<usize, Rat> {
        BTreeMap::from([
            (1, rat(1, 1)),
            (2, rat(63, 64)),
            (3, rat(119, 128)),
            (4, rat(95, 128)),
            (5, rat(31, 256)),
        ])
    }

    #[test]
    fn delta2_from_dimension_five() {
        let ledger = bounds_ledger(&BTreeMap::from([(5, rat(31, 256))]), None).unwrap();
        // Δ(2) ≥ 1 − (2/5)(1 − 31/256) = 83/128.
        assert_eq!(
            ledger.record(2).unwrap().delta_lower,
            Some(rat(83, 128))
        );
        assert_eq!(ledger.critical_lower, Some(5));
        assert_eq!(ledger.critical_upper, None);
    }

    #[test]
    fn full_input_takes_the_best_bound_per_dimension() {
        let ledger = bounds_ledger(&paper_inputs(), None).unwrap();
        // In dimension 2 the direct construction 63/64 beats interpolation
        // from any higher dimension (83/128 from N=5).
        assert_eq!(ledger.record(2).unwrap().delta_lower, Some(rat(63, 64)));
        assert_eq!(ledger.record(1).unwrap().delta_lower, Some(rat(1, 1)));
        assert_eq!(ledger.record(5).unwrap().delta_lower, Some(rat(31, 256)));
        // Every record's lower bound is at least its own ν bound.
        for r in &ledger.records {
            if let (Some(nu), Some(delta)) = (&r.nu_lower, &r.delta_lower) {
                assert!(delta >= nu);
            }
        }
    }

    #[test]
    fn critical_window() {
        let u = rat(99, 100);
        let ledger = bounds_ledger(&paper_inputs(), Some(&u)).unwrap();
        assert_eq!(ledger.critical_lower, Some(5));
        assert_eq!(ledger.critical_upper, Some(200)); // ⌊2/(1/100)⌋
        assert_eq!(ledger.record(2).unwrap().delta_upper, Some(u));

        let tight = bounds_ledger(&paper_inputs(), Some(&rat(2, 3))).unwrap();
        assert_eq!(tight.critical_upper, Some(6)); // ⌊2/(1/3)⌋
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(bounds_ledger(&BTreeMap::new(), None).is_err());
        assert!(bounds_ledger(&BTreeMap::from([(2, rat(3, 2))]), None).is_err());
        assert!(bounds_ledger(&BTreeMap::from([(2, rat(-1, 4))]), None).is_err());
        assert!(bounds_ledger(&paper_inputs(), Some(&rat(1, 1))).is_err());
        assert!(bounds_ledger(&BTreeMap::from([(0, rat(1, 2))]), None).is_err());
    }

    #[test]
    fn monotone_in_every_input() {
        let base = bounds_ledger(&paper_inputs(), None).unwrap();
        for bump_dim in 1..=5usize {
            let mut inputs = paper_inputs();
            let bumped = (inputs[&bump_dim].clone() + Rat::one()) / rat(2, 1);
            inputs.insert(bump_dim, bumped); // strictly larger, still ≤ 1
            let better = bounds_ledger(&inputs, None).unwrap();
            for (b, a) in better.records.iter().zip(&base.records) {
                assert!(
                    b.delta_lower >= a.delta_lower,
                    "dimension {} regressed after bumping ν({bump_dim})",
                    b.dimension
                );
            }
        }
    }

    #[test]
    fn serializes_with_rational_strings() {
        let ledger = bounds_ledger(&paper_inputs(), Some(&rat(2, 3))).unwrap();
        let json = serde_json::to_string(&ledger).unwrap();
        assert!(json.contains("\"63/64\""));
        assert!(json.contains("\"schema_version\":1"));
        let back: BoundsLedger = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ledger);
    }
}
