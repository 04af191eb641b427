//! Point sets on the torus and their exponential sums.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Compensated;

const TAU: f64 = std::f64::consts::TAU;

/// ∞-distance from x to the nearest point of ℤᴺ. Coordinates decouple, so
/// the minimum over lattice points is the max over axes of the distance to
/// the nearest integer.
pub fn lattice_distance(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| (v - v.round()).abs())
        .fold(0.0, f64::max)
}

/// Fold a coordinate into [0, 1). `rem_euclid` can round up to exactly 1.0
/// for tiny negative inputs.
fn fold_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[derive(Deserialize)]
struct RawPointSet {
    dimension: usize,
    points: Vec<Vec<f64>>,
    separation: f64,
    #[serde(default)]
    seed: Option<u64>,
}

impl TryFrom<RawPointSet> for TorusPointSet {
    type Error = Error;

    fn try_from(raw: RawPointSet) -> Result<Self> {
        let mut set = TorusPointSet::new(raw.dimension, raw.points, raw.separation)?;
        set.seed = raw.seed;
        Ok(set)
    }
}

/// Points ξ_1, …, ξ_M in [0, 1)ᴺ, each at ∞-distance more than `separation`
/// from every integer lattice point. The distance condition is an invariant:
/// construction folds coordinates into the unit cell and rejects any point
/// with ‖ξ_m‖ ≤ ε, so every downstream bound may assume it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct TorusPointSet {
    dimension: usize,
    points: Vec<Vec<f64>>,
    separation: f64,
    /// RNG seed when the set was sampled rather than given; kept for
    /// reproducibility and echoed into reports.
    seed: Option<u64>,
}

impl TorusPointSet {
    pub fn new(dimension: usize, points: Vec<Vec<f64>>, separation: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::InvalidInput(format!(
                "separation {separation} must be finite and positive"
            )));
        }
        let mut folded = Vec::with_capacity(points.len());
        for (m, p) in points.into_iter().enumerate() {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "point {m} has a non-finite coordinate"
                )));
            }
            let q: Vec<f64> = p.iter().map(|&v| fold_unit(v)).collect();
            let d = lattice_distance(&q);
            if d <= separation {
                return Err(Error::InvalidInput(format!(
                    "point {m} sits at lattice distance {d:.6}, not above ε = {separation}"
                )));
            }
            folded.push(q);
        }
        Ok(Self {
            dimension,
            points: folded,
            separation,
            seed: None,
        })
    }

    /// Rejection-sample `count` uniform points conditioned on the distance
    /// invariant. Needs ε < ½ or the admissible region is empty.
    pub fn random(dimension: usize, count: usize, separation: f64, seed: u64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(separation.is_finite() && separation > 0.0 && separation < 0.5) {
            return Err(Error::InvalidInput(format!(
                "separation {separation} must lie in (0, 1/2) to leave room for points"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        let mut attempts = 0usize;
        let cap = 1000 * count + 1000;
        while points.len() < count {
            attempts += 1;
            if attempts > cap {
                return Err(Error::InvalidInput(format!(
                    "rejection sampling stalled: ε = {separation} leaves almost no volume"
                )));
            }
            let p: Vec<f64> = (0..dimension).map(|_| rng.gen::<f64>()).collect();
            if lattice_distance(&p) > separation {
                points.push(p);
            }
        }
        let mut set = Self::new(dimension, points, separation)?;
        set.seed = Some(seed);
        Ok(set)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Exponential sum S(n) = Σ_m e(n·ξ_m), e(θ) = e^{2πiθ}. Summed in stored
/// order with compensated real and imaginary parts, so the value is
/// deterministic for a given set.
pub fn exponential_sum(points: &TorusPointSet, n: &[i64]) -> Result<Complex64> {
    if n.len() != points.dimension {
        return Err(Error::DimensionMismatch {
            expected: points.dimension,
            got: n.len(),
        });
    }
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for p in &points.points {
        let dot: f64 = n.iter().zip(p).map(|(&k, &x)| k as f64 * x).sum();
        let (s, c) = (TAU * dot).sin_cos();
        re.add(c);
        im.add(s);
    }
    Ok(Complex64::new(re.total(), im.total()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_distance_is_the_folded_sup_norm() {
        assert_eq!(lattice_distance(&[0.5, 0.0]), 0.5);
        assert!((lattice_distance(&[0.9, 0.1]) - 0.1).abs() < 1e-15);
        assert_eq!(lattice_distance(&[1.0, 2.0]), 0.0);
        assert!((lattice_distance(&[-0.25, 3.75]) - 0.25).abs() < 1e-15);
        assert!((lattice_distance(&[0.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn construction_folds_and_enforces_the_distance_invariant() {
        let set = TorusPointSet::new(2, vec![vec![1.25, -0.5]], 0.2).unwrap();
        assert!((set.points()[0][0] - 0.25).abs() < 1e-15);
        assert!((set.points()[0][1] - 0.5).abs() < 1e-15);

        // (0.1, 0.05) sits at distance 0.1 ≤ 0.2 from the lattice. (A point
        // is close to the lattice only when every coordinate is: the
        // distance is the max over axes.)
        assert!(TorusPointSet::new(2, vec![vec![0.1, 0.05]], 0.2).is_err());
        assert!(TorusPointSet::new(2, vec![vec![0.1, 0.5]], 0.2).is_ok());
        // A lattice point itself is always rejected.
        assert!(TorusPointSet::new(2, vec![vec![1.0, 2.0]], 0.1).is_err());
        // Wrong arity.
        assert!(TorusPointSet::new(2, vec![vec![0.5]], 0.1).is_err());
        // Empty sets are fine.
        assert!(TorusPointSet::new(3, vec![], 0.4).unwrap().is_empty());
    }

    #[test]
    fn single_centered_point_sums() {
        let set = TorusPointSet::new(2, vec![vec![0.5, 0.5]], 0.25).unwrap();
        let s = exponential_sum(&set, &[1, 0]).unwrap();
        assert!((s.re + 1.0).abs() < 1e-12 && s.im.abs() < 1e-12);
        let z = exponential_sum(&set, &[0, 0]).unwrap();
        assert!((z.re - set.len() as f64).abs() < 1e-12 && z.im.abs() < 1e-12);
    }

    #[test]
    fn zero_frequency_counts_the_points() {
        let set = TorusPointSet::random(3, 17, 0.2, 7).unwrap();
        let s = exponential_sum(&set, &[0, 0, 0]).unwrap();
        assert!((s.re - 17.0).abs() < 1e-12 && s.im.abs() < 1e-12);
    }

    /// For ξ and ξ + (½, ½) the two phases differ by the factor
    /// (−1)^{n₁+n₂}, so S(n) = e(n·ξ)(1 + (−1)^{n₁+n₂}): zero exactly when
    /// n₁ + n₂ is odd, modulus 2 when it is even.
    #[test]
    fn antipodal_pair_cancels_at_odd_parity() {
        let xi = [0.15, 0.4];
        let set = TorusPointSet::new(
            2,
            vec![xi.to_vec(), vec![xi[0] + 0.5, xi[1] + 0.5]],
            0.1,
        )
        .unwrap();
        for n in [[1, 0], [0, 1], [2, 1], [1, -2]] {
            let s = exponential_sum(&set, &n).unwrap();
            assert!(s.norm() < 1e-12, "expected cancellation at n = {n:?}");
        }
        for n in [[1, 1], [2, 0], [1, -1]] {
            let s = exponential_sum(&set, &n).unwrap();
            assert!((s.norm() - 2.0).abs() < 1e-12, "even parity at n = {n:?}");
        }
    }

    #[test]
    fn exponential_sum_checks_arity() {
        let set = TorusPointSet::new(2, vec![vec![0.5, 0.5]], 0.25).unwrap();
        assert!(exponential_sum(&set, &[1]).is_err());
    }

    #[test]
    fn random_sets_are_reproducible_and_separated() {
        let a = TorusPointSet::random(2, 40, 0.2, 42).unwrap();
        let b = TorusPointSet::random(2, 40, 0.2, 42).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.len(), 40);
        assert_eq!(a.seed(), Some(42));
        for p in a.points() {
            assert!(lattice_distance(p) > 0.2);
        }
        let c = TorusPointSet::random(2, 40, 0.2, 43).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn json_round_trip_revalidates() {
        let set = TorusPointSet::random(2, 5, 0.25, 9).unwrap();
        let text = serde_json::to_string(&set).unwrap();
        let back: TorusPointSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back.points(), set.points());
        assert_eq!(back.seed(), Some(9));

        let bad = r#"{"dimension":2,"points":[[0.05,0.05]],"separation":0.25}"#;
        assert!(serde_json::from_str::<TorusPointSet>(bad).is_err());
    }
}
