//! Lattice jets and the quadratic interpolation formula.
//!
//! A function of exponential type ≤ 2π in every variable is determined by
//! its values and mixed first partials on ℤᴺ:
//!
//!   F(x) = ∏ₙ (sin πxₙ/π)² · Σ_n Σ_{j∈{0,1}ᴺ} ∂_j F(n) / (x−n)^(2−j)
//!
//! where (x−n)^(2−j) = ∏ᵢ (xᵢ−nᵢ)^(2−jᵢ). For the product minorants
//! F = ∏g(xᵢ)·P(x) the jet is computed in closed form: g vanishes to second
//! order at every integer |m| ≥ 2, and at m ∈ {−1,0,1} the values are the
//! dyadic constants g(0)=1, g(±1)=1/4, g′(0)=0, g′(±1)=∓3/4, so the whole
//! jet lives on {−1,0,1}ᴺ and every entry is exact in doubles.

use std::collections::BTreeMap;

use crate::lowdim::ReferenceMinorant;
use crate::specfun::sin_pi;

use super::bandlimited::BandlimitedFunction;

/// g and g′ at −1, 0, 1 (index by m+1), g(x) = (sin πx/(πx(x²−1)))².
const G_VALUE: [f64; 3] = [0.25, 1.0, 0.25];
const G_DERIV: [f64; 3] = [0.75, 0.0, -0.75];

/// Keys order entries by increasing ‖n‖∞, then lexicographically — the
/// deterministic summation order used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct JetKey {
    norm: i64,
    point: Vec<i64>,
    deriv: Vec<u8>,
}

/// Finitely many values ∂_j F(n) indexed by lattice point and multi-index
/// j ∈ {0,1}ᴺ.
#[derive(Clone, Debug, Default)]
pub struct LatticeJet {
    dimension: usize,
    truncation_radius: i64,
    entries: BTreeMap<JetKey, f64>,
}

impl LatticeJet {
    pub fn empty(dimension: usize) -> Self {
        Self {
            dimension,
            truncation_radius: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn truncation_radius(&self) -> i64 {
        self.truncation_radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, point: &[i64], deriv: &[u8], value: f64) {
        assert_eq!(point.len(), self.dimension, "jet point dimension");
        assert_eq!(deriv.len(), self.dimension, "jet multi-index dimension");
        assert!(deriv.iter().all(|&d| d <= 1), "multi-index entries are 0/1");
        let norm = point.iter().map(|v| v.abs()).max().unwrap_or(0);
        self.truncation_radius = self.truncation_radius.max(norm);
        self.entries.insert(
            JetKey {
                norm,
                point: point.to_vec(),
                deriv: deriv.to_vec(),
            },
            value,
        );
    }

    /// Stored value, defaulting to 0 (the jet is finitely supported).
    pub fn value(&self, point: &[i64], deriv: &[u8]) -> f64 {
        let norm = point.iter().map(|v| v.abs()).max().unwrap_or(0);
        self.entries
            .get(&JetKey {
                norm,
                point: point.to_vec(),
                deriv: deriv.to_vec(),
            })
            .copied()
            .unwrap_or(0.0)
    }

    /// Entries in summation order: increasing ‖n‖∞, then lexicographic.
    pub fn iter(&self) -> impl Iterator<Item = (&[i64], &[u8], f64)> {
        self.entries
            .iter()
            .map(|(k, &v)| (k.point.as_slice(), k.deriv.as_slice(), v))
    }

    /// Closed-form jet of a product minorant F = ∏g(xᵢ)·P(x). Every entry
    /// is a finite dyadic combination, exact in doubles.
    ///
    /// ∂_A F(n) = Σ_{B⊆A} ∏_{i∈B} g′(nᵢ) · ∏_{i∉B} g(nᵢ) · ∂_{A∖B} P(n).
    pub fn analytic(m: &ReferenceMinorant) -> Self {
        let n = m.dimension();
        let compiled = m.compiled();
        let mut jet = Self::empty(n);
        let mut point = vec![-1i64; n];
        loop {
            let x: Vec<f64> = point.iter().map(|&v| v as f64).collect();
            let gv: Vec<f64> = point.iter().map(|&v| G_VALUE[(v + 1) as usize]).collect();
            let gd: Vec<f64> = point.iter().map(|&v| G_DERIV[(v + 1) as usize]).collect();

            // ∂_C P(n) for every mask C.
            let mut dp = vec![0.0; 1 << n];
            let mut mask_buf = vec![false; n];
            for (c, slot) in dp.iter_mut().enumerate() {
                for (i, b) in mask_buf.iter_mut().enumerate() {
                    *b = c >> i & 1 == 1;
                }
                *slot = compiled.eval_partial(&x, &mask_buf);
            }

            let mut deriv = vec![0u8; n];
            for a in 0..1usize << n {
                let mut value = 0.0;
                let mut b = a;
                loop {
                    let mut term = 1.0;
                    for i in 0..n {
                        term *= if b >> i & 1 == 1 { gd[i] } else { gv[i] };
                    }
                    if term != 0.0 {
                        value += term * dp[a & !b];
                    }
                    if b == 0 {
                        break;
                    }
                    b = (b - 1) & a;
                }
                if value != 0.0 {
                    for (i, d) in deriv.iter_mut().enumerate() {
                        *d = (a >> i & 1) as u8;
                    }
                    jet.insert(&point, &deriv, value);
                }
            }

            if !advance(&mut point, -1, 1) {
                break;
            }
        }
        jet.truncation_radius = 1;
        jet
    }

    /// Jet extraction by central finite differences with the given step:
    /// each coordinate listed in the multi-index is differenced once, so an
    /// order-k mixed partial averages 2^k evaluations. Cancellation noise
    /// grows like ε/(2·step)^k — usable for k ≤ 2 at step 1e−5, and the
    /// caller should widen the step for deeper mixed partials.
    pub fn numeric(f: &BandlimitedFunction, radius: i64, step: f64) -> Self {
        let n = f.dimension();
        let mut jet = Self::empty(n);
        let mut point = vec![-radius; n];
        let mut deriv = vec![0u8; n];
        loop {
            for a in 0..1usize << n {
                for (i, d) in deriv.iter_mut().enumerate() {
                    *d = (a >> i & 1) as u8;
                }
                let order = a.count_ones();
                let mut acc = 0.0;
                // Signed corners of the difference stencil on the axes in a.
                for s in 0..1usize << order {
                    let mut x: Vec<f64> = point.iter().map(|&v| v as f64).collect();
                    let mut bit = 0;
                    let mut parity = 1.0;
                    for i in 0..n {
                        if a >> i & 1 == 1 {
                            if s >> bit & 1 == 1 {
                                x[i] += step;
                            } else {
                                x[i] -= step;
                                parity = -parity;
                            }
                            bit += 1;
                        }
                    }
                    acc += parity * f.eval(&x);
                }
                let value = acc / (2.0 * step).powi(order as i32);
                if value != 0.0 {
                    jet.insert(&point, &deriv, value);
                }
            }
            if !advance(&mut point, -radius, radius) {
                break;
            }
        }
        jet.truncation_radius = radius;
        jet
    }
}

fn advance(digits: &mut [i64], lo: i64, hi: i64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d <= hi {
            return true;
        }
        *d = lo;
    }
    false
}

/// Evaluate the interpolation series of a jet. Within 1e−8 of a lattice
/// point the rational terms lose precision, so the jet's stored value is
/// returned directly there.
pub fn interpolate(jet: &LatticeJet, x: &[f64]) -> f64 {
    assert_eq!(x.len(), jet.dimension(), "evaluation point dimension");
    let rounded: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
    if x
        .iter()
        .zip(&rounded)
        .all(|(v, &r)| (v - r as f64).abs() <= 1e-8)
    {
        return jet.value(&rounded, &vec![0u8; jet.dimension()]);
    }

    let mut prefactor = 1.0;
    for &v in x {
        let s = sin_pi(v) / std::f64::consts::PI;
        prefactor *= s * s;
    }
    let mut sum = 0.0;
    for (point, deriv, value) in jet.iter() {
        let mut denom = 1.0;
        for ((&xi, &ni), &ji) in x.iter().zip(point).zip(deriv) {
            let d = xi - ni as f64;
            denom *= if ji == 1 { d } else { d * d };
        }
        sum += value / denom;
    }
    prefactor * sum
}
