//! Deterministic quasi-random sampling.
//!
//! Grid sweeps that cannot afford a full tensor grid use a Kronecker
//! (additive recurrence) sequence: point k has coordinates
//! frac(o_i + (k+1) a_i), where a_i = 1/g^(i+1) and g is the unique real
//! root > 1 of g^(d+1) = g + 1. The offsets o_i are drawn once from a seeded
//! ChaCha stream, so a (dimension, seed) pair always yields the same points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Low-discrepancy sequence over the unit cube [0,1)^d.
#[derive(Clone, Debug)]
pub struct QuasiSequence {
    alphas: Vec<f64>,
    offsets: Vec<f64>,
    next_index: u64,
}

impl QuasiSequence {
    pub fn new(dimension: usize, seed: u64) -> Self {
        assert!(dimension >= 1, "dimension must be at least 1");
        let g = plastic_root(dimension);
        let mut alphas = Vec::with_capacity(dimension);
        let mut inv = 1.0;
        for _ in 0..dimension {
            inv /= g;
            alphas.push(inv);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offsets = (0..dimension).map(|_| rng.gen::<f64>()).collect();
        Self {
            alphas,
            offsets,
            next_index: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.alphas.len()
    }

    /// Next point in [0,1)^d.
    pub fn next_point(&mut self) -> Vec<f64> {
        self.next_index += 1;
        let k = self.next_index as f64;
        self.alphas
            .iter()
            .zip(&self.offsets)
            .map(|(&a, &o)| {
                let v = o + k * a;
                v - v.floor()
            })
            .collect()
    }

    /// Next point scaled to the cube [lo, hi]^d.
    pub fn next_in_cube(&mut self, lo: f64, hi: f64) -> Vec<f64> {
        self.next_point()
            .into_iter()
            .map(|u| lo + (hi - lo) * u)
            .collect()
    }
}

/// Root of g^(d+1) = g + 1 (golden ratio at d=1), by Newton iteration.
fn plastic_root(d: usize) -> f64 {
    let p = (d + 1) as f64;
    let mut g = 1.5f64;
    for _ in 0..64 {
        let f = g.powf(p) - g - 1.0;
        let df = p * g.powf(p - 1.0) - 1.0;
        let next = g - f / df;
        if (next - g).abs() < 1e-15 {
            return next;
        }
        g = next;
    }
    g
}

/// `count` quasi-random points in [lo, hi]^d.
pub fn cube_points(dimension: usize, count: usize, seed: u64, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let mut seq = QuasiSequence::new(dimension, seed);
    (0..count).map(|_| seq.next_in_cube(lo, hi)).collect()
}

/// `count` points on the shell ||x||_inf = radius: one coordinate pinned to
/// +-radius (cycling through axes and signs), the rest quasi-random in
/// [-radius, radius].
pub fn shell_points(dimension: usize, count: usize, seed: u64, radius: f64) -> Vec<Vec<f64>> {
    let mut seq = QuasiSequence::new(dimension.max(1), seed ^ 0x5e1f);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut x = seq.next_in_cube(-radius, radius);
        let axis = k % dimension;
        let sign = if (k / dimension) % 2 == 0 { 1.0 } else { -1.0 };
        x[axis] = sign * radius;
        out.push(x);
    }
    out
}

/// `count` quasi-random points in the exterior shell 1 < ||x||_inf <= radius
/// of the unit cube, by rejection from [-radius, radius]^d.
pub fn exterior_points(dimension: usize, count: usize, seed: u64, radius: f64) -> Vec<Vec<f64>> {
    let mut seq = QuasiSequence::new(dimension, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = seq.next_in_cube(-radius, radius);
        if x.iter().fold(0.0f64, |m, v| m.max(v.abs())) > 1.0 {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let a = cube_points(3, 100, 7, -2.0, 2.0);
        let b = cube_points(3, 100, 7, -2.0, 2.0);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|p| p.iter().all(|&v| (-2.0..=2.0).contains(&v))));
        let c = cube_points(3, 10, 8, -2.0, 2.0);
        assert_ne!(a[..10], c[..]);
    }

    #[test]
    fn golden_ratio_base() {
        // d=1: alpha = 1/phi = 0.618...
        let seq = QuasiSequence::new(1, 0);
        assert!((seq.alphas[0] - 0.618_033_988_749_894_9).abs() < 1e-12);
    }

    #[test]
    fn shells_sit_on_shell() {
        for p in shell_points(4, 64, 3, 2.5) {
            let norm = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((norm - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn exterior_is_exterior() {
        for p in exterior_points(2, 500, 1, 6.0) {
            let norm = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(norm > 1.0 && norm <= 6.0);
        }
    }

    #[test]
    fn low_discrepancy_beats_worst_case() {
        // 1-D: 1000 points should cover [0,1) with max gap well under 1%.
        let mut seq = QuasiSequence::new(1, 42);
        let mut xs: Vec<f64> = (0..1000).map(|_| seq.next_point()[0]).collect();
        xs.sort_by(f64::total_cmp);
        let mut max_gap = xs[0] + 1.0 - xs[999];
        for w in xs.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        assert!(max_gap < 0.01, "max gap {max_gap}");
    }
}
