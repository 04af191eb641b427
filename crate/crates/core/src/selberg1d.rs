//! One-dimensional interval majorants/minorants at arbitrary band-limit,
//! plus the extremal minorant of the unit interval.
//!
//! For an interval I = [a,b] the two blends
//!
//!   V(x) = ½H(x−a) + ½H(b−x),   E(x) = ½K(x−a) + ½K(b−x)
//!
//! give C = V + E ≥ χ_I ≥ V − E = c with band limit 1 and exact integrals
//! (b−a) ± 1. A general band limit δ comes from dilation: evaluate the
//! unit-band pair on the interval δI at the point δx; integrals become
//! (b−a) ± 1/δ.

use crate::error::{Error, Result};
use crate::specfun::{fejer_kernel, sign_kernel, sin_pi, EvalConfig};
use serde::Serialize;
use std::f64::consts::PI;

/// Closed interval [a, b], b > a.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Scaled interval s·[a,b] (s > 0 keeps orientation).
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a: s * self.a,
            b: s * self.b,
        }
    }

    pub fn indicator(&self, x: f64) -> f64 {
        if self.a <= x && x <= self.b {
            1.0
        } else {
            0.0
        }
    }
}

/// Which side of the indicator the construction approximates from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Majorant,
    Minorant,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Majorant => 1.0,
            Side::Minorant => -1.0,
        }
    }
}

/// An interval together with a band limit and a side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelbergPair {
    pub interval: Interval,
    pub delta: f64,
    pub side: Side,
}

impl SelbergPair {
    pub fn new(interval: Interval, delta: f64, side: Side) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidBandLimit(delta));
        }
        Ok(Self {
            interval,
            delta,
            side,
        })
    }
}

/// V(x) = ½H(x−a) + ½H(b−x): band-limited transition profile of the
/// indicator. Tends to 0 away from the interval, 1 well inside it.
pub fn sign_blend(x: f64, iv: &Interval, cfg: &EvalConfig) -> f64 {
    0.5 * sign_kernel(x - iv.a, cfg) + 0.5 * sign_kernel(iv.b - x, cfg)
}

/// E(x) = ½K(x−a) + ½K(b−x) ≥ 0: the correction that turns V into a
/// one-sided approximation.
pub fn fejer_blend(x: f64, iv: &Interval) -> f64 {
    0.5 * fejer_kernel(x - iv.a) + 0.5 * fejer_kernel(iv.b - x)
}

/// Majorant V+E or minorant V−E of χ_I at band limit δ, by dilation of the
/// unit-band construction.
pub fn selberg_interval(x: f64, p: &SelbergPair, cfg: &EvalConfig) -> f64 {
    let iv = p.interval.scaled(p.delta);
    let y = p.delta * x;
    sign_blend(y, &iv, cfg) + p.side.sign() * fejer_blend(y, &iv)
}

/// Exact integral (b−a) + 1/δ (majorant) or (b−a) − 1/δ (minorant).
/// The minorant integral is negative once δ(b−a) < 1.
pub fn selberg_interval_integral(p: &SelbergPair) -> f64 {
    p.interval.length() + p.side.sign() / p.delta
}

/// The extremal minorant of χ_[−1,1] with unit band limit:
///
///   sin²(πx) / ((πx)² (1−x²)),
///
/// equal to 1 at 0, vanishing at ±1 and the other integers, negative outside
/// [−1,1], with total integral exactly 1.
pub fn extremal_1d(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    // (1−x)(1+x) keeps the factor exact near ±1, where 1−x² cancels badly.
    let d = (1.0 - x) * (1.0 + x);
    if d == 0.0 {
        // Double zero of sin² against the simple zero of 1−x².
        return 0.0;
    }
    let s = sin_pi(x);
    (s * s) / ((PI * x) * (PI * x) * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, -2.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(SelbergPair::new(unit(), 0.0, Side::Minorant).is_err());
        assert!(SelbergPair::new(unit(), -1.0, Side::Majorant).is_err());
    }

    #[test]
    fn sign_blend_values() {
        let cfg = EvalConfig::default();
        // Midpoint of [−1,1]: ½H(1) + ½H(1) = 1, exactly (integer arguments).
        assert_eq!(sign_blend(0.0, &unit(), &cfg), 1.0);
        let iv = Interval::new(0.0, 1.0).unwrap();
        // Left endpoint: ½H(0) + ½H(1) = ½.
        assert_eq!(sign_blend(0.0, &iv, &cfg), 0.5);
        // Far away the two kernels cancel: exactly at integer offsets,
        // asymptotically in between.
        assert_eq!(sign_blend(50.0, &iv, &cfg), 0.0);
        assert_abs_diff_eq!(sign_blend(50.3, &iv, &cfg), 0.0, epsilon = 1e-3);
    }

    #[test]
    fn fejer_blend_values() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        // ½K(0) + ½K(1) = ½.
        assert_eq!(fejer_blend(0.0, &iv), 0.5);
        // Symmetric point: both terms K(½).
        assert_abs_diff_eq!(
            fejer_blend(0.5, &iv),
            4.0 / (PI * PI),
            epsilon = 1e-15
        );
        // Integer offsets are zeros of K; nearby values are positive and tiny.
        assert_eq!(fejer_blend(10.0, &iv), 0.0);
        let v = fejer_blend(10.3, &iv);
        assert!(v > 0.0 && v < 1e-2, "v = {v}");
        for i in -30..30 {
            assert!(fejer_blend(i as f64 * 0.37, &iv) >= 0.0);
        }
    }

    #[test]
    fn selberg_interval_interpolates_at_center() {
        let cfg = EvalConfig::default();
        let p = SelbergPair::new(unit(), 1.0, Side::Minorant).unwrap();
        // V(0) = 1 and E(0) = 0 exactly for [−1,1] at δ = 1.
        assert_eq!(selberg_interval(0.0, &p, &cfg), 1.0);
        // Outside the interval the minorant is ≤ 0.
        assert!(selberg_interval(2.0, &p, &cfg) <= 0.0);
        let maj = SelbergPair::new(unit(), 1.0, Side::Majorant).unwrap();
        assert!(selberg_interval(0.5, &maj, &cfg) >= 1.0);
        assert!(selberg_interval(3.7, &maj, &cfg) >= 0.0);
    }

    #[test]
    fn closed_form_integrals() {
        let min1 = SelbergPair::new(unit(), 1.0, Side::Minorant).unwrap();
        assert_eq!(selberg_interval_integral(&min1), 1.0);
        let iv = Interval::new(0.0, 1.0).unwrap();
        let maj = SelbergPair::new(iv, 2.0, Side::Majorant).unwrap();
        assert_eq!(selberg_interval_integral(&maj), 1.5);
        let min_half = SelbergPair::new(iv, 0.5, Side::Minorant).unwrap();
        assert_eq!(selberg_interval_integral(&min_half), -1.0);
    }

    #[test]
    fn integral_scales_under_dilation() {
        // (I, δ) → (sI, δ/s) multiplies the closed form by s, exactly.
        let iv = Interval::new(-0.75, 2.5).unwrap();
        for &side in &[Side::Majorant, Side::Minorant] {
            for &s in &[2.0, 4.0, 0.5, 8.0] {
                let p = SelbergPair::new(iv, 1.6, side).unwrap();
                let q = SelbergPair::new(iv.scaled(s), 1.6 / s, side).unwrap();
                assert_eq!(
                    selberg_interval_integral(&q),
                    s * selberg_interval_integral(&p)
                );
            }
        }
    }

    #[test]
    fn extremal_1d_special_values() {
        assert_eq!(extremal_1d(0.0), 1.0);
        assert_eq!(extremal_1d(1.0), 0.0);
        assert_eq!(extremal_1d(-1.0), 0.0);
        assert_eq!(extremal_1d(2.0), 0.0);
        // sin²(π/2) / ((π/2)²·(3/4)) = 16/(3π²)
        assert_abs_diff_eq!(extremal_1d(0.5), 16.0 / (3.0 * PI * PI), epsilon = 1e-15);
        // Non-integer exterior point: 1/((3.5π)²(1−3.5²)) = −1/(137.8125 π²)
        assert_abs_diff_eq!(
            extremal_1d(3.5),
            -1.0 / (137.8125 * PI * PI),
            epsilon = 1e-18
        );
        // Stable through the removable singularity at 1.
        for &u in &[1e-12, 1e-9, 1e-6] {
            let v = extremal_1d(1.0 + u);
            assert!(v <= 0.0 && v.abs() < 1e-5, "v = {v}");
            let w = extremal_1d(1.0 - u);
            assert!(w >= 0.0 && w < 1e-5, "w = {w}");
        }
    }

    #[test]
    fn extremal_1d_is_a_minorant_with_unit_integral() {
        // Minorant of χ_[−1,1] on a sample grid.
        for i in -4000..=4000 {
            let x = i as f64 * 0.005 + 0.0013;
            let ind = unit().indicator(x);
            assert!(extremal_1d(x) <= ind + 1e-12, "fails at {x}");
        }
        // Simpson on [−100, 100]; the tail is O(R⁻³) ≈ 3·10⁻⁸.
        let (lo, hi, n) = (-100.0f64, 100.0f64, 25_600usize);
        let h = (hi - lo) / n as f64;
        let mut acc = extremal_1d(lo) + extremal_1d(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * extremal_1d(lo + i as f64 * h);
        }
        let integral = acc * h / 3.0;
        assert_abs_diff_eq!(integral, 1.0, epsilon = 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        // Minorant ≤ indicator ≤ majorant, with δ(b−a) both integer and not.
        #[test]
        fn sandwich_property(
            a in -5.0f64..5.0,
            len in 0.1f64..6.0,
            delta in 0.2f64..4.0,
            k in 1u32..6,
        ) {
            let cfg = EvalConfig::fast();
            let iv = Interval::new(a, a + len).unwrap();
            let deltas = [delta, k as f64 / len]; // second makes δ·len = k exactly-ish
            for d in deltas {
                let maj = SelbergPair::new(iv, d, Side::Majorant).unwrap();
                let min = SelbergPair::new(iv, d, Side::Minorant).unwrap();
                for i in 0..=200 {
                    let x = (a - 3.0) + (len + 6.0) * i as f64 / 200.0;
                    let ind = iv.indicator(x);
                    let up = selberg_interval(x, &maj, &cfg);
                    let lo = selberg_interval(x, &min, &cfg);
                    prop_assert!(up >= ind - 1e-9, "majorant {up} < {ind} at {x}");
                    prop_assert!(lo <= ind + 1e-9, "minorant {lo} > {ind} at {x}");
                    prop_assert!(lo <= up + 1e-12);
                }
            }
        }
    }
}
