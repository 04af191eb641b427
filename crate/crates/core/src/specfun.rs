//! Scalar building blocks: sign function, exact sin(πx), the squared-sinc
//! kernel K, and the band-limited sign approximation H.
//!
//! K(x) = (sin πx / πx)² has Fourier transform max(0, 1−|ξ|) and satisfies
//! K(0) = 1, K(n) = 0 for n ≠ 0.
//!
//! H(x) = (sin²πx / π²) ( Σ_{n≠0} sgn(n)/(x−n)² + 2/x )
//!
//! is odd, band-limited to [−1,1], and interpolates sgn on the integers
//! (H(n) = sgn(n), H′(n) = 0 for n ≠ 0). H alone does *not* dominate sgn —
//! H(½) = 8/π² < 1 — but H + K ≥ sgn ≥ H − K everywhere, with
//! ∫(H ± K − sgn) = ±1.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Truncation and branch-switch settings for series evaluation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct EvalConfig {
    /// Terms kept in the lattice series for H. The effective truncation is
    /// raised to ≈ 2|x| + 64 when |x| is large so the closed-form tail
    /// estimate (an integral from the midpoint M + ½) stays valid; the
    /// truncation error is then O(|x| / M⁴).
    pub series_truncation: usize,
    /// |x − round(x)| below which the near-integer branch of H is used.
    pub near_singularity_radius: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            series_truncation: 10_000,
            near_singularity_radius: 1e-4,
        }
    }
}

impl EvalConfig {
    /// Cheaper truncation for inner loops (lattice sums, transforms).
    /// Absolute error stays below ≈ 5·10⁻¹¹ for |x| ≤ 500.
    pub fn fast() -> Self {
        Self {
            series_truncation: 2_048,
            ..Self::default()
        }
    }
}

/// sgn(x), with sgn(0) = 0.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// sin(πx), exactly zero on the integers.
///
/// Reduces to u = x − round(x) ∈ [−½, ½] and applies the parity sign, so the
/// result keeps full relative precision arbitrarily close to integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.round();
    let u = x - r;
    if u == 0.0 {
        return 0.0;
    }
    // |x| < 2^52 here (otherwise u == 0), so r fits in i64.
    let s = (PI * u).sin();
    if (r as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// K(x) = (sin πx / πx)².
pub fn fejer_kernel(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x - x.round() == 0.0 {
        return 0.0;
    }
    let s = sin_pi(x) / (PI * x);
    s * s
}

/// H(x): odd, band-limited to [−1,1], H(n) = sgn(n) on the integers.
pub fn sign_kernel(x: f64, cfg: &EvalConfig) -> f64 {
    let m = x.round();
    let u = x - m;
    if u == 0.0 {
        return sgn(x);
    }
    // Pairs n, −n combine to 4xn/(n²−x²)²; n² − x² is evaluated as
    // (n−x)(n+x) so the difference stays exact when x sits near ±n.
    let trunc = cfg
        .series_truncation
        .max(2 * (x.abs() as usize) + 64);
    let w = {
        let s = sin_pi(x);
        s * s / (PI * PI)
    };
    let mi = m as i64;
    let split = mi != 0 && u.abs() < cfg.near_singularity_radius;
    let mut series = 2.0 / x;
    for n in 1..=trunc {
        let nf = n as f64;
        if split && n as i64 == mi.abs() {
            // The n = m term is peeled off below as an exact Fejér factor;
            // only its pair partner at −m survives here.
            if mi > 0 {
                series -= 1.0 / ((x + nf) * (x + nf));
            } else {
                series += 1.0 / ((x - nf) * (x - nf));
            }
            continue;
        }
        let d = (nf - x) * (nf + x);
        series += 4.0 * x * nf / (d * d);
    }
    let mp = trunc as f64 + 0.5;
    series += 2.0 * x / ((mp - x) * (mp + x));
    if split {
        // sin²πx/π² · 1/(x−m)² = (sin πu / πu)² = K(u)
        sgn(m) * fejer_kernel(u) + w * series
    } else {
        w * series
    }
}

/// H(x) + K(x): the extremal majorant of sgn with ∫(maj − sgn) = 1.
pub fn sign_majorant(x: f64, cfg: &EvalConfig) -> f64 {
    sign_kernel(x, cfg) + fejer_kernel(x)
}

/// H(x) − K(x): the extremal minorant of sgn with ∫(sgn − min) = 1.
pub fn sign_minorant(x: f64, cfg: &EvalConfig) -> f64 {
    sign_kernel(x, cfg) - fejer_kernel(x)
}
