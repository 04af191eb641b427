//! The periodized minorant Ψ_ε.
//!
//! For a minorant F of the unit box Q_N with F̂ supported in Q_N,
//!
//!   Ψ_ε(x) = εᴺ Σ_{‖n‖∞ < ε⁻¹} F̂(εn) e(n·x) = Σ_{m ∈ ℤᴺ} F((x+m)/ε)
//!
//! by Poisson summation — F̂(εn) vanishes once ‖εn‖∞ ≥ 1, so the series is
//! a trigonometric polynomial. The spatial form shows Ψ_ε ≤ 1 near the
//! lattice and Ψ_ε ≤ 0 at every point of lattice distance ≥ ε, which is
//! what the sieve bounds lean on.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{numeric_fourier, BandlimitedFunction, Compensated, MinorantTransform};
use crate::error::{Error, Result};

use super::{TRANSFORM_H, TRANSFORM_RADIUS};

const TAU: f64 = std::f64::consts::TAU;

/// Cap on the coefficient tensor (2R+1)ᴺ.
const PSI_MAX_TERMS: usize = 20_000_000;

/// Ψ_ε as a stored coefficient tensor: build once, evaluate anywhere.
#[derive(Clone, Debug)]
pub struct PsiSeries {
    dimension: usize,
    eps: f64,
    /// Largest R with R·ε < 1; the series runs over ‖n‖∞ ≤ R.
    lattice_radius: i64,
    /// εᴺ, the factor in front of the series.
    scale: f64,
    /// c_n = εᴺ F̂(εn), row-major over n ∈ [−R, R]ᴺ.
    coeffs: Vec<Complex64>,
    f_hat_zero: f64,
}

impl PsiSeries {
    pub fn new(f: &BandlimitedFunction, eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0 && eps < 0.5) {
            return Err(Error::InvalidInput(format!(
                "periodization needs 0 < ε < 1/2 so the dilated boxes stay disjoint; got {eps}"
            )));
        }
        let n = f.dimension();
        let radius = {
            let mut r = (1.0 / eps).floor() as i64;
            if r as f64 * eps >= 1.0 {
                r -= 1;
            }
            r
        };
        let width = (2 * radius + 1) as usize;
        let total = width
            .checked_pow(n as u32)
            .filter(|&t| t <= PSI_MAX_TERMS)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "coefficient tensor ({width}^{n} terms) is too large at ε = {eps}"
                ))
            })?;
        let scale = eps.powi(n as i32);

        let coeffs: Vec<Complex64> = if let Some(m) = f.as_minorant() {
            // Factored fast path: one transform, one 1-D table per |n_j|.
            let transform = MinorantTransform::new(m, TRANSFORM_H, TRANSFORM_RADIUS)?;
            let tables: Vec<[f64; 3]> = (0..=radius)
                .map(|t| transform.axis_transform(eps * t as f64))
                .collect();
            (0..total)
                .into_par_iter()
                .map_init(
                    || vec![[0.0; 3]; n],
                    |buf, idx| {
                        let mut rem = idx;
                        for slot in buf.iter_mut() {
                            let digit = (rem % width) as i64 - radius;
                            rem /= width;
                            *slot = tables[digit.unsigned_abs() as usize];
                        }
                        Complex64::new(scale * transform.eval_with_tables(buf), 0.0)
                    },
                )
                .collect()
        } else {
            // Generic path: a full lattice-sum transform per coefficient.
            // `numeric_fourier` parallelizes internally, so the outer loop
            // stays sequential and deterministic.
            let mut out = Vec::with_capacity(total);
            let mut xi = vec![0.0; n];
            for idx in 0..total {
                let mut rem = idx;
                for slot in xi.iter_mut() {
                    let digit = (rem % width) as i64 - radius;
                    rem /= width;
                    *slot = eps * digit as f64;
                }
                let fv = numeric_fourier(f, &xi, TRANSFORM_H, TRANSFORM_RADIUS)?;
                out.push(scale * Complex64::new(fv.value, fv.imaginary));
            }
            out
        };

        // All-zero digits sit at the middle of the row-major order.
        let f_hat_zero = coeffs[(total - 1) / 2].re / scale;
        Ok(Self {
            dimension: n,
            eps,
            lattice_radius: radius,
            scale,
            coeffs,
            f_hat_zero,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// The series runs over ‖n‖∞ ≤ this.
    pub fn lattice_radius(&self) -> i64 {
        self.lattice_radius
    }

    /// F̂(0) as the underlying transform computed it.
    pub fn f_hat_zero(&self) -> f64 {
        self.f_hat_zero
    }

    /// The mean of Ψ_ε over the torus, εᴺ F̂(0).
    pub fn torus_integral(&self) -> f64 {
        self.scale * self.f_hat_zero
    }

    /// Ψ_ε(x). Real by conjugate symmetry of the coefficients, so only the
    /// real part of the sum is accumulated.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        let width = (2 * self.lattice_radius + 1) as usize;
        let mut acc = Compensated::default();
        for (idx, c) in self.coeffs.iter().enumerate() {
            let mut rem = idx;
            let mut dot = 0.0;
            for &xj in x {
                let digit = (rem % width) as i64 - self.lattice_radius;
                rem /= width;
                dot += digit as f64 * xj;
            }
            let (s, co) = (TAU * dot).sin_cos();
            acc.add(c.re * co - c.im * s);
        }
        Ok(acc.total())
    }
}

/// One-shot Ψ_ε(x). Sweeps should build a [`PsiSeries`] once instead.
pub fn psi_epsilon(x: &[f64], f: &BandlimitedFunction, eps: f64) -> Result<f64> {
    PsiSeries::new(f, eps)?.eval(x)
}
