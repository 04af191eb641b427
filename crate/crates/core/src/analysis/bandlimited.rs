//! Band-limited functions and the numerics shared by every construction:
//! truncated Poisson summation with honest tail bounds, numeric Fourier
//! transforms, slicing, and the fundamental inequality F̂(0) ≤ F(0).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::boxcons::Box as Region;
use crate::error::{Error, Result};
use crate::lowdim::{envelope_factor, CompiledPoly, ReferenceMinorant};
use crate::rational::{ratio_to_f64, Rat};
use crate::selberg1d::{selberg_interval, selberg_interval_integral, SelbergPair};
use crate::specfun::EvalConfig;

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Pointwise decay model |F(x)| ≤ amplitude·∏ᵢ w(xᵢ) with
/// w(u) = (1 + max(0, |u| − spatial_radius))^(−exponent). Everything the
/// tail bounds report is derived from this envelope, so constructors must
/// only claim what they can justify.
#[derive(Clone, Copy, Debug)]
struct DecayModel {
    exponent: f64,
    amplitude: f64,
    spatial_radius: f64,
}

impl DecayModel {
    /// Σ_{k≥1} (1+k)^(−p), overestimated by an integral remainder.
    fn power_series(p: f64) -> f64 {
        let mut s = 0.0_f64;
        for k in 1..=4096_i64 {
            s += (1.0 + k as f64).powf(-p);
        }
        s + 4097.0_f64.powf(1.0 - p) / (p - 1.0)
    }

    /// Σ_{m∈ℤ} w(m + shift) over the whole lattice, any |shift| ≤ margin slack.
    fn lattice_total(&self, margin: f64) -> f64 {
        let flat = 2.0 * margin.ceil() + 1.0;
        flat + 2.0 * Self::power_series(self.exponent)
    }

    /// Σ_{|m| > radius} w(m + shift), as a closed-form integral bound.
    fn lattice_tail(&self, radius: i64, margin: f64) -> f64 {
        let r = radius as f64 - margin.ceil();
        if r < 1.0 {
            return self.lattice_total(margin);
        }
        2.0 * (1.0 + r).powf(1.0 - self.exponent) / (self.exponent - 1.0)
    }

    /// Bound on Σ_{‖n‖∞ > radius} ∏ w(nᵢ + tᵢ): a union bound over which
    /// coordinate exceeds the radius.
    fn poisson_tail(&self, dimension: usize, radius: i64, shift: f64) -> f64 {
        let margin = shift + self.spatial_radius;
        let z = self.lattice_total(margin);
        self.amplitude
            * dimension as f64
            * z.powi(dimension as i32 - 1)
            * self.lattice_tail(radius, margin)
    }

    /// Bound on hᴺ Σ_{‖hm‖∞ > radius} |F(hm)| for the DTFT truncation.
    fn quadrature_tail(&self, dimension: usize, h: f64, radius: f64) -> f64 {
        let p = self.exponent;
        let full = 2.0 * self.spatial_radius + 2.0 / (p - 1.0) + h;
        let r = (radius - self.spatial_radius).max(1.0);
        let tail = 2.0 * ((1.0 + r).powf(1.0 - p) / (p - 1.0) + h * (1.0 + r).powf(-p));
        self.amplitude * dimension as f64 * full.powi(dimension as i32 - 1) * tail
    }
}

/// A function of exponential type: band-limited with Fourier support inside
/// `support_box`, with enough metadata (decay model, known integral) for
/// honest truncated numerics.
#[derive(Clone)]
pub struct BandlimitedFunction {
    dimension: usize,
    evaluator: Eval,
    support_box: Region,
    known_integral: Option<Rat>,
    decay: DecayModel,
    minorant: Option<Arc<ReferenceMinorant>>,
}

impl fmt::Debug for BandlimitedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BandlimitedFunction")
            .field("dimension", &self.dimension)
            .field("support_box", &self.support_box)
            .field("known_integral", &self.known_integral)
            .field("decay_exponent", &self.decay.exponent)
            .finish()
    }
}

impl BandlimitedFunction {
    pub fn new(
        support_box: Region,
        known_integral: Option<Rat>,
        decay_exponent: f64,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(decay_exponent > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "decay exponent must exceed 1 for integrability, got {decay_exponent}"
            )));
        }
        Ok(Self {
            dimension: support_box.dimension(),
            evaluator: Arc::new(evaluator),
            support_box,
            known_integral,
            decay: DecayModel {
                exponent: decay_exponent,
                amplitude: 1.0,
                spatial_radius: 1.0,
            },
            minorant: None,
        })
    }

    /// Override the decay envelope (amplitude and where the decay starts).
    /// The defaults (1.0, 1.0) suit functions bounded by 1 and concentrated
    /// near the unit box.
    pub fn with_decay_envelope(mut self, amplitude: f64, spatial_radius: f64) -> Self {
        self.decay.amplitude = amplitude;
        self.decay.spatial_radius = spatial_radius;
        self
    }

    /// The product-form minorant F = S·P with its exact integral attached.
    /// Decay: each per-axis factor g(x)·x^(2e) is bounded by
    /// (1 + max(0,|x|−1))⁻², so the amplitude is the minorant polynomial's
    /// total monomial mass.
    pub fn from_minorant(m: &ReferenceMinorant) -> Self {
        let dimension = m.dimension();
        let amplitude: f64 = m
            .polynomial()
            .terms()
            .map(|(key, c)| ratio_to_f64(c).abs() * orbit_size(dimension, key))
            .sum();
        let shared = Arc::new(m.clone());
        let eval = Arc::clone(&shared);
        Self {
            dimension,
            evaluator: Arc::new(move |x: &[f64]| eval.eval(x).expect("dimension enforced")),
            support_box: Region::centered_cube(dimension, 1.0).expect("dimension ≥ 1"),
            known_integral: Some(m.exact_integral().clone()),
            decay: DecayModel {
                exponent: 2.0,
                amplitude: amplitude.max(1.0),
                spatial_radius: 1.0,
            },
            minorant: Some(shared),
        }
    }

    /// A Selberg majorant/minorant of an interval, band-limited to
    /// [−δ, δ]. The integral (b−a) ± 1/δ is exact in rational arithmetic on
    /// the exact binary values of a, b, δ.
    pub fn from_selberg(pair: SelbergPair, cfg: EvalConfig) -> Self {
        let iv = pair.interval;
        let integral = Rat::from_float(iv.b())
            .zip(Rat::from_float(iv.a()))
            .zip(Rat::from_float(pair.delta))
            .map(|((b, a), d)| {
                let side = Rat::from_integer((pair.side.sign() as i64).into());
                b - a + side / d
            });
        debug_assert!((ratio_to_f64(integral.as_ref().unwrap())
            - selberg_interval_integral(&pair))
        .abs()
            < 1e-12);
        // |value − sgn blend| ≤ K(δ·dist)·2 ≤ 2/(π²δ²·dist²) beyond the
        // interval, and |value| stays ≲ 1 near it.
        let amplitude = 1.0 + 2.0 / (std::f64::consts::PI * pair.delta).powi(2);
        let spatial_radius = iv.a().abs().max(iv.b().abs());
        Self {
            dimension: 1,
            evaluator: Arc::new(move |x: &[f64]| selberg_interval(x[0], &pair, &cfg)),
            support_box: Region::centered_cube(1, pair.delta).expect("one interval"),
            known_integral: integral,
            decay: DecayModel {
                exponent: 2.0,
                amplitude,
                spatial_radius,
            },
            minorant: None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support_box(&self) -> &Region {
        &self.support_box
    }

    pub fn known_integral(&self) -> Option<&Rat> {
        self.known_integral.as_ref()
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay.exponent
    }

    pub fn as_minorant(&self) -> Option<&ReferenceMinorant> {
        self.minorant.as_deref()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "evaluation point dimension");
        (self.evaluator)(x)
    }
}

fn orbit_size(dimension: usize, key: &[u8]) -> f64 {
    let twos = key.iter().filter(|&&e| e == 2).count();
    let ones = key.len() - twos;
    (binom(dimension, twos) * binom(dimension - twos, ones)) as f64
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Neumaier-compensated accumulator: deterministic and robust against
/// cancellation across shells of very different magnitude.
#[derive(Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.c += if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.c
    }
}

/// Visit every lattice point with ‖n‖∞ = m in lexicographic order.
fn for_each_shell_point(dim: usize, m: i64, f: &mut impl FnMut(&[i64])) {
    if m == 0 {
        f(&vec![0; dim]);
        return;
    }
    let mut buf = Vec::with_capacity(dim);
    shell_rec(dim, m, false, &mut buf, f);
}

fn shell_rec(dim: usize, m: i64, hit: bool, buf: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if buf.len() == dim {
        f(buf);
        return;
    }
    if buf.len() + 1 == dim && !hit {
        // Last coordinate must realize the norm.
        for v in [-m, m] {
            buf.push(v);
            shell_rec(dim, m, true, buf, f);
            buf.pop();
        }
        return;
    }
    for v in -m..=m {
        buf.push(v);
        shell_rec(dim, m, hit || v.abs() == m, buf, f);
        buf.pop();
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PoissonSummary {
    /// Σ_{‖n‖∞ ≤ R} F(n + t), summed shell by shell.
    pub sum: f64,
    /// Bound on the omitted |Σ_{‖n‖∞ > R} F(n+t)| from the decay model;
    /// exactly 0 when every omitted term is provably zero.
    pub tail_bound: f64,
    pub terms: usize,
    /// |sum − ∫F| when the integral is known.
    pub defect: Option<f64>,
}

/// Truncated Poisson sum Σ_{‖n‖∞ ≤ radius} F(n + t).
///
/// Shells of constant ‖n‖∞ are summed independently (in parallel) and folded
/// in increasing-norm order with compensated arithmetic, so results are
/// deterministic for a fixed truncation radius.
pub fn poisson_sum(f: &BandlimitedFunction, t: &[f64], radius: i64) -> Result<PoissonSummary> {
    if t.len() != f.dimension {
        return Err(Error::DimensionMismatch {
            expected: f.dimension,
            got: t.len(),
        });
    }
    if radius < 1 {
        return Err(Error::InvalidInput(format!(
            "poisson truncation radius must be ≥ 1, got {radius}"
        )));
    }

    let shells: Vec<(f64, usize)> = (0..=radius)
        .into_par_iter()
        .map(|m| {
            let mut acc = Compensated::default();
            let mut count = 0usize;
            let mut x = vec![0.0; f.dimension];
            for_each_shell_point(f.dimension, m, &mut |n| {
                for (slot, (&ni, &ti)) in x.iter_mut().zip(n.iter().zip(t)) {
                    *slot = ni as f64 + ti;
                }
                acc.add(f.eval(&x));
                count += 1;
            });
            (acc.total(), count)
        })
        .collect();

    let mut total = Compensated::default();
    let mut terms = 0usize;
    for (s, c) in shells {
        total.add(s);
        terms += c;
    }
    let sum = total.total();

    // A product minorant vanishes at every lattice point with ‖n‖∞ ≥ 2, so
    // for an integer shift whose support window fits inside the truncation
    // box, the omitted terms are all exactly zero.
    let integer_shift = t.iter().all(|v| (v - v.round()).abs() < 1e-12);
    let window_covered = t.iter().all(|v| v.round().abs() as i64 + 1 <= radius);
    let tail_bound = if f.minorant.is_some() && integer_shift && window_covered {
        0.0
    } else {
        let shift = t.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        f.decay.poisson_tail(f.dimension, radius, shift)
    };

    let defect = f
        .known_integral
        .as_ref()
        .map(|q| (sum - ratio_to_f64(q)).abs());

    Ok(PoissonSummary {
        sum,
        tail_bound,
        terms,
        defect,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FourierValue {
    /// Re F̂(ξ) of the truncated discrete transform.
    pub value: f64,
    /// Im part (should vanish for real even F; reported as a sanity signal).
    pub imaginary: f64,
    /// Truncation-error bound from the decay model. Aliasing is exactly zero
    /// under the step-size precondition.
    pub truncation_bound: f64,
}

/// Discrete approximation to F̂(ξ) = ∫F(x)e(−ξ·x)dx:
/// hᴺ Σ_{‖hm‖∞ ≤ R} F(hm) e^(−2πi ξ·hm).
///
/// The sampling theorem makes aliasing exactly zero when the sampling rate
/// 1/h clears twice the Fourier support radius with margin; the only error
/// is spatial truncation, bounded via the decay model. Product minorants
/// use per-axis factored transforms — the same sum, reorganized — so the
/// cost per ξ is one-dimensional.
pub fn numeric_fourier(
    f: &BandlimitedFunction,
    xi: &[f64],
    h: f64,
    radius: f64,
) -> Result<FourierValue> {
    if xi.len() != f.dimension {
        return Err(Error::DimensionMismatch {
            expected: f.dimension,
            got: xi.len(),
        });
    }
    check_sampling_rate(h, &f.support_box)?;
    if !(radius > f.decay.spatial_radius) {
        return Err(Error::InvalidInput(format!(
            "truncation radius {radius} does not clear the spatial support"
        )));
    }

    let truncation_bound = f.decay.quadrature_tail(f.dimension, h, radius);

    if let Some(m) = f.minorant.as_deref() {
        let transform = MinorantTransform::new(m, h, radius)?;
        return Ok(FourierValue {
            value: transform.eval(xi),
            imaginary: 0.0,
            truncation_bound,
        });
    }

    let half = (radius / h) as i64;
    let n = f.dimension;
    let rows: Vec<Complex64> = (-half..=half)
        .into_par_iter()
        .map(|m0| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut digits = vec![-half; n - 1];
            let mut x = vec![0.0; n];
            let mut done = false;
            x[0] = h * m0 as f64;
            loop {
                for (i, &d) in digits.iter().enumerate() {
                    x[i + 1] = h * d as f64;
                }
                let phase = -2.0 * std::f64::consts::PI * dot(xi, &x);
                acc += f.eval(&x) * Complex64::new(phase.cos(), phase.sin());
                // odometer over the remaining axes
                let mut i = digits.len();
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] <= half {
                        break;
                    }
                    digits[i] = -half;
                }
                if done || digits.is_empty() {
                    break;
                }
            }
            acc
        })
        .collect();

    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let weight = h.powi(n as i32);
    for r in rows {
        re.add(r.re);
        im.add(r.im);
    }
    Ok(FourierValue {
        value: weight * re.total(),
        imaginary: weight * im.total(),
        truncation_bound,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_sampling_rate(h: f64, support: &Region) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("sampling step must be positive, got {h}")));
    }
    let rate = 1.0 / h;
    let extent = support
        .intervals()
        .iter()
        .fold(0.0_f64, |a, iv| a.max(iv.a().abs()).max(iv.b().abs()));
    // Periodized spectra sit 1/h apart; demand clearance beyond twice the
    // support radius so every ξ with ‖ξ‖∞ ≤ extent + 1/4 is alias-free.
    if rate < 2.5 || rate < 2.0 * extent + 0.5 {
        return Err(Error::AliasingRisk { step: h });
    }
    Ok(())
}

/// Per-axis factored transform of a product minorant F = ∏g(xᵢ)·P(x):
/// F̂(ξ) = Σ over the coefficient tensor of ∏ᵢ Ĝ_{eᵢ}(ξᵢ), where
/// Ĝₑ is the 1-D transform of g(x)·x^(2e). All three share one sample grid.
pub struct MinorantTransform {
    compiled: CompiledPoly,
    h: f64,
    samples: Vec<f64>,
    weights: [Vec<f64>; 3],
}

impl MinorantTransform {
    pub fn new(m: &ReferenceMinorant, h: f64, radius: f64) -> Result<Self> {
        check_sampling_rate(h, &Region::centered_cube(m.dimension(), 1.0)?)?;
        if !(radius >= 4.0) {
            return Err(Error::InvalidInput(format!(
                "transform truncation radius must be ≥ 4, got {radius}"
            )));
        }
        let half = (radius / h) as i64;
        let samples: Vec<f64> = (-half..=half).map(|k| h * k as f64).collect();
        let g: Vec<f64> = samples.iter().map(|&x| envelope_factor(x)).collect();
        let weights = [
            g.clone(),
            g.iter().zip(&samples).map(|(v, x)| v * x * x).collect(),
            g.iter()
                .zip(&samples)
                .map(|(v, x)| v * x * x * x * x)
                .collect(),
        ];
        Ok(Self {
            compiled: m.compiled().clone(),
            h,
            samples,
            weights,
        })
    }

    pub fn dimension(&self) -> usize {
        self.compiled.dimension()
    }

    /// [Ĝ₀, Ĝ₁, Ĝ₂] at one frequency. Real by symmetry of the sample grid.
    pub fn axis_transform(&self, xi: f64) -> [f64; 3] {
        let mut acc = [Compensated::default(); 3];
        for (i, &x) in self.samples.iter().enumerate() {
            let c = (2.0 * std::f64::consts::PI * xi * x).cos();
            acc[0].add(self.weights[0][i] * c);
            acc[1].add(self.weights[1][i] * c);
            acc[2].add(self.weights[2][i] * c);
        }
        [
            self.h * acc[0].total(),
            self.h * acc[1].total(),
            self.h * acc[2].total(),
        ]
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        assert_eq!(xi.len(), self.dimension(), "frequency dimension");
        let tables: Vec<[f64; 3]> = xi.iter().map(|&v| self.axis_transform(v)).collect();
        self.compiled.contract(&tables)
    }

    /// Contract precomputed per-axis tables (one triple per axis) — the fast
    /// path for dense frequency grids where axis values repeat.
    pub fn eval_with_tables(&self, tables: &[[f64; 3]]) -> f64 {
        assert_eq!(tables.len(), self.dimension(), "table dimension");
        self.compiled.contract(tables)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalReport {
    pub dimension: usize,
    /// F̂(0): exact when the integral is known, else the numeric transform.
    pub integral: f64,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub integral_exact: Option<Rat>,
    /// F(0).
    pub peak: f64,
    /// peak − integral; nonnegative (within tolerance) for any minorant of
    /// a box indicator.
    pub slack: f64,
    pub holds: bool,
    pub tolerance: f64,
}

/// Check F̂(0) ≤ F(0): the integral of an admissible minorant cannot exceed
/// its value at the origin. `radius` is the quadrature truncation radius
/// used when no exact integral is attached.
pub fn fundamental_inequality(f: &BandlimitedFunction, radius: f64) -> Result<FundamentalReport> {
    const TOL: f64 = 1e-9;
    let integral_exact = f.known_integral.clone();
    let integral = match &integral_exact {
        Some(q) => ratio_to_f64(q),
        None => numeric_fourier(f, &vec![0.0; f.dimension], 0.25, radius)?.value,
    };
    let peak = f.eval(&vec![0.0; f.dimension]);
    let slack = peak - integral;
    Ok(FundamentalReport {
        dimension: f.dimension,
        integral,
        integral_exact,
        peak,
        slack,
        holds: integral <= peak + TOL,
        tolerance: TOL,
    })
}

/// Pin the coordinates listed in `fixed` (axis, value) and return the
/// lower-dimensional restriction. Slicing a minorant at zero goes through
/// the exact polynomial restriction, preserving the exact integral; any
/// other assignment keeps the evaluator and inherits the decay model with
/// the pinned axes' decay folded into the amplitude.
pub fn slice(f: &BandlimitedFunction, fixed: &[(usize, f64)]) -> Result<BandlimitedFunction> {
    let n = f.dimension;
    if fixed.is_empty() {
        return Ok(f.clone());
    }
    if fixed.len() >= n {
        return Err(Error::InvalidInput(format!(
            "cannot fix {} of {} coordinates; at least one must stay free",
            fixed.len(),
            n
        )));
    }
    let mut pinned: Vec<Option<f64>> = vec![None; n];
    for &(axis, value) in fixed {
        if axis >= n {
            return Err(Error::InvalidInput(format!(
                "axis {axis} out of range for dimension {n}"
            )));
        }
        if pinned[axis].replace(value).is_some() {
            return Err(Error::InvalidInput(format!("axis {axis} fixed twice")));
        }
    }

    // Exact path: a symmetric product minorant restricted at zero is the
    // reference minorant one dimension down, repeatedly.
    if let Some(m) = f.minorant.as_deref() {
        if fixed.iter().all(|&(_, v)| v == 0.0) {
            let mut reduced = m.clone();
            for _ in 0..fixed.len() {
                reduced = reduced.restricted()?;
            }
            return Ok(BandlimitedFunction::from_minorant(&reduced));
        }
    }

    let free: Vec<usize> = (0..n).filter(|&i| pinned[i].is_none()).collect();
    let support = Region::new(
        free.iter()
            .map(|&i| f.support_box.intervals()[i])
            .collect(),
    )?;
    let template: Vec<Option<f64>> = pinned;
    let parent = Arc::clone(&f.evaluator);
    let free_for_eval = free.clone();
    let evaluator: Eval = Arc::new(move |y: &[f64]| {
        let mut x: Vec<f64> = template.iter().map(|v| v.unwrap_or(0.0)).collect();
        for (&axis, &value) in free_for_eval.iter().zip(y) {
            x[axis] = value;
        }
        parent(&x)
    });

    let mut amplitude = f.decay.amplitude;
    for &(_, v) in fixed {
        let beyond = (v.abs() - f.decay.spatial_radius).max(0.0);
        amplitude *= (1.0 + beyond).powf(-f.decay.exponent);
    }

    Ok(BandlimitedFunction {
        dimension: free.len(),
        evaluator,
        support_box: support,
        known_integral: None,
        decay: DecayModel {
            amplitude,
            ..f.decay
        },
        minorant: None,
    })
}
