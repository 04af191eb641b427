//! The certified low-dimensional minorants F = S·P, their exact integrals,
//! lattice interpolation checks, and the algebraic identities behind the
//! admissibility proofs.
//!
//! S(x) = ∏ g(xᵢ) with g(x) = (sin(πx)/(πx(x²−1)))² is a nonnegative
//! envelope band-limited (per factor) to [−1,1], with g(0) = 1, g(±1) = ¼,
//! and double zeros at |m| ≥ 2. Multiplying by an even symmetric polynomial
//! P of per-variable degree ≤ 4 keeps the product band-limited to Q_N and
//! gives it value P(0) at 0 and 4^{−k}·P(u_k) at lattice corners with k
//! nonzero entries. If P interpolates P(0)=1 and vanishes at u₁, Poisson
//! summation turns the integral into the finite corner sum
//!
//!   ∫F = 1 + Σ_{k=2}^N C(N,k)·2^{−k}·P(u_k),
//!
//! an exact rational.

use crate::error::{Error, Result};
use crate::lowdim::poly::{CompiledPoly, SymmetricQuartic};
use crate::rational::{rat, Rat};
use crate::specfun::sin_pi;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;
use std::f64::consts::PI;

/// g(x) = (sin(πx)/(πx(x²−1)))²: one envelope factor.
/// Removable singularities: g(0) = 1, g(±1) = ¼. Decays like x⁻⁶.
pub fn envelope_factor(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x - x.round() == 0.0 {
        // sin has a simple zero; at ±1 one denominator factor cancels it.
        return if x.abs() == 1.0 { 0.25 } else { 0.0 };
    }
    // x²−1 as (x−1)(x+1): exact subtraction near the ±1 singularities.
    let d = PI * x * (x - 1.0) * (x + 1.0);
    let r = sin_pi(x) / d;
    r * r
}

/// S(x) = ∏ g(xᵢ).
pub fn envelope(x: &[f64]) -> f64 {
    x.iter().map(|&v| envelope_factor(v)).product()
}

/// Exact value of g at an integer: 1 at 0, ¼ at ±1, 0 beyond.
pub fn envelope_factor_exact(m: i64) -> Rat {
    match m.abs() {
        0 => Rat::one(),
        1 => rat(1, 4),
        _ => Rat::zero(),
    }
}

/// The polynomial component P_N of the certified N-dimensional minorant:
///
///   P_N = ∏(1−xₙ²) − (3/4)σ_{N,4} [N ≥ 4] − (1/16)σ̃_{N,2} [N ≥ 2].
///
/// N = 1 yields 1 − x², whose product with g is the 1-D extremal minorant.
pub fn minorant_polynomial(n: usize) -> Result<SymmetricQuartic> {
    if !(1..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(
            n,
            "certified minorant polynomials exist for dimensions 1 through 5",
        ));
    }
    // ∏(1−xᵢ²) = Σ_k (−1)^k σ_{N,k}
    let mut p = SymmetricQuartic::constant(n, Rat::one());
    for k in 1..=n {
        let sign = if k % 2 == 1 { rat(-1, 1) } else { rat(1, 1) };
        p.add_term(&vec![1; k], &sign)?;
    }
    if n >= 2 {
        p.add_term(&[2, 2], &rat(-1, 16))?;
    }
    if n >= 4 {
        p.add_term(&[1, 1, 1, 1], &rat(-3, 4))?;
    }
    Ok(p)
}

/// ∫ S·P over ℝ^N as an exact rational, via the corner formula.
///
/// Requires the interpolation conditions P(0) = 1 and P(u₁) = 0 (otherwise
/// the non-corner lattice terms of the Poisson sum would not vanish).
pub fn corner_integral(p: &SymmetricQuartic) -> Result<Rat> {
    if p.coefficient(&[]) != Rat::one() {
        return Err(Error::NotInterpolating(format!(
            "P(0) = {}",
            p.coefficient(&[])
        )));
    }
    let at_u1 = p.eval_unit_pattern(1)?;
    if !at_u1.is_zero() {
        return Err(Error::NotInterpolating(format!("P(u_1) = {at_u1}")));
    }
    let n = p.dimension();
    let mut acc = Rat::one();
    for k in 2..=n {
        let choose = Rat::from_integer(binomial(BigInt::from(n), BigInt::from(k)));
        let weight = rat(1, 1 << k);
        acc += choose * weight * p.eval_unit_pattern(k)?;
    }
    Ok(acc)
}

/// Brute-force exact lattice sum Σ_{n ∈ {−1,0,1}^N} S(n)·P(n).
///
/// Lattice points with any |nᵢ| ≥ 2 contribute nothing (S vanishes there),
/// so this is the full Poisson sum of S·P over ℤ^N. Evaluates P at literal
/// points — an independent route to the corner formula.
pub fn exact_lattice_sum(p: &SymmetricQuartic) -> Result<Rat> {
    let n = p.dimension();
    let mut acc = Rat::zero();
    let mut digits = vec![0u8; n];
    loop {
        let point: Vec<Rat> = digits.iter().map(|&d| rat(i64::from(d) - 1, 1)).collect();
        let nonzero = digits.iter().filter(|&&d| d != 1).count();
        let s = rat(1, 1 << (2 * nonzero)); // (1/4)^nonzero
        acc += s * p.eval_exact(&point)?;
        // odometer over {0,1,2}^N
        let mut i = 0;
        loop {
            if i == n {
                return Ok(acc);
            }
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// A minorant candidate in product form S·P with its exact integral.
///
/// `new` produces the certified dimensions 1–5. `from_polynomial` accepts
/// any polynomial satisfying the interpolation conditions; for those, the
/// integral is still exact but admissibility is *not* proven — run
/// [`verify_admissibility`](crate::lowdim::verify_admissibility) to probe it
/// numerically.
#[derive(Clone, Debug)]
pub struct ReferenceMinorant {
    dimension: usize,
    polynomial: SymmetricQuartic,
    compiled: CompiledPoly,
    exact_integral: Rat,
}

impl ReferenceMinorant {
    pub fn new(dimension: usize) -> Result<Self> {
        Self::from_polynomial(minorant_polynomial(dimension)?)
    }

    pub fn from_polynomial(polynomial: SymmetricQuartic) -> Result<Self> {
        let exact_integral = corner_integral(&polynomial)?;
        Ok(Self {
            dimension: polynomial.dimension(),
            compiled: polynomial.compile(),
            polynomial,
            exact_integral,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn polynomial(&self) -> &SymmetricQuartic {
        &self.polynomial
    }

    pub fn compiled(&self) -> &CompiledPoly {
        &self.compiled
    }

    pub fn exact_integral(&self) -> &Rat {
        &self.exact_integral
    }

    /// F(x) = S(x)·P(x).
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(envelope(x) * self.compiled.eval(x))
    }

    /// Exact rational value at a lattice point.
    pub fn eval_at_lattice(&self, n: &[i64]) -> Result<Rat> {
        if n.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: n.len(),
            });
        }
        let mut s = Rat::one();
        for &m in n {
            s *= envelope_factor_exact(m);
            if s.is_zero() {
                return Ok(s);
            }
        }
        let point: Vec<Rat> = n.iter().map(|&m| rat(m, 1)).collect();
        Ok(s * self.polynomial.eval_exact(&point)?)
    }

    /// The slice with the last variable pinned to 0, one dimension down.
    /// g(0) = 1 makes this exact at the polynomial level.
    pub fn restricted(&self) -> Result<Self> {
        Self::from_polynomial(self.polynomial.restricted()?)
    }
}

/// Is the lattice point a box corner: entries in {−1,0,1}, at least two of
/// them nonzero?
pub fn is_corner(n: &[i64]) -> bool {
    n.iter().all(|&m| m.abs() <= 1) && n.iter().filter(|&&m| m != 0).count() >= 2
}

#[derive(Clone, Debug, Serialize)]
pub struct CornerValue {
    /// Number of nonzero entries of the corner class.
    pub nonzero_entries: usize,
    /// Number of corners in the class: C(N,k)·2^k.
    pub count: usize,
    /// F at one representative (all corners in a class agree by symmetry).
    pub value: f64,
}

/// Result of sweeping F over the lattice ball ‖n‖∞ ≤ R.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeCheck {
    pub dimension: usize,
    pub radius: i64,
    /// F(0); must be 1 for interpolating candidates.
    pub origin_value: f64,
    /// Largest |F(n)| over non-corner n ≠ 0 in the ball (must be ≈ 0).
    pub max_noncorner_abs: f64,
    pub corner_values: Vec<CornerValue>,
    /// Exact finite Poisson sum Σ F(n) over the ball (rational).
    #[serde(with = "crate::rational::serde_ratio")]
    pub poisson_sum: Rat,
    /// Whether the Poisson sum equals the corner-formula integral exactly.
    pub matches_integral: bool,
    pub passed: bool,
}

/// Verify the lattice interpolation pattern of a candidate: F(0) = 1, F = 0
/// at non-corner lattice points, and finite Poisson sum equal to the exact
/// integral.
pub fn lattice_interpolation_check(m: &ReferenceMinorant, radius: i64) -> Result<LatticeCheck> {
    if radius < 2 {
        return Err(Error::InvalidInput(format!(
            "lattice radius {radius} too small: corners need radius ≥ 2 context"
        )));
    }
    let n = m.dimension();
    let width = 2 * radius + 1;
    let total = (width as u64).pow(n as u32);
    let mut origin_value = f64::NAN;
    let mut max_noncorner_abs = 0.0f64;
    let mut poisson_sum = Rat::zero();
    let mut corner_values: Vec<CornerValue> = Vec::new();
    for flat in 0..total {
        let mut rest = flat;
        let mut point = vec![0i64; n];
        for slot in point.iter_mut() {
            *slot = (rest % width as u64) as i64 - radius;
            rest /= width as u64;
        }
        let value = m.eval(&point.iter().map(|&v| v as f64).collect::<Vec<_>>())?;
        poisson_sum += m.eval_at_lattice(&point)?;
        if point.iter().all(|&v| v == 0) {
            origin_value = value;
        } else if is_corner(&point) {
            let k = point.iter().filter(|&&v| v != 0).count();
            match corner_values.iter_mut().find(|c| c.nonzero_entries == k) {
                Some(c) => c.count += 1,
                None => corner_values.push(CornerValue {
                    nonzero_entries: k,
                    count: 1,
                    value,
                }),
            }
        } else {
            max_noncorner_abs = max_noncorner_abs.max(value.abs());
        }
    }
    corner_values.sort_by_key(|c| c.nonzero_entries);
    let matches_integral = &poisson_sum == m.exact_integral();
    let passed =
        (origin_value - 1.0).abs() <= 1e-12 && max_noncorner_abs <= 1e-12 && matches_integral;
    Ok(LatticeCheck {
        dimension: n,
        radius,
        origin_value,
        max_noncorner_abs,
        corner_values,
        poisson_sum,
        matches_integral,
        passed,
    })
}

/// Outcome of the exact identity suite backing the admissibility proofs.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    /// 1 + t² − 2t − t⁴/16 = (1−t)² − t⁴/16, coefficient-exact.
    pub square_form: bool,
    /// 1 + t² − 2t − t⁴/16 = (t−2)²(4−4t−t²)/16, coefficient-exact.
    pub factored_form: bool,
    /// min over samples of (x₁²x₂² + x₃²x₄²) − (σ_{4,2} − σ_{4,3}) on
    /// |xᵢ| ≥ 1; nonnegative iff the pairing inequality holds there.
    pub pairing_margin: f64,
    /// Equality case at (1,1,1,1): both sides equal 2.
    pub pairing_boundary_equality: bool,
}

/// Verify the two diagonal expansions exactly and probe the pairing
/// inequality on its claimed region. Errors signal a transcription bug, not
/// a numeric violation.
pub fn check_identities() -> Result<IdentityReport> {
    // Target: 1 − 2t + t² − t⁴/16.
    let target = vec![rat(1, 1), rat(-2, 1), rat(1, 1), rat(0, 1), rat(-1, 16)];

    // (1−t)² − t⁴/16
    let square = poly_sub(
        &poly_mul(&[rat(1, 1), rat(-1, 1)], &[rat(1, 1), rat(-1, 1)]),
        &[rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 16)],
    );
    let square_form = poly_eq(&square, &target);
    if !square_form {
        return Err(Error::AlgebraicIdentity(
            "(1−t)² − t⁴/16 does not expand to 1 + t² − 2t − t⁴/16".into(),
        ));
    }

    // (t−2)²(4−4t−t²)/16
    let factored = poly_scale(
        &poly_mul(
            &poly_mul(&[rat(-2, 1), rat(1, 1)], &[rat(-2, 1), rat(1, 1)]),
            &[rat(4, 1), rat(-4, 1), rat(-1, 1)],
        ),
        &rat(1, 16),
    );
    let factored_form = poly_eq(&factored, &target);
    if !factored_form {
        return Err(Error::AlgebraicIdentity(
            "(t−2)²(4−4t−t²)/16 does not expand to 1 + t² − 2t − t⁴/16".into(),
        ));
    }

    // σ_{4,2} − σ_{4,3} ≤ x₁²x₂² + x₃²x₄² for |xᵢ| ≥ 1.
    let mut pairing_margin = f64::INFINITY;
    for u in crate::sampling::cube_points(4, 4000, 99, 0.0, 1.0) {
        let x: Vec<f64> = u.iter().map(|&v| 1.0 + 5.0 * v).collect();
        let lhs = crate::lowdim::poly::sigma(2, &x)? - crate::lowdim::poly::sigma(3, &x)?;
        let rhs = x[0] * x[0] * x[1] * x[1] + x[2] * x[2] * x[3] * x[3];
        pairing_margin = pairing_margin.min(rhs - lhs);
    }
    let ones = [1.0; 4];
    let boundary_lhs =
        crate::lowdim::poly::sigma(2, &ones)? - crate::lowdim::poly::sigma(3, &ones)?;
    let pairing_boundary_equality = boundary_lhs == 2.0;
    Ok(IdentityReport {
        square_form,
        factored_form,
        pairing_margin,
        pairing_boundary_equality,
    })
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), Rat::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    out
}

fn poly_scale(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|v| v * c).collect()
}

fn poly_eq(a: &[Rat], b: &[Rat]) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|i| {
        let ai = a.get(i).cloned().unwrap_or_else(Rat::zero);
        let bi = b.get(i).cloned().unwrap_or_else(Rat::zero);
        ai == bi
    })
}
