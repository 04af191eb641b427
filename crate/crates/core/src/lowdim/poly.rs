//! Symmetric even polynomials of per-variable degree ≤ 4, with exact
//! rational coefficients.
//!
//! Everything here is expressed in the squared variables yᵢ = xᵢ². A
//! polynomial is stored on the monomial-symmetric basis indexed by exponent
//! multisets over {1,2}: the key [2,1] stands for Σ_{i≠j} yᵢ²yⱼ = Σ xᵢ⁴xⱼ²,
//! the empty key for the constant. This makes "symmetric, even, per-variable
//! degree ≤ 4" structural, and keeps coefficient arithmetic exact.

use crate::error::{Error, Result};
use crate::rational::Rat;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Σ over k-subsets of ∏ xᵢ² (elementary symmetric in the squares).
pub fn sigma(k: usize, x: &[f64]) -> Result<f64> {
    subset_power_sum(k, x, 2)
}

/// Σ over k-subsets of ∏ xᵢ⁴ (elementary symmetric in the fourth powers).
pub fn sigma_quartic(k: usize, x: &[f64]) -> Result<f64> {
    subset_power_sum(k, x, 4)
}

fn subset_power_sum(k: usize, x: &[f64], power: i32) -> Result<f64> {
    if k < 1 || k > x.len() {
        return Err(Error::InvalidInput(format!(
            "subset size {k} out of range 1..={}",
            x.len()
        )));
    }
    let mut acc = 0.0;
    for idx in combinations(x.len(), k) {
        acc += idx.iter().map(|&i| x[i].powi(power)).product::<f64>();
    }
    Ok(acc)
}

/// All k-element index subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Symmetric polynomial in x₁²,…,x_N² with per-variable degree ≤ 2 (degree
/// ≤ 4 in the xᵢ), exact rational coefficients on the monomial-symmetric
/// basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricQuartic {
    dimension: usize,
    // Keys sorted descending, entries in {1,2}, length ≤ dimension; zero
    // coefficients are never stored.
    coeffs: BTreeMap<Vec<u8>, Rat>,
}

impl SymmetricQuartic {
    pub fn zero(dimension: usize) -> Self {
        Self {
            dimension,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: Rat) -> Self {
        let mut p = Self::zero(dimension);
        if !c.is_zero() {
            p.coeffs.insert(Vec::new(), c);
        }
        p
    }

    /// σ_{N,k} as a polynomial: the key [1,…,1] (k ones).
    pub fn elementary(dimension: usize, k: usize) -> Result<Self> {
        let mut p = Self::zero(dimension);
        p.add_term(&vec![1; k], &Rat::one())?;
        Ok(p)
    }

    /// σ̃_{N,k} as a polynomial: the key [2,…,2] (k twos).
    pub fn elementary_quartic(dimension: usize, k: usize) -> Result<Self> {
        let mut p = Self::zero(dimension);
        p.add_term(&vec![2; k], &Rat::one())?;
        Ok(p)
    }

    fn canonical_key(&self, key: &[u8]) -> Result<Vec<u8>> {
        let mut k: Vec<u8> = key.iter().copied().filter(|&e| e != 0).collect();
        if k.iter().any(|&e| e > 2) {
            return Err(Error::InvalidInput(format!(
                "exponent above 2 in squared variables: {key:?}"
            )));
        }
        if k.len() > self.dimension {
            return Err(Error::InvalidInput(format!(
                "key {key:?} uses more than {} variables",
                self.dimension
            )));
        }
        k.sort_unstable_by(|a, b| b.cmp(a));
        Ok(k)
    }

    pub fn add_term(&mut self, key: &[u8], c: &Rat) -> Result<()> {
        let k = self.canonical_key(key)?;
        let entry = self.coeffs.entry(k.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
        Ok(())
    }

    pub fn with_coefficient(mut self, key: &[u8], c: Rat) -> Result<Self> {
        let k = self.canonical_key(key)?;
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
        Ok(self)
    }

    pub fn coefficient(&self, key: &[u8]) -> Rat {
        match self.canonical_key(key) {
            Ok(k) => self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero),
            Err(_) => Rat::zero(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k, c)?;
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dimension);
        }
        Self {
            dimension: self.dimension,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Rat)> {
        self.coeffs.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn basis_size(&self) -> usize {
        self.coeffs.len()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got,
            });
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &[Rat]) -> Result<Rat> {
        self.check_dim(x.len())?;
        let y: Vec<Rat> = x.iter().map(|v| v * v).collect();
        let mut acc = Rat::zero();
        for (key, c) in &self.coeffs {
            acc += c * monomial_symmetric_exact(key, &y);
        }
        Ok(acc)
    }

    /// Floating-point value at a point. One-shot path; sweeps should
    /// [`compile`](Self::compile) once instead.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let mut acc = 0.0;
        for (key, c) in &self.coeffs {
            acc += rat_to_f64(c) * monomial_symmetric_f64(key, &y);
        }
        Ok(acc)
    }

    /// Exact value at u_k = (1,…,1,0,…,0) with k ones. The basis value is a
    /// multinomial count: a key with a twos and b ones contributes
    /// C(k,a)·C(k−a,b).
    pub fn eval_unit_pattern(&self, k: usize) -> Result<Rat> {
        if k > self.dimension {
            return Err(Error::InvalidInput(format!(
                "unit pattern u_{k} does not fit in dimension {}",
                self.dimension
            )));
        }
        let mut acc = Rat::zero();
        for (key, c) in &self.coeffs {
            let (a, b) = two_one_counts(key);
            if a + b > k {
                continue;
            }
            let ways = binomial(BigInt::from(k), BigInt::from(a))
                * binomial(BigInt::from(k - a), BigInt::from(b));
            acc += c * Rat::from_integer(ways);
        }
        Ok(acc)
    }

    /// The polynomial with the last variable set to 0, over N−1 variables.
    /// Keys touching all N variables die; everything else is unchanged.
    pub fn restricted(&self) -> Result<Self> {
        if self.dimension < 2 {
            return Err(Error::UnsupportedDimension(
                self.dimension,
                "restriction needs at least two variables",
            ));
        }
        let mut out = Self::zero(self.dimension - 1);
        for (key, c) in &self.coeffs {
            if key.len() < self.dimension {
                out.add_term(key, c)?;
            }
        }
        Ok(out)
    }

    /// Leading coefficient polynomial when `escaping` of the variables go to
    /// infinity together and the rest stay bounded.
    ///
    /// Substituting t for the escaping variables makes each key contribute
    /// t-degree 2·(sum of the parts it can place on escaping slots); the
    /// maximum is reached by placing its largest min(a, len) parts there.
    /// Returns the coefficient of the top power (a polynomial in the N−a
    /// remaining variables) together with that power's degree in t².
    pub fn escape_leading(&self, escaping: usize) -> Result<(Self, u32)> {
        if escaping < 1 || escaping > self.dimension {
            return Err(Error::InvalidInput(format!(
                "escape count {escaping} out of range 1..={}",
                self.dimension
            )));
        }
        let remaining = self.dimension - escaping;
        if self.is_zero() {
            return Ok((Self::zero(remaining), 0));
        }
        let top_degree = |key: &[u8]| -> u32 {
            key.iter()
                .take(escaping)
                .map(|&e| u32::from(e))
                .sum()
        };
        let d = self.coeffs.keys().map(|k| top_degree(k)).max().unwrap_or(0);
        let mut out = Self::zero(remaining);
        for (key, c) in &self.coeffs {
            if top_degree(key) != d {
                continue;
            }
            let cut = key.len().min(escaping);
            let (top, rest) = key.split_at(cut);
            // Distinct placements of the padded top multiset on the labeled
            // escaping slots: escaping! / (#2s! · #1s! · #0s!).
            let (a2, a1) = two_one_counts(top);
            let a0 = escaping - top.len();
            let mult = binomial(BigInt::from(escaping), BigInt::from(a2))
                * binomial(BigInt::from(escaping - a2), BigInt::from(a1))
                * binomial(BigInt::from(escaping - a2 - a1), BigInt::from(a0));
            out.add_term(rest, &(c * Rat::from_integer(mult)))?;
        }
        Ok((out, d))
    }

    /// Coefficient polynomial of one diagonal-escape regime: substituting t
    /// for the `escaping` variables and collecting the t^{2·weight} term.
    ///
    /// Unlike [`escape_leading`](Self::escape_leading) this keeps a fixed
    /// regime, so several part sub-multisets of a key can contribute (e.g.
    /// weight 2 collects both a single 2 and a pair of 1s when the slot
    /// budget allows). `escape_component(a, d)` with d the degree returned
    /// by `escape_leading(a)` reproduces the leading polynomial.
    pub fn escape_component(&self, escaping: usize, weight: u32) -> Result<Self> {
        if escaping < 1 || escaping > self.dimension {
            return Err(Error::InvalidInput(format!(
                "escape count {escaping} out of range 1..={}",
                self.dimension
            )));
        }
        let remaining = self.dimension - escaping;
        let mut out = Self::zero(remaining);
        let w = weight as usize;
        for (key, c) in &self.coeffs {
            let (k2, k1) = two_one_counts(key);
            for t2 in 0..=k2.min(escaping).min(w / 2) {
                let t1 = w - 2 * t2;
                if t1 > k1 || t2 + t1 > escaping {
                    continue;
                }
                if key.len() - t2 - t1 > remaining {
                    continue;
                }
                let rest: Vec<u8> = std::iter::repeat(2)
                    .take(k2 - t2)
                    .chain(std::iter::repeat(1).take(k1 - t1))
                    .collect();
                let free = escaping - t2 - t1;
                let mult = binomial(BigInt::from(escaping), BigInt::from(t2))
                    * binomial(BigInt::from(escaping - t2), BigInt::from(t1))
                    * binomial(BigInt::from(escaping - t2 - t1), BigInt::from(free));
                out.add_term(&rest, &(c * Rat::from_integer(mult)))?;
            }
        }
        Ok(out)
    }

    /// Dense per-variable-degree-2 tensor for fast repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        assert!(
            self.dimension <= 12,
            "dense compilation is exponential in dimension"
        );
        let size = 3usize.pow(self.dimension as u32);
        let mut dense = vec![0.0; size];
        for (key, c) in &self.coeffs {
            let cf = rat_to_f64(c);
            let (a, b) = two_one_counts(key);
            for twos in combinations(self.dimension, a) {
                let rest: Vec<usize> = (0..self.dimension)
                    .filter(|i| !twos.contains(i))
                    .collect();
                for ones_local in combinations(rest.len(), b) {
                    let mut idx = 0usize;
                    for &i in &twos {
                        idx += 2 * 3usize.pow(i as u32);
                    }
                    for &j in &ones_local {
                        idx += 3usize.pow(rest[j] as u32);
                    }
                    dense[idx] += cf;
                }
            }
        }
        CompiledPoly {
            dimension: self.dimension,
            dense,
        }
    }
}

impl fmt::Display for SymmetricQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let show_coeff = !mag.is_one() || key.is_empty();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if !key.is_empty() {
                if show_coeff {
                    write!(f, "·")?;
                }
                let parts: Vec<String> = key.iter().map(|e| e.to_string()).collect();
                write!(f, "m[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

/// (count of 2s, count of 1s) in a canonical key.
fn two_one_counts(key: &[u8]) -> (usize, usize) {
    let a = key.iter().filter(|&&e| e == 2).count();
    (a, key.len() - a)
}

fn monomial_symmetric_exact(key: &[u8], y: &[Rat]) -> Rat {
    let (a, b) = two_one_counts(key);
    let n = y.len();
    let mut acc = Rat::zero();
    for twos in combinations(n, a) {
        let rest: Vec<usize> = (0..n).filter(|i| !twos.contains(i)).collect();
        let sq: Rat = twos.iter().map(|&i| &y[i] * &y[i]).product();
        for ones_local in combinations(rest.len(), b) {
            let lin: Rat = ones_local.iter().map(|&j| y[rest[j]].clone()).product();
            acc += &sq * lin;
        }
    }
    acc
}

fn monomial_symmetric_f64(key: &[u8], y: &[f64]) -> f64 {
    let (a, b) = two_one_counts(key);
    let n = y.len();
    let mut acc = 0.0;
    for twos in combinations(n, a) {
        let rest: Vec<usize> = (0..n).filter(|i| !twos.contains(i)).collect();
        let sq: f64 = twos.iter().map(|&i| y[i] * y[i]).product();
        for ones_local in combinations(rest.len(), b) {
            let lin: f64 = ones_local.iter().map(|&j| y[rest[j]]).product();
            acc += sq * lin;
        }
    }
    acc
}

fn rat_to_f64(c: &Rat) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Dense tensor of coefficients over (y₁,…,y_N) with per-variable degree 2,
/// evaluated by nested Horner. Index layout: Σ eᵢ·3ⁱ.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    dimension: usize,
    dense: Vec<f64>,
}

impl CompiledPoly {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        Self::horner(&self.dense, &y, self.dimension)
    }

    fn horner(slice: &[f64], y: &[f64], dim: usize) -> f64 {
        if dim == 0 {
            return slice[0];
        }
        let stride = slice.len() / 3;
        let c0 = Self::horner(&slice[..stride], y, dim - 1);
        let c1 = Self::horner(&slice[stride..2 * stride], y, dim - 1);
        let c2 = Self::horner(&slice[2 * stride..], y, dim - 1);
        let t = y[dim - 1];
        c0 + t * (c1 + t * c2)
    }

    /// Mixed first partial: differentiate once in every axis with
    /// `diff[i] = true`, then evaluate at `x`. Exact for dyadic inputs.
    pub fn eval_partial(&self, x: &[f64], diff: &[bool]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        debug_assert_eq!(diff.len(), self.dimension);
        Self::horner_partial(&self.dense, x, diff, self.dimension)
    }

    fn horner_partial(slice: &[f64], x: &[f64], diff: &[bool], dim: usize) -> f64 {
        if dim == 0 {
            return slice[0];
        }
        let stride = slice.len() / 3;
        let c1 = Self::horner_partial(&slice[stride..2 * stride], x, diff, dim - 1);
        let c2 = Self::horner_partial(&slice[2 * stride..], x, diff, dim - 1);
        let v = x[dim - 1];
        let t = v * v;
        if diff[dim - 1] {
            // d/dv [c0 + v²c1 + v⁴c2] = 2v·(c1 + 2v²·c2)
            2.0 * v * (c1 + 2.0 * t * c2)
        } else {
            let c0 = Self::horner_partial(&slice[..stride], x, diff, dim - 1);
            c0 + t * (c1 + t * c2)
        }
    }

    /// Contract the tensor against per-axis weight triples:
    /// Σ_e dense[e] ∏ᵢ tables[i][eᵢ]. With tables[i] = [Ĝ₀(ξᵢ), Ĝ₁(ξᵢ), Ĝ₂(ξᵢ)]
    /// this turns per-axis transforms into the transform of S·P.
    pub fn contract(&self, tables: &[[f64; 3]]) -> f64 {
        debug_assert_eq!(tables.len(), self.dimension);
        Self::contract_rec(&self.dense, tables, self.dimension)
    }

    fn contract_rec(slice: &[f64], tables: &[[f64; 3]], dim: usize) -> f64 {
        if dim == 0 {
            return slice[0];
        }
        let stride = slice.len() / 3;
        let t = &tables[dim - 1];
        Self::contract_rec(&slice[..stride], tables, dim - 1) * t[0]
            + Self::contract_rec(&slice[stride..2 * stride], tables, dim - 1) * t[1]
            + Self::contract_rec(&slice[2 * stride..], tables, dim - 1) * t[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(2, &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(sigma_quartic(2, &[1.0, 1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(sigma(4, &[1.0; 5]).unwrap(), 5.0);
        assert_eq!(sigma(1, &[2.0, 3.0]).unwrap(), 13.0);
        assert_eq!(sigma_quartic(1, &[2.0]).unwrap(), 16.0);
        assert!(sigma(3, &[1.0, 1.0]).is_err());
        assert!(sigma(0, &[1.0]).is_err());
    }

    #[test]
    fn canonicalization_and_arithmetic() {
        let mut p = SymmetricQuartic::zero(3);
        p.add_term(&[1, 2], &rat(1, 2)).unwrap();
        p.add_term(&[0, 2, 1], &rat(1, 2)).unwrap(); // same key, reordered + padded
        assert_eq!(p.coefficient(&[2, 1]), rat(1, 1));
        p.add_term(&[2, 1], &rat(-1, 1)).unwrap();
        assert!(p.is_zero());
        assert!(p.add_term(&[3], &rat(1, 1)).is_err());
        assert!(p.add_term(&[1, 1, 1, 1], &rat(1, 1)).is_err());
    }

    #[test]
    fn exact_and_float_agree() {
        // p = 2 − σ_{3,1} + ½·Σ yᵢ²yⱼ
        let p = SymmetricQuartic::constant(3, rat(2, 1))
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[2, 1], rat(1, 2))
            .unwrap();
        let xf = [0.5, -1.5, 2.0];
        let xr = [rat(1, 2), rat(-3, 2), rat(2, 1)];
        let exact = p.eval_exact(&xr).unwrap();
        let float = p.eval(&xf).unwrap();
        let compiled = p.compile().eval(&xf);
        let want = exact.to_f64().unwrap();
        assert_abs_diff_eq!(float, want, epsilon = 1e-12);
        assert_abs_diff_eq!(compiled, want, epsilon = 1e-12);
        assert!(p.eval(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn compiled_matches_direct_on_random_points() {
        let p = SymmetricQuartic::constant(4, rat(1, 1))
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[1, 1], rat(1, 1))
            .unwrap()
            .with_coefficient(&[2, 2], rat(-1, 16))
            .unwrap()
            .with_coefficient(&[2, 1, 1], rat(3, 7))
            .unwrap();
        let c = p.compile();
        for pt in crate::sampling::cube_points(4, 200, 5, -2.0, 2.0) {
            assert_abs_diff_eq!(c.eval(&pt), p.eval(&pt).unwrap(), epsilon = 1e-11);
        }
    }

    #[test]
    fn unit_pattern_counts() {
        // m_[1] at u_k is k; m_[1,1] is C(k,2); m_[2,2] is C(k,2).
        let p = SymmetricQuartic::zero(5)
            .with_coefficient(&[1], rat(1, 1))
            .unwrap();
        assert_eq!(p.eval_unit_pattern(3).unwrap(), rat(3, 1));
        let q = SymmetricQuartic::zero(5)
            .with_coefficient(&[2, 2], rat(1, 1))
            .unwrap();
        assert_eq!(q.eval_unit_pattern(4).unwrap(), rat(6, 1));
        assert_eq!(q.eval_unit_pattern(1).unwrap(), rat(0, 1));
        // Cross-check against exact evaluation at the literal point.
        let r = SymmetricQuartic::zero(4)
            .with_coefficient(&[2, 1], rat(5, 3))
            .unwrap();
        let point = [rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1)];
        assert_eq!(
            r.eval_unit_pattern(3).unwrap(),
            r.eval_exact(&point).unwrap()
        );
    }

    #[test]
    fn restriction_drops_full_support_keys() {
        let p = SymmetricQuartic::constant(3, rat(1, 1))
            .with_coefficient(&[1, 1, 1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[1, 1], rat(2, 1))
            .unwrap();
        let q = p.restricted().unwrap();
        assert_eq!(q.dimension(), 2);
        assert_eq!(q.coefficient(&[1, 1, 1]), rat(0, 1));
        assert_eq!(q.coefficient(&[1, 1]), rat(2, 1));
        assert_eq!(q.coefficient(&[]), rat(1, 1));
        // Pointwise: restricting is evaluating with a trailing zero.
        let xr = [rat(2, 3), rat(-1, 2)];
        let padded = [rat(2, 3), rat(-1, 2), rat(0, 1)];
        assert_eq!(q.eval_exact(&xr).unwrap(), p.eval_exact(&padded).unwrap());
    }

    #[test]
    fn escape_leading_examples() {
        // p = 1 − m[1] + m[1,1] − (1/16)m[2,2] in two variables.
        let p = SymmetricQuartic::constant(2, rat(1, 1))
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[1, 1], rat(1, 1))
            .unwrap()
            .with_coefficient(&[2, 2], rat(-1, 16))
            .unwrap();
        // One variable escaping: leading term −(1/16)·y⁴ of the other.
        let (l1, d1) = p.escape_leading(1).unwrap();
        assert_eq!(d1, 2);
        assert_eq!(l1.dimension(), 1);
        assert_eq!(l1.coefficient(&[2]), rat(-1, 16));
        assert_eq!(l1.basis_size(), 1);
        // Both escaping: constant −1/16 at degree 4.
        let (l2, d2) = p.escape_leading(2).unwrap();
        assert_eq!(d2, 4);
        assert_eq!(l2.coefficient(&[]), rat(-1, 16));
        // Multiplicity bookkeeping: m[1] with two escaping slots has two
        // placements of the padded multiset {1,0}.
        let q = SymmetricQuartic::zero(2)
            .with_coefficient(&[1], rat(1, 1))
            .unwrap();
        let (lq, dq) = q.escape_leading(2).unwrap();
        assert_eq!(dq, 1);
        assert_eq!(lq.coefficient(&[]), rat(2, 1));
    }

    #[test]
    fn escape_leading_matches_numeric_growth() {
        let p = SymmetricQuartic::constant(3, rat(1, 1))
            .with_coefficient(&[1, 1, 1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[2, 2], rat(-1, 16))
            .unwrap()
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap();
        let (lead, deg) = p.escape_leading(2).unwrap();
        // p(t, t, y)/t^(2·deg) → lead(y) as t → ∞.
        let y = 0.7f64;
        let t = 1e4f64;
        let full = p.eval(&[t, t, y]).unwrap();
        let predicted = lead.eval(&[y]).unwrap() * t.powi(2 * deg as i32);
        assert!(
            (full / predicted - 1.0).abs() < 1e-3,
            "full={full:e} predicted={predicted:e}"
        );
    }

    #[test]
    fn escape_components_sum_to_full_polynomial() {
        // Substituting t on the escaping block and summing the regimes
        // weighted by t^{2w} must rebuild the full value exactly.
        let p = SymmetricQuartic::constant(3, rat(1, 1))
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[1, 1], rat(1, 1))
            .unwrap()
            .with_coefficient(&[1, 1, 1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[2, 2], rat(-1, 16))
            .unwrap();
        for escaping in 1..=3usize {
            let remaining = 3 - escaping;
            let y: Vec<f64> = (0..remaining).map(|i| 0.3 + 0.4 * i as f64).collect();
            for &t in &[0.5f64, 1.25, 3.0] {
                let mut x = vec![t; escaping];
                x.extend_from_slice(&y);
                let direct = p.eval(&x).unwrap();
                let assembled: f64 = (0..=2 * escaping as u32)
                    .map(|w| {
                        let comp = p.escape_component(escaping, w).unwrap();
                        comp.eval(&y).unwrap() * t.powi(2 * w as i32)
                    })
                    .sum();
                assert_abs_diff_eq!(direct, assembled, epsilon = 1e-12);
            }
        }
        // Top regime reproduces escape_leading.
        let (lead, d) = p.escape_leading(2).unwrap();
        let comp = p.escape_component(2, d).unwrap();
        assert_eq!(lead.terms().collect::<Vec<_>>(), comp.terms().collect::<Vec<_>>());
        // Sub-multiset multiplicity: weight 2 on two slots mixes one 2 and
        // a pair of 1s when both are available.
        let q = SymmetricQuartic::zero(2)
            .with_coefficient(&[2], rat(1, 1))
            .unwrap()
            .with_coefficient(&[1, 1], rat(1, 1))
            .unwrap();
        let c = q.escape_component(2, 2).unwrap();
        // m[2] places its 2 on either slot (×2); m[1,1] uses both slots (×1).
        assert_eq!(c.coefficient(&[]), rat(3, 1));
    }

    #[test]
    fn display_is_readable() {
        let p = SymmetricQuartic::constant(2, rat(1, 1))
            .with_coefficient(&[1], rat(-1, 1))
            .unwrap()
            .with_coefficient(&[2, 2], rat(-1, 16))
            .unwrap();
        assert_eq!(p.to_string(), "1 - m[1] - 1/16·m[2,2]");
    }
}
