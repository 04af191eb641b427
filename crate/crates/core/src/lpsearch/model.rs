//! LP model assembly: basis, objective, and sampled constraint rows.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lowdim::{envelope, SymmetricQuartic};
use crate::rational::{rat, Rat};
use crate::sampling;

/// Sampling plan for constraint generation; comes from the CLI or a config
/// file. Defaults keep N=5 tractable on one core.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SamplingSpec {
    /// Interior tensor grid resolution per axis (odd keeps 0 and ±1 on it).
    pub interior_per_axis: usize,
    /// Interior row budget; tensor grids above it thin to quasi-random.
    pub interior_cap: usize,
    /// ||x||_inf radii of the exterior sampling shells.
    pub exterior_shells: Vec<f64>,
    /// Points per exterior shell.
    pub shell_points: usize,
    /// Bounded-coordinate samples per escape-direction count.
    pub escape_samples: usize,
    /// Half-width of the box the bounded escape coordinates range over.
    pub escape_radius: f64,
    pub seed: u64,
    /// Cutting-plane refinement rounds after the initial solve.
    pub rounds: usize,
    /// Grid refinement multiplier between rounds.
    pub refine_factor: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            interior_per_axis: 41,
            interior_cap: 200_000,
            exterior_shells: vec![1.05, 1.25, 1.5, 2.0, 3.0, 6.0],
            shell_points: 200,
            escape_samples: 64,
            escape_radius: 6.0,
            seed: 0x5EED_B0C5,
            rounds: 4,
            refine_factor: 4,
        }
    }
}

impl SamplingSpec {
    /// Small plan for unit tests: same structure, far fewer rows.
    pub fn quick() -> Self {
        Self {
            interior_per_axis: 13,
            interior_cap: 4_000,
            shell_points: 40,
            escape_samples: 16,
            rounds: 2,
            ..Self::default()
        }
    }
}

/// What a constraint row encodes; every row keeps its generating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RowKind {
    /// S(x)·P(x) ≤ 1 at an interior sample.
    Interior,
    /// P(x) ≤ 0 at an exterior sample (S ≥ 0 makes this sufficient).
    Exterior,
    /// One diagonal-escape regime coefficient ≤ 0 at a bounded sample.
    EscapeRegime { escaping: usize, weight: u32 },
}

/// One inequality row `coeffs · c ≤ rhs` in basis order.
///
/// Coefficients are f64 samples of exact quantities; the solver promotes
/// them losslessly (every f64 is a dyadic rational), so the LP solved is
/// exactly the rounded model.
#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub kind: RowKind,
    /// Generating sample: full coordinates for interior/exterior rows, the
    /// bounded coordinates for escape rows.
    pub point: Vec<f64>,
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl ConstraintRow {
    /// Build a row rescaled by a power of two so the largest coefficient
    /// magnitude lands in [1, 2). Powers of two rescale exactly in f64, so
    /// this is the same constraint — it only conditions the float solver
    /// against the huge far-field rows.
    pub(crate) fn normalized(
        kind: RowKind,
        point: Vec<f64>,
        mut coeffs: Vec<f64>,
        mut rhs: f64,
    ) -> Self {
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max > 0.0 {
            let scale = 2f64.powi(max.log2().floor() as i32);
            for c in coeffs.iter_mut() {
                *c /= scale;
            }
            rhs /= scale;
        }
        Self {
            kind,
            point,
            coeffs,
            rhs,
        }
    }
}

/// One exact equality row `coeffs · c = rhs`.
#[derive(Clone, Debug)]
pub struct EqualityRow {
    pub label: &'static str,
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

/// Linear program over the coefficient vector of a symmetric quartic P,
/// maximizing the corner-formula integral of F = S·P.
#[derive(Clone, Debug)]
pub struct LPModel {
    pub dimension: usize,
    /// Canonical exponent multisets, the coordinate order of every row.
    pub basis: Vec<Vec<u8>>,
    /// Exact objective gradient; the integral is `objective_constant +
    /// objective · c`.
    pub objective: Vec<Rat>,
    pub objective_constant: Rat,
    pub equalities: Vec<EqualityRow>,
    pub rows: Vec<ConstraintRow>,
    pub sampling: SamplingSpec,
}

/// Canonical basis: exponent multisets over {1,2} of size ≤ N, ordered by
/// length and then by the number of 2s. Sizes are (N+1)(N+2)/2: 3, 6, 10,
/// 15, 21 for N = 1..5.
pub fn canonical_basis(n: usize) -> Vec<Vec<u8>> {
    let mut keys = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for len in 0..=n {
        for twos in 0..=len {
            let mut key = vec![2u8; twos];
            key.extend(std::iter::repeat(1).take(len - twos));
            keys.push(key);
        }
    }
    keys
}

/// Rebuild a polynomial from a coefficient vector in canonical basis order.
pub fn coefficients_to_polynomial(n: usize, coeffs: &[Rat]) -> Result<SymmetricQuartic> {
    let basis = canonical_basis(n);
    if coeffs.len() != basis.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} coefficients for dimension {n}, got {}",
            basis.len(),
            coeffs.len()
        )));
    }
    let mut p = SymmetricQuartic::zero(n);
    for (key, c) in basis.iter().zip(coeffs) {
        p.add_term(key, c)?;
    }
    Ok(p)
}

/// All monomial-symmetric values m_{(a twos, b ones)}(x) for a+b ≤ n at
/// once: one pass over the variables with the two-counter DP
/// new[a][b] = old[a][b] + x_i⁴·old[a−1][b] + x_i²·old[a][b−1].
fn monomial_table(x: &[f64]) -> [[f64; 6]; 6] {
    debug_assert!(x.len() <= 5);
    let mut dp = [[0.0f64; 6]; 6];
    dp[0][0] = 1.0;
    for &v in x {
        let s = v * v;
        let q = s * s;
        for a in (0..=x.len()).rev() {
            for b in (0..=x.len() - a).rev() {
                let mut add = 0.0;
                if a > 0 {
                    add += q * dp[a - 1][b];
                }
                if b > 0 {
                    add += s * dp[a][b - 1];
                }
                dp[a][b] += add;
            }
        }
    }
    dp
}

fn key_counts(key: &[u8]) -> (usize, usize) {
    let twos = key.iter().filter(|&&e| e == 2).count();
    (twos, key.len() - twos)
}

/// Row of basis monomial values at x, optionally scaled (interior rows
/// scale by the kernel envelope S(x)).
pub(crate) fn basis_row(basis: &[Vec<u8>], x: &[f64], scale: f64) -> Vec<f64> {
    let table = monomial_table(x);
    basis
        .iter()
        .map(|key| {
            let (a, b) = key_counts(key);
            scale * table[a][b]
        })
        .collect()
}

/// Assemble the sampled LP for dimension `n`.
///
/// Equalities pin the interpolation conditions P(0)=1 and P(u₁)=0; the
/// objective is the exact corner-formula gradient; inequality rows sample
/// the three admissibility regimes. Row generation parallelizes over
/// points; the row order is fully determined by `sampling`.
pub fn build_model(n: usize, sampling: &SamplingSpec) -> Result<LPModel> {
    if !(1..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n, "LP basis construction"));
    }
    if sampling.interior_per_axis < 2
        || sampling.interior_cap == 0
        || sampling.escape_radius <= 1.0
        || sampling.exterior_shells.iter().any(|&r| r <= 1.0)
    {
        return Err(Error::InvalidConfig(
            "sampling spec needs per-axis ≥ 2, a positive row cap, and shells/escape radius > 1"
                .into(),
        ));
    }
    let basis = canonical_basis(n);

    // Objective: ∫F = 1 + Σ_{k=2}^{N} C(N,k) 2^{−k} P(u_k), linear in the
    // basis coefficients through P(u_k).
    let mut objective = vec![Rat::zero(); basis.len()];
    for k in 2..=n {
        let scale = rat(binom(n, k), 1) * rat(1, 1i64 << k);
        for (j, key) in basis.iter().enumerate() {
            let unit = SymmetricQuartic::zero(n).with_coefficient(key, Rat::one())?;
            objective[j] += &scale * unit.eval_unit_pattern(k)?;
        }
    }

    let mut equalities = Vec::new();
    let mut at_zero = vec![Rat::zero(); basis.len()];
    at_zero[0] = Rat::one();
    equalities.push(EqualityRow {
        label: "P(0) = 1",
        coeffs: at_zero,
        rhs: Rat::one(),
    });
    let at_u1 = basis
        .iter()
        .map(|key| {
            let unit = SymmetricQuartic::zero(n).with_coefficient(key, Rat::one())?;
            unit.eval_unit_pattern(1)
        })
        .collect::<Result<Vec<_>>>()?;
    equalities.push(EqualityRow {
        label: "P(u1) = 0",
        coeffs: at_u1,
        rhs: Rat::zero(),
    });

    let mut rows = Vec::new();
    let interior = interior_points(n, sampling);
    rows.par_extend(interior.par_iter().map(|x| {
        ConstraintRow::normalized(
            RowKind::Interior,
            x.clone(),
            basis_row(&basis, x, envelope(x)),
            1.0,
        )
    }));
    for (i, &radius) in sampling.exterior_shells.iter().enumerate() {
        let pts = sampling::shell_points(
            n,
            sampling.shell_points,
            sampling.seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            radius,
        );
        rows.par_extend(pts.par_iter().map(|x| {
            ConstraintRow::normalized(
                RowKind::Exterior,
                x.clone(),
                basis_row(&basis, x, 1.0),
                0.0,
            )
        }));
    }
    for escaping in 1..=n {
        let weight = 2 * escaping as u32;
        let samples = if escaping == n {
            vec![Vec::new()]
        } else {
            sampling::cube_points(
                n - escaping,
                sampling.escape_samples,
                sampling.seed ^ (escaping as u64).wrapping_mul(0xd134_2543_de82_ef95),
                -sampling.escape_radius,
                sampling.escape_radius,
            )
        };
        for y in samples {
            rows.push(escape_row(&basis, n, escaping, weight, &y)?);
        }
    }

    Ok(LPModel {
        dimension: n,
        basis,
        objective,
        objective_constant: Rat::one(),
        equalities,
        rows,
        sampling: sampling.clone(),
    })
}

/// Escape-regime row: the t^{2·weight} coefficient of P(t·1_A, y) must be
/// ≤ 0. Linear because each basis monomial has a fixed regime component.
pub(crate) fn escape_row(
    basis: &[Vec<u8>],
    n: usize,
    escaping: usize,
    weight: u32,
    y: &[f64],
) -> Result<ConstraintRow> {
    let coeffs = basis
        .iter()
        .map(|key| {
            let unit = SymmetricQuartic::zero(n).with_coefficient(key, Rat::one())?;
            let comp = unit.escape_component(escaping, weight)?;
            comp.eval(y)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstraintRow::normalized(
        RowKind::EscapeRegime { escaping, weight },
        y.to_vec(),
        coeffs,
        0.0,
    ))
}

fn interior_points(n: usize, sampling: &SamplingSpec) -> Vec<Vec<f64>> {
    let per_axis = sampling.interior_per_axis;
    let tensor_total = (per_axis as u64).checked_pow(n as u32);
    match tensor_total {
        Some(total) if total as usize <= sampling.interior_cap => {
            let step = 2.0 / (per_axis - 1) as f64;
            (0..total as usize)
                .map(|mut flat| {
                    let mut x = vec![0.0; n];
                    for slot in x.iter_mut().rev() {
                        *slot = -1.0 + step * (flat % per_axis) as f64;
                        flat /= per_axis;
                    }
                    x
                })
                .collect()
        }
        _ => sampling::cube_points(n, sampling.interior_cap, sampling.seed, -1.0, 1.0),
    }
}

fn binom(n: usize, k: usize) -> i64 {
    let mut acc = 1i64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowdim::{corner_integral, minorant_polynomial};
    use crate::rational::ratio_to_f64;

    #[test]
    fn basis_sizes_match_counts() {
        assert_eq!(canonical_basis(1).len(), 3);
        assert_eq!(canonical_basis(2).len(), 6);
        assert_eq!(canonical_basis(5).len(), 21);
        assert_eq!(canonical_basis(1), vec![vec![], vec![1], vec![2]]);
    }

    #[test]
    fn monomial_table_matches_polynomial_eval() {
        let x = [0.3, -0.7, 1.2];
        let table = monomial_table(&x);
        for key in canonical_basis(3) {
            let unit = SymmetricQuartic::zero(3)
                .with_coefficient(&key, Rat::one())
                .unwrap();
            let (a, b) = key_counts(&key);
            assert!(
                (table[a][b] - unit.eval(&x).unwrap()).abs() < 1e-12,
                "key {key:?}"
            );
        }
    }

    #[test]
    fn objective_row_reproduces_corner_integral() {
        for n in 2..=5 {
            let model = build_model(n, &SamplingSpec::quick()).unwrap();
            let p = minorant_polynomial(n).unwrap();
            let coeffs: Vec<Rat> = model.basis.iter().map(|k| p.coefficient(k)).collect();
            let value = model.objective_constant.clone()
                + model
                    .objective
                    .iter()
                    .zip(&coeffs)
                    .map(|(w, c)| w * c)
                    .sum::<Rat>();
            assert_eq!(value, corner_integral(&p).unwrap(), "dimension {n}");
        }
    }

    #[test]
    fn paper_polynomials_satisfy_every_row() {
        for n in 1..=5 {
            let model = build_model(n, &SamplingSpec::quick()).unwrap();
            let p = minorant_polynomial(n).unwrap();
            let coeffs: Vec<f64> = model
                .basis
                .iter()
                .map(|k| ratio_to_f64(&p.coefficient(k)))
                .collect();
            for eq in &model.equalities {
                let lhs: f64 = eq
                    .coeffs
                    .iter()
                    .zip(&coeffs)
                    .map(|(a, c)| ratio_to_f64(a) * c)
                    .sum();
                assert!(
                    (lhs - ratio_to_f64(&eq.rhs)).abs() < 1e-10,
                    "dimension {n}: equality {} violated",
                    eq.label
                );
            }
            for (i, row) in model.rows.iter().enumerate() {
                let lhs: f64 = row.coeffs.iter().zip(&coeffs).map(|(a, c)| a * c).sum();
                assert!(
                    lhs <= row.rhs + 1e-10,
                    "dimension {n}: row {i} ({:?}) at {:?}: {lhs} > {}",
                    row.kind,
                    row.point,
                    row.rhs
                );
            }
        }
    }

    #[test]
    fn interior_rows_use_tensor_grid_when_small() {
        let spec = SamplingSpec::quick();
        let model = build_model(2, &spec).unwrap();
        let interior: Vec<&ConstraintRow> = model
            .rows
            .iter()
            .filter(|r| r.kind == RowKind::Interior)
            .collect();
        assert_eq!(interior.len(), 13 * 13);
        // Corner of the tensor grid is on it. The raw row is (1/16)·m at
        // (−1,−1) with max entry 1/8, so power-of-two normalization turns
        // the constant-key coefficient into 1/2 against a rhs of 8.
        assert_eq!(interior[0].point, vec![-1.0, -1.0]);
        assert!((interior[0].coeffs[0] - 0.5).abs() < 1e-15);
        assert_eq!(interior[0].rhs, 8.0);
        let quint = build_model(5, &spec).unwrap();
        let interior5 = quint
            .rows
            .iter()
            .filter(|r| r.kind == RowKind::Interior)
            .count();
        assert_eq!(interior5, spec.interior_cap);
    }

    #[test]
    fn escape_rows_cover_every_direction_count() {
        let model = build_model(3, &SamplingSpec::quick()).unwrap();
        for escaping in 1..=3usize {
            let weight = 2 * escaping as u32;
            assert!(
                model.rows.iter().any(|r| r.kind
                    == RowKind::EscapeRegime { escaping, weight }),
                "missing escape rows for a={escaping}"
            );
        }
        // The all-escape row pins the top coefficient: only m[2,2,2]
        // reaches t^12, with a single placement.
        let all = model
            .rows
            .iter()
            .find(|r| r.kind == RowKind::EscapeRegime { escaping: 3, weight: 6 })
            .unwrap();
        let idx = model.basis.iter().position(|k| k == &vec![2, 2, 2]).unwrap();
        for (j, &c) in all.coeffs.iter().enumerate() {
            assert_eq!(c, if j == idx { 1.0 } else { 0.0 });
        }
    }
}
