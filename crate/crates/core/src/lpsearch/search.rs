//! Active-set + cutting-plane driver around the exact simplex core.
//!
//! The sampled models carry up to 2·10⁵ rows but only ~basis-size of them
//! bind at an optimum, so the driver solves small exact sub-LPs and screens
//! the full row set in f64 between solves (exact optimality over the
//! screened set, screening precision 1e−9). Refinement rounds verify the
//! candidate on a finer grid and append violated points as new rows — every
//! appended row is a true admissibility constraint, so the paper-style
//! witnesses stay feasible and the objective can only tighten downward.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lowdim::{envelope, verify_product_form, ReferenceMinorant};
use crate::rational::{ratio_to_f64, Rat};
use crate::report::{GridSpec, VerificationReport, ViolationKind};

use super::model::{basis_row, escape_row, ConstraintRow, LPModel, RowKind};
use super::simplex::{simplex, ExactLp, Outcome};

const SCREEN_TOL: f64 = 1e-9;
/// Active-row residual below which a row joins the exact polish subset.
const TIGHT_TOL: f64 = 1e-6;
const ADD_PER_ITER: usize = 8;
const ITER_CAP: usize = 600;
const PIVOT_CAP: usize = 200_000;
/// Variable box for the float relaxation; keeps its outcome set to
/// optimal/infeasible, so unboundedness surfaces only as an exact-phase
/// certificate ray.
const FLOAT_VAR_BOUND: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Outcome of [`solve`]: the candidate, its exact objective, and the final
/// verification sweep (always attached when `status` is `optimal`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LPResult {
    pub schema_version: u32,
    pub status: LpStatus,
    pub dimension: usize,
    #[serde(with = "crate::rational::serde_ratio_vec")]
    pub coefficients: Vec<Rat>,
    pub objective_value: f64,
    #[serde(with = "crate::rational::serde_ratio")]
    pub objective_exact: Rat,
    /// Exact sub-LP optimum per refinement round, f64-rendered.
    pub round_objectives: Vec<f64>,
    pub rows_total: usize,
    pub rows_active: usize,
    pub verification: Option<VerificationReport>,
}

impl LPResult {
    fn settled(status: LpStatus, model: &LPModel) -> Self {
        Self {
            schema_version: crate::report::SCHEMA_VERSION,
            status,
            dimension: model.dimension,
            coefficients: Vec::new(),
            objective_value: f64::NAN,
            objective_exact: Rat::zero(),
            round_objectives: Vec::new(),
            rows_total: model.rows.len(),
            rows_active: 0,
            verification: None,
        }
    }
}

enum SubOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
    Stalled,
}

/// Exactified row cache; indices stay valid because rows only append.
struct RowCache {
    exact: Vec<Option<(Vec<Rat>, Rat)>>,
}

impl RowCache {
    fn get(&mut self, rows: &[ConstraintRow], i: usize) -> (Vec<Rat>, Rat) {
        if self.exact.len() < rows.len() {
            self.exact.resize(rows.len(), None);
        }
        self.exact[i]
            .get_or_insert_with(|| {
                let r = &rows[i];
                (
                    r.coeffs.iter().map(|&c| dyadic(c)).collect(),
                    dyadic(r.rhs),
                )
            })
            .clone()
    }
}

/// Every finite f64 is a dyadic rational; promotion is lossless, so the
/// sub-LPs are exact statements about the rounded row data.
fn dyadic(v: f64) -> Rat {
    Rat::from_float(v).expect("constraint data is finite")
}

/// Exact sub-LP over the equalities plus the given rows.
fn exact_over(model: &LPModel, rows: &[usize], cache: &mut RowCache) -> Outcome {
    let lp = ExactLp {
        vars: model.basis.len(),
        objective: model.objective.clone(),
        eq_rows: model
            .equalities
            .iter()
            .map(|e| (e.coeffs.clone(), e.rhs.clone()))
            .collect(),
        le_rows: rows.iter().map(|&i| cache.get(&model.rows, i)).collect(),
    };
    simplex(&lp, PIVOT_CAP)
}

/// Active rows binding at the float optimum, nearest-residual first. The cap
/// keeps the exact polish tableau small; a dropped binding row only relaxes
/// the subset further and gets restored by the escalation loop if it
/// actually caps the objective.
fn tight_rows(model: &LPModel, active: &[usize], x: &[f64]) -> Vec<usize> {
    let mut scored: Vec<(f64, usize)> = active
        .iter()
        .filter_map(|&i| {
            let r = &model.rows[i];
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let slack = (r.rhs - lhs).abs();
            (slack <= TIGHT_TOL).then_some((slack, i))
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(2 * model.basis.len() + 8);
    let mut out: Vec<usize> = scored.into_iter().map(|(_, i)| i).collect();
    out.sort_unstable();
    out
}

fn normalize_direction(mut d: Vec<f64>) -> Vec<f64> {
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        for v in d.iter_mut() {
            *v /= scale;
        }
    }
    d
}

/// Float relaxation of the active-set LP (bought solver: microlp). Only the
/// returned vertex matters — every exact claim downstream is re-derived by
/// the rational simplex.
fn solve_float(
    model: &LPModel,
    active: &[usize],
    objective64: &[f64],
    equalities64: &[(Vec<f64>, f64)],
) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let mut prob = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = objective64
        .iter()
        .map(|&c| prob.add_var(c, (-FLOAT_VAR_BOUND, FLOAT_VAR_BOUND)))
        .collect();
    for (coeffs, rhs) in equalities64 {
        let expr: Vec<_> = vars.iter().copied().zip(coeffs.iter().copied()).collect();
        prob.add_constraint(expr, ComparisonOp::Eq, *rhs);
    }
    for &i in active {
        let r = &model.rows[i];
        let expr: Vec<_> = vars.iter().copied().zip(r.coeffs.iter().copied()).collect();
        prob.add_constraint(expr, ComparisonOp::Le, r.rhs);
    }
    match prob.solve() {
        Ok(microlp::SolveOutcome::Solution(sol)) => {
            Some(vars.iter().map(|&v| sol[v]).collect())
        }
        Ok(microlp::SolveOutcome::Interrupted(_)) | Err(_) => None,
    }
}

/// Rational pivoting pays per bit, so the float solver does the active-set
/// work and the exact solver re-derives the optimum over only the rows left
/// tight — a relaxation of the full sampled model, so the exact value can
/// only overestimate the sampled optimum, never undercut it.
fn solve_active_set(
    model: &LPModel,
    active: &mut Vec<usize>,
    cache: &mut RowCache,
) -> SubOutcome {
    let objective64: Vec<f64> = model.objective.iter().map(ratio_to_f64).collect();
    let equalities64: Vec<(Vec<f64>, f64)> = model
        .equalities
        .iter()
        .map(|e| {
            (
                e.coeffs.iter().map(ratio_to_f64).collect(),
                ratio_to_f64(&e.rhs),
            )
        })
        .collect();
    for _ in 0..ITER_CAP {
        // Float phase: chase violated rows until the float optimum screens
        // clean. A failed float solve hands the whole active set to the
        // exact solver instead of a tight subset.
        let float_x = match solve_float(model, active, &objective64, &equalities64) {
            Some(x) => {
                let worst = screen(model, active, &x, SCREEN_TOL);
                if !worst.is_empty() {
                    active.extend(worst);
                    continue;
                }
                Some(x)
            }
            None => None,
        };

        // Exact phase. If the subset misses a row that caps the objective,
        // the sub-LP comes back unbounded; any model row with positive
        // inner product against the certified ray restores boundedness,
        // and a ray no row caps is a recession direction of the full model.
        let mut subset = match &float_x {
            Some(x) => tight_rows(model, active, x),
            None => active.clone(),
        };
        for _ in 0..40 {
            match exact_over(model, &subset, cache) {
                Outcome::Infeasible => return SubOutcome::Infeasible,
                Outcome::PivotLimit => return SubOutcome::Stalled,
                Outcome::Unbounded { ray } => {
                    let ray64 =
                        normalize_direction(ray.iter().map(ratio_to_f64).collect());
                    let caps = screen_direction(model, &subset, &ray64, 1e-12);
                    if caps.is_empty() {
                        return SubOutcome::Unbounded;
                    }
                    for &c in &caps {
                        if !active.contains(&c) {
                            active.push(c);
                        }
                    }
                    subset.extend(caps);
                }
                Outcome::Optimal { x, value } => {
                    let x64: Vec<f64> = x.iter().map(ratio_to_f64).collect();
                    let worst = screen(model, active, &x64, SCREEN_TOL);
                    if worst.is_empty() {
                        return SubOutcome::Optimal { x, value };
                    }
                    active.extend(worst);
                    break;
                }
            }
        }
    }
    SubOutcome::Stalled
}

/// Most-violated inactive rows at the point, deterministic order.
fn screen(model: &LPModel, active: &[usize], x: &[f64], tol: f64) -> Vec<usize> {
    let mut viol: Vec<(f64, usize)> = model
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let excess = lhs - r.rhs;
            (excess > tol && !active.contains(&i)).then_some((excess, i))
        })
        .collect();
    viol.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    viol.truncate(ADD_PER_ITER);
    viol.into_iter().map(|(_, i)| i).collect()
}

fn screen_direction(model: &LPModel, active: &[usize], d: &[f64], tol: f64) -> Vec<usize> {
    let mut growth: Vec<(f64, usize)> = model
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let g: f64 = r.coeffs.iter().zip(d).map(|(a, b)| a * b).sum();
            (g > tol && !active.contains(&i)).then_some((g, i))
        })
        .collect();
    growth.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    growth.truncate(ADD_PER_ITER);
    growth.into_iter().map(|(_, i)| i).collect()
}

/// Deterministic spread of starting rows: strided interior, a few per
/// exterior shell, and every escape regime.
fn seed_active(model: &LPModel) -> Vec<usize> {
    let mut out = Vec::new();
    let target_interior = 2 * model.basis.len();
    let interior: Vec<usize> = model
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RowKind::Interior)
        .map(|(i, _)| i)
        .collect();
    let stride = (interior.len() / target_interior.max(1)).max(1);
    out.extend(interior.iter().step_by(stride).take(target_interior));
    let exterior: Vec<usize> = model
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RowKind::Exterior)
        .map(|(i, _)| i)
        .collect();
    let stride = (exterior.len() / 12).max(1);
    out.extend(exterior.iter().step_by(stride).take(12));
    for (i, r) in model.rows.iter().enumerate() {
        if let RowKind::EscapeRegime { .. } = r.kind {
            out.push(i);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn refinement_grid(model: &LPModel, round: usize) -> GridSpec {
    let s = &model.sampling;
    let f = s.refine_factor.max(2);
    GridSpec {
        dimension: model.dimension,
        interior_per_axis: Some(f * (s.interior_per_axis - 1) + 1),
        interior_quasi: Some((f * s.interior_cap).min(2_000_000)),
        exterior_radius: s
            .exterior_shells
            .iter()
            .fold(2.0f64, |m, &r| m.max(r)),
        exterior_quasi: f * s.exterior_shells.len() * s.shell_points,
        escape_samples: f * s.escape_samples,
        seed: s.seed ^ (round as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9),
        tolerance: SCREEN_TOL,
    }
}

/// Append rows cutting off a failed candidate. Interior and exterior
/// violations map to rows at their points. An escape violation maps to its
/// top-regime row plus a far-diagonal exterior row at a radius where the
/// candidate's leading regime provably dominates — all true admissibility
/// constraints, so no admissible polynomial is ever cut.
fn append_cuts(
    model: &mut LPModel,
    candidate: &crate::lowdim::SymmetricQuartic,
    report: &VerificationReport,
) -> Result<Vec<usize>> {
    let n = model.dimension;
    let basis = model.basis.clone();
    let mut added = Vec::new();
    for v in &report.violations {
        let first = model.rows.len();
        match v.kind {
            ViolationKind::InteriorAboveOne => {
                let coeffs = basis_row(&basis, &v.point, envelope(&v.point));
                model.rows.push(ConstraintRow::normalized(
                    RowKind::Interior,
                    v.point.clone(),
                    coeffs,
                    1.0,
                ));
            }
            ViolationKind::ExteriorPositive => {
                let coeffs = basis_row(&basis, &v.point, 1.0);
                model.rows.push(ConstraintRow::normalized(
                    RowKind::Exterior,
                    v.point.clone(),
                    coeffs,
                    0.0,
                ));
            }
            ViolationKind::EscapeLeadingCoefficient => {
                let escaping = v
                    .escaping_axes
                    .ok_or_else(|| Error::InvalidInput("escape violation without axes".into()))?;
                let y = &v.point;
                model
                    .rows
                    .push(escape_row(&basis, n, escaping, 2 * escaping as u32, y)?);
                let (lead, regime) = candidate.escape_leading(escaping)?;
                let lead_val = if lead.dimension() == 0 {
                    ratio_to_f64(&lead.coefficient(&[]))
                } else {
                    lead.eval(y)?
                };
                if lead_val > 0.0 {
                    let mut lower = 0.0f64;
                    for w in 0..regime {
                        let comp = candidate.escape_component(escaping, w)?;
                        lower += if comp.dimension() == 0 {
                            ratio_to_f64(&comp.coefficient(&[])).abs()
                        } else {
                            comp.eval(y)?.abs()
                        };
                    }
                    let t = (10.0 * (1.0 + lower) * regime.max(1) as f64 / lead_val)
                        .sqrt()
                        .clamp(1e3, 1e12);
                    let mut x = vec![t; escaping];
                    x.extend_from_slice(y);
                    let coeffs = basis_row(&basis, &x, 1.0);
                    model.rows.push(ConstraintRow::normalized(
                        RowKind::Exterior,
                        x,
                        coeffs,
                        0.0,
                    ));
                }
            }
        }
        added.extend(first..model.rows.len());
    }
    Ok(added)
}

/// Extra exterior and escape sampling after an unbounded sub-solve: the
/// model was too sparse to pin the recession cone.
fn densify(model: &mut LPModel) -> Result<()> {
    let n = model.dimension;
    let s = model.sampling.clone();
    let basis = model.basis.clone();
    for (i, &radius) in s.exterior_shells.iter().enumerate() {
        let pts = crate::sampling::shell_points(
            n,
            s.shell_points,
            s.seed ^ 0xA11C_E000 ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            radius,
        );
        for x in pts {
            let coeffs = basis_row(&basis, &x, 1.0);
            model
                .rows
                .push(ConstraintRow::normalized(RowKind::Exterior, x, coeffs, 0.0));
        }
    }
    for escaping in 1..n {
        let pts = crate::sampling::cube_points(
            n - escaping,
            s.escape_samples,
            s.seed ^ 0xA11C_E000 ^ (escaping as u64).wrapping_mul(0xd134_2543_de82_ef95),
            -s.escape_radius,
            s.escape_radius,
        );
        for y in pts {
            model
                .rows
                .push(escape_row(&basis, n, escaping, 2 * escaping as u32, &y)?);
        }
    }
    Ok(())
}

/// Solve the sampled LP with cutting-plane refinement.
///
/// Each round solves the current rows exactly (active-set over the exact
/// simplex), verifies the candidate on a `refine_factor`× finer grid, and
/// appends the violations as new rows. A clean verification ends the run
/// as `optimal`; exhausting the round budget reports `iteration_limit`
/// with the final candidate and its verification attached. An unbounded
/// model densifies its exterior/escape sampling once before giving up.
pub fn solve(model: &LPModel) -> Result<LPResult> {
    let mut work = model.clone();
    let mut cache = RowCache { exact: Vec::new() };
    let mut active = seed_active(&work);
    let mut round_objectives = Vec::new();
    let mut densified = false;
    let mut round = 0usize;
    loop {
        match solve_active_set(&work, &mut active, &mut cache) {
            SubOutcome::Infeasible => {
                return Ok(LPResult::settled(LpStatus::Infeasible, &work));
            }
            SubOutcome::Stalled => {
                return Ok(LPResult::settled(LpStatus::IterationLimit, &work));
            }
            SubOutcome::Unbounded => {
                if densified {
                    return Ok(LPResult::settled(LpStatus::Unbounded, &work));
                }
                densified = true;
                densify(&mut work)?;
            }
            SubOutcome::Optimal { x, value } => {
                let objective_exact = &work.objective_constant + &value;
                round_objectives.push(ratio_to_f64(&objective_exact));
                let poly = super::model::coefficients_to_polynomial(work.dimension, &x)?;
                let grid = refinement_grid(&work, round);
                let report = verify_product_form(&poly, &grid)?;
                let finished = report.passed || round >= work.sampling.rounds;
                if finished {
                    let status = if report.passed {
                        LpStatus::Optimal
                    } else {
                        LpStatus::IterationLimit
                    };
                    return Ok(LPResult {
                        schema_version: crate::report::SCHEMA_VERSION,
                        status,
                        dimension: work.dimension,
                        objective_value: ratio_to_f64(&objective_exact),
                        objective_exact,
                        coefficients: x,
                        round_objectives,
                        rows_total: work.rows.len(),
                        rows_active: active.len(),
                        verification: Some(report),
                    });
                }
                let added = append_cuts(&mut work, &poly, &report)?;
                active.extend(added);
                round += 1;
            }
        }
    }
}

/// Independent certification of a coefficient vector: a dense sweep on a
/// grid the LP never sampled, plus a corner-integral/Poisson cross-check
/// when the candidate satisfies the interpolation conditions.
pub fn certify_candidate(coefficients: &[Rat], n: usize) -> Result<VerificationReport> {
    let poly = super::model::coefficients_to_polynomial(n, coefficients)?;
    let mut grid = GridSpec::dense(n);
    grid.seed ^= 0xC0FF_EE00 + n as u64;
    let report = verify_product_form(&poly, &grid)?;
    if let Ok(f) = ReferenceMinorant::from_polynomial(poly) {
        let bl = crate::analysis::BandlimitedFunction::from_minorant(&f);
        let ps = crate::analysis::poisson_sum(&bl, &vec![0.0; n], 2)?;
        let integral = f.exact_integral().to_f64().unwrap_or(f64::NAN);
        if !((ps.sum - integral).abs() <= 1e-12) {
            return Err(Error::AlgebraicIdentity(format!(
                "Poisson periodization {} disagrees with corner integral {integral}",
                ps.sum
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowdim::minorant_polynomial;
    use crate::lpsearch::model::{build_model, canonical_basis, SamplingSpec};
    use crate::rational::rat;

    fn quick_result(n: usize) -> LPResult {
        let model = build_model(n, &SamplingSpec::quick()).unwrap();
        solve(&model).unwrap()
    }

    #[test]
    fn dimension_one_objective_is_exactly_one() {
        let res = quick_result(1);
        assert!(
            matches!(res.status, LpStatus::Optimal | LpStatus::IterationLimit),
            "{:?}",
            res.status
        );
        // The corner formula has no k ≥ 2 terms in one dimension, so every
        // feasible vector scores exactly 1 — the known 1-D optimum.
        assert_eq!(res.objective_exact, rat(1, 1));
        assert!((res.objective_value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn dimension_two_beats_the_reference_witness() {
        let res = quick_result(2);
        assert!(matches!(
            res.status,
            LpStatus::Optimal | LpStatus::IterationLimit
        ));
        // Every row is a true admissibility constraint, so the reference
        // polynomial stays feasible and the sampled optimum can never fall
        // below its integral.
        assert!(
            res.objective_exact >= rat(63, 64),
            "objective {} below 63/64",
            res.objective_value
        );
        assert!(res.verification.is_some());
    }

    #[test]
    fn dimension_five_beats_the_reference_witness() {
        let mut spec = SamplingSpec::quick();
        spec.rounds = 1;
        let model = build_model(5, &spec).unwrap();
        let res = solve(&model).unwrap();
        assert!(matches!(
            res.status,
            LpStatus::Optimal | LpStatus::IterationLimit
        ));
        assert!(
            res.objective_exact >= rat(31, 256),
            "objective {} below 31/256",
            res.objective_value
        );
    }

    #[test]
    fn round_objectives_never_increase() {
        let res = quick_result(2);
        for pair in res.round_objectives.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "objective rose across rounds: {:?}",
                res.round_objectives
            );
        }
    }

    #[test]
    fn identical_specs_give_identical_results() {
        let a = quick_result(2);
        let b = quick_result(2);
        assert_eq!(a.status, b.status);
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.objective_exact, b.objective_exact);
        assert_eq!(a.round_objectives, b.round_objectives);
    }

    #[test]
    fn reported_optimum_matches_recomputation() {
        let res = quick_result(2);
        let model = build_model(2, &SamplingSpec::quick()).unwrap();
        let recomputed: f64 = ratio_to_f64(&model.objective_constant)
            + model
                .objective
                .iter()
                .zip(&res.coefficients)
                .map(|(w, c)| ratio_to_f64(w) * ratio_to_f64(c))
                .sum::<f64>();
        assert!((recomputed - res.objective_value).abs() < 1e-8);
    }

    #[test]
    fn certify_accepts_reference_and_rejects_constant() {
        let p2 = minorant_polynomial(2).unwrap();
        let coeffs: Vec<Rat> = canonical_basis(2)
            .iter()
            .map(|k| p2.coefficient(k))
            .collect();
        let report = certify_candidate(&coeffs, 2).unwrap();
        assert!(report.passed, "{:?}", report.violation_tally);

        let mut constant = vec![rat(0, 1); 6];
        constant[0] = rat(1, 1);
        let report = certify_candidate(&constant, 2).unwrap();
        assert!(!report.passed);
        assert!(report.violation_tally.exterior_positive > 0);
    }

    #[test]
    fn results_round_trip_through_json() {
        let res = quick_result(1);
        let text = serde_json::to_string(&res).unwrap();
        let back: LPResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back.status, res.status);
        assert_eq!(back.coefficients, res.coefficients);
        assert_eq!(back.objective_exact, res.objective_exact);
    }
}
