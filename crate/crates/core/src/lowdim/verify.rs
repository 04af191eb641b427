//! Numerical admissibility sweeps for box minorants.
//!
//! A candidate F is admissible for the unit box when F ≤ 1 everywhere and
//! F ≤ 0 outside [-1,1]^N. No finite sample proves that, but a dense sweep
//! plus escape analysis catches every failure mode we know how to produce:
//!
//! * interior tensor/quasi grid — F ≤ 1 on the box;
//! * exterior quasi cloud on 1 < ||x||_inf ≤ R — F ≤ 0 nearby;
//! * escape leading coefficients — F ≤ 0 along every family of rays where
//!   some coordinates run to infinity, which no bounded cloud can see.
//!
//! The sweep parallelizes over chunks and folds partial reports in index
//! order, so a given [`GridSpec`] always yields the identical report.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::ratio_to_f64;
use crate::report::{GridSpec, VerificationReport};
use crate::sampling;

use super::minorants::{envelope, ReferenceMinorant};
use super::poly::SymmetricQuartic;

/// Largest tensor grid we will materialize before falling back to
/// quasi-random interior points.
const TENSOR_CAP: u64 = 3_000_000;

const CHUNK: usize = 1 << 14;

/// Sweep `f` over the grid described by `spec` and report every violation.
///
/// The interior pass uses the tensor grid when `interior_per_axis` is set
/// and small enough (an odd count per axis puts lattice points, where F is
/// largest, on the grid); otherwise it falls back to `interior_quasi`
/// low-discrepancy points. Escape checks run for every count of escaping
/// coordinates from 1 to N.
pub fn verify_admissibility(
    f: &ReferenceMinorant,
    spec: &GridSpec,
) -> Result<VerificationReport> {
    verify_product_form(f.polynomial(), spec)
}

/// Sweep an arbitrary product-form candidate S(x)·p(x), without requiring
/// the interpolation conditions a [`ReferenceMinorant`] enforces.
///
/// This is what LP candidate certification runs: a candidate fresh out of
/// the solver may fail p(0)=1 or the vanishing conditions and still needs
/// its violations mapped, not an error.
pub fn verify_product_form(
    p: &SymmetricQuartic,
    spec: &GridSpec,
) -> Result<VerificationReport> {
    let n = p.dimension();
    if spec.dimension != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spec.dimension,
        });
    }
    if !(spec.exterior_radius > 1.0) {
        return Err(Error::InvalidConfig(format!(
            "exterior radius must exceed 1, got {}",
            spec.exterior_radius
        )));
    }
    let compiled = p.compile();
    let eval = |x: &[f64]| envelope(x) * compiled.eval(x);

    let interior = interior_sweep(n, &eval, spec)?;
    let exterior = exterior_sweep(n, &eval, spec);
    let escape = escape_sweep(p, spec)?;
    // Escape violations merge before the exterior bulk so the structural
    // ones survive the stored-sample cap; the tally is exact either way.
    Ok(interior.merge(escape).merge(exterior))
}

fn interior_sweep<F>(n: usize, eval: &F, spec: &GridSpec) -> Result<VerificationReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let tensor = spec.interior_per_axis.and_then(|per_axis| {
        if per_axis < 2 {
            return None;
        }
        let total = (per_axis as u64).checked_pow(n as u32)?;
        (total <= TENSOR_CAP).then_some((per_axis, total as usize))
    });

    match tensor {
        Some((per_axis, total)) => {
            let step = 2.0 / (per_axis - 1) as f64;
            Ok(sweep(n, eval, total, true, spec.tolerance, |mut flat| {
                let mut x = vec![0.0; n];
                for slot in x.iter_mut().rev() {
                    *slot = -1.0 + step * (flat % per_axis) as f64;
                    flat /= per_axis;
                }
                x
            }))
        }
        None => {
            let count = spec.interior_quasi.ok_or_else(|| {
                Error::InvalidConfig(
                    "no interior grid: set interior_per_axis (small enough to \
                     tensor) or interior_quasi"
                        .into(),
                )
            })?;
            let pts = sampling::cube_points(n, count, spec.seed, -1.0, 1.0);
            Ok(sweep(n, eval, count, true, spec.tolerance, |i| {
                pts[i].clone()
            }))
        }
    }
}

fn exterior_sweep<F>(n: usize, eval: &F, spec: &GridSpec) -> VerificationReport
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let pts =
        sampling::exterior_points(n, spec.exterior_quasi, spec.seed, spec.exterior_radius);
    sweep(n, eval, pts.len(), false, spec.tolerance, |i| pts[i].clone())
}

/// For each count `a` of coordinates sent to +infinity, the sign of F far
/// out is the sign of the leading coefficient L_a(y) in the remaining
/// variables y (the kernel factor is positive a.e.). L_a must be ≤ 0.
fn escape_sweep(p: &SymmetricQuartic, spec: &GridSpec) -> Result<VerificationReport> {
    let n = p.dimension();
    let mut report = VerificationReport::new(n, spec.tolerance);
    for escaping in 1..=n {
        let (leading, _degree) = p.escape_leading(escaping)?;
        let remaining = n - escaping;
        if remaining == 0 || leading.is_zero() {
            let value = ratio_to_f64(&leading.coefficient(&[]));
            report.record_escape(&[], escaping, value);
            continue;
        }
        let compiled = leading.compile();
        // The leading coefficient inherits the quartic structure, so its
        // sign on rays is controlled by its own leading behaviour; sampling
        // a box of the escape radius plus the next escape level covers it.
        let pts = sampling::cube_points(
            remaining,
            spec.escape_samples,
            spec.seed ^ (escaping as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            -spec.exterior_radius,
            spec.exterior_radius,
        );
        for y in &pts {
            report.record_escape(y, escaping, compiled.eval(y));
        }
    }
    Ok(report)
}

fn sweep<F, G>(
    n: usize,
    eval: &F,
    total: usize,
    interior: bool,
    tolerance: f64,
    point_at: G,
) -> VerificationReport
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(usize) -> Vec<f64> + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    let partials: Vec<VerificationReport> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = VerificationReport::new(n, tolerance);
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let x = point_at(i);
                let v = eval(&x);
                if interior {
                    r.record_interior(&x, v);
                } else {
                    r.record_exterior(&x, v);
                }
            }
            r
        })
        .collect();
    partials
        .into_iter()
        .fold(VerificationReport::new(n, tolerance), VerificationReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowdim::minorants::minorant_polynomial;
    use crate::rational::rat;
    use crate::report::ViolationKind;

    fn dense(dim: usize) -> GridSpec {
        let mut g = GridSpec::quick(dim);
        g.interior_per_axis = Some(41);
        g.exterior_quasi = 20_000;
        g
    }

    #[test]
    fn certified_minorants_pass() {
        for n in 1..=5 {
            let f = ReferenceMinorant::new(n).unwrap();
            let mut spec = dense(n);
            if n >= 4 {
                spec.interior_per_axis = Some(9);
                spec.interior_quasi = Some(20_000);
            }
            let report = verify_admissibility(&f, &spec).unwrap();
            assert!(report.passed, "dimension {n}: {:?}", report.violations);
            assert!(report.interior_points_checked > 0);
            assert!(report.exterior_points_checked > 0);
            assert_eq!(report.escape_directions_checked >= n, true);
            // F(0) = 1 is the interior maximum; the sweep should get close.
            let m = report.interior_max.unwrap();
            assert!(m.value <= 1.0 + 1e-12);
            assert!(m.value > 0.9, "interior max {} too small", m.value);
            assert!(report.exterior_max.unwrap().value <= 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let f = ReferenceMinorant::new(2).unwrap();
        let err = verify_admissibility(&f, &GridSpec::quick(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn corrupted_polynomial_is_caught() {
        // Flip the sign of the -1/16·m[2,2] term: the polynomial stays 1 at
        // the origin and 0 at the unit patterns it interpolates, but turns
        // positive in the region |x1|, |x2| > 1 and its escape leading
        // coefficients go positive.
        let good = minorant_polynomial(2).unwrap();
        let bad = good.with_coefficient(&[2, 2], rat(1, 16)).unwrap();
        let f = ReferenceMinorant::from_polynomial(bad).unwrap();
        let report = verify_admissibility(&f, &dense(2)).unwrap();
        assert!(!report.passed);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::ExteriorPositive
                && v.point.iter().all(|c| c.abs() > 1.0)));
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::EscapeLeadingCoefficient));
        assert!(report.violation_tally.escape_leading > 0);
        assert!(report.violation_tally.exterior_positive > 0);
        assert_eq!(report.violation_tally.interior_above_one, 0);
        assert!(report.exterior_max.unwrap().value > 0.0);
    }

    #[test]
    fn quasi_interior_fallback_used_for_large_tensors() {
        let f = ReferenceMinorant::new(5).unwrap();
        let mut spec = GridSpec::quick(5);
        spec.interior_per_axis = Some(41); // 41^5 ≈ 1.2e8: over the cap
        spec.interior_quasi = Some(7_777);
        let report = verify_admissibility(&f, &spec).unwrap();
        assert_eq!(report.interior_points_checked, 7_777);
        assert!(report.passed);
    }

    #[test]
    fn deterministic_for_fixed_spec() {
        let f = ReferenceMinorant::new(3).unwrap();
        let spec = GridSpec::quick(3);
        let a = verify_admissibility(&f, &spec).unwrap();
        let b = verify_admissibility(&f, &spec).unwrap();
        assert_eq!(a, b);
    }
}
