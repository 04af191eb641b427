//! Machine-readable verification reports.
//!
//! Admissibility checks (minorant ≤ 1 inside the box, ≤ 0 outside) produce a
//! [`VerificationReport`] rather than panicking: a violation is data about the
//! candidate, not a bug in the checker. Reports serialize to JSON with an
//! explicit `schema_version` so downstream consumers can detect format drift.

use serde::{Deserialize, Serialize};

/// Bump when the JSON layout of [`VerificationReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Where and how densely a candidate is probed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub dimension: usize,
    /// Tensor grid: points per axis inside [-1,1]^N (lattice points included
    /// when odd). `None`, or a tensor too large, switches the interior sweep
    /// to quasi-random points.
    pub interior_per_axis: Option<usize>,
    /// Quasi-random interior points (used when the tensor grid is off or too
    /// big).
    pub interior_quasi: Option<usize>,
    /// Exterior points are drawn from 1 < ||x||_inf <= exterior_radius.
    pub exterior_radius: f64,
    pub exterior_quasi: usize,
    /// Bounded-coordinate samples per escape pattern (k axes to infinity).
    pub escape_samples: usize,
    pub seed: u64,
    /// A point counts as a violation only if it exceeds the bound by more
    /// than this.
    pub tolerance: f64,
}

impl GridSpec {
    /// Dense sweep: tensor interior grid plus a large exterior cloud.
    pub fn dense(dimension: usize) -> Self {
        Self {
            dimension,
            interior_per_axis: Some(41),
            interior_quasi: Some(200_000),
            exterior_radius: 6.0,
            exterior_quasi: 200_000,
            escape_samples: 128,
            seed: 2_718_281,
            tolerance: 1e-12,
        }
    }

    /// Cheap sweep for interactive use.
    pub fn quick(dimension: usize) -> Self {
        Self {
            dimension,
            interior_per_axis: Some(11),
            interior_quasi: Some(5_000),
            exterior_radius: 4.0,
            exterior_quasi: 5_000,
            escape_samples: 32,
            seed: 2_718_281,
            tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// F(x) > 1 at a point of the closed box.
    InteriorAboveOne,
    /// F(x) > 0 at a point outside the closed box.
    ExteriorPositive,
    /// Leading coefficient along an escape pattern is positive, so F > 0
    /// far enough out along that family of rays.
    EscapeLeadingCoefficient,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending point; for escape violations, the bounded coordinates
    /// only (the other `escaping_axes` coordinates run to infinity).
    pub point: Vec<f64>,
    /// Number of coordinates sent to infinity (escape violations only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escaping_axes: Option<usize>,
    pub value: f64,
    /// Amount by which the bound is exceeded (already net of tolerance).
    pub excess: f64,
}

/// A witnessed extremum: the largest value seen and where.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub at: Vec<f64>,
}

/// Exact violation counts by kind. Stored [`Violation`] samples are capped,
/// these never are.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ViolationTally {
    pub interior_above_one: usize,
    pub exterior_positive: usize,
    pub escape_leading: usize,
}

impl ViolationTally {
    pub fn total(&self) -> usize {
        self.interior_above_one + self.exterior_positive + self.escape_leading
    }

    fn bump(&mut self, kind: ViolationKind) {
        match kind {
            ViolationKind::InteriorAboveOne => self.interior_above_one += 1,
            ViolationKind::ExteriorPositive => self.exterior_positive += 1,
            ViolationKind::EscapeLeadingCoefficient => self.escape_leading += 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub dimension: usize,
    pub interior_points_checked: usize,
    pub exterior_points_checked: usize,
    pub escape_directions_checked: usize,
    /// Largest F value seen inside the box (None until a point is recorded).
    pub interior_max: Option<Extremum>,
    /// Largest F value seen outside the box.
    pub exterior_max: Option<Extremum>,
    pub tolerance: f64,
    pub violation_tally: ViolationTally,
    /// Sample violations, capped at 64; `violation_tally` has exact counts.
    pub violations: Vec<Violation>,
    pub passed: bool,
}

const VIOLATION_CAP: usize = 64;

impl VerificationReport {
    pub fn new(dimension: usize, tolerance: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dimension,
            interior_points_checked: 0,
            exterior_points_checked: 0,
            escape_directions_checked: 0,
            interior_max: None,
            exterior_max: None,
            tolerance,
            violation_tally: ViolationTally::default(),
            violations: Vec::new(),
            passed: true,
        }
    }

    pub fn record_interior(&mut self, point: &[f64], value: f64) {
        self.interior_points_checked += 1;
        update_max(&mut self.interior_max, point, value);
        if value > 1.0 + self.tolerance {
            self.push_violation(Violation {
                kind: ViolationKind::InteriorAboveOne,
                point: point.to_vec(),
                escaping_axes: None,
                value,
                excess: value - 1.0,
            });
        }
    }

    pub fn record_exterior(&mut self, point: &[f64], value: f64) {
        self.exterior_points_checked += 1;
        update_max(&mut self.exterior_max, point, value);
        if value > self.tolerance {
            self.push_violation(Violation {
                kind: ViolationKind::ExteriorPositive,
                point: point.to_vec(),
                escaping_axes: None,
                value,
                excess: value,
            });
        }
    }

    /// `bounded` holds the non-escaping coordinates sampled for this check.
    pub fn record_escape(&mut self, bounded: &[f64], escaping_axes: usize, leading: f64) {
        self.escape_directions_checked += 1;
        if leading > self.tolerance {
            self.push_violation(Violation {
                kind: ViolationKind::EscapeLeadingCoefficient,
                point: bounded.to_vec(),
                escaping_axes: Some(escaping_axes),
                value: leading,
                excess: leading,
            });
        }
    }

    fn push_violation(&mut self, v: Violation) {
        self.passed = false;
        self.violation_tally.bump(v.kind);
        // Cap stored violations; the tally and maxima stay exact.
        if self.violations.len() < VIOLATION_CAP {
            self.violations.push(v);
        }
    }

    /// Combine two partial reports. Associative, and deterministic when
    /// folded in a fixed order (ties keep the earlier witness).
    pub fn merge(mut self, other: Self) -> Self {
        debug_assert_eq!(self.dimension, other.dimension);
        self.interior_points_checked += other.interior_points_checked;
        self.exterior_points_checked += other.exterior_points_checked;
        self.escape_directions_checked += other.escape_directions_checked;
        merge_max(&mut self.interior_max, other.interior_max);
        merge_max(&mut self.exterior_max, other.exterior_max);
        self.violation_tally.interior_above_one += other.violation_tally.interior_above_one;
        self.violation_tally.exterior_positive += other.violation_tally.exterior_positive;
        self.violation_tally.escape_leading += other.violation_tally.escape_leading;
        for v in other.violations {
            if self.violations.len() < VIOLATION_CAP {
                self.violations.push(v);
            }
        }
        self.passed &= other.passed;
        self
    }
}

fn update_max(slot: &mut Option<Extremum>, point: &[f64], value: f64) {
    let beats = slot.as_ref().map_or(true, |m| value > m.value);
    if beats {
        *slot = Some(Extremum {
            value,
            at: point.to_vec(),
        });
    }
}

fn merge_max(slot: &mut Option<Extremum>, other: Option<Extremum>) {
    if let Some(o) = other {
        let beats = slot.as_ref().map_or(true, |m| o.value > m.value);
        if beats {
            *slot = Some(o);
        }
    }
}
