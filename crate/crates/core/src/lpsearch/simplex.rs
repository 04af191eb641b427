//! Dense two-phase simplex over exact rationals.
//!
//! Bland's anti-cycling rule over rationals makes every outcome — optimum,
//! certificate ray, infeasibility — a statement about the given rows rather
//! than about floating-point luck. Rational pivots pay per bit of entry
//! growth, so callers keep the tableaus small: a float LP (microlp) does the
//! combinatorial work over the full active set and this solver re-derives
//! the answer on the handful of rows the float optimum leaves tight.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Maximize `objective · x` over free variables subject to equality and ≤
/// rows. All data exact.
pub(crate) struct ExactLp {
    pub vars: usize,
    pub objective: Vec<Rat>,
    pub eq_rows: Vec<(Vec<Rat>, Rat)>,
    pub le_rows: Vec<(Vec<Rat>, Rat)>,
}

pub(crate) enum Outcome {
    Optimal { x: Vec<Rat>, value: Rat },
    /// Feasible direction with positive objective growth.
    Unbounded { ray: Vec<Rat> },
    Infeasible,
    PivotLimit,
}

struct Tableau {
    /// m × cols constraint body, kept in canonical (basis-reduced) form.
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    /// Reduced costs of the current minimization objective.
    cost: Vec<Rat>,
    pivots_left: usize,
}

enum Step {
    Optimal,
    Unbounded { entering: usize },
    Exhausted,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = {
            let p = &self.a[row][col];
            debug_assert!(!p.is_zero());
            Rat::one() / p
        };
        for v in self.a[row].iter_mut() {
            *v *= &inv;
        }
        self.b[row] *= &inv;
        let (pivot_row, pivot_rhs) = (self.a[row].clone(), self.b[row].clone());
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
            self.b[i] -= &f * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: enter the lowest-index column with negative reduced
    /// cost; leave by minimum ratio, ties to the lowest basic index.
    fn run(&mut self) -> Step {
        loop {
            let entering = match self.cost.iter().position(|c| c.is_negative()) {
                Some(j) => j,
                None => return Step::Optimal,
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][entering].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][entering];
                let better = match &leave {
                    None => true,
                    Some((best, r)) => {
                        ratio < *r || (ratio == *r && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Step::Unbounded { entering };
            };
            if self.pivots_left == 0 {
                return Step::Exhausted;
            }
            self.pivots_left -= 1;
            self.pivot(row, entering);
        }
    }
}

/// Column layout: x = u − w with u in 0..v and w in v..2v, then one slack
/// per ≤ row, then phase-1 artificials at the tail.
pub(crate) fn simplex(lp: &ExactLp, pivot_cap: usize) -> Outcome {
    let v = lp.vars;
    let m = lp.eq_rows.len() + lp.le_rows.len();
    let structural = 2 * v + lp.le_rows.len();

    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut b: Vec<Rat> = Vec::with_capacity(m);
    let mut slack_col: Vec<Option<usize>> = Vec::with_capacity(m);
    for (row, rhs) in lp.eq_rows.iter().chain(&lp.le_rows) {
        debug_assert_eq!(row.len(), v);
        let mut full = vec![Rat::zero(); structural];
        for (k, c) in row.iter().enumerate() {
            full[k] = c.clone();
            full[v + k] = -c;
        }
        a.push(full);
        b.push(rhs.clone());
        slack_col.push(None);
    }
    for (i, _) in lp.le_rows.iter().enumerate() {
        let r = lp.eq_rows.len() + i;
        a[r][2 * v + i] = Rat::one();
        slack_col[r] = Some(2 * v + i);
    }
    for i in 0..m {
        if b[i].is_negative() {
            for c in a[i].iter_mut() {
                *c = -&*c;
            }
            b[i] = -&b[i];
            slack_col[i] = None; // its slack now enters with −1
        }
    }

    // Phase 1: basic slacks where possible, artificials elsewhere,
    // minimizing the artificial total.
    let mut basis = vec![usize::MAX; m];
    let mut artificials = Vec::new();
    for i in 0..m {
        match slack_col[i] {
            Some(c) => basis[i] = c,
            None => artificials.push(i),
        }
    }
    let cols = structural + artificials.len();
    for r in a.iter_mut() {
        r.resize(cols, Rat::zero());
    }
    let mut cost = vec![Rat::zero(); cols];
    for (k, &i) in artificials.iter().enumerate() {
        let col = structural + k;
        a[i][col] = Rat::one();
        basis[i] = col;
        cost[col] = Rat::one();
    }
    // Canonicalize the phase-1 cost row against the artificial basis.
    let mut t = Tableau {
        a,
        b,
        basis,
        cost,
        pivots_left: pivot_cap,
    };
    for &i in &artificials {
        let row = t.a[i].clone();
        for (c, rv) in t.cost.iter_mut().zip(&row) {
            *c -= rv;
        }
    }
    match t.run() {
        Step::Exhausted => return Outcome::PivotLimit,
        Step::Unbounded { .. } => unreachable!("phase-1 objective is bounded below by 0"),
        Step::Optimal => {}
    }
    let infeasible = t
        .basis
        .iter()
        .enumerate()
        .any(|(i, &c)| c >= structural && !t.b[i].is_zero());
    if infeasible {
        return Outcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis; rows with no
    // structural pivot available are redundant and can be dropped.
    let mut drop_rows = Vec::new();
    for i in 0..t.a.len() {
        if t.basis[i] < structural {
            continue;
        }
        match (0..structural).find(|&j| !t.a[i][j].is_zero()) {
            Some(j) => t.pivot(i, j),
            None => drop_rows.push(i),
        }
    }
    for &i in drop_rows.iter().rev() {
        t.a.remove(i);
        t.b.remove(i);
        t.basis.remove(i);
    }
    for r in t.a.iter_mut() {
        r.truncate(structural);
    }

    // Phase 2: minimize −objective, reduced against the current basis.
    let mut cost = vec![Rat::zero(); structural];
    for k in 0..v {
        cost[k] = -&lp.objective[k];
        cost[v + k] = lp.objective[k].clone();
    }
    for (i, &bc) in t.basis.iter().enumerate() {
        if cost[bc].is_zero() {
            continue;
        }
        let f = cost[bc].clone();
        let row = t.a[i].clone();
        for (c, rv) in cost.iter_mut().zip(&row) {
            *c -= &f * rv;
        }
    }
    t.cost = cost;
    match t.run() {
        Step::Exhausted => Outcome::PivotLimit,
        Step::Unbounded { entering } => {
            let mut d = vec![Rat::zero(); structural];
            d[entering] = Rat::one();
            for (i, &bc) in t.basis.iter().enumerate() {
                d[bc] = -&t.a[i][entering];
            }
            let ray: Vec<Rat> = (0..v).map(|k| &d[k] - &d[v + k]).collect();
            Outcome::Unbounded { ray }
        }
        Step::Optimal => {
            let mut full = vec![Rat::zero(); structural];
            for (i, &bc) in t.basis.iter().enumerate() {
                full[bc] = t.b[i].clone();
            }
            let x: Vec<Rat> = (0..v).map(|k| &full[k] - &full[v + k]).collect();
            let value = lp
                .objective
                .iter()
                .zip(&x)
                .map(|(c, xi)| c * xi)
                .sum::<Rat>();
            Outcome::Optimal { x, value }
        }
    }
}
