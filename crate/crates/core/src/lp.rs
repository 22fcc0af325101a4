//! Dense two-phase simplex over exact rationals.
//!
//! Solves `maximize c·x` subject to linear rows and `x ≥ 0`. Bland's rule
//! picks entering and leaving variables, so the method terminates on
//! degenerate problems; the problems solved here have a few dozen rows.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), num_vars);
        LinearProgram { num_vars, objective, constraints: Vec::new() }
    }

    pub fn add(&mut self, mut coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert!(coeffs.len() <= self.num_vars);
        coeffs.resize(self.num_vars, Rational::zero());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    a: Vec<Vec<Rational>>,
    /// Reduced costs `z_j − c_j`, last entry the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = self.a[row].clone();
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t -= &factor * p;
                }
            }
        };
        for (r, target) in self.a.iter_mut().enumerate() {
            if r != row {
                eliminate(target);
            }
        }
        eliminate(&mut self.obj);
        self.basis[row] = col;
    }

    /// Recomputes the reduced-cost row for `cost` (maximized) from the basis.
    fn load_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = (0..=self.cols)
            .map(|j| if j < self.cols { -cost[j].clone() } else { Rational::zero() })
            .collect();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(&self.a[r]) {
                *o += cb * v;
            }
        }
        self.obj = obj;
    }

    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Step {
        loop {
            let Some(col) = (0..self.cols).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.a.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[col];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Step::Unbounded,
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    // Normalize right-hand sides to be nonnegative.
    let rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + slack_count + artificial_count;
    let first_artificial = n + slack_count;

    let mut a = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut next_slack, mut next_art) = (n, first_artificial);
    for (coeffs, rel, rhs) in rows {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(&coeffs);
        row[cols] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_art] = Rational::from_integer(1.into());
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::from_integer(1.into());
                basis.push(next_art);
                next_art += 1;
            }
        }
        a.push(row);
    }

    let mut t = Tableau { a, obj: Vec::new(), basis, cols };

    if artificial_count > 0 {
        let phase1: Vec<Rational> = (0..cols)
            .map(|j| {
                if j >= first_artificial {
                    Rational::from_integer((-1).into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        t.load_objective(&phase1);
        // Phase 1 is bounded by zero.
        let _ = t.run(|_| true);
        if t.obj[cols].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis; rows
        // with no usable pivot are redundant and dropped.
        let mut r = 0;
        while r < t.a.len() {
            if t.basis[r] >= first_artificial {
                if let Some(col) = (0..first_artificial).find(|&j| !t.a[r][j].is_zero()) {
                    t.pivot(r, col);
                    r += 1;
                } else {
                    t.a.remove(r);
                    t.basis.remove(r);
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![Rational::zero(); cols];
    cost[..n].clone_from_slice(&lp.objective);
    t.load_objective(&cost);
    match t.run(|j| j < first_artificial) {
        Step::Unbounded => LpOutcome::Unbounded,
        Step::Optimal => {
            let mut solution = vec![Rational::zero(); n];
            for (r, &b) in t.basis.iter().enumerate() {
                if b < n {
                    solution[b] = t.a[r][cols].clone();
                }
            }
            LpOutcome::Optimal { value: t.obj[cols].clone(), solution }
        }
    }
}
