//! Dense two-phase simplex method with Bland's rule.
//!
//! Sized for the tiny programs this crate builds (at most a dozen variables
//! and constraints). Reduced costs are recomputed from the tableau on every
//! iteration instead of being carried in an objective row. Over
//! [`Rational`](crate::scalar::Rational) every pivot and ratio test is exact,
//! and Bland's rule guarantees termination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S> Constraint<S> {
    pub fn new(coeffs: Vec<S>, relation: Relation, rhs: S) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// `minimize objective . x` subject to `constraints`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S },
    Infeasible,
    Unbounded,
}

const MAX_ITERATIONS: usize = 10_000;

struct Tableau<S> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<S>>,
    basis: Vec<usize>,
    cols: usize,
    pivot_eps: f64,
}

impl<S: Scalar> Tableau<S> {
    fn positive(&self, x: &S) -> bool {
        if S::EXACT {
            x.is_positive()
        } else {
            x.to_f64() > self.pivot_eps
        }
    }

    fn negative(&self, x: &S) -> bool {
        if S::EXACT {
            x.is_negative()
        } else {
            x.to_f64() < -self.pivot_eps
        }
    }

    fn reduced_costs(&self, cost: &[S]) -> (Vec<S>, S) {
        let mut r = cost.to_vec();
        let mut value = S::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate() {
                *rj = rj.clone() - cb.clone() * self.t[i][j].clone();
            }
            value = value + cb.clone() * self.t[i][self.cols].clone();
        }
        (r, value)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = S::one() / self.t[row][col].clone();
        for x in self.t[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.t[row][col] = S::one();
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
            r[col] = S::zero();
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for `cost`; columns with `allowed[j] == false`
    /// never enter. Returns `false` if the objective is unbounded below.
    fn optimize(&mut self, cost: &[S], allowed: &[bool]) -> Result<bool> {
        for _ in 0..MAX_ITERATIONS {
            let (reduced, _) = self.reduced_costs(cost);
            let entering = (0..self.cols).find(|&j| allowed[j] && self.negative(&reduced[j]));
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !self.positive(a) {
                    continue;
                }
                let ratio = self.t[i][self.cols].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((row, _)) = best else {
                return Ok(false);
            };
            self.pivot(row, col);
        }
        Err(Error::LpNumericalFailure(format!(
            "no convergence after {MAX_ITERATIONS} pivots"
        )))
    }
}

pub fn solve<S: Scalar>(lp: &LinearProgram<S>, tau: f64) -> Result<LpOutcome<S>> {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    for c in &lp.constraints {
        if c.coeffs.len() != n {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients, objective has {n}",
                c.coeffs.len()
            )));
        }
    }

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<S>, Relation, S)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|x| -x.clone()).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let art_start = n + n_slack;

    let scale = rows
        .iter()
        .flat_map(|r| r.0.iter().chain(std::iter::once(&r.2)))
        .map(|x| x.to_f64().abs())
        .fold(1.0, f64::max);

    let mut t = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (n, art_start);
    for (coeffs, rel, rhs) in &rows {
        let mut row = vec![S::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[next_slack] = S::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -S::one();
                next_slack += 1;
                row[next_art] = S::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = S::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        t.push(row);
    }

    let mut tab = Tableau {
        t,
        basis,
        cols,
        pivot_eps: tau * scale,
    };

    if n_art > 0 {
        let mut phase1 = vec![S::zero(); cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = S::one();
        }
        let all = vec![true; cols];
        if !tab.optimize(&phase1, &all)? {
            return Err(Error::LpNumericalFailure("phase 1 reported unbounded".into()));
        }
        let (_, infeasibility) = tab.reduced_costs(&phase1);
        let infeasible = if S::EXACT {
            infeasibility.is_positive()
        } else {
            infeasibility.to_f64() > 1e2 * tau * scale
        };
        if infeasible {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut i = 0;
        while i < tab.t.len() {
            if tab.basis[i] >= art_start {
                let replacement = (0..art_start).find(|&j| {
                    let x = &tab.t[i][j];
                    if S::EXACT {
                        !x.is_zero()
                    } else {
                        x.to_f64().abs() > tab.pivot_eps
                    }
                });
                match replacement {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        // Redundant equality.
                        tab.t.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![S::zero(); cols];
    cost[..n].clone_from_slice(&lp.objective);
    let allowed: Vec<bool> = (0..cols).map(|j| j < art_start).collect();
    if !tab.optimize(&cost, &allowed)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![S::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[i][cols].clone();
        }
    }
    let value = crate::linalg::dot(&lp.objective, &x);
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let lp = LinearProgram {
            objective: vec![q(-3), q(-5)],
            constraints: vec![
                Constraint::new(vec![q(1), q(0)], Relation::Le, q(4)),
                Constraint::new(vec![q(0), q(2)], Relation::Le, q(12)),
                Constraint::new(vec![q(3), q(2)], Relation::Le, q(18)),
            ],
        };
        match solve(&lp, 0.0).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(2), q(6)]);
                assert_eq!(value, q(-36));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn needs_phase_one() {
        // min x + y s.t. x + y >= 2, x - y = 0 -> (1, 1)
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            constraints: vec![
                Constraint::new(vec![1.0, 1.0], Relation::Ge, 2.0),
                Constraint::new(vec![1.0, -1.0], Relation::Eq, 0.0),
            ],
        };
        match solve(&lp, 1e-11).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
                assert!((value - 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            objective: vec![q(1)],
            constraints: vec![
                Constraint::new(vec![q(1)], Relation::Le, q(1)),
                Constraint::new(vec![q(1)], Relation::Ge, q(2)),
            ],
        };
        assert_eq!(solve(&infeasible, 0.0).unwrap(), LpOutcome::Infeasible);
        let unbounded = LinearProgram {
            objective: vec![q(-1), q(0)],
            constraints: vec![Constraint::new(vec![q(1), q(-1)], Relation::Le, q(1))],
        };
        assert_eq!(solve(&unbounded, 0.0).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        // x + y = 1 twice, -x <= -1/2 (x >= 1/2), minimize y
        let lp = LinearProgram {
            objective: vec![q(0), q(1)],
            constraints: vec![
                Constraint::new(vec![q(1), q(1)], Relation::Eq, q(1)),
                Constraint::new(vec![q(2), q(2)], Relation::Eq, q(2)),
                Constraint::new(vec![q(-1), q(0)], Relation::Le, Rational::from_ratio(-1, 2)),
            ],
        };
        match solve(&lp, 0.0).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(0));
                assert_eq!(x, vec![q(1), q(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let r = |n, d| Rational::from_ratio(n, d);
        let lp = LinearProgram {
            objective: vec![r(-3, 4), q(150), r(-1, 50), q(6)],
            constraints: vec![
                Constraint::new(vec![r(1, 4), q(-60), r(-1, 25), q(9)], Relation::Le, q(0)),
                Constraint::new(vec![r(1, 2), q(-90), r(-1, 50), q(3)], Relation::Le, q(0)),
                Constraint::new(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1)),
            ],
        };
        match solve(&lp, 0.0).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(-1, 20)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
