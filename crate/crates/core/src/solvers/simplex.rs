//! Two-phase dense tableau simplex with Bland's rule.
//!
//! All variables are nonnegative. Every row gets a unit column at the
//! start (its slack, or an artificial), so the columns of those unit
//! vectors in the current tableau are `B⁻¹` and the dual solution falls
//! out as `c_B B⁻¹` without a separate solve.

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub row: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `optimize c·x + offset` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub variables: Vec<String>,
    pub sense: Sense,
    pub objective: Vec<T>,
    pub offset: T,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(variables: Vec<String>, sense: Sense, objective: Vec<T>) -> Self {
        LpProblem { variables, sense, objective, offset: T::zero(), constraints: Vec::new() }
    }

    pub fn add(&mut self, row: Vec<T>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint { row, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.objective.len() != n {
            return Err(Error::domain("objective length differs from variable count"));
        }
        if let Some(i) = self.constraints.iter().position(|c| c.row.len() != n) {
            return Err(Error::domain(format!("constraint {i} has the wrong length")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub primal: Vec<T>,
    /// One multiplier per constraint: `≥ 0` on binding `≤` rows of a
    /// maximization, with `value = offset + Σ y_r rhs_r`.
    pub dual: Vec<T>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Result<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible => Err(Error::solver("linear program is infeasible")),
            LpOutcome::Unbounded => Err(Error::solver("linear program is unbounded")),
        }
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = T::one() / self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        self.rows[r][col] = T::one();
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero_s() {
                if i != r {
                    self.rows[i][col] = T::zero();
                }
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero_s() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
            self.rows[i][col] = T::zero();
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut d = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero_s() && !self.rows[i][j].is_zero_s() {
                d = d - cost[b].clone() * self.rows[i][j].clone();
            }
        }
        d
    }

    /// Maximizes `cost·x` over columns allowed to enter. Returns false
    /// when unbounded.
    fn optimize(&mut self, cost: &[T], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..allowed.len()).find(|&j| allowed[j] && self.reduced_cost(cost, j).is_pos());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        let diff = ratio.clone() - lr.clone();
                        diff.is_neg() || (diff.is_zero_s() && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Solves the problem with the two-phase method. Strong duality is checked
/// before an optimum is returned.
pub fn simplex_solve<T: Scalar>(p: &LpProblem<T>) -> Result<LpOutcome<T>> {
    solve(p, true)
}

/// [`simplex_solve`] without the closing duality check, for callers that
/// only use the float primal as a starting guess.
pub(crate) fn simplex_solve_unchecked<T: Scalar>(p: &LpProblem<T>) -> Result<LpOutcome<T>> {
    solve(p, false)
}

fn solve<T: Scalar>(p: &LpProblem<T>, check_duality: bool) -> Result<LpOutcome<T>> {
    p.validate()?;
    let n = p.num_vars();
    let m = p.constraints.len();
    let maximize = p.sense == Sense::Maximize;

    // Normalize to nonnegative right-hand sides.
    let mut flipped = vec![false; m];
    let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::with_capacity(m);
    for (r, c) in p.constraints.iter().enumerate() {
        if c.rhs.is_neg() {
            flipped[r] = true;
            let rel = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            rows.push((c.row.iter().map(|v| -v.clone()).collect(), rel, -c.rhs.clone()));
        } else {
            rows.push((c.row.clone(), c.relation, c.rhs.clone()));
        }
    }

    // Column layout: originals, then one surplus per ≥ row, then one unit
    // column per row (slack for ≤, artificial otherwise).
    let surplus_rows: Vec<usize> = (0..m).filter(|&r| rows[r].1 == Relation::Ge).collect();
    let ns = surplus_rows.len();
    let unit0 = n + ns;
    let total = unit0 + m;
    let is_artificial = |j: usize| j >= unit0 && rows[j - unit0].1 != Relation::Le;

    let mut tab = Tableau {
        rows: vec![vec![T::zero(); total]; m],
        rhs: rows.iter().map(|r| r.2.clone()).collect(),
        basis: (unit0..total).collect(),
        pivots: 0,
    };
    for (r, (row, _, _)) in rows.iter().enumerate() {
        tab.rows[r][..n].clone_from_slice(row);
        tab.rows[r][unit0 + r] = T::one();
    }
    for (s, &r) in surplus_rows.iter().enumerate() {
        tab.rows[r][n + s] = -T::one();
    }

    let any_artificial = (unit0..total).any(is_artificial);
    if any_artificial {
        let cost: Vec<T> = (0..total).map(|j| if is_artificial(j) { -T::one() } else { T::zero() }).collect();
        let allowed = vec![true; total];
        tab.optimize(&cost, &allowed);
        let infeas = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .any(|(&b, v)| is_artificial(b) && v.is_pos());
        if infeas {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out where possible; rows where this
        // fails are redundant and keep their artificial at zero.
        for r in 0..m {
            if is_artificial(tab.basis[r]) {
                if let Some(col) = (0..unit0).chain((unit0..total).filter(|&j| !is_artificial(j))).find(|&j| !tab.rows[r][j].is_zero_s()) {
                    tab.pivot(r, col);
                }
            }
        }
    }

    let sign = |v: &T| if maximize { v.clone() } else { -v.clone() };
    let mut cost = vec![T::zero(); total];
    for (j, c) in p.objective.iter().enumerate() {
        cost[j] = sign(c);
    }
    let allowed: Vec<bool> = (0..total).map(|j| !is_artificial(j)).collect();
    if !tab.optimize(&cost, &allowed) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut primal = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            primal[b] = tab.rhs[r].clone();
        }
    }
    let mut dual = Vec::with_capacity(m);
    for r in 0..m {
        let mut y = T::zero();
        for (i, &b) in tab.basis.iter().enumerate() {
            if !cost[b].is_zero_s() {
                y = y + cost[b].clone() * tab.rows[i][unit0 + r].clone();
            }
        }
        if flipped[r] {
            y = -y;
        }
        dual.push(sign(&y));
    }

    let mut value = p.offset.clone();
    for (c, x) in p.objective.iter().zip(&primal) {
        value = value + c.clone() * x.clone();
    }
    let mut dual_value = p.offset.clone();
    for (y, c) in dual.iter().zip(&p.constraints) {
        dual_value = dual_value + y.clone() * c.rhs.clone();
    }
    let gap = value.clone() - dual_value;
    let scale = 1.0 + value.to_f64_s().abs();
    if check_duality && !(gap.is_zero_s() || gap.to_f64_s().abs() <= T::duality_tolerance() * scale) {
        return Err(Error::solver(format!("strong duality check failed (gap {:?})", gap)));
    }
    Ok(LpOutcome::Optimal(LpSolution { value, primal, dual, pivots: tab.pivots }))
}
