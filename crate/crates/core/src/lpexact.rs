//! Exact rational linear programming: a dense two-phase simplex with
//! Bland's pivoting rule.

use num_traits::{One, Signed, Zero};

use crate::extreal::{ExtReal, Rational};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNeg,
    Free,
}

/// Maximize `objective · x` subject to `constraints` and per-variable bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: ExtReal,
    pub witness: Option<Vec<Rational>>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>, bounds: Vec<VarBound>) -> Self {
        LinearProgram { objective, constraints: vec![], bounds }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.holds_at(x))
            && self.bounds.iter().zip(x).all(|(b, v)| *b == VarBound::Free || !v.is_negative())
    }

    fn check_dimensions(&self) -> Result<(), Error> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Dimension(format!("{} bounds for {} variables", self.bounds.len(), n)));
        }
        if let Some((i, c)) = self.constraints.iter().enumerate().find(|(_, c)| c.coeffs.len() != n) {
            return Err(Error::Dimension(format!(
                "constraint {i} has {} coefficients for {n} variables",
                c.coeffs.len()
            )));
        }
        Ok(())
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns `< allowed`; `false` when unbounded.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: Rational = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| &cost[b] * &self.rows[i][j])
                    .sum();
                (&cost[j] - z).is_positive()
            });
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, v)| &cost[b] * v).sum()
    }
}

/// Exact maximum of a linear program.
pub fn solve_max(lp: &LinearProgram) -> Result<LpOutcome, Error> {
    lp.check_dimensions()?;
    let n = lp.num_vars();
    // column layout: structural (free vars split), slack/surplus, artificial
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        match b {
            VarBound::NonNeg => {
                col_of.push((ncols, None));
                ncols += 1;
            }
            VarBound::Free => {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
    }
    let structural = ncols;
    let m = lp.constraints.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut relations = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); structural];
        for (j, a) in c.coeffs.iter().enumerate() {
            let (p, q) = col_of[j];
            row[p] = a.clone();
            if let Some(q) = q {
                row[q] = -a.clone();
            }
        }
        let (row, b, rel) = if c.rhs.is_negative() {
            let flipped = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (row.into_iter().map(|v| -v).collect(), -c.rhs.clone(), flipped)
        } else {
            (row, c.rhs.clone(), c.relation)
        };
        rows.push(row);
        rhs.push(b);
        relations.push(rel);
    }
    let slacks = relations.iter().filter(|r| **r != Relation::Eq).count();
    let artificials = relations.iter().filter(|r| **r != Relation::Le).count();
    let total = structural + slacks + artificials;
    let mut basis = vec![0; m];
    let (mut s, mut a) = (structural, structural + slacks);
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(total, Rational::zero());
        match relations[i] {
            Relation::Le => {
                row[s] = Rational::one();
                basis[i] = s;
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
                row[a] = Rational::one();
                basis[i] = a;
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rational::one();
                basis[i] = a;
                a += 1;
            }
        }
    }
    let mut tab = Tableau { rows, rhs, basis };
    let first_art = structural + slacks;

    if artificials > 0 {
        let cost: Vec<Rational> = (0..total)
            .map(|j| if j >= first_art { -Rational::one() } else { Rational::zero() })
            .collect();
        tab.run(&cost, total);
        if tab.value(&cost).is_negative() {
            return Ok(LpOutcome { status: LpStatus::Infeasible, value: ExtReal::NegInf, witness: None });
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rational::zero(); total];
    for (j, c) in lp.objective.iter().enumerate() {
        let (p, q) = col_of[j];
        cost[p] = c.clone();
        if let Some(q) = q {
            cost[q] = -c.clone();
        }
    }
    if !tab.run(&cost, first_art) {
        return Ok(LpOutcome { status: LpStatus::Unbounded, value: ExtReal::PosInf, witness: None });
    }
    let mut col_value = vec![Rational::zero(); total];
    for (&b, v) in tab.basis.iter().zip(&tab.rhs) {
        col_value[b] = v.clone();
    }
    let x: Vec<Rational> = col_of
        .iter()
        .map(|&(p, q)| match q {
            Some(q) => &col_value[p] - &col_value[q],
            None => col_value[p].clone(),
        })
        .collect();
    let value: Rational = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    debug_assert!(lp.is_feasible_point(&x), "simplex returned an infeasible point");
    Ok(LpOutcome { status: LpStatus::Optimal, value: ExtReal::Finite(value), witness: Some(x) })
}
