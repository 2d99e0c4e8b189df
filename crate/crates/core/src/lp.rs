//! Dense two-phase simplex with Bland's rule.
//!
//! Solves `minimize c·x` subject to linear rows (`<=`, `>=`, `=`) and `x >= 0`.
//! Instances in this crate are small (at most a few hundred rows), so a dense
//! tableau is simplest. With an exact scalar type and zero tolerance the
//! routine is an exact LP solver.

use crate::scalar::Scalar;

const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    num_vars: usize,
    cost: Vec<T>,
    rows: Vec<Row<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    PivotLimit,
}

impl std::fmt::Display for LpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LpError::Infeasible => write!(f, "infeasible"),
            LpError::Unbounded => write!(f, "unbounded"),
            LpError::PivotLimit => write!(f, "pivot limit of {MAX_PIVOTS} reached"),
        }
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            cost: vec![T::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn set_cost(&mut self, var: usize, c: T) {
        self.cost[var] = c;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) {
        debug_assert!(coeffs.iter().all(|&(v, _)| v < self.num_vars));
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn minimize(&self, tol: T) -> Result<LpSolution<T>, LpError> {
        Tableau::build(self).solve(self, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<T> {
    // m rows of width `cols + 1`; the last entry is the right-hand side
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let n = lp.num_vars;
        let mut kinds = vec![ColumnKind::Structural; n];
        // normalize so every rhs is nonnegative
        let normalized: Vec<Row<T>> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < T::zero() {
                    let flipped = match r.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    Row {
                        coeffs: r.coeffs.iter().map(|&(v, c)| (v, -c)).collect(),
                        relation: flipped,
                        rhs: -r.rhs,
                    }
                } else {
                    r.clone()
                }
            })
            .collect();

        let slack_count = normalized
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let art_count = normalized
            .iter()
            .filter(|r| r.relation != Relation::Le)
            .count();
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, slack_count));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, art_count));
        let width = kinds.len() + 1;

        let mut a = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (n, n + slack_count);
        for Row { coeffs, relation: rel, rhs } in normalized {
            let mut row = vec![T::zero(); width];
            for (v, c) in coeffs {
                row[v] = row[v] + c;
            }
            row[width - 1] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = T::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            a.push(row);
        }
        Self { a, basis, kinds }
    }

    fn cols(&self) -> usize {
        self.kinds.len()
    }

    fn rhs(&self, i: usize) -> T {
        self.a[i][self.cols()]
    }

    fn solve(mut self, lp: &LinearProgram<T>, tol: T) -> Result<LpSolution<T>, LpError> {
        let snap = if T::is_exact() {
            T::zero()
        } else {
            tol / T::lit(1000.0)
        };

        if self.kinds.contains(&ColumnKind::Artificial) {
            let phase_one: Vec<T> = self
                .kinds
                .iter()
                .map(|k| match k {
                    ColumnKind::Artificial => T::one(),
                    _ => T::zero(),
                })
                .collect();
            self.optimize(&phase_one, true, tol, snap)?;
            let infeasibility = (0..self.a.len())
                .filter(|&i| self.kinds[self.basis[i]] == ColumnKind::Artificial)
                .fold(T::zero(), |acc, i| acc + self.rhs(i));
            let scale = (0..self.a.len()).fold(T::one(), |acc, i| acc.max_of(self.rhs(i)));
            if infeasibility > tol * scale {
                return Err(LpError::Infeasible);
            }
            self.expel_artificials(tol, snap);
        }

        let mut cost = vec![T::zero(); self.cols()];
        cost[..lp.num_vars].copy_from_slice(&lp.cost);
        self.optimize(&cost, false, tol, snap)?;

        let mut x = vec![T::zero(); lp.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                x[b] = self.rhs(i);
            }
        }
        let objective = x
            .iter()
            .zip(&lp.cost)
            .fold(T::zero(), |acc, (&xi, &ci)| acc + xi * ci);
        Ok(LpSolution { x, objective })
    }

    /// Primal simplex on the current basis. Bland's rule: smallest eligible
    /// entering column, ties in the ratio test go to the smallest basic index.
    fn optimize(&mut self, cost: &[T], allow_artificial: bool, tol: T, snap: T) -> Result<(), LpError> {
        let cols = self.cols();
        for _ in 0..MAX_PIVOTS {
            let entering = (0..cols).find(|&j| {
                (allow_artificial || self.kinds[j] != ColumnKind::Artificial)
                    && !self.basis.contains(&j)
                    && self.reduced_cost(cost, j) < -tol
            });
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                let aij = self.a[i][j];
                if aij > tol {
                    let ratio = self.rhs(i) / aij;
                    let better = match leaving {
                        None => true,
                        Some((r, best)) => {
                            ratio < best || (ratio == best && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, j, snap);
        }
        Err(LpError::PivotLimit)
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        self.basis
            .iter()
            .enumerate()
            .fold(cost[j], |acc, (i, &b)| acc - cost[b] * self.a[i][j])
    }

    fn pivot(&mut self, r: usize, j: usize, snap: T) {
        let p = self.a[r][j];
        for v in self.a[r].iter_mut() {
            *v = *v / p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[j];
            if f == T::zero() {
                continue;
            }
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = *v - f * pv;
                if v.abs() <= snap {
                    *v = T::zero();
                }
            }
        }
        self.basis[r] = j;
    }

    /// Pivots zero-level artificials out of the basis; drops redundant rows.
    fn expel_artificials(&mut self, tol: T, snap: T) {
        let mut i = 0;
        while i < self.a.len() {
            if self.kinds[self.basis[i]] != ColumnKind::Artificial {
                i += 1;
                continue;
            }
            let replacement = (0..self.cols())
                .find(|&j| self.kinds[j] != ColumnKind::Artificial && self.a[i][j].abs() > tol);
            match replacement {
                Some(j) => {
                    self.pivot(i, j, snap);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_cost(0, -3.0);
        lp.set_cost(1, -5.0);
        lp.add_row(vec![(0, 1.0)], Relation::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], Relation::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0);
        let sol = lp.minimize(1e-9).unwrap();
        assert!((sol.objective + 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn ge_rows_need_phase_one() {
        // min x + y, x + 2y >= 4, 3x + y >= 6  ->  optimum at (8/5, 6/5)
        let r = Rational64::new;
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, r(1, 1));
        lp.set_cost(1, r(1, 1));
        lp.add_row(vec![(0, r(1, 1)), (1, r(2, 1))], Relation::Ge, r(4, 1));
        lp.add_row(vec![(0, r(3, 1)), (1, r(1, 1))], Relation::Ge, r(6, 1));
        let sol = lp.minimize(r(0, 1)).unwrap();
        assert_eq!(sol.objective, r(14, 5));
        assert_eq!(sol.x, vec![r(8, 5), r(6, 5)]);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x - y, x - y = -1, y <= 3  ->  -1
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_cost(0, 1.0);
        lp.set_cost(1, -1.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Relation::Eq, -1.0);
        lp.add_row(vec![(1, 1.0)], Relation::Le, 3.0);
        let sol = lp.minimize(1e-9).unwrap();
        assert!((sol.objective + 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::<f64>::new(1);
        lp.set_cost(0, 1.0);
        lp.add_row(vec![(0, 1.0)], Relation::Le, 1.0);
        lp.add_row(vec![(0, 1.0)], Relation::Ge, 2.0);
        assert_eq!(lp.minimize(1e-9), Err(LpError::Infeasible));

        let mut lp = LinearProgram::<f64>::new(1);
        lp.set_cost(0, -1.0);
        lp.add_row(vec![(0, 1.0)], Relation::Ge, 1.0);
        assert_eq!(lp.minimize(1e-9), Err(LpError::Unbounded));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_cost(0, 1.0);
        lp.set_cost(1, 2.0);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 2.0);
        lp.add_row(vec![(0, 2.0), (1, 2.0)], Relation::Eq, 4.0);
        let sol = lp.minimize(1e-9).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-12);
    }
}
