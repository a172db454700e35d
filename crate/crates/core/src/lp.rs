//! Exact linear programming over the rationals.
//!
//! Dense two-phase tableau simplex with Bland's rule, so it terminates on
//! degenerate problems. All variables are nonnegative and the objective is
//! maximized.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::num::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// `maximize objective · x` over `x >= 0`.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        LinearProgram { num_vars: objective.len(), objective, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// Columns at and beyond this index are artificial.
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let slack_count = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        // A Le row with nonnegative rhs starts with its slack in the basis;
        // every other row gets an artificial.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), flipped, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let artificial_count = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = n + slack_count;
        let width = first_artificial + artificial_count;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut artificial = first_artificial;
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            row[..n].clone_from_slice(&coeffs);
            row[width] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, num_vars: n, first_artificial, width }
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        if self.first_artificial < self.width {
            let mut phase_one = vec![Rational::zero(); self.width];
            for c in phase_one.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            let value = match self.optimize(&phase_one, self.width) {
                Some(v) => v,
                None => unreachable!("phase one is bounded"),
            };
            if value.is_negative() {
                return LpOutcome::Infeasible;
            }
            self.evict_artificials();
        }
        let mut costs = vec![Rational::zero(); self.width];
        costs[..self.num_vars].clone_from_slice(objective);
        match self.optimize(&costs, self.first_artificial) {
            None => LpOutcome::Unbounded,
            Some(value) => {
                let mut x = vec![Rational::zero(); self.num_vars];
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if b < self.num_vars {
                        x[b] = row[self.width].clone();
                    }
                }
                LpOutcome::Optimal { value, x }
            }
        }
    }

    /// Maximizes `costs · x` using columns below `allowed`; `None` if unbounded.
    fn optimize(&mut self, costs: &[Rational], allowed: usize) -> Option<Rational> {
        let w = self.width;
        // Reduced costs c_j - z_j, with the negated objective value in the last slot.
        let mut reduced: Vec<Rational> = costs.iter().cloned().chain([Rational::zero()]).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if !cb.is_zero() {
                for (r, a) in reduced.iter_mut().zip(row) {
                    if !a.is_zero() {
                        *r -= cb * a;
                    }
                }
            }
        }
        loop {
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_positive()) else {
                return Some(-reduced[w].clone());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[w] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (pivot_row, _) = leave?;
            self.pivot(pivot_row, enter, &mut reduced);
        }
    }

    fn pivot(&mut self, p: usize, col: usize, reduced: &mut [Rational]) {
        let inv = self.rows[p][col].recip();
        for a in self.rows[p].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = self.rows[p].clone();
        let eliminate = |row: &mut [Rational]| {
            let factor = row[col].clone();
            if factor.is_zero() {
                return;
            }
            for (a, q) in row.iter_mut().zip(&pivot_row) {
                if !q.is_zero() {
                    *a -= &factor * q;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != p {
                eliminate(row);
            }
        }
        eliminate(reduced);
        self.basis[p] = col;
    }

    /// Pivots zero-level artificials out of the basis, dropping rows that
    /// turn out to be redundant.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        let mut scratch = vec![Rational::zero(); self.width + 1];
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j, &mut scratch),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let mut lp = LinearProgram::maximize(vec![int(3), int(5)]);
        lp.constrain(vec![int(1), int(0)], Relation::Le, int(4));
        lp.constrain(vec![int(0), int(2)], Relation::Le, int(12));
        lp.constrain(vec![int(3), int(2)], Relation::Le, int(18));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: int(36), x: vec![int(2), int(6)] });
    }

    #[test]
    fn equality_and_infeasibility() {
        let mut lp = LinearProgram::maximize(vec![int(1), int(1)]);
        lp.constrain(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.constrain(vec![int(1), int(0)], Relation::Ge, rat(1, 2));
        assert_eq!(lp.solve().value(), Some(&int(1)));
        lp.constrain(vec![int(1), int(0)], Relation::Ge, int(2));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_and_redundant_rows() {
        let mut lp = LinearProgram::maximize(vec![int(1), int(0)]);
        lp.constrain(vec![int(0), int(1)], Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);

        let mut lp = LinearProgram::maximize(vec![int(1), int(2)]);
        lp.constrain(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.constrain(vec![int(2), int(2)], Relation::Eq, int(2));
        lp.constrain(vec![int(-1), int(-1)], Relation::Ge, int(-1));
        assert_eq!(lp.solve().value(), Some(&int(2)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::maximize(vec![rat(3, 4), int(-150), rat(1, 50), int(-6)]);
        lp.constrain(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Relation::Le, int(0));
        lp.constrain(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Relation::Le, int(0));
        lp.constrain(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        assert_eq!(lp.solve().value(), Some(&rat(1, 20)));
    }

    fn small() -> impl Strategy<Value = i64> {
        -4i64..=4
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Strong duality: max{c·x : Ax <= b, x >= 0} = min{b·y : Aᵀy >= c, y >= 0}.
        #[test]
        fn matches_dual_program(
            a in proptest::collection::vec(proptest::collection::vec(small(), 3), 3),
            b in proptest::collection::vec(0i64..=6, 3),
            c in proptest::collection::vec(small(), 3),
        ) {
            let mut primal = LinearProgram::maximize(c.iter().map(|&v| int(v)).collect());
            for (row, &rhs) in a.iter().zip(&b) {
                primal.constrain(row.iter().map(|&v| int(v)).collect(), Relation::Le, int(rhs));
            }
            let mut dual = LinearProgram::maximize(b.iter().map(|&v| int(-v)).collect());
            for j in 0..3 {
                dual.constrain(a.iter().map(|row| int(row[j])).collect(), Relation::Ge, int(c[j]));
            }
            match primal.solve() {
                LpOutcome::Optimal { value, x } => {
                    for (row, &rhs) in a.iter().zip(&b) {
                        let lhs: Rational = row.iter().zip(&x).map(|(&r, xi)| int(r) * xi).sum();
                        prop_assert!(lhs <= int(rhs));
                    }
                    prop_assert!(x.iter().all(|v| !v.is_negative()));
                    let dual_value = dual.solve().value().cloned();
                    prop_assert_eq!(dual_value, Some(-value));
                }
                LpOutcome::Unbounded => prop_assert_eq!(dual.solve(), LpOutcome::Infeasible),
                LpOutcome::Infeasible => prop_assert!(false, "x = 0 is feasible"),
            }
        }
    }
}
