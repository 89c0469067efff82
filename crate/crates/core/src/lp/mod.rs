//! Exact linear programming over the rationals.
//!
//! [`solve`] runs a two-phase dictionary simplex with Bland's pivot rule, so
//! results are deterministic and every optimal assignment is a basic
//! solution. [`OptimalFace`] re-optimizes secondary objectives over the set
//! of optimal solutions of an LP.

mod face;
mod simplex;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use face::{coordinate_range, optimize_over_optimal_face, FaceBound, OptimalFace};
pub use simplex::solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coefficients, x)
    }
}

/// An objective direction plus one coefficient per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coefficients: Vec<Rational>,
}

impl Objective {
    pub fn maximize(coefficients: Vec<Rational>) -> Self {
        Objective {
            sense: Sense::Maximize,
            coefficients,
        }
    }

    pub fn minimize(coefficients: Vec<Rational>) -> Self {
        Objective {
            sense: Sense::Minimize,
            coefficients,
        }
    }

    /// Optimize a single coordinate.
    pub fn coordinate(sense: Sense, n: usize, index: usize) -> Self {
        let mut coefficients = vec![Rational::zero(); n];
        coefficients[index] = Rational::one();
        Objective {
            sense,
            coefficients,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<Rational>,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    index: HashMap<String, usize>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: Vec::new(),
            variables: Vec::new(),
            constraints: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds a variable; existing constraints get a zero coefficient for it.
    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        cost: Rational,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVariable(name));
        }
        let id = self.variables.len();
        self.index.insert(name.clone(), id);
        self.variables.push(Variable { name, lower, upper });
        self.objective.push(cost);
        for c in &mut self.constraints {
            c.coefficients.push(Rational::zero());
        }
        Ok(id)
    }

    /// Shorthand for a variable bounded below by zero.
    pub fn add_nonnegative(&mut self, name: impl Into<String>, cost: Rational) -> Result<usize> {
        self.add_variable(name, cost, Some(Rational::zero()), None)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize> {
        let name = name.into();
        if coefficients.len() != self.variables.len() {
            return Err(Error::DimensionMismatch {
                constraint: name,
                expected: self.variables.len(),
                found: coefficients.len(),
            });
        }
        self.constraints.push(Constraint {
            name,
            coefficients,
            relation,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    pub fn add_sparse_constraint(
        &mut self,
        name: impl Into<String>,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize> {
        let name = name.into();
        let mut coefficients = vec![Rational::zero(); self.variables.len()];
        for (j, a) in terms {
            let slot = coefficients.get_mut(*j).ok_or_else(|| Error::UnknownVariable(format!("#{j}")))?;
            *slot += a;
        }
        self.add_constraint(name, coefficients, relation, rhs)
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Same feasible region, different objective.
    pub fn with_objective(&self, objective: &Objective) -> Result<LinearProgram> {
        if objective.coefficients.len() != self.variables.len() {
            return Err(Error::DimensionMismatch {
                constraint: "objective".into(),
                expected: self.variables.len(),
                found: objective.coefficients.len(),
            });
        }
        let mut lp = self.clone();
        lp.sense = objective.sense;
        lp.objective = objective.coefficients.clone();
        Ok(lp)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    fn bound_holds(&self, j: usize, value: &Rational) -> (bool, bool) {
        let v = &self.variables[j];
        let lo = v.lower.as_ref().is_none_or(|l| value >= l);
        let hi = v.upper.as_ref().is_none_or(|u| value <= u);
        (lo, hi)
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.variables.len() {
            return false;
        }
        let bounds_ok = (0..x.len()).all(|j| {
            let (lo, hi) = self.bound_holds(j, &x[j]);
            lo && hi
        });
        bounds_ok
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&c.lhs(x), &c.rhs))
    }

    /// Rank of the subsystem of constraints and variable bounds that hold
    /// with equality at `x`. A feasible `x` is a vertex iff this equals the
    /// number of variables.
    pub fn active_rank(&self, x: &[Rational]) -> usize {
        let n = self.variables.len();
        let mut rows: Vec<Vec<Rational>> = self
            .constraints
            .iter()
            .filter(|c| c.lhs(x) == c.rhs)
            .map(|c| c.coefficients.clone())
            .collect();
        for (j, v) in self.variables.iter().enumerate() {
            let tight = v.lower.as_ref() == Some(&x[j]) || v.upper.as_ref() == Some(&x[j]);
            if tight {
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                rows.push(e);
            }
        }
        rank(rows)
    }

    pub fn is_vertex(&self, x: &[Rational]) -> bool {
        self.is_feasible(x) && self.active_rank(x) == self.variables.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status` is optimal.
    pub value: Option<Rational>,
    /// Empty unless `status` is optimal.
    pub assignment: Vec<Rational>,
    /// Original variables that are basic in the final dictionary.
    pub basis: BTreeSet<usize>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub(crate) fn without_point(status: LpStatus) -> Self {
        LpSolution {
            status,
            value: None,
            assignment: Vec::new(),
            basis: BTreeSet::new(),
        }
    }

    pub fn expect_value(&self) -> Result<&Rational> {
        self.value.as_ref().ok_or(Error::NotOptimal(self.status))
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Exact rank by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in r + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &pivot;
            let (head, tail) = rows.split_at_mut(i);
            for (x, y) in tail[0][col..width].iter_mut().zip(&head[r][col..width]) {
                *x -= &(&f * y);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn constraint_length_checked_at_construction() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", rat(1, 1)).unwrap();
        let err = lp
            .add_constraint("c", vec![rat(1, 1), rat(1, 1)], Relation::Le, rat(1, 1))
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", rat(1, 1)).unwrap();
        assert_eq!(
            lp.add_nonnegative("x", rat(1, 1)).unwrap_err(),
            Error::DuplicateVariable("x".into())
        );
    }

    #[test]
    fn late_variables_pad_existing_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", rat(1, 1)).unwrap();
        lp.add_constraint("c", vec![rat(1, 1)], Relation::Le, rat(1, 1))
            .unwrap();
        lp.add_nonnegative("y", rat(1, 1)).unwrap();
        assert_eq!(lp.constraints()[0].coefficients.len(), 2);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
            vec![rat(0, 1), rat(1, 3)],
        ];
        assert_eq!(rank(rows), 2);
    }
}
