use std::fmt;

use super::{solve, LinearProgram, LpSolution, LpStatus, Objective, Relation, Sense};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One end of a range over the optimal face. `Unbounded` means the face
/// extends to infinity in that direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceBound {
    Finite(Rational),
    Unbounded,
}

impl FaceBound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            FaceBound::Finite(r) => Some(r),
            FaceBound::Unbounded => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            FaceBound::Finite(r) => r.is_positive(),
            FaceBound::Unbounded => true,
        }
    }
}

impl fmt::Display for FaceBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceBound::Finite(r) => write!(f, "{r}"),
            FaceBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// The set of optimal solutions of an LP, materialized by pinning the
/// objective to its optimal value.
#[derive(Debug, Clone)]
pub struct OptimalFace {
    optimum: Rational,
    solution: LpSolution,
    pinned: LinearProgram,
}

impl OptimalFace {
    pub fn new(lp: &LinearProgram) -> Result<Self> {
        let solution = solve(lp);
        let optimum = solution.expect_value()?.clone();
        let mut pinned = lp.clone();
        pinned.add_constraint(
            "optimal-face",
            lp.objective().to_vec(),
            Relation::Eq,
            optimum.clone(),
        )?;
        Ok(OptimalFace {
            optimum,
            solution,
            pinned,
        })
    }

    pub fn optimum(&self) -> &Rational {
        &self.optimum
    }

    /// The solver's own optimal vertex.
    pub fn solution(&self) -> &LpSolution {
        &self.solution
    }

    /// The LP whose feasible region is the optimal face.
    pub fn pinned(&self) -> &LinearProgram {
        &self.pinned
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.pinned.is_feasible(x)
    }

    pub fn optimize(&self, objective: &Objective) -> Result<LpSolution> {
        Ok(solve(&self.pinned.with_objective(objective)?))
    }

    fn extreme(&self, objective: &Objective) -> Result<FaceBound> {
        let s = self.optimize(objective)?;
        match s.status {
            LpStatus::Optimal => Ok(FaceBound::Finite(s.value.expect("optimal has value"))),
            LpStatus::Unbounded => Ok(FaceBound::Unbounded),
            LpStatus::Infeasible => Err(Error::CheckFailed(
                "optimal face became infeasible".into(),
            )),
        }
    }

    /// Range of a linear functional over the face.
    pub fn functional_range(&self, coefficients: &[Rational]) -> Result<(FaceBound, FaceBound)> {
        let lo = self.extreme(&Objective::minimize(coefficients.to_vec()))?;
        let hi = self.extreme(&Objective::maximize(coefficients.to_vec()))?;
        Ok((lo, hi))
    }

    pub fn max_of(&self, coefficients: &[Rational]) -> Result<FaceBound> {
        self.extreme(&Objective::maximize(coefficients.to_vec()))
    }

    pub fn range_of_index(&self, index: usize) -> Result<(FaceBound, FaceBound)> {
        let n = self.pinned.num_variables();
        let lo = self.extreme(&Objective::coordinate(Sense::Minimize, n, index))?;
        let hi = self.extreme(&Objective::coordinate(Sense::Maximize, n, index))?;
        Ok((lo, hi))
    }

    pub fn range(&self, var: &str) -> Result<(FaceBound, FaceBound)> {
        let index = self.pinned.variable_index(var)?;
        self.range_of_index(index)
    }
}

/// Optimum of `secondary` over the optimal solutions of `lp`. An unbounded
/// secondary objective is reported through `LpStatus::Unbounded`.
pub fn optimize_over_optimal_face(lp: &LinearProgram, secondary: &Objective) -> Result<LpSolution> {
    OptimalFace::new(lp)?.optimize(secondary)
}

/// `(min, max)` of one variable over the optimal face of `lp`.
pub fn coordinate_range(lp: &LinearProgram, var: &str) -> Result<(FaceBound, FaceBound)> {
    lp.variable_index(var)?;
    OptimalFace::new(lp)?.range(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn segment() -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_nonnegative("y", r(1)).unwrap();
        lp.add_constraint("c", vec![r(1), r(1)], Relation::Le, r(1))
            .unwrap();
        lp
    }

    #[test]
    fn secondary_over_segment() {
        let lp = segment();
        let max_x = optimize_over_optimal_face(&lp, &Objective::maximize(vec![r(1), r(0)])).unwrap();
        assert_eq!(max_x.value, Some(r(1)));
        let min_x = optimize_over_optimal_face(&lp, &Objective::minimize(vec![r(1), r(0)])).unwrap();
        assert_eq!(min_x.value, Some(r(0)));
        assert_eq!(
            coordinate_range(&lp, "y").unwrap(),
            (FaceBound::Finite(r(0)), FaceBound::Finite(r(1)))
        );
    }

    #[test]
    fn non_optimal_lp_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        let err = optimize_over_optimal_face(&lp, &Objective::maximize(vec![r(1)])).unwrap_err();
        assert_eq!(err, Error::NotOptimal(LpStatus::Unbounded));
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(
            coordinate_range(&segment(), "w").unwrap_err(),
            Error::UnknownVariable("w".into())
        );
    }

    #[test]
    fn unbounded_face_direction() {
        // min x - y, x - y >= 1: face x - y = 1 is unbounded in x.
        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_nonnegative("y", r(-1)).unwrap();
        lp.add_constraint("c", vec![r(1), r(-1)], Relation::Ge, r(1))
            .unwrap();
        let (lo, hi) = coordinate_range(&lp, "x").unwrap();
        assert_eq!(lo, FaceBound::Finite(r(1)));
        assert_eq!(hi, FaceBound::Unbounded);
    }

    #[test]
    fn unique_optimum_has_degenerate_ranges() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(2)).unwrap();
        lp.add_nonnegative("y", r(1)).unwrap();
        lp.add_constraint("c", vec![r(1), r(1)], Relation::Le, r(1))
            .unwrap();
        for v in ["x", "y"] {
            let (lo, hi) = coordinate_range(&lp, v).unwrap();
            assert_eq!(lo, hi);
        }
    }
}
