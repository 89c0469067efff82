//! Two-phase dictionary simplex with Bland's rule.
//!
//! The LP is first rewritten as `max c·s  s.t.  A s <= b, s >= 0`. Phase 1
//! adds a single auxiliary variable `x0` to every row and maximizes `-x0`.
//! The dictionary stores one row per basic variable,
//! `x_B = const + sum_j coef_j * x_N[j]`, so a pivot costs O(rows * cols).

use std::collections::BTreeSet;

use super::{LinearProgram, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// How an original variable maps onto non-negative standard-form columns.
#[derive(Debug, Clone)]
enum Column {
    /// x = offset + s
    Shifted { col: usize, offset: Rational },
    /// x = offset - s
    Reflected { col: usize, offset: Rational },
    /// x = s⁺ - s⁻
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    columns: Vec<Column>,
    width: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
    /// maximize objective·s
    objective: Vec<Rational>,
}

impl StandardForm {
    fn from_lp(lp: &LinearProgram) -> Self {
        let mut width = 0;
        let mut columns = Vec::with_capacity(lp.num_variables());
        let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
        for v in lp.variables() {
            let col = match (&v.lower, &v.upper) {
                (Some(l), upper) => {
                    let c = width;
                    width += 1;
                    if let Some(u) = upper {
                        bound_rows.push((c, u - l));
                    }
                    Column::Shifted {
                        col: c,
                        offset: l.clone(),
                    }
                }
                (None, Some(u)) => {
                    width += 1;
                    Column::Reflected {
                        col: width - 1,
                        offset: u.clone(),
                    }
                }
                (None, None) => {
                    width += 2;
                    Column::Split {
                        pos: width - 2,
                        neg: width - 1,
                    }
                }
            };
            columns.push(col);
        }

        let expand = |coefficients: &[Rational]| -> (Vec<Rational>, Rational) {
            let mut row = vec![Rational::zero(); width];
            let mut constant = Rational::zero();
            for (a, col) in coefficients.iter().zip(&columns) {
                if a.is_zero() {
                    continue;
                }
                match col {
                    Column::Shifted { col, offset } => {
                        row[*col] += a;
                        constant += a * offset;
                    }
                    Column::Reflected { col, offset } => {
                        row[*col] -= a;
                        constant += a * offset;
                    }
                    Column::Split { pos, neg } => {
                        row[*pos] += a;
                        row[*neg] -= a;
                    }
                }
            }
            (row, constant)
        };

        let mut rows = Vec::new();
        for c in lp.constraints() {
            let (row, constant) = expand(&c.coefficients);
            let rhs = &c.rhs - &constant;
            let negated = || (row.iter().map(|a| -a).collect::<Vec<_>>(), -&rhs);
            match c.relation {
                Relation::Le => rows.push((row.clone(), rhs.clone())),
                Relation::Ge => rows.push(negated()),
                Relation::Eq => {
                    rows.push((row.clone(), rhs.clone()));
                    rows.push(negated());
                }
            }
        }
        for (col, cap) in bound_rows {
            let mut row = vec![Rational::zero(); width];
            row[col] = Rational::one();
            rows.push((row, cap));
        }

        let (mut objective, _) = expand(lp.objective());
        if lp.sense() == Sense::Minimize {
            objective.iter_mut().for_each(|c| *c = -&*c);
        }

        StandardForm {
            columns,
            width,
            rows,
            objective,
        }
    }

    fn recover(&self, s: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|col| match col {
                Column::Shifted { col, offset } => offset + &s[*col],
                Column::Reflected { col, offset } => offset - &s[*col],
                Column::Split { pos, neg } => &s[*pos] - &s[*neg],
            })
            .collect()
    }

    fn owner_of(&self, std_col: usize) -> Option<usize> {
        self.columns.iter().position(|c| match c {
            Column::Shifted { col, .. } | Column::Reflected { col, .. } => *col == std_col,
            Column::Split { pos, neg } => *pos == std_col || *neg == std_col,
        })
    }
}

/// Variable labels: `0..width` are standard-form columns, `width..width+m`
/// are row slacks and `width + m` is the phase-1 auxiliary.
struct Dictionary {
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    consts: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    obj_const: Rational,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Dictionary {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].recip();
        let mut new_row: Vec<Rational> = self.rows[r]
            .iter()
            .map(|v| if v.is_zero() { Rational::zero() } else { -(v * &inv) })
            .collect();
        new_row[e] = inv.clone();
        let new_const = -(&self.consts[r] * &inv);

        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[e]);

        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut self.rows[i][e], Rational::zero());
            self.consts[i] += &f * &new_const;
            let row = &mut self.rows[i];
            for (j, nv) in new_row.iter().enumerate() {
                if !nv.is_zero() {
                    row[j] += &f * nv;
                }
            }
        }
        if !self.obj[e].is_zero() {
            let f = std::mem::replace(&mut self.obj[e], Rational::zero());
            self.obj_const += &f * &new_const;
            for (j, nv) in new_row.iter().enumerate() {
                if !nv.is_zero() {
                    self.obj[j] += &f * nv;
                }
            }
        }
        self.rows[r] = new_row;
        self.consts[r] = new_const;
    }

    /// One iteration of Bland's rule.
    fn step(&mut self) -> Step {
        let entering = (0..self.nonbasic.len())
            .filter(|&j| self.obj[j].is_positive())
            .min_by_key(|&j| self.nonbasic[j]);
        let Some(e) = entering else {
            return Step::Optimal;
        };
        let mut best: Option<(Rational, usize)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][e];
            if !a.is_negative() {
                continue;
            }
            let ratio = &self.consts[r] / &(-a);
            let better = match &best {
                None => true,
                Some((b, br)) => ratio < *b || (ratio == *b && self.basic[r] < self.basic[*br]),
            };
            if better {
                best = Some((ratio, r));
            }
        }
        match best {
            None => Step::Unbounded,
            Some((_, r)) => {
                self.pivot(r, e);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self) -> Step {
        loop {
            match self.step() {
                Step::Pivoted => continue,
                done => return done,
            }
        }
    }

    fn values(&self, labels: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); labels];
        for (r, &b) in self.basic.iter().enumerate() {
            if b < labels {
                v[b] = self.consts[r].clone();
            }
        }
        v
    }
}

/// Solves `lp` exactly. The returned assignment (when optimal) is a basic
/// feasible solution, and identical inputs always give identical outputs.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    let sf = StandardForm::from_lp(lp);
    let width = sf.width;
    let m = sf.rows.len();
    let aux = width + m;

    let mut dict = Dictionary {
        basic: (width..width + m).collect(),
        nonbasic: (0..width).collect(),
        consts: sf.rows.iter().map(|(_, b)| b.clone()).collect(),
        rows: sf
            .rows
            .iter()
            .map(|(a, _)| a.iter().map(|v| -v).collect())
            .collect(),
        obj: vec![Rational::zero(); width],
        obj_const: Rational::zero(),
    };

    if dict.consts.iter().any(Rational::is_negative) {
        // Phase 1: x_slack = b - A s + x0, maximize -x0.
        let e = dict.nonbasic.len();
        dict.nonbasic.push(aux);
        for row in &mut dict.rows {
            row.push(Rational::one());
        }
        dict.obj = vec![Rational::zero(); e + 1];
        dict.obj[e] = -Rational::one();

        let leave = (0..m)
            .min_by(|&a, &b| {
                dict.consts[a]
                    .cmp(&dict.consts[b])
                    .then(dict.basic[a].cmp(&dict.basic[b]))
            })
            .expect("negative constant implies a row");
        dict.pivot(leave, e);
        dict.run();
        if dict.obj_const.is_negative() {
            return LpSolution::without_point(LpStatus::Infeasible);
        }
        if let Some(r) = dict.basic.iter().position(|&b| b == aux) {
            // Degenerate: x0 is basic at zero. Swap it for any column in its row.
            let e = (0..dict.nonbasic.len())
                .filter(|&j| !dict.rows[r][j].is_zero())
                .min_by_key(|&j| dict.nonbasic[j])
                .expect("auxiliary row cannot be identically zero");
            dict.pivot(r, e);
        }
        let col = dict
            .nonbasic
            .iter()
            .position(|&l| l == aux)
            .expect("auxiliary is nonbasic");
        dict.nonbasic.remove(col);
        for row in &mut dict.rows {
            row.remove(col);
        }
    }

    // Phase 2 objective in terms of the current nonbasic variables.
    let cost = |label: usize| -> Rational {
        if label < width {
            sf.objective[label].clone()
        } else {
            Rational::zero()
        }
    };
    dict.obj = dict.nonbasic.iter().map(|&l| cost(l)).collect();
    dict.obj_const = Rational::zero();
    for r in 0..m {
        let c = cost(dict.basic[r]);
        if c.is_zero() {
            continue;
        }
        dict.obj_const += &c * &dict.consts[r];
        for j in 0..dict.nonbasic.len() {
            if !dict.rows[r][j].is_zero() {
                dict.obj[j] += &c * &dict.rows[r][j];
            }
        }
    }

    match dict.run() {
        Step::Unbounded => LpSolution::without_point(LpStatus::Unbounded),
        _ => {
            let s = dict.values(width);
            let assignment = sf.recover(&s);
            let value = lp.objective_value(&assignment);
            let basis: BTreeSet<usize> = dict
                .basic
                .iter()
                .filter(|&&b| b < width)
                .filter_map(|&b| sf.owner_of(b))
                .collect();
            LpSolution {
                status: LpStatus::Optimal,
                value: Some(value),
                assignment,
                basis,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LinearProgram, Relation, Sense};
    use crate::rational::{rat, Rational};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn single_variable_box() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_constraint("c", vec![r(1)], Relation::Le, r(1)).unwrap();
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, Some(r(1)));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_variable("x", r(1), None, None).unwrap();
        lp.add_constraint("lo", vec![r(1)], Relation::Ge, r(1)).unwrap();
        lp.add_constraint("hi", vec![r(1)], Relation::Le, r(0)).unwrap();
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray_detected() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_nonnegative("y", r(0)).unwrap();
        lp.add_constraint("c", vec![r(1), r(-1)], Relation::Le, r(1))
            .unwrap();
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_reflected_variables() {
        // min x + y with x free, y <= 3 (no lower bound), x >= -2, x + y >= -4
        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.add_variable("x", r(1), None, None).unwrap();
        lp.add_variable("y", r(1), None, Some(r(3))).unwrap();
        lp.add_constraint("xlo", vec![r(1), r(0)], Relation::Ge, r(-2))
            .unwrap();
        lp.add_constraint("sum", vec![r(1), r(1)], Relation::Ge, r(-4))
            .unwrap();
        let s = solve(&lp);
        assert_eq!(s.value, Some(r(-4)));
        assert!(lp.is_vertex(&s.assignment));
    }

    #[test]
    fn equality_and_fractional_optimum() {
        // max x + y  s.t.  2x + y = 3, x + 3y <= 4
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_nonnegative("y", r(1)).unwrap();
        lp.add_constraint("eq", vec![r(2), r(1)], Relation::Eq, r(3))
            .unwrap();
        lp.add_constraint("le", vec![r(1), r(3)], Relation::Le, r(4))
            .unwrap();
        let s = solve(&lp);
        // vertices on 2x+y=3: (3/2,0) value 3/2 and (1,1) value 2
        assert_eq!(s.value, Some(r(2)));
        assert_eq!(s.assignment, vec![r(1), r(1)]);
        let _ = rat(1, 1);
    }

    /// Brute-force oracle for 2-variable LPs: enumerate intersections of
    /// every pair of boundary lines, keep feasible ones, take the best.
    fn vertex_enumeration_max(rows: &[(i64, i64, i64)], c: (i64, i64)) -> Option<Rational> {
        let mut lines: Vec<(Rational, Rational, Rational)> = rows
            .iter()
            .map(|&(a, b, rhs)| (r(a), r(b), r(rhs)))
            .collect();
        lines.push((r(1), r(0), r(0)));
        lines.push((r(0), r(1), r(0)));
        let feasible = |x: &Rational, y: &Rational| {
            !x.is_negative()
                && !y.is_negative()
                && rows
                    .iter()
                    .all(|&(a, b, rhs)| &(&r(a) * x) + &(&r(b) * y) <= r(rhs))
        };
        let mut best: Option<Rational> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = &lines[i];
                let (a2, b2, c2) = &lines[j];
                let det = &(a1 * b2) - &(a2 * b1);
                if det.is_zero() {
                    continue;
                }
                let x = &(&(c1 * b2) - &(c2 * b1)) / &det;
                let y = &(&(a1 * c2) - &(a2 * c1)) / &det;
                if feasible(&x, &y) {
                    let v = &(&r(c.0) * &x) + &(&r(c.1) * &y);
                    best = Some(match best {
                        Some(b) => b.max(v),
                        None => v,
                    });
                }
            }
        }
        best
    }

    #[test]
    fn two_variable_example_matches_vertex_enumeration() {
        let rows = [(1, 1, 2), (1, 0, 1)];
        let expected = vertex_enumeration_max(&rows, (1, 1)).unwrap();
        assert_eq!(expected, r(2));
        let mut lp = LinearProgram::new(Sense::Maximize);
        lp.add_nonnegative("x", r(1)).unwrap();
        lp.add_nonnegative("y", r(1)).unwrap();
        for (i, &(a, b, rhs)) in rows.iter().enumerate() {
            lp.add_constraint(format!("c{i}"), vec![r(a), r(b)], Relation::Le, r(rhs))
                .unwrap();
        }
        assert_eq!(solve(&lp).value, Some(expected));
    }

    proptest! {
        /// Bounded random 2D polytopes (a box plus random cuts) agree with
        /// brute-force vertex enumeration; assignments are vertices.
        #[test]
        fn random_2d_matches_enumeration(
            cuts in prop::collection::vec((-4i64..5, -4i64..5, 0i64..10), 0..5),
            c in (-5i64..6, -5i64..6),
        ) {
            let mut rows = cuts;
            rows.push((1, 0, 6));
            rows.push((0, 1, 6));
            let expected = vertex_enumeration_max(&rows, c).unwrap();
            let mut lp = LinearProgram::new(Sense::Maximize);
            lp.add_nonnegative("x", r(c.0)).unwrap();
            lp.add_nonnegative("y", r(c.1)).unwrap();
            for (i, &(a, b, rhs)) in rows.iter().enumerate() {
                lp.add_constraint(format!("c{i}"), vec![r(a), r(b)], Relation::Le, r(rhs)).unwrap();
            }
            let s = solve(&lp);
            prop_assert_eq!(s.value.clone(), Some(expected));
            prop_assert!(lp.is_vertex(&s.assignment));
            prop_assert_eq!(solve(&lp), s);
        }
    }
}
