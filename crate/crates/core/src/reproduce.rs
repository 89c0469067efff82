//! Regression checks on the reference fixtures with exactly known answers.

use crate::analysis::{
    always_paid_fairly, check_concurrency, core_nonempty, core_polytope, coordinate_ranges,
    deterministic_dual, dual_to_imputation, in_d_of_i, is_core_imputation, is_optimal_dual,
    paid_sometimes, surplus_account, CoreQuery, DualSolution,
};
use crate::error::Result;
use crate::fixtures;
use crate::formulations::build_edmonds_primal;
use crate::game::{GameInstance, Imputation};
use crate::lp::{solve, FaceBound, OptimalFace};
use crate::oracle::{classify, enumerate_optima, max_weight, Caps, ClassLabel};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks plus informational notes that are reported but never asserted.
#[derive(Debug, Clone, Default)]
pub struct Reproduction {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Reproduction {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn check(&mut self, group: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            group,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records `actual == expected` with both values in the detail.
    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, group: &'static str, name: &str, actual: T, expected: T) {
        let detail = format!("got {actual:?}, expected {expected:?}");
        self.check(group, name, actual == expected, detail);
    }
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| Rational::from_integer(n)).collect()
}

/// An HK dual from vertex values and named edge duals.
fn hk_dual(
    g: &GameInstance,
    vertex: &[i64],
    lower: &[(&str, &str, i64)],
    upper: &[(&str, &str, i64)],
) -> Result<DualSolution> {
    let mut d = DualSolution::vertices_only(g, ints(vertex));
    for &(a, b, y) in lower {
        d.lower[g.edge_by_names(a, b)?] = Rational::from_integer(y);
    }
    for &(a, b, z) in upper {
        d.upper[g.edge_by_names(a, b)?] = Some(Rational::from_integer(z));
    }
    Ok(d)
}

fn payoff_of(g: &GameInstance, d: &DualSolution) -> Option<Vec<Rational>> {
    dual_to_imputation(g, d).ok().map(|i| i.payoff)
}

fn surplus_of(g: &GameInstance, d: &DualSolution) -> Option<Rational> {
    surplus_account(g, d).ok().map(|a| a.surplus)
}

/// `Some(values)` when the core polytope is a single point.
fn unique_core_point(g: &GameInstance, caps: &Caps) -> Result<Option<Vec<Rational>>> {
    let face = OptimalFace::new(&core_polytope(g, caps)?)?;
    let mut point = Vec::new();
    for v in 0..g.num_vertices() {
        match face.range_of_index(v)? {
            (FaceBound::Finite(lo), FaceBound::Finite(hi)) if lo == hi => point.push(lo),
            _ => return Ok(None),
        }
    }
    Ok(Some(point))
}

fn star_b221(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "b-matching star, b=(2,2,1)";
    let g = fixtures::star_b221();
    r.expect_eq(G, "worth", max_weight(&g, caps)?.0, rat(4, 1));
    let ranges = coordinate_ranges(&g)?;
    let unique = ranges.iter().all(|(lo, hi)| lo == hi);
    r.check(G, "optimal dual is unique", unique, format!("{ranges:?}"));
    r.expect_eq(G, "optimal dual", deterministic_dual(&g)?.vertex, ints(&[1, 0, 2]));
    let four = Imputation::external(ints(&[4, 0, 0]));
    r.expect_eq(G, "(4,0,0) in core", is_core_imputation(&g, &four, caps)?.in_core, true);
    r.expect_eq(G, "(4,0,0) not in D(I)", in_d_of_i(&g, &four)?, false);
    Ok(())
}

fn star_hk_423(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "HK star, b=(4,2,3)";
    let g = fixtures::star_hk_423();
    r.expect_eq(G, "worth", max_weight(&g, caps)?.0, rat(10, 1));
    let first = hk_dual(&g, &[3, 0, 0], &[("u", "v1", 2)], &[])?;
    let second = hk_dual(&g, &[1, 0, 2], &[], &[])?;
    r.expect_eq(G, "first dual optimal", is_optimal_dual(&g, &first), true);
    r.expect_eq(G, "second dual optimal", is_optimal_dual(&g, &second), true);
    r.expect_eq(G, "first surplus", surplus_of(&g, &first), Some(rat(12, 1)));
    r.expect_eq(G, "second surplus", surplus_of(&g, &second), Some(rat(10, 1)));
    r.expect_eq(G, "first payments", payoff_of(&g, &first), Some(ints(&[12, 0, 0])));
    r.expect_eq(G, "second payments", payoff_of(&g, &second), Some(ints(&[4, 0, 6])));
    let alt = hk_dual(&g, &[4, 0, 0], &[("u", "v1", 2)], &[])?;
    r.notes.push(format!(
        "{G}: vertex values (4,0,0) with y(u,v1)=2 {} optimal (dual objective differs from 10); \
         payments (12,0,0) come from vertex values (3,0,0)",
        if is_optimal_dual(&g, &alt) { "are" } else { "are not" }
    ));
    Ok(())
}

fn star_hk_upper(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "HK star, upper bounds 1";
    let g = fixtures::star_hk_upper();
    r.expect_eq(G, "worth", max_weight(&g, caps)?.0, rat(4, 1));
    let first = hk_dual(&g, &[0, 0, 0], &[], &[("u", "v1", 1), ("u", "v2", 3)])?;
    let second = hk_dual(&g, &[1, 0, 0], &[], &[("u", "v2", 2)])?;
    r.expect_eq(G, "first surplus", surplus_of(&g, &first), Some(rat(0, 1)));
    r.expect_eq(G, "second surplus", surplus_of(&g, &second), Some(rat(2, 1)));
    let p = Imputation::external(ints(&[1, 0, 1]));
    r.expect_eq(G, "(1,0,1) in core", is_core_imputation(&g, &p, caps)?.in_core, true);
    r.expect_eq(G, "(1,0,1) not in D(I)", in_d_of_i(&g, &p)?, false);
    Ok(())
}

fn star_hk_lower(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "HK star, lower bounds 1";
    let g = fixtures::star_hk_lower();
    r.expect_eq(G, "worth", max_weight(&g, caps)?.0, rat(4, 1));
    let d = hk_dual(&g, &[3, 0, 0], &[("u", "v1", 2)], &[])?;
    r.expect_eq(G, "surplus", surplus_of(&g, &d), Some(rat(6, 1)));
    let six = Imputation::with_surplus_dual(ints(&[6, 0, 0]), d.clone());
    r.expect_eq(G, "(6,0,0) in core", is_core_imputation(&g, &six, caps)?.in_core, true);
    let split = Imputation::with_surplus_dual(ints(&[3, 3, 0]), d);
    let verdict = is_core_imputation(&g, &split, caps)?;
    let detail = match verdict.witness() {
        Some(s) => format!("blocked by {{{}}}", s.names(&g).join(", ")),
        None => "not blocked".into(),
    };
    r.check(G, "(3,3,0) in core", verdict.in_core, detail);
    r.expect_eq(G, "(3,3,0) not in D(I)", in_d_of_i(&g, &split)?, false);
    Ok(())
}

fn seven_vertex(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "seven-vertex general graph";
    let g = fixtures::seven_vertex();
    let optima = enumerate_optima(&g, caps)?;
    r.expect_eq(G, "number of maximum matchings", optima.len(), 3);
    r.expect_eq(G, "maximum weight", optima[0].weight(&g), rat(4, 1));
    let key = g.edge_by_names("v2", "v7")?;
    r.expect_eq(G, "(v2,v7) in every optimum", optima.iter().all(|m| m.contains(key)), true);
    let c = check_concurrency(&g, caps)?;
    r.expect_eq(G, "fractional optimum", c.fractional, rat(4, 1));
    r.expect_eq(G, "integral optimum", c.integral, rat(4, 1));
    r.expect_eq(G, "unique core imputation", unique_core_point(&g, caps)?, Some(ints(&[0, 1, 0, 1, 0, 1, 1])));
    let classes = classify(&g, caps)?;
    let fair = |a: &str, b: &str| -> Result<(ClassLabel, CoreQuery<bool>)> {
        let e = g.edge_by_names(a, b)?;
        Ok((classes.teams[e], always_paid_fairly(&g, e, caps)?))
    };
    r.expect_eq(G, "(v4,v7) subpar and overpaid", fair("v4", "v7")?, (ClassLabel::Subpar, CoreQuery::Answer(false)));
    for (a, b) in [("v1", "v2"), ("v2", "v3"), ("v1", "v7")] {
        r.expect_eq(
            G,
            &format!("({a},{b}) subpar and fairly paid"),
            fair(a, b)?,
            (ClassLabel::Subpar, CoreQuery::Answer(true)),
        );
    }
    Ok(())
}

fn triangle_pendant(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "triangle with pendant";
    let g = fixtures::triangle_pendant();
    let c = check_concurrency(&g, caps)?;
    r.expect_eq(G, "fractional optimum", c.fractional, rat(2, 1));
    r.expect_eq(G, "integral optimum", c.integral, rat(2, 1));
    let expected = vec![rat(1, 1), rat(1, 2), rat(1, 2), rat(0, 1)];
    r.expect_eq(G, "unique core imputation", unique_core_point(&g, caps)?, Some(expected));
    let v4 = g.agent("v4")?;
    r.expect_eq(G, "v4 essential", classify(&g, caps)?.players[v4], ClassLabel::Essential);
    r.expect_eq(G, "v4 never paid", paid_sometimes(&g, v4, caps)?, CoreQuery::Answer(false));
    Ok(())
}

fn k3(r: &mut Reproduction, caps: &Caps) -> Result<()> {
    const G: &str = "unit triangle";
    let g = fixtures::k3();
    let c = check_concurrency(&g, caps)?;
    r.expect_eq(G, "fractional optimum", c.fractional, rat(3, 2));
    r.expect_eq(G, "integral optimum", c.integral, rat(1, 1));
    r.expect_eq(G, "core empty", core_nonempty(&g, caps)?.0, false);
    let edmonds = solve(&build_edmonds_primal(&g, caps.vertices)?);
    r.expect_eq(G, "odd-set LP optimum", edmonds.expect_value()?.clone(), rat(1, 1));
    Ok(())
}

/// Runs every fixture regression. Errors are analysis errors, not failed
/// checks.
pub fn reproduce_all(caps: &Caps) -> Result<Reproduction> {
    let mut r = Reproduction::default();
    star_b221(&mut r, caps)?;
    star_hk_423(&mut r, caps)?;
    star_hk_upper(&mut r, caps)?;
    star_hk_lower(&mut r, caps)?;
    seven_vertex(&mut r, caps)?;
    triangle_pendant(&mut r, caps)?;
    k3(&mut r, caps)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_the_split_payment_fails() {
        let r = reproduce_all(&Caps::default()).unwrap();
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["(3,3,0) in core"]);
        assert_eq!(r.notes.len(), 1);
        assert!(r.checks.len() > 30);
    }
}
