use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dual::{
    deterministic_dual, dual_to_imputation, is_optimal_dual, payoff_to_vertex_values,
    primal_optimum, surplus_account, DualFace, DualSolution,
};
use crate::error::{Error, Result};
use crate::game::{GameInstance, GameKind, Imputation, SubCoalition};
use crate::lp::{solve, LinearProgram, LpStatus, Objective, Relation, Sense};
use crate::oracle::{characteristic_function, max_weight, Caps};
use crate::rational::Rational;

/// How a Hoffman-Kruskal sub-coalition's surplus is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SurplusRule {
    /// `W(S) + sum over E_S of (c_e y_e - d_e z_e)`, with `y`, `z` taken
    /// from the dual that fixes the grand coalition's surplus.
    #[default]
    BaselineRestriction,
    /// Same formula with `y`, `z` from the optimal dual of the restricted
    /// dual LP reached by the simplex pivot rule.
    RestrictedOptimalDual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreFailure {
    WrongLength { expected: usize, found: usize },
    NegativePayoff { agent: usize },
    /// Payments exceed the worth (or surplus) of the grand coalition.
    Overallocated { available: Rational, allocated: Rational },
    /// `coalition` can generate `value` on its own but is allocated less.
    Blocked {
        coalition: SubCoalition,
        value: Rational,
        allocated: Rational,
        /// The restricted dual used for the coalition's surplus, if any.
        dual: Option<DualSolution>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreVerdict {
    pub in_core: bool,
    pub failure: Option<CoreFailure>,
    /// Hoffman-Kruskal only: the dual that fixed the surplus baseline.
    pub baseline: Option<DualSolution>,
    /// Worth of the game, or its surplus under `baseline`.
    pub grand_value: Rational,
}

impl CoreVerdict {
    /// A blocking sub-coalition, when one exists.
    pub fn witness(&self) -> Option<&SubCoalition> {
        match &self.failure {
            Some(CoreFailure::Blocked { coalition, .. }) => Some(coalition),
            _ => None,
        }
    }
}

/// Brute-force core membership with the characteristic function cached.
#[derive(Debug, Clone)]
pub struct CoreOracle<'a> {
    instance: &'a GameInstance,
    table: Vec<Rational>,
    /// Non-empty proper masks, smallest coalitions first.
    order: Vec<u64>,
    rule: SurplusRule,
}

impl<'a> CoreOracle<'a> {
    pub fn new(instance: &'a GameInstance, caps: &Caps) -> Result<Self> {
        let table = characteristic_function(instance, caps)?;
        let full = (1u64 << instance.num_vertices()) - 1;
        let mut order: Vec<u64> = (1..full).collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        Ok(CoreOracle {
            instance,
            table,
            order,
            rule: SurplusRule::default(),
        })
    }

    pub fn with_rule(mut self, rule: SurplusRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn worth_of_mask(&self, mask: u64) -> &Rational {
        &self.table[mask as usize]
    }

    pub fn worth(&self) -> &Rational {
        self.table.last().expect("table has the grand coalition")
    }

    fn edges_inside(&self, mask: u64) -> impl Fn(usize) -> bool + '_ {
        move |e| {
            let edge = &self.instance.edges[e];
            mask >> edge.a & 1 == 1 && mask >> edge.b & 1 == 1
        }
    }

    /// The dual fixing a Hoffman-Kruskal imputation's surplus: its own
    /// provenance dual, else an optimal dual whose surplus equals the
    /// imputation's total, else the pivot-rule dual.
    fn baseline(&self, imp: &Imputation) -> Result<DualSolution> {
        if let Some(d) = imp.dual() {
            if !is_optimal_dual(self.instance, d) {
                return Err(Error::NotOptimalDual);
            }
            return Ok(d.clone());
        }
        let face = DualFace::new(self.instance)?;
        let wanted = imp.total() - self.worth();
        if let Some(d) = face.with_adjustment(self.instance, &wanted)? {
            return Ok(d);
        }
        deterministic_dual(self.instance)
    }

    fn coalition_value(
        &self,
        mask: u64,
        baseline: Option<&DualSolution>,
    ) -> Result<(Rational, Option<DualSolution>)> {
        let worth = self.worth_of_mask(mask).clone();
        let Some(baseline) = baseline else {
            return Ok((worth, None));
        };
        match self.rule {
            SurplusRule::BaselineRestriction => {
                let adj = baseline.adjustment_over(self.instance, self.edges_inside(mask));
                Ok((worth + adj, None))
            }
            SurplusRule::RestrictedOptimalDual => {
                let sub = self.instance.restrict(&SubCoalition::from_mask(mask));
                let d = deterministic_dual(&sub)?;
                let adj = d.adjustment_over(&sub, |_| true);
                Ok((worth + adj, Some(d)))
            }
        }
    }

    pub fn check(&self, imp: &Imputation) -> Result<CoreVerdict> {
        let n = self.instance.num_vertices();
        let hk = self.instance.kind == GameKind::HoffmanKruskal;
        let baseline = if hk { Some(self.baseline(imp)?) } else { None };
        let grand_value = match &baseline {
            Some(d) => surplus_account(self.instance, d)?.surplus,
            None => self.worth().clone(),
        };
        let verdict = |failure: Option<CoreFailure>| CoreVerdict {
            in_core: failure.is_none(),
            failure,
            baseline: baseline.clone(),
            grand_value: grand_value.clone(),
        };
        if imp.payoff.len() != n {
            return Ok(verdict(Some(CoreFailure::WrongLength {
                expected: n,
                found: imp.payoff.len(),
            })));
        }
        if let Some(agent) = imp.payoff.iter().position(Rational::is_negative) {
            return Ok(verdict(Some(CoreFailure::NegativePayoff { agent })));
        }
        let total = imp.total();
        if total > grand_value {
            return Ok(verdict(Some(CoreFailure::Overallocated {
                available: grand_value.clone(),
                allocated: total,
            })));
        }
        for &mask in &self.order {
            let s = SubCoalition::from_mask(mask);
            let allocated = imp.coalition_total(&s);
            let (value, dual) = self.coalition_value(mask, baseline.as_ref())?;
            if value > allocated {
                return Ok(verdict(Some(CoreFailure::Blocked {
                    coalition: s,
                    value,
                    allocated,
                    dual,
                })));
            }
        }
        if total < grand_value {
            return Ok(verdict(Some(CoreFailure::Blocked {
                coalition: self.instance.all_agents(),
                value: grand_value.clone(),
                allocated: total,
                dual: None,
            })));
        }
        Ok(verdict(None))
    }
}

/// Checks every non-empty sub-coalition. Hoffman-Kruskal games use
/// [`SurplusRule::BaselineRestriction`].
pub fn is_core_imputation(instance: &GameInstance, imp: &Imputation, caps: &Caps) -> Result<CoreVerdict> {
    CoreOracle::new(instance, caps)?.check(imp)
}

pub fn is_core_imputation_with(
    instance: &GameInstance,
    imp: &Imputation,
    caps: &Caps,
    rule: SurplusRule,
) -> Result<CoreVerdict> {
    CoreOracle::new(instance, caps)?.with_rule(rule).check(imp)
}

/// Whether some optimal dual maps to `imp` under the payment map.
pub fn in_d_of_i(instance: &GameInstance, imp: &Imputation) -> Result<bool> {
    if imp.payoff.len() != instance.num_vertices() {
        return Ok(false);
    }
    let face = DualFace::new(instance)?;
    let values = payoff_to_vertex_values(instance, &imp.payoff);
    let lp = face.with_vertex_values(&values)?;
    let width = lp.num_variables();
    let lp = lp.with_objective(&Objective::minimize(vec![Rational::zero(); width]))?;
    Ok(solve(&lp).status != LpStatus::Infeasible)
}

fn induced_connected(instance: &GameInstance, mask: u64) -> bool {
    let members: Vec<usize> = (0..instance.num_vertices())
        .filter(|v| mask >> v & 1 == 1)
        .collect();
    let Some(&start) = members.first() else {
        return false;
    };
    let mut seen = 1u64 << start;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for e in instance.incident(v) {
            let edge = &instance.edges[e];
            let w = if edge.a == v { edge.b } else { edge.a };
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                queue.push_back(w);
            }
        }
    }
    seen == mask
}

/// The core as an LP over payments `p(name) >= 0`:
/// `sum p = W` and `sum_{q in S} p_q >= W(S)` for every coalition.
///
/// Coalitions of worth zero, and coalitions whose induced subgraph is
/// disconnected, are omitted: their constraints are implied by
/// non-negativity and by the constraints of their components.
pub fn core_polytope(instance: &GameInstance, caps: &Caps) -> Result<LinearProgram> {
    let table = characteristic_function(instance, caps)?;
    let n = instance.num_vertices();
    let full = (1u64 << n) - 1;
    let mut lp = LinearProgram::new(Sense::Minimize);
    for v in &instance.vertices {
        lp.add_nonnegative(format!("p({})", v.name), Rational::zero())?;
    }
    lp.add_constraint(
        "total",
        vec![Rational::one(); n],
        Relation::Eq,
        table[full as usize].clone(),
    )?;
    for mask in 1..full {
        let worth = &table[mask as usize];
        if !worth.is_positive() || !induced_connected(instance, mask) {
            continue;
        }
        let terms: Vec<(usize, Rational)> = (0..n)
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| (v, Rational::one()))
            .collect();
        lp.add_sparse_constraint(
            format!("coalition{}", SubCoalition::from_mask(mask).names(instance).join(",")),
            &terms,
            Relation::Ge,
            worth.clone(),
        )?;
    }
    Ok(lp)
}

/// Non-emptiness of the core by LP feasibility. Hoffman-Kruskal cores are
/// relative to a dual, so they are witnessed by the pivot-rule dual.
pub fn core_nonempty(instance: &GameInstance, caps: &Caps) -> Result<(bool, Option<Imputation>)> {
    if instance.kind == GameKind::HoffmanKruskal {
        caps.check(instance)?;
        let d = deterministic_dual(instance)?;
        return Ok((true, Some(dual_to_imputation(instance, &d)?)));
    }
    let s = solve(&core_polytope(instance, caps)?);
    match s.status {
        LpStatus::Optimal => Ok((true, Some(Imputation::external(s.assignment)))),
        _ => Ok((false, None)),
    }
}

/// Distinct vertices of the core polytope found by optimizing random
/// objectives. Empty when the core is empty.
pub fn sample_core_vertices(
    instance: &GameInstance,
    caps: &Caps,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<Rational>>> {
    let lp = core_polytope(instance, caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let n = instance.num_vertices();
    for k in 0..=samples {
        let c: Vec<Rational> = if k == 0 {
            vec![Rational::zero(); n]
        } else {
            (0..n)
                .map(|_| Rational::from_integer(rng.gen_range(-5..=5)))
                .collect()
        };
        let s = solve(&lp.with_objective(&Objective::maximize(c))?);
        if s.status == LpStatus::Infeasible {
            return Ok(Vec::new());
        }
        if s.is_optimal() && !out.contains(&s.assignment) {
            out.push(s.assignment);
        }
    }
    Ok(out)
}

/// Fractional optimum, integral optimum and whether they agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concurrency {
    pub fractional: Rational,
    pub integral: Rational,
    pub concurrent: bool,
}

pub fn check_concurrency(instance: &GameInstance, caps: &Caps) -> Result<Concurrency> {
    let integral = max_weight(instance, caps)?.0;
    let fractional = primal_optimum(instance)?;
    Ok(Concurrency {
        concurrent: fractional == integral,
        fractional,
        integral,
    })
}

/// Whether the game has core imputations arising from duals: always for
/// bipartite kinds, exactly when concurrent for general graphs.
pub(crate) fn has_dual_core(instance: &GameInstance, caps: &Caps) -> Result<bool> {
    if instance.kind != GameKind::GeneralMatching {
        return Ok(true);
    }
    Ok(check_concurrency(instance, caps)?.concurrent)
}
