use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formulations::{build_dual, build_primal, DualLayout};
use crate::game::{GameInstance, GameKind, Imputation, Provenance};
use crate::lp::{solve, FaceBound, LinearProgram, LpStatus, Objective, OptimalFace, Relation};
use crate::rational::Rational;

/// A solution of the dual LP in game terms.
///
/// `lower` has one entry per edge and is all zeros outside
/// Hoffman-Kruskal games. `upper[e]` is `Some` exactly for Hoffman-Kruskal
/// edges with an upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualSolution {
    pub vertex: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
}

impl DualSolution {
    /// Vertex values with every edge dual at zero.
    pub fn vertices_only(instance: &GameInstance, vertex: Vec<Rational>) -> Self {
        let layout = DualLayout::of(instance);
        DualSolution {
            vertex,
            lower: vec![Rational::zero(); instance.num_edges()],
            upper: layout
                .upper
                .iter()
                .map(|c| c.map(|_| Rational::zero()))
                .collect(),
        }
    }

    /// Reads a dual LP assignment (columns as laid out by `build_dual`).
    pub fn from_assignment(instance: &GameInstance, x: &[Rational]) -> Self {
        let layout = DualLayout::of(instance);
        let at = |c: Option<usize>| c.map(|c| x[c].clone());
        DualSolution {
            vertex: x[..layout.vertices].to_vec(),
            lower: layout
                .lower
                .iter()
                .map(|&c| at(c).unwrap_or_else(Rational::zero))
                .collect(),
            upper: layout.upper.iter().map(|&c| at(c)).collect(),
        }
    }

    /// The dual LP assignment, or `None` if the shape does not fit the
    /// instance.
    pub fn to_assignment(&self, instance: &GameInstance) -> Option<Vec<Rational>> {
        let layout = DualLayout::of(instance);
        if self.vertex.len() != layout.vertices
            || self.lower.len() != instance.num_edges()
            || self.upper.len() != instance.num_edges()
        {
            return None;
        }
        let mut x = vec![Rational::zero(); layout.width];
        x[..layout.vertices].clone_from_slice(&self.vertex);
        for e in 0..instance.num_edges() {
            match layout.lower[e] {
                Some(c) => x[c] = self.lower[e].clone(),
                None if !self.lower[e].is_zero() => return None,
                None => {}
            }
            match (layout.upper[e], &self.upper[e]) {
                (Some(c), Some(z)) => x[c] = z.clone(),
                (None, None) => {}
                _ => return None,
            }
        }
        Some(x)
    }

    /// `u_a + u_b + z_e - y_e - w_e`: zero when the team is fairly paid,
    /// positive when overpaid.
    pub fn edge_slack(&self, instance: &GameInstance, e: usize) -> Rational {
        let edge = &instance.edges[e];
        let mut s = &self.vertex[edge.a] + &self.vertex[edge.b];
        s -= &self.lower[e];
        if let Some(z) = &self.upper[e] {
            s += z;
        }
        s - &edge.weight
    }

    /// `sum_e (c_e y_e - d_e z_e)` over the edges selected by `keep`.
    pub fn adjustment_over(&self, instance: &GameInstance, keep: impl Fn(usize) -> bool) -> Rational {
        let mut total = Rational::zero();
        for (e, edge) in instance.edges.iter().enumerate() {
            if !keep(e) {
                continue;
            }
            if edge.lower > 0 {
                total += &(&self.lower[e] * &Rational::from(edge.lower));
            }
            if let (Some(z), Some(d)) = (&self.upper[e], edge.upper) {
                total -= &(z * &Rational::from(d));
            }
        }
        total
    }
}

/// Worth, edge-bound adjustment and resulting surplus of a dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusAccount {
    pub worth: Rational,
    pub adjustment: Rational,
    pub surplus: Rational,
}

/// Optimal value of the primal LP. For bipartite kinds this is the worth
/// of the game; for general graphs it is the fractional optimum.
pub fn primal_optimum(instance: &GameInstance) -> Result<Rational> {
    Ok(solve(&build_primal(instance)).expect_value()?.clone())
}

pub fn is_optimal_dual(instance: &GameInstance, d: &DualSolution) -> bool {
    let Some(x) = d.to_assignment(instance) else {
        return false;
    };
    let dual = build_dual(instance);
    if !dual.is_feasible(&x) {
        return false;
    }
    primal_optimum(instance).is_ok_and(|v| dual.objective_value(&x) == v)
}

/// The optimal dual reached by the simplex pivot rule.
pub fn deterministic_dual(instance: &GameInstance) -> Result<DualSolution> {
    let s = solve(&build_dual(instance));
    s.expect_value()?;
    Ok(DualSolution::from_assignment(instance, &s.assignment))
}

fn payoff_factor(instance: &GameInstance, v: usize) -> Rational {
    match instance.kind {
        GameKind::Assignment | GameKind::GeneralMatching => Rational::one(),
        _ => Rational::from(instance.capacity(v)),
    }
}

/// Payments `b_q * u_q` (with `b = 1` for assignment and general games).
pub fn dual_to_imputation(instance: &GameInstance, d: &DualSolution) -> Result<Imputation> {
    if !is_optimal_dual(instance, d) {
        return Err(Error::NotOptimalDual);
    }
    let payoff = d
        .vertex
        .iter()
        .enumerate()
        .map(|(v, u)| u * &payoff_factor(instance, v))
        .collect();
    Ok(Imputation {
        payoff,
        provenance: Provenance::FromDual(d.clone()),
    })
}

/// Inverse of the payment map on vertex values.
pub(crate) fn payoff_to_vertex_values(instance: &GameInstance, payoff: &[Rational]) -> Vec<Rational> {
    payoff
        .iter()
        .enumerate()
        .map(|(v, p)| p / &payoff_factor(instance, v))
        .collect()
}

/// `surplus = W + sum_e (c_e y_e - d_e z_e)`; edges without an upper bound
/// contribute no `z` term. Outside Hoffman-Kruskal games the adjustment is
/// zero.
pub fn surplus_account(instance: &GameInstance, d: &DualSolution) -> Result<SurplusAccount> {
    if !is_optimal_dual(instance, d) {
        return Err(Error::NotOptimalDual);
    }
    let worth = primal_optimum(instance)?;
    let adjustment = d.adjustment_over(instance, |_| true);
    let surplus = &worth + &adjustment;
    Ok(SurplusAccount {
        worth,
        adjustment,
        surplus,
    })
}

/// The optimal face of the dual LP, with helpers phrased in game terms.
#[derive(Debug, Clone)]
pub struct DualFace {
    face: OptimalFace,
    layout: DualLayout,
    width: usize,
}

impl DualFace {
    pub fn new(instance: &GameInstance) -> Result<Self> {
        let dual = build_dual(instance);
        let width = dual.num_variables();
        Ok(DualFace {
            face: OptimalFace::new(&dual)?,
            layout: DualLayout::of(instance),
            width,
        })
    }

    pub fn face(&self) -> &OptimalFace {
        &self.face
    }

    pub fn optimum(&self) -> &Rational {
        self.face.optimum()
    }

    pub fn vertex_range(&self, v: usize) -> Result<(FaceBound, FaceBound)> {
        self.face.range_of_index(v)
    }

    pub fn max_vertex(&self, v: usize) -> Result<FaceBound> {
        let mut c = vec![Rational::zero(); self.width];
        c[v] = Rational::one();
        self.face.max_of(&c)
    }

    fn slack_functional(&self, instance: &GameInstance, e: usize) -> Vec<Rational> {
        let edge = &instance.edges[e];
        let mut c = vec![Rational::zero(); self.width];
        c[edge.a] += &Rational::one();
        c[edge.b] += &Rational::one();
        if let Some(y) = self.layout.lower[e] {
            c[y] = -Rational::one();
        }
        if let Some(z) = self.layout.upper[e] {
            c[z] = Rational::one();
        }
        c
    }

    /// Largest edge slack over the optimal duals.
    pub fn max_slack(&self, instance: &GameInstance, e: usize) -> Result<FaceBound> {
        Ok(match self.face.max_of(&self.slack_functional(instance, e))? {
            FaceBound::Finite(v) => FaceBound::Finite(v - &instance.edges[e].weight),
            FaceBound::Unbounded => FaceBound::Unbounded,
        })
    }

    /// An optimal dual maximizing the slack of `e` (a vertex of the face).
    pub fn argmax_slack(&self, instance: &GameInstance, e: usize) -> Result<Option<DualSolution>> {
        let s = self
            .face
            .optimize(&Objective::maximize(self.slack_functional(instance, e)))?;
        Ok(s.is_optimal()
            .then(|| DualSolution::from_assignment(instance, &s.assignment)))
    }

    pub fn argmax_vertex(&self, instance: &GameInstance, v: usize) -> Result<Option<DualSolution>> {
        let mut c = vec![Rational::zero(); self.width];
        c[v] = Rational::one();
        let s = self.face.optimize(&Objective::maximize(c))?;
        Ok(s.is_optimal()
            .then(|| DualSolution::from_assignment(instance, &s.assignment)))
    }

    /// Pinned dual LP plus the equations `u_q = values[q]`.
    pub(crate) fn with_vertex_values(&self, values: &[Rational]) -> Result<LinearProgram> {
        let mut lp = self.face.pinned().clone();
        for (v, value) in values.iter().enumerate() {
            lp.add_sparse_constraint(
                format!("fix{v}"),
                &[(v, Rational::one())],
                Relation::Eq,
                value.clone(),
            )?;
        }
        Ok(lp)
    }

    /// An optimal dual whose surplus adjustment equals `adjustment`, if any.
    pub fn with_adjustment(
        &self,
        instance: &GameInstance,
        adjustment: &Rational,
    ) -> Result<Option<DualSolution>> {
        let mut c = vec![Rational::zero(); self.width];
        for (e, edge) in instance.edges.iter().enumerate() {
            if let Some(y) = self.layout.lower[e] {
                c[y] = Rational::from(edge.lower);
            }
            if let (Some(z), Some(d)) = (self.layout.upper[e], edge.upper) {
                c[z] = -Rational::from(d);
            }
        }
        let mut lp = self.face.pinned().clone();
        lp.add_constraint("adjustment", c, Relation::Eq, adjustment.clone())?;
        let lp = lp.with_objective(&Objective::minimize(vec![Rational::zero(); self.width]))?;
        let s = solve(&lp);
        Ok(s.is_optimal()
            .then(|| DualSolution::from_assignment(instance, &s.assignment)))
    }

    /// Distinct optimal duals found by optimizing `samples` random objectives
    /// over the face. Directions in which the face is unbounded are skipped.
    pub fn sample(&self, instance: &GameInstance, samples: usize, seed: u64) -> Result<Vec<DualSolution>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<DualSolution> = Vec::new();
        let first = DualSolution::from_assignment(instance, &self.face.solution().assignment);
        out.push(first);
        for _ in 0..samples {
            let c: Vec<Rational> = (0..self.width)
                .map(|_| Rational::from_integer(rng.gen_range(-5..=5)))
                .collect();
            let s = self.face.optimize(&Objective::maximize(c))?;
            match s.status {
                LpStatus::Optimal => {
                    let d = DualSolution::from_assignment(instance, &s.assignment);
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
                LpStatus::Unbounded => {}
                LpStatus::Infeasible => {
                    return Err(Error::CheckFailed("optimal dual face is empty".into()))
                }
            }
        }
        Ok(out)
    }
}
