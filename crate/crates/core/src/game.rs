//! Game instances for the five matching games, sub-coalitions and
//! imputations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::analysis::DualSolution;
use crate::error::{Error, Result};
use crate::formulations;
use crate::lp::{self, LpStatus};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameKind {
    Assignment,
    UniformB,
    BMatching,
    HoffmanKruskal,
    GeneralMatching,
}

impl GameKind {
    pub const ALL: [GameKind; 5] = [
        GameKind::Assignment,
        GameKind::UniformB,
        GameKind::BMatching,
        GameKind::HoffmanKruskal,
        GameKind::GeneralMatching,
    ];

    pub fn is_bipartite(self) -> bool {
        self != GameKind::GeneralMatching
    }

    pub fn keyword(self) -> &'static str {
        match self {
            GameKind::Assignment => "assignment",
            GameKind::UniformB => "uniform_b",
            GameKind::BMatching => "b_matching",
            GameKind::HoffmanKruskal => "hoffman_kruskal",
            GameKind::GeneralMatching => "general",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        GameKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    U,
    V,
    /// Vertices of a general graph.
    Single,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// For bipartite kinds `a` is the U endpoint.
    pub a: usize,
    pub b: usize,
    pub weight: Rational,
    /// Hoffman-Kruskal lower bound `c_e` (zero elsewhere).
    pub lower: u64,
    /// Hoffman-Kruskal upper bound `d_e`; `None` means no upper bound.
    pub upper: Option<u64>,
}

impl Edge {
    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacities {
    /// Every vertex may be matched once.
    Unit,
    Uniform(u64),
    PerVertex(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    pub kind: GameKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub capacities: Capacities,
}

impl GameInstance {
    pub fn new(kind: GameKind) -> Self {
        let capacities = match kind {
            GameKind::Assignment | GameKind::GeneralMatching => Capacities::Unit,
            GameKind::UniformB => Capacities::Uniform(1),
            GameKind::BMatching | GameKind::HoffmanKruskal => Capacities::PerVertex(Vec::new()),
        };
        GameInstance {
            kind,
            vertices: Vec::new(),
            edges: Vec::new(),
            capacities,
        }
    }

    /// Adds a vertex with capacity 1 (for per-vertex capacity kinds).
    pub fn add_vertex(&mut self, name: impl Into<String>, side: Side) -> usize {
        self.vertices.push(Vertex {
            name: name.into(),
            side,
        });
        if let Capacities::PerVertex(b) = &mut self.capacities {
            b.push(1);
        }
        self.vertices.len() - 1
    }

    pub fn set_capacity(&mut self, v: usize, b: u64) {
        match &mut self.capacities {
            Capacities::PerVertex(caps) => caps[v] = b,
            _ => panic!("set_capacity on a game without per-vertex capacities"),
        }
    }

    pub fn set_uniform_capacity(&mut self, b: u64) {
        self.capacities = Capacities::Uniform(b);
    }

    /// Adds an edge; bipartite edges are stored with the U endpoint first.
    pub fn add_edge(&mut self, a: usize, b: usize, weight: Rational) -> usize {
        let (a, b) = if self.vertices[a].side == Side::V && self.vertices[b].side == Side::U {
            (b, a)
        } else {
            (a, b)
        };
        self.edges.push(Edge {
            a,
            b,
            weight,
            lower: 0,
            upper: None,
        });
        self.edges.len() - 1
    }

    pub fn set_edge_bounds(&mut self, e: usize, lower: u64, upper: Option<u64>) {
        self.edges[e].lower = lower;
        self.edges[e].upper = upper;
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn capacity(&self, v: usize) -> u64 {
        match &self.capacities {
            Capacities::Unit => 1,
            Capacities::Uniform(b) => *b,
            Capacities::PerVertex(b) => b[v],
        }
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn agent(&self, name: &str) -> Result<usize> {
        self.vertex_index(name)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Looks up an edge by endpoint names, in either order.
    pub fn edge_by_names(&self, a: &str, b: &str) -> Result<usize> {
        let (ia, ib) = (self.agent(a)?, self.agent(b)?);
        self.edge_between(ia, ib)
            .ok_or_else(|| Error::UnknownAgent(format!("edge ({a},{b})")))
    }

    pub fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        format!(
            "({},{})",
            self.vertices[edge.a].name, self.vertices[edge.b].name
        )
    }

    pub fn incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.touches(v))
            .map(|(i, _)| i)
    }

    pub fn all_agents(&self) -> SubCoalition {
        SubCoalition {
            members: (0..self.vertices.len()).collect(),
        }
    }

    /// Induced sub-game on the members of `s`; vertex and edge order are
    /// inherited from `self`.
    pub fn restrict(&self, s: &SubCoalition) -> GameInstance {
        let keep: Vec<usize> = s
            .members
            .iter()
            .copied()
            .filter(|&v| v < self.vertices.len())
            .collect();
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| new_index[e.a] != usize::MAX && new_index[e.b] != usize::MAX)
            .map(|e| Edge {
                a: new_index[e.a],
                b: new_index[e.b],
                ..e.clone()
            })
            .collect();
        let capacities = match &self.capacities {
            Capacities::PerVertex(b) => Capacities::PerVertex(keep.iter().map(|&v| b[v]).collect()),
            other => other.clone(),
        };
        GameInstance {
            kind: self.kind,
            vertices,
            edges,
            capacities,
        }
    }

    /// All violated invariants; empty iff the instance is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.vertices.len();
        let mut names = HashSet::new();
        for v in &self.vertices {
            if !names.insert(v.name.as_str()) {
                out.push(Violation::DuplicateVertex(v.name.clone()));
            }
            let side_ok = match self.kind {
                GameKind::GeneralMatching => v.side == Side::Single,
                _ => v.side != Side::Single,
            };
            if !side_ok {
                out.push(Violation::WrongSide(v.name.clone()));
            }
        }
        let caps_ok = matches!(
            (self.kind, &self.capacities),
            (GameKind::Assignment | GameKind::GeneralMatching, Capacities::Unit)
                | (GameKind::UniformB, Capacities::Uniform(_))
                | (GameKind::BMatching | GameKind::HoffmanKruskal, Capacities::PerVertex(_))
        );
        if !caps_ok {
            out.push(Violation::CapacityMismatch);
        } else {
            match &self.capacities {
                Capacities::Uniform(0) => out.push(Violation::ZeroCapacity("b_const".into())),
                Capacities::PerVertex(b) if b.len() != n => out.push(Violation::CapacityMismatch),
                Capacities::PerVertex(b) => {
                    for (v, &cap) in b.iter().enumerate() {
                        if cap == 0 {
                            out.push(Violation::ZeroCapacity(self.vertices[v].name.clone()));
                        }
                    }
                }
                _ => {}
            }
        }

        let mut seen = HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                out.push(Violation::EndpointOutOfRange(i));
                continue;
            }
            let label = self.edge_label(i);
            if !e.weight.is_positive() {
                out.push(Violation::NonPositiveWeight(label.clone()));
            }
            if e.a == e.b {
                out.push(Violation::SelfLoop(label.clone()));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                out.push(Violation::ParallelEdge(label.clone()));
            }
            if self.kind.is_bipartite() && self.vertices[e.a].side == self.vertices[e.b].side {
                out.push(Violation::SameSide(label.clone()));
            }
            let has_bounds = e.lower != 0 || e.upper.is_some();
            if self.kind != GameKind::HoffmanKruskal && has_bounds {
                out.push(Violation::BoundsOnNonHk(label.clone()));
            }
            if e.upper.is_some_and(|d| e.lower > d) {
                out.push(Violation::BoundsInverted(label));
            }
        }

        if out.is_empty() && self.kind == GameKind::HoffmanKruskal {
            let primal = formulations::build_primal(self);
            if lp::solve(&primal).status == LpStatus::Infeasible {
                out.push(Violation::LowerBoundsInfeasible);
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(v))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    DuplicateVertex(String),
    WrongSide(String),
    CapacityMismatch,
    ZeroCapacity(String),
    EndpointOutOfRange(usize),
    NonPositiveWeight(String),
    SelfLoop(String),
    ParallelEdge(String),
    SameSide(String),
    BoundsOnNonHk(String),
    BoundsInverted(String),
    LowerBoundsInfeasible,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            Violation::WrongSide(v) => write!(f, "vertex {v} has a side inconsistent with the game kind"),
            Violation::CapacityMismatch => f.write_str("capacities inconsistent with the game kind"),
            Violation::ZeroCapacity(v) => write!(f, "capacity of {v} must be at least 1"),
            Violation::EndpointOutOfRange(e) => write!(f, "edge #{e} has an unknown endpoint"),
            Violation::NonPositiveWeight(e) => write!(f, "non-positive weight on edge {e}"),
            Violation::SelfLoop(e) => write!(f, "self-loop {e}"),
            Violation::ParallelEdge(e) => write!(f, "parallel edge {e}"),
            Violation::SameSide(e) => write!(f, "edge {e} joins two vertices on the same side"),
            Violation::BoundsOnNonHk(e) => write!(f, "edge {e} has bounds but the game is not hoffman_kruskal"),
            Violation::BoundsInverted(e) => write!(f, "edge {e} has lower bound above upper bound"),
            Violation::LowerBoundsInfeasible => f.write_str("lower bounds infeasible"),
        }
    }
}

/// A set of agents, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubCoalition {
    pub members: BTreeSet<usize>,
}

impl SubCoalition {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        SubCoalition {
            members: members.into_iter().collect(),
        }
    }

    pub fn from_names(instance: &GameInstance, names: &[&str]) -> Result<Self> {
        names
            .iter()
            .map(|n| instance.agent(n))
            .collect::<Result<BTreeSet<_>>>()
            .map(|members| SubCoalition { members })
    }

    pub fn from_mask(mask: u64) -> Self {
        SubCoalition {
            members: (0..64).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn intersection(&self, other: &SubCoalition) -> SubCoalition {
        SubCoalition {
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    pub fn names(&self, instance: &GameInstance) -> Vec<String> {
        self.members
            .iter()
            .map(|&v| instance.vertices[v].name.clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    FromDual(DualSolution),
    /// Supplied from outside. Hoffman-Kruskal core checks need a dual that
    /// fixes the surplus baseline.
    External { surplus_dual: Option<DualSolution> },
}

/// Payoff per agent (indexed like the instance's vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Imputation {
    pub payoff: Vec<Rational>,
    pub provenance: Provenance,
}

impl Imputation {
    pub fn external(payoff: Vec<Rational>) -> Self {
        Imputation {
            payoff,
            provenance: Provenance::External { surplus_dual: None },
        }
    }

    pub fn with_surplus_dual(payoff: Vec<Rational>, dual: DualSolution) -> Self {
        Imputation {
            payoff,
            provenance: Provenance::External {
                surplus_dual: Some(dual),
            },
        }
    }

    pub fn total(&self) -> Rational {
        self.payoff.iter().sum()
    }

    pub fn coalition_total(&self, s: &SubCoalition) -> Rational {
        s.members.iter().map(|&v| &self.payoff[v]).sum()
    }

    /// The dual that determines the surplus baseline, if any.
    pub fn dual(&self) -> Option<&DualSolution> {
        match &self.provenance {
            Provenance::FromDual(d) => Some(d),
            Provenance::External { surplus_dual } => surplus_dual.as_ref(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn restrict_to_everyone_is_identity() {
        for inst in fixtures::all() {
            assert_eq!(inst.instance.restrict(&inst.instance.all_agents()), inst.instance);
        }
    }

    #[test]
    fn restrict_star_pair() {
        let g = fixtures::star_assignment();
        let s = SubCoalition::from_names(&g, &["u", "v2"]).unwrap();
        let r = g.restrict(&s);
        assert_eq!(r.num_vertices(), 2);
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.edges[0].weight, rat(3, 1));
    }

    #[test]
    fn zero_weight_flagged() {
        let mut g = fixtures::star_assignment();
        g.edges[0].weight = Rational::zero();
        let v = g.validate();
        assert_eq!(v, vec![Violation::NonPositiveWeight("(u,v1)".into())]);
        assert!(v[0].to_string().contains("non-positive weight"));
    }

    #[test]
    fn well_formed_fixtures_validate() {
        for f in fixtures::all() {
            assert!(f.instance.validate().is_empty(), "{}", f.name);
        }
    }

    #[test]
    fn hk_lower_bound_above_capacity() {
        let mut g = GameInstance::new(GameKind::HoffmanKruskal);
        let u = g.add_vertex("u", Side::U);
        let v = g.add_vertex("v", Side::V);
        g.set_capacity(u, 2);
        g.set_capacity(v, 2);
        let e = g.add_edge(u, v, rat(1, 1));
        g.set_edge_bounds(e, 3, None);
        assert_eq!(g.validate(), vec![Violation::LowerBoundsInfeasible]);
        assert_eq!(Violation::LowerBoundsInfeasible.to_string(), "lower bounds infeasible");
    }

    #[test]
    fn structural_violations() {
        let mut g = GameInstance::new(GameKind::Assignment);
        let a = g.add_vertex("a", Side::U);
        let b = g.add_vertex("b", Side::U);
        g.add_edge(a, b, rat(1, 1));
        g.add_edge(a, b, rat(1, 1));
        let e = g.add_edge(a, a, rat(-1, 1));
        g.set_edge_bounds(e, 1, None);
        let v = g.validate();
        assert!(v.contains(&Violation::SameSide("(a,b)".into())));
        assert!(v.contains(&Violation::ParallelEdge("(a,b)".into())));
        assert!(v.contains(&Violation::SelfLoop("(a,a)".into())));
        assert!(v.contains(&Violation::NonPositiveWeight("(a,a)".into())));
        assert!(v.contains(&Violation::BoundsOnNonHk("(a,a)".into())));
    }

    fn arb_mask(n: usize) -> impl Strategy<Value = u64> {
        0u64..(1 << n)
    }

    proptest! {
        #[test]
        fn restrict_is_idempotent_and_commutes_with_intersection(
            seed in 0u64..1000, m1 in arb_mask(7), m2 in arb_mask(7)
        ) {
            let g = crate::generate::random_instance(GameKind::ALL[(seed % 5) as usize], seed, 7);
            let n = g.num_vertices();
            let s1 = SubCoalition::from_mask(m1 & ((1 << n) - 1));
            let s2 = SubCoalition::from_mask(m2 & ((1 << n) - 1));
            let r1 = g.restrict(&s1);
            // Re-index s1 inside r1: all of r1's vertices.
            prop_assert_eq!(r1.restrict(&r1.all_agents()), r1.clone());
            let both = g.restrict(&s1.intersection(&s2));
            let names2: BTreeSet<String> = s2.names(&g).into_iter().collect();
            let inner = SubCoalition::new(
                (0..r1.num_vertices()).filter(|&v| names2.contains(&r1.vertices[v].name)),
            );
            prop_assert_eq!(r1.restrict(&inner), both);
            if g.validate().is_empty() {
                let violations = r1.validate();
                prop_assert!(violations.iter().all(|v| *v == Violation::LowerBoundsInfeasible));
            }
        }
    }
}
