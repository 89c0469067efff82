//! Brute-force ground truth over integral matchings.
//!
//! Everything here works by exhaustive depth-first enumeration and never
//! touches the LP engine, so it can be used to check LP-side results.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{Edge, GameInstance, GameKind, SubCoalition};
use crate::rational::Rational;

/// Size limits for exhaustive procedures. Exceeding a cap is a clean
/// refusal, never an approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub vertices: usize,
    pub edges: usize,
    /// Largest `min(rows, cols)` for the total-unimodularity check.
    pub tum: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vertices: 12,
            edges: 16,
            tum: 8,
        }
    }
}

impl Caps {
    pub fn check(&self, instance: &GameInstance) -> Result<()> {
        if instance.num_vertices() > self.vertices {
            return Err(Error::CapExceeded {
                what: "vertex",
                limit: self.vertices,
                actual: instance.num_vertices(),
            });
        }
        if instance.num_edges() > self.edges {
            return Err(Error::CapExceeded {
                what: "edge",
                limit: self.edges,
                actual: instance.num_edges(),
            });
        }
        Ok(())
    }
}

/// An integral matching: how many times each edge (by index) is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub multiplicity: Vec<u64>,
}

impl Matching {
    pub fn weight(&self, instance: &GameInstance) -> Rational {
        self.multiplicity
            .iter()
            .zip(&instance.edges)
            .filter(|(&k, _)| k > 0)
            .map(|(&k, e)| &e.weight * &Rational::from(k))
            .sum()
    }

    pub fn degree(&self, instance: &GameInstance, v: usize) -> u64 {
        instance
            .incident(v)
            .map(|e| self.multiplicity[e])
            .sum()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.multiplicity[e] > 0
    }

    /// Checks capacity and edge-bound feasibility for the instance's kind.
    pub fn is_feasible(&self, instance: &GameInstance) -> bool {
        if self.multiplicity.len() != instance.num_edges() {
            return false;
        }
        let bounds_ok = self
            .multiplicity
            .iter()
            .zip(&instance.edges)
            .all(|(&k, e)| k >= e.lower && e.upper.is_none_or(|d| k <= d));
        let unit_ok = !matches!(
            instance.kind,
            GameKind::Assignment | GameKind::GeneralMatching
        ) || self.multiplicity.iter().all(|&k| k <= 1);
        bounds_ok
            && unit_ok
            && (0..instance.num_vertices())
                .all(|v| self.degree(instance, v) <= instance.capacity(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    Essential,
    Viable,
    Subpar,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Essential => "essential",
            ClassLabel::Viable => "viable",
            ClassLabel::Subpar => "subpar",
        })
    }
}

impl ClassLabel {
    fn from_counts(hits: usize, total: usize) -> Self {
        if hits == total {
            ClassLabel::Essential
        } else if hits == 0 {
            ClassLabel::Subpar
        } else {
            ClassLabel::Viable
        }
    }
}

struct SearchEdge {
    index: usize,
    a: usize,
    b: usize,
    weight: Rational,
    lower: u64,
    upper: u64,
}

/// Depth-first search over per-edge multiplicities with an optimistic
/// weight bound.
struct Search {
    edges: Vec<SearchEdge>,
    /// suffix[i] = best possible weight from edges i.. ignoring capacities
    suffix: Vec<Rational>,
    remaining: Vec<u64>,
    current: Vec<u64>,
    best: Option<Rational>,
    optima: Vec<Vec<u64>>,
    collect_all: bool,
    total_edges: usize,
}

impl Search {
    fn new(instance: &GameInstance, keep: impl Fn(&Edge) -> bool, collect_all: bool) -> Self {
        let unit = matches!(
            instance.kind,
            GameKind::Assignment | GameKind::GeneralMatching
        );
        let edges: Vec<SearchEdge> = instance
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| keep(e))
            .map(|(i, e)| {
                let mut upper = instance.capacity(e.a).min(instance.capacity(e.b));
                if let Some(d) = e.upper {
                    upper = upper.min(d);
                }
                if unit {
                    upper = upper.min(1);
                }
                SearchEdge {
                    index: i,
                    a: e.a,
                    b: e.b,
                    weight: e.weight.clone(),
                    lower: e.lower,
                    upper,
                }
            })
            .collect();
        let mut suffix = vec![Rational::zero(); edges.len() + 1];
        for i in (0..edges.len()).rev() {
            let best_here = if edges[i].weight.is_positive() {
                &edges[i].weight * &Rational::from(edges[i].upper)
            } else {
                &edges[i].weight * &Rational::from(edges[i].lower)
            };
            suffix[i] = &suffix[i + 1] + &best_here;
        }
        Search {
            remaining: (0..instance.num_vertices())
                .map(|v| instance.capacity(v))
                .collect(),
            current: vec![0; edges.len()],
            edges,
            suffix,
            best: None,
            optima: Vec::new(),
            collect_all,
            total_edges: instance.num_edges(),
        }
    }

    fn run(mut self) -> Option<(Rational, Vec<Vec<u64>>)> {
        self.dfs(0, Rational::zero());
        let best = self.best?;
        let mut optima: Vec<Vec<u64>> = self
            .optima
            .into_iter()
            .map(|local| {
                let mut full = vec![0; self.total_edges];
                for (k, e) in local.iter().zip(&self.edges) {
                    full[e.index] = *k;
                }
                full
            })
            .collect();
        optima.sort();
        Some((best, optima))
    }

    fn dfs(&mut self, i: usize, weight: Rational) {
        if let Some(best) = &self.best {
            let bound = &weight + &self.suffix[i];
            if bound < *best || (!self.collect_all && bound == *best) {
                return;
            }
        }
        if i == self.edges.len() {
            match &self.best {
                Some(b) if weight < *b => {}
                Some(b) if weight == *b => self.optima.push(self.current.clone()),
                _ => {
                    self.best = Some(weight);
                    self.optima.clear();
                    self.optima.push(self.current.clone());
                }
            }
            return;
        }
        let (a, b, lower) = (self.edges[i].a, self.edges[i].b, self.edges[i].lower);
        let hi = self.edges[i]
            .upper
            .min(self.remaining[a])
            .min(self.remaining[b]);
        if lower > hi {
            return;
        }
        for k in (lower..=hi).rev() {
            self.remaining[a] -= k;
            self.remaining[b] -= k;
            self.current[i] = k;
            let w = &weight + &(&self.edges[i].weight * &Rational::from(k));
            self.dfs(i + 1, w);
            self.remaining[a] += k;
            self.remaining[b] += k;
        }
        self.current[i] = 0;
    }
}

/// Maximum weight over all integral matchings of the instance's kind.
pub fn max_weight(instance: &GameInstance, caps: &Caps) -> Result<(Rational, Matching)> {
    caps.check(instance)?;
    let (best, optima) = Search::new(instance, |_| true, false)
        .run()
        .ok_or(Error::LowerBoundsInfeasible)?;
    let multiplicity = optima.into_iter().next().expect("at least one optimum");
    Ok((best, Matching { multiplicity }))
}

/// Every maximum-weight integral matching, in lexicographic order of the
/// multiplicity vectors.
pub fn enumerate_optima(instance: &GameInstance, caps: &Caps) -> Result<Vec<Matching>> {
    caps.check(instance)?;
    let (_, optima) = Search::new(instance, |_| true, true)
        .run()
        .ok_or(Error::LowerBoundsInfeasible)?;
    Ok(optima
        .into_iter()
        .map(|multiplicity| Matching { multiplicity })
        .collect())
}

/// Worth of a sub-coalition: maximum weight in the induced sub-game.
pub fn worth(instance: &GameInstance, s: &SubCoalition, caps: &Caps) -> Result<Rational> {
    if s.members.is_empty() {
        return Ok(Rational::zero());
    }
    Ok(max_weight(&instance.restrict(s), caps)?.0)
}

/// Worth of every sub-coalition, indexed by membership bitmask.
pub fn characteristic_function(instance: &GameInstance, caps: &Caps) -> Result<Vec<Rational>> {
    caps.check(instance)?;
    let n = instance.num_vertices();
    let mut table = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let value = Search::new(instance, |e| inside(e.a) && inside(e.b), false)
            .run()
            .ok_or(Error::LowerBoundsInfeasible)?
            .0;
        table.push(value);
    }
    Ok(table)
}

/// Labels for every player and team, computed from one enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub worth: Rational,
    pub optima: Vec<Matching>,
    pub players: Vec<ClassLabel>,
    pub teams: Vec<ClassLabel>,
}

impl Classification {
    pub fn is_degenerate(&self) -> bool {
        self.optima.len() > 1
    }
}

pub fn classify(instance: &GameInstance, caps: &Caps) -> Result<Classification> {
    let optima = enumerate_optima(instance, caps)?;
    let worth = optima[0].weight(instance);
    let total = optima.len();
    let players = (0..instance.num_vertices())
        .map(|v| {
            let b = instance.capacity(v);
            let hits = optima.iter().filter(|m| m.degree(instance, v) == b).count();
            ClassLabel::from_counts(hits, total)
        })
        .collect();
    let teams = (0..instance.num_edges())
        .map(|e| {
            let hits = optima.iter().filter(|m| m.contains(e)).count();
            ClassLabel::from_counts(hits, total)
        })
        .collect();
    Ok(Classification {
        worth,
        optima,
        players,
        teams,
    })
}

/// Essential: saturated (matched `b_q` times) in every optimum; subpar: in
/// none; viable otherwise.
pub fn classify_player(instance: &GameInstance, q: usize, caps: &Caps) -> Result<ClassLabel> {
    if q >= instance.num_vertices() {
        return Err(Error::UnknownAgent(format!("#{q}")));
    }
    Ok(classify(instance, caps)?.players[q])
}

pub fn classify_team(instance: &GameInstance, e: usize, caps: &Caps) -> Result<ClassLabel> {
    if e >= instance.num_edges() {
        return Err(Error::UnknownAgent(format!("edge #{e}")));
    }
    Ok(classify(instance, caps)?.teams[e])
}

pub fn is_degenerate(instance: &GameInstance, caps: &Caps) -> Result<bool> {
    Ok(enumerate_optima(instance, caps)?.len() > 1)
}

/// Every feasible integral matching, without pruning. Exponential; meant
/// for cross-checking on tiny instances.
pub fn all_matchings(instance: &GameInstance, caps: &Caps) -> Result<Vec<Matching>> {
    caps.check(instance)?;
    let mut out = Vec::new();
    let mut current = vec![0u64; instance.num_edges()];
    fn rec(instance: &GameInstance, i: usize, current: &mut Vec<u64>, out: &mut Vec<Matching>) {
        if i == instance.num_edges() {
            let m = Matching {
                multiplicity: current.clone(),
            };
            if m.is_feasible(instance) {
                out.push(m);
            }
            return;
        }
        let e = &instance.edges[i];
        let hi = instance.capacity(e.a).min(instance.capacity(e.b));
        for k in 0..=hi {
            current[i] = k;
            rec(instance, i + 1, current, out);
        }
        current[i] = 0;
    }
    rec(instance, 0, &mut current, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn fixture_worths() {
        let caps = Caps::default();
        assert_eq!(max_weight(&fixtures::star_b221(), &caps).unwrap().0, r(4));
        assert_eq!(max_weight(&fixtures::star_hk_423(), &caps).unwrap().0, r(10));
        assert_eq!(max_weight(&fixtures::seven_vertex(), &caps).unwrap().0, r(4));
    }

    #[test]
    fn seven_vertex_has_three_optima_all_using_v2_v7() {
        let g = fixtures::seven_vertex();
        let optima = enumerate_optima(&g, &Caps::default()).unwrap();
        assert_eq!(optima.len(), 3);
        let e = g.edge_by_names("v2", "v7").unwrap();
        assert!(optima.iter().all(|m| m.contains(e)));
        assert!(is_degenerate(&g, &Caps::default()).unwrap());
    }

    #[test]
    fn triangle_pendant_has_unique_optimum() {
        let g = fixtures::triangle_pendant();
        let optima = enumerate_optima(&g, &Caps::default()).unwrap();
        assert_eq!(optima.len(), 1);
        let e14 = g.edge_by_names("v1", "v4").unwrap();
        let e23 = g.edge_by_names("v2", "v3").unwrap();
        let mut expected = vec![0; g.num_edges()];
        expected[e14] = 1;
        expected[e23] = 1;
        assert_eq!(optima[0].multiplicity, expected);
        assert!(!is_degenerate(&g, &Caps::default()).unwrap());
    }

    #[test]
    fn single_edge() {
        let g = fixtures::single_edge(GameKind::Assignment, r(5));
        assert_eq!(enumerate_optima(&g, &Caps::default()).unwrap().len(), 1);
        assert!(!is_degenerate(&g, &Caps::default()).unwrap());
    }

    #[test]
    fn coalition_worths() {
        let caps = Caps::default();
        let k3 = fixtures::k3();
        let ij = SubCoalition::from_names(&k3, &["i", "j"]).unwrap();
        assert_eq!(worth(&k3, &ij, &caps).unwrap(), r(1));
        assert_eq!(worth(&k3, &SubCoalition::default(), &caps).unwrap(), r(0));
        let g = fixtures::star_uniform(2);
        let pair = SubCoalition::from_names(&g, &["u", "v2"]).unwrap();
        assert_eq!(worth(&g, &pair, &caps).unwrap(), r(6));
    }

    #[test]
    fn class_labels() {
        let caps = Caps::default();
        let g = fixtures::seven_vertex();
        let v2 = g.agent("v2").unwrap();
        assert_eq!(classify_player(&g, v2, &caps).unwrap(), ClassLabel::Essential);
        let team = |a, b| g.edge_by_names(a, b).unwrap();
        assert_eq!(classify_team(&g, team("v2", "v7"), &caps).unwrap(), ClassLabel::Essential);
        assert_eq!(classify_team(&g, team("v4", "v7"), &caps).unwrap(), ClassLabel::Subpar);
        assert_eq!(classify_team(&g, team("v4", "v5"), &caps).unwrap(), ClassLabel::Viable);

        let f6 = fixtures::triangle_pendant();
        let v4 = f6.agent("v4").unwrap();
        assert_eq!(classify_player(&f6, v4, &caps).unwrap(), ClassLabel::Essential);
    }

    #[test]
    fn never_matched_vertex_is_subpar() {
        // a - b (weight 5), c - b (weight 1): c is never in an optimum
        let mut g = GameInstance::new(GameKind::Assignment);
        let a = g.add_vertex("a", crate::game::Side::U);
        let b = g.add_vertex("b", crate::game::Side::V);
        let c = g.add_vertex("c", crate::game::Side::U);
        g.add_edge(a, b, r(5));
        g.add_edge(c, b, r(1));
        assert_eq!(classify_player(&g, c, &Caps::default()).unwrap(), ClassLabel::Subpar);
    }

    #[test]
    fn caps_are_enforced() {
        let caps = Caps {
            vertices: 2,
            edges: 16,
            tum: 8,
        };
        let err = max_weight(&fixtures::k3(), &caps).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { what: "vertex", .. }));
    }

    #[test]
    fn b_matching_saturation_defines_essential() {
        // b = (2,2,1): u is matched twice in the optimum (both edges once).
        let g = fixtures::star_b221();
        let c = classify(&g, &Caps::default()).unwrap();
        let u = g.agent("u").unwrap();
        let v1 = g.agent("v1").unwrap();
        assert_eq!(c.players[u], ClassLabel::Essential);
        // v1 has b = 2 but is matched once: never saturated.
        assert_eq!(c.players[v1], ClassLabel::Subpar);
        let _ = rat(1, 1);
    }

    #[test]
    fn pruned_search_agrees_with_exhaustive_listing() {
        for seed in 0..60 {
            let kind = GameKind::ALL[seed as usize % 5];
            let g = crate::generate::random_instance(kind, seed, 6);
            let caps = Caps::default();
            let all = all_matchings(&g, &caps).unwrap();
            let best = all.iter().map(|m| m.weight(&g)).max().unwrap();
            let mut expected: Vec<Matching> =
                all.into_iter().filter(|m| m.weight(&g) == best).collect();
            expected.sort();
            assert_eq!(enumerate_optima(&g, &caps).unwrap(), expected, "seed {seed}");
            assert_eq!(max_weight(&g, &caps).unwrap().0, best);
        }
    }
}
