//! Seeded random instances for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Capacities, GameInstance, GameKind, Side, Violation};
use crate::rational::Rational;

/// Shape of generated instances.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    /// Largest side for bipartite kinds; largest vertex set for general.
    pub max_side: usize,
    pub max_general: usize,
    pub max_edges: usize,
    /// Weights are `k / weight_denominator` with `k` in `1..=max_weight`.
    pub max_weight: i64,
    pub weight_denominator: i64,
    /// Largest vertex capacity for b-matching kinds.
    pub max_capacity: u64,
    pub edge_probability: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_side: 5,
            max_general: 8,
            max_edges: 16,
            max_weight: 9,
            weight_denominator: 1,
            max_capacity: 3,
            edge_probability: 0.5,
        }
    }
}

/// A valid random instance of `kind` with at most `max_vertices` vertices
/// (split evenly between sides for bipartite kinds).
pub fn random_instance(kind: GameKind, seed: u64, max_vertices: usize) -> GameInstance {
    let spec = RandomSpec {
        max_side: (max_vertices / 2).max(1),
        max_general: max_vertices.max(2),
        ..RandomSpec::default()
    };
    random_instance_with(kind, seed, &spec)
}

pub fn random_instance_with(kind: GameKind, seed: u64, spec: &RandomSpec) -> GameInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (kind as u64) << 56);
    let mut g = GameInstance::new(kind);
    let mut pairs = Vec::new();
    if kind.is_bipartite() {
        let nu = rng.gen_range(1..=spec.max_side);
        let nv = rng.gen_range(1..=spec.max_side);
        for i in 0..nu {
            g.add_vertex(format!("u{}", i + 1), Side::U);
        }
        for j in 0..nv {
            g.add_vertex(format!("v{}", j + 1), Side::V);
        }
        for i in 0..nu {
            for j in 0..nv {
                pairs.push((i, nu + j));
            }
        }
    } else {
        let n = rng.gen_range(2..=spec.max_general);
        for i in 0..n {
            g.add_vertex(format!("v{}", i + 1), Side::Single);
        }
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
    }
    pairs.shuffle(&mut rng);
    let mut chosen: Vec<(usize, usize)> = pairs
        .into_iter()
        .filter(|_| rng.gen_bool(spec.edge_probability))
        .take(spec.max_edges)
        .collect();
    chosen.sort();
    for (a, b) in chosen {
        let k = rng.gen_range(1..=spec.max_weight);
        g.add_edge(a, b, Rational::new(k, spec.weight_denominator));
    }

    match kind {
        GameKind::UniformB => g.set_uniform_capacity(rng.gen_range(1..=spec.max_capacity)),
        GameKind::BMatching | GameKind::HoffmanKruskal => {
            let caps = (0..g.num_vertices())
                .map(|_| rng.gen_range(1..=spec.max_capacity))
                .collect();
            g.capacities = Capacities::PerVertex(caps);
        }
        _ => {}
    }
    if kind == GameKind::HoffmanKruskal {
        for e in 0..g.num_edges() {
            // Upper bounds, when present, are at least 1 so that an edge is
            // never forced out of every matching by its bound alone.
            let upper = rng.gen_bool(0.5).then(|| rng.gen_range(1..=spec.max_capacity));
            let lower = if rng.gen_bool(0.25) {
                rng.gen_range(1..=upper.unwrap_or(2).min(2))
            } else {
                0
            };
            g.set_edge_bounds(e, lower, upper);
        }
        if g.validate().contains(&Violation::LowerBoundsInfeasible) {
            for e in &mut g.edges {
                e.lower = 0;
            }
        }
    }
    debug_assert!(g.validate().is_empty(), "{:?}", g.validate());
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_instances_are_valid_and_reproducible() {
        for seed in 0..40 {
            for kind in GameKind::ALL {
                let g = random_instance(kind, seed, 10);
                assert!(g.validate().is_empty());
                assert!(g.num_edges() <= 16);
                assert_eq!(g, random_instance(kind, seed, 10));
            }
        }
    }

    #[test]
    fn fractional_weights() {
        let spec = RandomSpec {
            weight_denominator: 3,
            ..RandomSpec::default()
        };
        let g = random_instance_with(GameKind::Assignment, 7, &spec);
        assert!(g.edges.iter().all(|e| e.weight.denom() == &3.into() || e.weight.is_integer()));
    }
}
