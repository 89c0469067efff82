//! Small reference instances with known answers.

use crate::format::{parse_file, InstanceFile};
use crate::game::{GameInstance, GameKind, Side};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub instance: GameInstance,
    pub imputation: Option<Vec<Rational>>,
}

const FILES: [(&str, &str); 9] = [
    ("star_assignment", include_str!("../fixtures/star_assignment.game")),
    ("star_uniform_b2", include_str!("../fixtures/star_uniform_b2.game")),
    ("star_b221", include_str!("../fixtures/star_b221.game")),
    ("star_hk_423", include_str!("../fixtures/star_hk_423.game")),
    ("star_hk_upper", include_str!("../fixtures/star_hk_upper.game")),
    ("star_hk_lower", include_str!("../fixtures/star_hk_lower.game")),
    ("seven_vertex", include_str!("../fixtures/seven_vertex.game")),
    ("triangle_pendant", include_str!("../fixtures/triangle_pendant.game")),
    ("k3", include_str!("../fixtures/k3.game")),
];

fn load(name: &'static str, text: &'static str) -> Fixture {
    let InstanceFile {
        instance,
        imputation,
    } = parse_file(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    Fixture {
        name,
        text,
        instance,
        imputation,
    }
}

pub fn all() -> Vec<Fixture> {
    FILES.iter().map(|&(name, text)| load(name, text)).collect()
}

pub fn by_name(name: &str) -> Option<Fixture> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(name, text)| load(name, text))
}

fn get(name: &str) -> GameInstance {
    by_name(name).expect("known fixture").instance
}

/// `u` joined to `v1` (weight 1) and `v2` (weight 3), assignment game.
pub fn star_assignment() -> GameInstance {
    get("star_assignment")
}

/// The same star with uniform capacity `b`.
pub fn star_uniform(b: u64) -> GameInstance {
    let mut g = get("star_uniform_b2");
    g.set_uniform_capacity(b);
    g
}

/// Capacities (2, 2, 1).
pub fn star_b221() -> GameInstance {
    get("star_b221")
}

/// Capacities (4, 2, 3), edge bounds [1, 2] and [0, 3].
pub fn star_hk_423() -> GameInstance {
    get("star_hk_423")
}

/// Capacities 2, edge upper bounds 1.
pub fn star_hk_upper() -> GameInstance {
    get("star_hk_upper")
}

/// Capacities 2, edge lower bounds 1, no upper bounds.
pub fn star_hk_lower() -> GameInstance {
    get("star_hk_lower")
}

pub fn seven_vertex() -> GameInstance {
    get("seven_vertex")
}

pub fn triangle_pendant() -> GameInstance {
    get("triangle_pendant")
}

pub fn k3() -> GameInstance {
    get("k3")
}

/// Two vertices joined by one edge of weight `w`.
pub fn single_edge(kind: GameKind, w: Rational) -> GameInstance {
    let mut g = GameInstance::new(kind);
    let (sa, sb) = if kind.is_bipartite() {
        (Side::U, Side::V)
    } else {
        (Side::Single, Side::Single)
    };
    let a = g.add_vertex("a", sa);
    let b = g.add_vertex("b", sb);
    g.add_edge(a, b, w);
    g
}
