//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! game b_matching
//! side_u u
//! side_v v1 v2
//! b u 2
//! b v1 2
//! b v2 1
//! edge u v1 weight 1
//! edge u v2 weight 3
//! imputation u=4 v1=0 v2=0
//! ```
//!
//! Directives: `game`, `side_u`, `side_v`, `vertices`, `b_const`, `b`,
//! `edge <a> <b> weight <r> [lower <k>] [upper <k>]` and `imputation
//! <name>=<r> ...`. Rationals are written `p`, `p/q` or as finite decimals.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Capacities, GameInstance, GameKind, Side};
use crate::rational::Rational;

/// A parsed instance file: the validated game plus an optional payoff
/// vector (agents missing from the `imputation` line are paid zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: GameInstance,
    pub imputation: Option<Vec<Rational>>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_rational(line: usize, token: &str) -> Result<Rational> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid rational `{token}`")))
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<u64> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid {what} `{token}`")))
}

pub fn parse_instance(text: &str) -> Result<GameInstance> {
    Ok(parse_file(text)?.instance)
}

pub fn parse_file(text: &str) -> Result<InstanceFile> {
    let mut game: Option<GameInstance> = None;
    let mut b_values: HashMap<usize, u64> = HashMap::new();
    let mut b_const: Option<u64> = None;
    let mut imputation: Option<(usize, Vec<(String, Rational)>)> = None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&directive, args)) = tokens.split_first() else {
            continue;
        };
        if directive == "game" {
            if game.is_some() {
                return Err(parse_error(line, "duplicate `game` directive"));
            }
            let [kind] = args else {
                return Err(parse_error(line, "`game` takes exactly one kind"));
            };
            let kind = GameKind::from_keyword(kind)
                .ok_or_else(|| parse_error(line, format!("unknown game kind `{kind}`")))?;
            game = Some(GameInstance::new(kind));
            continue;
        }
        let g = game
            .as_mut()
            .ok_or_else(|| parse_error(line, "`game` must come first"))?;
        match directive {
            "side_u" | "side_v" | "vertices" => {
                let side = match directive {
                    "side_u" => Side::U,
                    "side_v" => Side::V,
                    _ => Side::Single,
                };
                if (side == Side::Single) == g.kind.is_bipartite() {
                    return Err(parse_error(
                        line,
                        format!("`{directive}` is not allowed in a {} game", g.kind.keyword()),
                    ));
                }
                for name in args {
                    if g.vertex_index(name).is_some() {
                        return Err(parse_error(line, format!("duplicate vertex `{name}`")));
                    }
                    g.add_vertex(*name, side);
                }
            }
            "b_const" => {
                if g.kind != GameKind::UniformB {
                    return Err(parse_error(line, "`b_const` is only allowed in uniform_b games"));
                }
                let [value] = args else {
                    return Err(parse_error(line, "`b_const` takes one value"));
                };
                b_const = Some(parse_count(line, value, "capacity")?);
            }
            "b" => {
                if !matches!(g.kind, GameKind::BMatching | GameKind::HoffmanKruskal) {
                    return Err(parse_error(
                        line,
                        "`b` is only allowed in b_matching and hoffman_kruskal games",
                    ));
                }
                let [name, value] = args else {
                    return Err(parse_error(line, "`b` takes a vertex and a value"));
                };
                let v = g
                    .vertex_index(name)
                    .ok_or_else(|| parse_error(line, format!("unknown vertex `{name}`")))?;
                if b_values.insert(v, parse_count(line, value, "capacity")?).is_some() {
                    return Err(parse_error(line, format!("duplicate `b` for `{name}`")));
                }
            }
            "edge" => {
                let [a, b, keyword, weight, rest @ ..] = args else {
                    return Err(parse_error(line, "expected `edge <a> <b> weight <rational>`"));
                };
                if *keyword != "weight" {
                    return Err(parse_error(line, "expected `weight` after the endpoints"));
                }
                let find = |name: &str| {
                    g.vertex_index(name)
                        .ok_or_else(|| parse_error(line, format!("unknown vertex `{name}`")))
                };
                let (ia, ib) = (find(a)?, find(b)?);
                let weight = parse_rational(line, weight)?;
                let mut lower = 0;
                let mut upper = None;
                let mut seen = (false, false);
                for pair in rest.chunks(2) {
                    match pair {
                        ["lower", k] if !seen.0 => {
                            lower = parse_count(line, k, "lower bound")?;
                            seen.0 = true;
                        }
                        ["upper", k] if !seen.1 => {
                            upper = Some(parse_count(line, k, "upper bound")?);
                            seen.1 = true;
                        }
                        _ => return Err(parse_error(line, format!("unexpected `{}`", pair.join(" ")))),
                    }
                }
                let e = g.add_edge(ia, ib, weight);
                g.set_edge_bounds(e, lower, upper);
            }
            "imputation" => {
                if imputation.is_some() {
                    return Err(parse_error(line, "duplicate `imputation` directive"));
                }
                let mut entries = Vec::new();
                for token in args {
                    let (name, value) = token
                        .split_once('=')
                        .ok_or_else(|| parse_error(line, format!("expected name=value, got `{token}`")))?;
                    entries.push((name.to_string(), parse_rational(line, value)?));
                }
                imputation = Some((line, entries));
            }
            other => return Err(parse_error(line, format!("unknown directive `{other}`"))),
        }
    }

    let mut g = game.ok_or_else(|| parse_error(last_line.max(1), "missing `game` directive"))?;
    match g.kind {
        GameKind::UniformB => {
            let b = b_const.ok_or_else(|| parse_error(last_line.max(1), "missing `b_const`"))?;
            g.set_uniform_capacity(b);
        }
        GameKind::BMatching | GameKind::HoffmanKruskal => {
            let mut caps = Vec::with_capacity(g.num_vertices());
            for (v, vertex) in g.vertices.iter().enumerate() {
                let b = b_values.get(&v).copied().ok_or_else(|| {
                    parse_error(last_line.max(1), format!("missing `b` for `{}`", vertex.name))
                })?;
                caps.push(b);
            }
            g.capacities = Capacities::PerVertex(caps);
        }
        _ => {}
    }

    let imputation = match imputation {
        None => None,
        Some((line, entries)) => {
            let mut payoff = vec![Rational::zero(); g.num_vertices()];
            let mut assigned = vec![false; g.num_vertices()];
            for (name, value) in entries {
                let v = g
                    .vertex_index(&name)
                    .ok_or_else(|| parse_error(line, format!("unknown agent `{name}`")))?;
                if std::mem::replace(&mut assigned[v], true) {
                    return Err(parse_error(line, format!("agent `{name}` paid twice")));
                }
                payoff[v] = value;
            }
            Some(payoff)
        }
    };
    g.ensure_valid()?;
    Ok(InstanceFile {
        instance: g,
        imputation,
    })
}

pub fn render_instance(instance: &GameInstance) -> String {
    let mut out = String::new();
    writeln!(out, "game {}", instance.kind.keyword()).unwrap();
    let names = |side: Side| -> Vec<&str> {
        instance
            .vertices
            .iter()
            .filter(|v| v.side == side)
            .map(|v| v.name.as_str())
            .collect()
    };
    if instance.kind.is_bipartite() {
        writeln!(out, "side_u {}", names(Side::U).join(" ")).unwrap();
        writeln!(out, "side_v {}", names(Side::V).join(" ")).unwrap();
    } else {
        writeln!(out, "vertices {}", names(Side::Single).join(" ")).unwrap();
    }
    match &instance.capacities {
        Capacities::Uniform(b) => writeln!(out, "b_const {b}").unwrap(),
        Capacities::PerVertex(b) => {
            for (v, cap) in instance.vertices.iter().zip(b) {
                writeln!(out, "b {} {cap}", v.name).unwrap();
            }
        }
        Capacities::Unit => {}
    }
    for e in &instance.edges {
        write!(
            out,
            "edge {} {} weight {}",
            instance.vertices[e.a].name, instance.vertices[e.b].name, e.weight
        )
        .unwrap();
        if e.lower != 0 {
            write!(out, " lower {}", e.lower).unwrap();
        }
        if let Some(d) = e.upper {
            write!(out, " upper {d}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn render_imputation(instance: &GameInstance, payoff: &[Rational]) -> String {
    let entries: Vec<String> = instance
        .vertices
        .iter()
        .zip(payoff)
        .map(|(v, p)| format!("{}={p}", v.name))
        .collect();
    format!("imputation {}\n", entries.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn star_file() {
        let g = parse_instance(
            "game assignment\nside_u u\nside_v v1 v2\nedge u v1 weight 1\nedge u v2 weight 3\n",
        )
        .unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.edges[0].weight, rat(1, 1));
        assert_eq!(g.edges[1].weight, rat(3, 1));
    }

    #[test]
    fn fractional_weights() {
        let g = parse_instance("game general\nvertices a b c\nedge a b weight 3/2\nedge b c weight 1.5\n").unwrap();
        assert_eq!(g.edges[0].weight, rat(3, 2));
        assert_eq!(g.edges[1].weight, rat(3, 2));
    }

    #[test]
    fn empty_edge_list_is_valid() {
        let g = parse_instance("game assignment\nside_u a\nside_v b\n").unwrap();
        assert_eq!(g.num_edges(), 0);
        let w = crate::oracle::max_weight(&g, &crate::oracle::Caps::default()).unwrap().0;
        assert!(w.is_zero());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("side_u a\n", 1),
            ("game assignment\nside_u a\nside_v b\n\nedge a b weigth 1\n", 5),
            ("game assignment\nside_u a\nside_v b\nedge a c weight 1\n", 4),
            ("game assignment\n# ok\nside_u a\nside_v b\nedge a b weight x\n", 5),
            ("game hoffman_kruskal\nside_u a\nside_v b\nb a 1\nb b 1\nedge a b weight 1 lower\n", 6),
            ("game nope\n", 1),
            ("game b_matching\nside_u a\nside_v b\nb a 1\n", 4),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn validation_failures_are_reported() {
        let err = parse_instance("game assignment\nside_u a\nside_v b\nedge a b weight 0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
        assert!(err.to_string().contains("non-positive weight"));
    }

    #[test]
    fn imputation_line() {
        let f = parse_file(
            "game b_matching\nside_u u\nside_v v1 v2\nb u 2\nb v1 2\nb v2 1\nedge u v1 weight 1\nedge u v2 weight 3\nimputation u=4\n",
        )
        .unwrap();
        assert_eq!(
            f.imputation,
            Some(vec![rat(4, 1), rat(0, 1), rat(0, 1)])
        );
    }

    #[test]
    fn fixtures_round_trip() {
        for f in fixtures::all() {
            let text = render_instance(&f.instance);
            assert_eq!(parse_instance(&text).unwrap(), f.instance, "{}", f.name);
        }
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(seed in 0u64..10_000, kind in 0usize..5, denom in 1i64..5) {
            let spec = crate::generate::RandomSpec {
                weight_denominator: denom,
                ..Default::default()
            };
            let g = crate::generate::random_instance_with(GameKind::ALL[kind], seed, &spec);
            let text = render_instance(&g);
            prop_assert_eq!(parse_instance(&text).unwrap(), g.clone());
            let payoff: Vec<Rational> = (0..g.num_vertices()).map(|i| rat(i as i64, denom)).collect();
            let with_imp = format!("{text}{}", render_imputation(&g, &payoff));
            prop_assert_eq!(parse_file(&with_imp).unwrap().imputation, Some(payoff));
        }
    }
}
