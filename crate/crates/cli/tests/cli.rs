use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::Value;

use coreduality::format::render_instance;
use coreduality::generate::random_instance;
use coreduality::oracle::{classify, max_weight, worth};
use coreduality::{Caps, GameKind, Rational, SubCoalition};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.game"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coreduality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn core_check_reports_core_but_not_d_of_i() {
    let o = run(&["core-check", path_str(&fixture("star_b221"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\nIN CORE\n"), "{out}");
    assert!(out.contains("NOT IN D(I)"), "{out}");
}

#[test]
fn core_check_with_explicit_payments() {
    let o = run(&[
        "core-check",
        path_str(&fixture("star_b221")),
        "--imputation",
        "u=1",
        "v2=3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT IN CORE"));
}

#[test]
fn concurrency_on_triangle() {
    let o = run(&["concurrency", path_str(&fixture("k3"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("fractional_optimum: 3/2"));
    assert!(out.contains("integral_optimum: 1\n"));
    assert!(out.contains("CORE EMPTY"));
}

#[test]
fn solve_parses_decimal_weights_exactly() {
    let o = run(&["solve", path_str(&fixture("triangle_pendant"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("primal_optimum: 2\n"));
}

#[test]
fn reproduce_exits_one_on_the_split_payment() {
    let o = run(&["reproduce-paper"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("FAILED")).collect();
    assert_eq!(failed.len(), 1, "{out}");
    assert!(failed[0].contains("(3,3,0) in core"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["solve", "/no/such/file.game"]).status.code(), Some(2));
    assert_eq!(
        run(&["surplus", path_str(&fixture("k3"))]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["extremes", path_str(&fixture("star_hk_423"))]).status.code(),
        Some(2)
    );
    let dir = std::env::temp_dir().join(format!("coreduality-bad-{}", std::process::id()));
    std::fs::write(&dir, "game assignment\nside_u a\nside_v b\nedge a b weight x\n").unwrap();
    let o = run(&["solve", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn caps_are_enforced() {
    let o = run(&["classify", path_str(&fixture("seven_vertex")), "--cap-vertices", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap"));
}

fn subject<'a>(record: &'a Value, key: &str) -> &'a str {
    record["subject"][key].as_str().unwrap()
}

fn rational(record: &Value) -> Rational {
    record["value"].as_str().unwrap().parse().unwrap()
}

/// Re-derives a reported fact from the brute-force oracle.
fn verify(instance: &coreduality::GameInstance, record: &Value) -> bool {
    let caps = Caps::default();
    match record["fact"].as_str().unwrap() {
        "worth" => rational(record) == max_weight(instance, &caps).unwrap().0,
        "player_class" => {
            let v = instance.agent(subject(record, "agent")).unwrap();
            classify(instance, &caps).unwrap().players[v].to_string() == record["value"]
        }
        "team_class" => {
            let e = instance
                .edge_by_names(subject(record, "a"), subject(record, "b"))
                .unwrap();
            classify(instance, &caps).unwrap().teams[e].to_string() == record["value"]
        }
        "pair_worth" => {
            let s = SubCoalition::from_names(instance, &[subject(record, "a"), subject(record, "b")])
                .unwrap();
            rational(record) == worth(instance, &s, &caps).unwrap()
        }
        other => panic!("unverifiable fact {other}"),
    }
}

#[test]
fn records_are_reverified_by_the_oracle() {
    let seed: u64 = rand::random();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let kinds = [GameKind::BMatching, GameKind::HoffmanKruskal, GameKind::GeneralMatching];
    let kind = *kinds.choose(&mut rng).unwrap();
    let instance = random_instance(kind, seed, 8);
    let path = std::env::temp_dir().join(format!("coreduality-rec-{}-{seed}.game", std::process::id()));
    std::fs::write(&path, render_instance(&instance)).unwrap();
    let o = run(&["classify", path.to_str().unwrap(), "--format", "records"]);
    std::fs::remove_file(&path).ok();
    assert!(o.status.code() == Some(0) || o.status.code() == Some(1), "seed {seed}");
    let records: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let checkable: Vec<&Value> = records
        .iter()
        .filter(|r| {
            matches!(
                r["fact"].as_str(),
                Some("worth" | "player_class" | "team_class" | "pair_worth")
            )
        })
        .collect();
    assert!(!checkable.is_empty(), "seed {seed}");
    for record in checkable.choose_multiple(&mut rng, 3) {
        assert!(verify(&instance, record), "seed {seed}: {record}");
    }
}
