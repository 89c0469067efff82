//! Analysis reports: ordered sections of named facts with exact values.
//!
//! Every number is kept as a [`Rational`] and rendered as `p/q` (or `p`),
//! so a rendered value parses back to the same rational.

use std::fmt;

use crate::analysis::{
    check_concurrency, coordinate_ranges, core_nonempty, deterministic_dual, dual_to_imputation,
    extreme_imputations, in_d_of_i, is_core_imputation, simultaneous_imputation, surplus_account,
    verify_complementarity, CoreFailure, DualFace, DualSolution,
};
use crate::error::{Error, Result};
use crate::formulations::{
    build_dual, build_edmonds_primal, build_primal, check_half_integrality, incidence_matrix,
    is_totally_unimodular,
};
use crate::game::{GameInstance, GameKind, Imputation};
use crate::lp::{solve, FaceBound};
use crate::oracle::{classify, max_weight, Caps};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactValue {
    Number(Rational),
    Numbers(Vec<Rational>),
    Flag(bool),
    Text(String),
    Bound(FaceBound),
}

impl fmt::Display for FactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactValue::Number(r) => write!(f, "{r}"),
            FactValue::Numbers(v) => {
                let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            FactValue::Flag(b) => write!(f, "{b}"),
            FactValue::Text(s) => f.write_str(s),
            FactValue::Bound(b) => write!(f, "{b}"),
        }
    }
}

/// One reported value. `subject` names what it is about, e.g.
/// `[("agent", "v1")]` or `[("a", "u"), ("b", "v2")]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub subject: Vec<(String, String)>,
    pub value: FactValue,
}

impl Fact {
    pub fn new(name: impl Into<String>, value: FactValue) -> Self {
        Fact {
            name: name.into(),
            subject: Vec::new(),
            value,
        }
    }

    pub fn about(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.subject.push((key.into(), value.into()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub facts: Vec<Fact>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            facts: Vec::new(),
        }
    }

    pub fn push(&mut self, fact: Fact) {
        self.facts.push(fact);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
    /// Analysis-level failures; a report with failures maps to exit code 1.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn facts(&self) -> impl Iterator<Item = (&Section, &Fact)> {
        self.sections
            .iter()
            .flat_map(|s| s.facts.iter().map(move |f| (s, f)))
    }

    pub fn find(&self, name: &str) -> Option<&Fact> {
        self.facts().map(|(_, f)| f).find(|f| f.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for s in &self.sections {
            writeln!(f, "\n## {}", s.title)?;
            for fact in &s.facts {
                if fact.subject.is_empty() {
                    writeln!(f, "{}: {}", fact.name, fact.value)?;
                } else {
                    let subject: Vec<String> =
                        fact.subject.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(f, "{}[{}]: {}", fact.name, subject.join(" "), fact.value)?;
                }
            }
        }
        for failure in &self.failures {
            writeln!(f, "FAILED: {failure}")?;
        }
        Ok(())
    }
}

/// Knobs shared by the report builders.
#[derive(Debug, Clone)]
pub struct Options {
    pub caps: Caps,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            caps: Caps::default(),
            samples: 20,
            seed: 0,
        }
    }
}

fn num(r: &Rational) -> FactValue {
    FactValue::Number(r.clone())
}

fn team(instance: &GameInstance, e: usize, fact: Fact) -> Fact {
    let edge = &instance.edges[e];
    fact.about("a", instance.vertices[edge.a].name.clone())
        .about("b", instance.vertices[edge.b].name.clone())
}

fn agent(instance: &GameInstance, v: usize, fact: Fact) -> Fact {
    fact.about("agent", instance.vertices[v].name.clone())
}

fn payoff_facts(section: &mut Section, instance: &GameInstance, name: &str, payoff: &[Rational]) {
    for (v, p) in payoff.iter().enumerate() {
        section.push(agent(instance, v, Fact::new(name, num(p))));
    }
}

fn dual_facts(section: &mut Section, instance: &GameInstance, d: &DualSolution) {
    for (v, u) in d.vertex.iter().enumerate() {
        section.push(agent(instance, v, Fact::new("dual_vertex", num(u))));
    }
    for (e, edge) in instance.edges.iter().enumerate() {
        if edge.lower > 0 || instance.kind == GameKind::HoffmanKruskal {
            section.push(team(instance, e, Fact::new("dual_lower", num(&d.lower[e]))));
        }
        if let Some(z) = &d.upper[e] {
            section.push(team(instance, e, Fact::new("dual_upper", num(z))));
        }
    }
}

/// Primal and dual LP optima, the integral worth and, for general graphs,
/// the half-integral structure of the primal vertex.
pub fn solve_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("solve ({})", instance.kind.keyword()));
    let primal = solve(&build_primal(instance));
    let value = primal.expect_value()?.clone();
    let mut lp = Section::new("primal LP");
    lp.push(Fact::new("primal_optimum", num(&value)));
    for (e, x) in primal.assignment.iter().enumerate() {
        lp.push(team(instance, e, Fact::new("primal_value", num(x))));
    }
    report.sections.push(lp);

    let dual_lp = build_dual(instance);
    let dual = solve(&dual_lp);
    let dual_value = dual.expect_value()?.clone();
    let mut ds = Section::new("dual LP");
    ds.push(Fact::new("dual_optimum", num(&dual_value)));
    dual_facts(&mut ds, instance, &DualSolution::from_assignment(instance, &dual.assignment));
    report.sections.push(ds);
    if dual_value != value {
        report
            .failures
            .push(format!("primal optimum {value} differs from dual optimum {dual_value}"));
    }

    let mut integral = Section::new("integral matching");
    let (worth, best) = max_weight(instance, &opts.caps)?;
    integral.push(Fact::new("worth", num(&worth)));
    for (e, &k) in best.multiplicity.iter().enumerate() {
        if k > 0 {
            integral.push(team(instance, e, Fact::new("multiplicity", FactValue::Number(k.into()))));
        }
    }
    report.sections.push(integral);
    if instance.kind.is_bipartite() && worth != value {
        report
            .failures
            .push(format!("LP optimum {value} differs from integral worth {worth}"));
    }

    if instance.kind == GameKind::GeneralMatching {
        let mut half = Section::new("half-integrality");
        let h = check_half_integrality(&primal, instance)?;
        half.push(Fact::new("half_integral", FactValue::Flag(h.holds())));
        for cycle in &h.odd_cycles {
            let names: Vec<&str> = cycle.iter().map(|&v| instance.vertices[v].name.as_str()).collect();
            half.push(Fact::new("odd_cycle", FactValue::Text(names.join(" "))));
        }
        report.failures.extend(h.violations.iter().cloned());
        report.sections.push(half);
    }
    Ok(report)
}

/// Oracle labels next to their LP-side counterparts.
pub fn classify_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("classify ({})", instance.kind.keyword()));
    let classes = classify(instance, &opts.caps)?;
    let mut optima = Section::new("maximum-weight matchings");
    optima.push(Fact::new("worth", num(&classes.worth)));
    optima.push(Fact::new("optimum_count", FactValue::Number((classes.optima.len() as u64).into())));
    optima.push(Fact::new("degenerate", FactValue::Flag(classes.is_degenerate())));
    for m in &classes.optima {
        let parts: Vec<String> = m
            .multiplicity
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(e, &k)| {
                if k == 1 {
                    instance.edge_label(e)
                } else {
                    format!("{}x{k}", instance.edge_label(e))
                }
            })
            .collect();
        optima.push(Fact::new("optimum", FactValue::Text(parts.join(" "))));
    }
    report.sections.push(optima);

    let comp = verify_complementarity(instance, &opts.caps)?;
    let mut players = Section::new("players");
    for (v, label) in classes.players.iter().enumerate() {
        players.push(agent(instance, v, Fact::new("player_class", FactValue::Text(label.to_string()))));
    }
    for row in &comp.players {
        players.push(agent(instance, row.agent, Fact::new("paid_sometimes", FactValue::Flag(row.paid_sometimes))));
    }
    report.sections.push(players);

    let mut teams = Section::new("teams");
    for (e, label) in classes.teams.iter().enumerate() {
        teams.push(team(instance, e, Fact::new("team_class", FactValue::Text(label.to_string()))));
        let edge = &instance.edges[e];
        let pair = crate::game::SubCoalition::new([edge.a, edge.b]);
        let w = crate::oracle::worth(instance, &pair, &opts.caps)?;
        teams.push(team(instance, e, Fact::new("pair_worth", num(&w))));
    }
    for row in &comp.teams {
        teams.push(team(instance, row.edge, Fact::new("always_paid_fairly", FactValue::Flag(row.always_paid_fairly))));
    }
    report.sections.push(teams);

    let mut notes = Section::new("complementarity");
    notes.push(Fact::new("core_empty", FactValue::Flag(comp.empty_core)));
    notes.push(Fact::new("theorems_hold", FactValue::Flag(comp.holds())));
    for o in &comp.observations {
        notes.push(Fact::new("observation", FactValue::Text(o.clone())));
    }
    report.sections.push(notes);
    report.failures.extend(comp.violations.iter().cloned());
    Ok(report)
}

/// Core membership of `imp` by brute force, plus membership in D(I).
pub fn core_check_report(instance: &GameInstance, imp: &Imputation, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("core-check ({})", instance.kind.keyword()));
    let verdict = is_core_imputation(instance, imp, &opts.caps)?;
    let mut s = Section::new("verdict");
    payoff_facts(&mut s, instance, "payoff", &imp.payoff);
    s.push(Fact::new("grand_value", num(&verdict.grand_value)));
    s.push(Fact::new("in_core", FactValue::Flag(verdict.in_core)));
    let failure = match &verdict.failure {
        None => None,
        Some(CoreFailure::WrongLength { expected, found }) => {
            Some(format!("expected {expected} payments, found {found}"))
        }
        Some(CoreFailure::NegativePayoff { agent }) => {
            Some(format!("negative payment to {}", instance.vertices[*agent].name))
        }
        Some(CoreFailure::Overallocated { available, allocated }) => {
            Some(format!("allocates {allocated} but only {available} is available"))
        }
        Some(CoreFailure::Blocked { coalition, value, allocated, .. }) => Some(format!(
            "{{{}}} can secure {value} but is allocated {allocated}",
            coalition.names(instance).join(", ")
        )),
    };
    if let Some(text) = failure {
        s.push(Fact::new("reason", FactValue::Text(text)));
    }
    if verdict.in_core {
        s.push(Fact::new("in_d_of_i", FactValue::Flag(in_d_of_i(instance, imp)?)));
    }
    report.sections.push(s);
    if let Some(d) = &verdict.baseline {
        let mut b = Section::new("surplus baseline dual");
        dual_facts(&mut b, instance, d);
        report.sections.push(b);
    }
    Ok(report)
}

/// Coordinate ranges over the optimal dual face, the two extreme core
/// imputations and one imputation meeting every strict complementarity.
pub fn extremes_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("extremes ({})", instance.kind.keyword()));
    let (left, right) = extreme_imputations(instance)?;
    let mut ranges = Section::new("optimal dual ranges");
    for (v, (lo, hi)) in coordinate_ranges(instance)?.into_iter().enumerate() {
        ranges.push(agent(instance, v, Fact::new("dual_min", FactValue::Bound(lo))));
        ranges.push(agent(instance, v, Fact::new("dual_max", FactValue::Bound(hi))));
    }
    report.sections.push(ranges);
    let mut ex = Section::new("extreme imputations");
    ex.push(Fact::new("left_favouring", FactValue::Numbers(left.payoff)));
    ex.push(Fact::new("right_favouring", FactValue::Numbers(right.payoff)));
    let simultaneous = simultaneous_imputation(instance, &opts.caps)?;
    ex.push(Fact::new("simultaneous", FactValue::Numbers(simultaneous.payoff)));
    report.sections.push(ex);
    Ok(report)
}

/// Largest vertex count for which the odd-set LP is built.
pub const EDMONDS_VERTEX_CAP: usize = 10;

/// Fractional and integral optima and the resulting core status.
pub fn concurrency_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("concurrency ({})", instance.kind.keyword()));
    let c = check_concurrency(instance, &opts.caps)?;
    let mut s = Section::new("optima");
    s.push(Fact::new("fractional_optimum", num(&c.fractional)));
    s.push(Fact::new("integral_optimum", num(&c.integral)));
    s.push(Fact::new("concurrent", FactValue::Flag(c.concurrent)));
    let (nonempty, witness) = core_nonempty(instance, &opts.caps)?;
    s.push(Fact::new("core_empty", FactValue::Flag(!nonempty)));
    if let Some(w) = witness {
        s.push(Fact::new("core_imputation", FactValue::Numbers(w.payoff)));
    }
    if instance.kind == GameKind::GeneralMatching && nonempty != c.concurrent {
        report
            .failures
            .push("core non-emptiness disagrees with concurrency".into());
    }
    if instance.kind == GameKind::GeneralMatching && instance.num_vertices() <= EDMONDS_VERTEX_CAP {
        let edmonds = solve(&build_edmonds_primal(instance, EDMONDS_VERTEX_CAP)?);
        let v = edmonds.expect_value()?.clone();
        s.push(Fact::new("odd_set_optimum", num(&v)));
        if v != c.integral {
            report
                .failures
                .push(format!("odd-set LP optimum {v} differs from integral worth {}", c.integral));
        }
    }
    report.sections.push(s);
    Ok(report)
}

/// Total unimodularity of the vertex-edge incidence matrix.
pub fn tum_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    let mut report = Report::new(format!("tum-check ({})", instance.kind.keyword()));
    let m = incidence_matrix(instance);
    let mut s = Section::new("incidence matrix");
    s.push(Fact::new("rows", FactValue::Number((m.rows() as u64).into())));
    s.push(Fact::new("cols", FactValue::Number((m.cols() as u64).into())));
    s.push(Fact::new("rank", FactValue::Number((m.rank() as u64).into())));
    s.push(Fact::new("totally_unimodular", FactValue::Flag(is_totally_unimodular(&m, opts.caps.tum)?)));
    report.sections.push(s);
    Ok(report)
}

/// Surplus accounting for the pivot-rule dual and sampled optimal duals.
pub fn surplus_report(instance: &GameInstance, opts: &Options) -> Result<Report> {
    if instance.kind != GameKind::HoffmanKruskal {
        return Err(Error::WrongKind {
            operation: "surplus",
            kind: instance.kind,
        });
    }
    let mut report = Report::new("surplus (hoffman_kruskal)");
    let mut duals = vec![deterministic_dual(instance)?];
    for d in DualFace::new(instance)?.sample(instance, opts.samples, opts.seed)? {
        if !duals.contains(&d) {
            duals.push(d);
        }
    }
    for (i, d) in duals.iter().enumerate() {
        let mut s = Section::new(format!("optimal dual {}", i + 1));
        dual_facts(&mut s, instance, d);
        let account = surplus_account(instance, d)?;
        s.push(Fact::new("worth", num(&account.worth)));
        s.push(Fact::new("adjustment", num(&account.adjustment)));
        s.push(Fact::new("surplus", num(&account.surplus)));
        let imp = dual_to_imputation(instance, d)?;
        payoff_facts(&mut s, instance, "payoff", &imp.payoff);
        let verdict = is_core_imputation(instance, &imp, &opts.caps)?;
        s.push(Fact::new("in_core", FactValue::Flag(verdict.in_core)));
        if !verdict.in_core {
            report
                .failures
                .push(format!("imputation from optimal dual {} is not in the core", i + 1));
        }
        report.sections.push(s);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn rendered_numbers_parse_back() {
        let g = fixtures::triangle_pendant();
        let r = solve_report(&g, &opts()).unwrap();
        for (_, f) in r.facts() {
            if let FactValue::Number(x) = &f.value {
                assert_eq!(&f.value.to_string().parse::<Rational>().unwrap(), x);
            }
        }
        assert!(r.succeeded());
    }

    #[test]
    fn k3_concurrency() {
        let r = concurrency_report(&fixtures::k3(), &opts()).unwrap();
        assert_eq!(r.find("fractional_optimum").unwrap().value, FactValue::Number(rat(3, 2)));
        assert_eq!(r.find("integral_optimum").unwrap().value, FactValue::Number(rat(1, 1)));
        assert_eq!(r.find("core_empty").unwrap().value, FactValue::Flag(true));
        assert_eq!(r.find("odd_set_optimum").unwrap().value, FactValue::Number(rat(1, 1)));
        assert!(r.to_string().contains("core_empty: true"));
    }

    #[test]
    fn b221_core_check() {
        let g = fixtures::star_b221();
        let imp = Imputation::external(vec![rat(4, 1), rat(0, 1), rat(0, 1)]);
        let r = core_check_report(&g, &imp, &opts()).unwrap();
        assert_eq!(r.find("in_core").unwrap().value, FactValue::Flag(true));
        assert_eq!(r.find("in_d_of_i").unwrap().value, FactValue::Flag(false));
    }

    #[test]
    fn classify_and_tum() {
        let g = fixtures::seven_vertex();
        let r = classify_report(&g, &opts()).unwrap();
        assert_eq!(r.find("optimum_count").unwrap().value, FactValue::Number(rat(3, 1)));
        assert!(r.succeeded(), "{:?}", r.failures);
        let t = tum_report(&fixtures::k3(), &opts()).unwrap();
        assert_eq!(t.find("totally_unimodular").unwrap().value, FactValue::Flag(false));
    }

    #[test]
    fn surplus_needs_hk() {
        assert!(matches!(
            surplus_report(&fixtures::k3(), &opts()),
            Err(Error::WrongKind { .. })
        ));
        let r = surplus_report(&fixtures::star_hk_423(), &opts()).unwrap();
        assert!(r.succeeded());
    }
}
