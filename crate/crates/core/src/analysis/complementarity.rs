use super::core::{has_dual_core, CoreOracle};
use super::dual::{dual_to_imputation, is_optimal_dual, DualFace, DualSolution};
use crate::error::{Error, Result};
use crate::game::{GameInstance, GameKind, Imputation, Side};
use crate::lp::FaceBound;
use crate::oracle::{classify, Caps, ClassLabel};
use crate::rational::Rational;

/// Answer to a question about core imputations, or a note that the core is
/// empty so the question has no subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreQuery<T> {
    Answer(T),
    EmptyCore,
}

impl<T> CoreQuery<T> {
    pub fn answer(self) -> Option<T> {
        match self {
            CoreQuery::Answer(t) => Some(t),
            CoreQuery::EmptyCore => None,
        }
    }

    pub fn is_empty_core(&self) -> bool {
        matches!(self, CoreQuery::EmptyCore)
    }
}

/// Whether some core imputation arising from an optimal dual pays `q`.
pub fn paid_sometimes(instance: &GameInstance, q: usize, caps: &Caps) -> Result<CoreQuery<bool>> {
    if q >= instance.num_vertices() {
        return Err(Error::UnknownAgent(format!("#{q}")));
    }
    if !has_dual_core(instance, caps)? {
        return Ok(CoreQuery::EmptyCore);
    }
    Ok(CoreQuery::Answer(DualFace::new(instance)?.max_vertex(q)?.is_positive()))
}

/// Whether team `e` is fairly paid (zero dual slack) under every optimal
/// dual.
pub fn always_paid_fairly(instance: &GameInstance, e: usize, caps: &Caps) -> Result<CoreQuery<bool>> {
    if e >= instance.num_edges() {
        return Err(Error::UnknownAgent(format!("edge #{e}")));
    }
    if !has_dual_core(instance, caps)? {
        return Ok(CoreQuery::EmptyCore);
    }
    let max = DualFace::new(instance)?.max_slack(instance, e)?;
    Ok(CoreQuery::Answer(max == FaceBound::Finite(Rational::zero())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerRow {
    pub agent: usize,
    pub label: ClassLabel,
    pub paid_sometimes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamRow {
    pub edge: usize,
    pub label: ClassLabel,
    pub always_paid_fairly: bool,
}

/// LP-side predicates next to oracle-side labels, with every theorem
/// violation listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementarityReport {
    pub empty_core: bool,
    pub degenerate: bool,
    pub players: Vec<PlayerRow>,
    pub teams: Vec<TeamRow>,
    /// Theorem violations; empty when every applicable statement holds.
    pub violations: Vec<String>,
    /// Cases where only one direction holds, as allowed for general graphs.
    pub observations: Vec<String>,
}

impl ComplementarityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_complementarity(instance: &GameInstance, caps: &Caps) -> Result<ComplementarityReport> {
    let classes = classify(instance, caps)?;
    let mut report = ComplementarityReport {
        empty_core: false,
        degenerate: classes.is_degenerate(),
        players: Vec::new(),
        teams: Vec::new(),
        violations: Vec::new(),
        observations: Vec::new(),
    };
    if !has_dual_core(instance, caps)? {
        report.empty_core = true;
        return Ok(report);
    }
    let face = DualFace::new(instance)?;
    for (q, &label) in classes.players.iter().enumerate() {
        report.players.push(PlayerRow {
            agent: q,
            label,
            paid_sometimes: face.max_vertex(q)?.is_positive(),
        });
    }
    for (e, &label) in classes.teams.iter().enumerate() {
        report.teams.push(TeamRow {
            edge: e,
            label,
            always_paid_fairly: face.max_slack(instance, e)? == FaceBound::Finite(Rational::zero()),
        });
    }

    let name = |q: usize| instance.vertices[q].name.as_str();
    let bipartite = instance.kind.is_bipartite();
    let mut violations = Vec::new();
    let mut observations = Vec::new();
    for p in &report.players {
        let essential = p.label == ClassLabel::Essential;
        if p.paid_sometimes && !essential {
            violations.push(format!("player {} is paid sometimes but {}", name(p.agent), p.label));
        }
        if essential && !p.paid_sometimes {
            if bipartite {
                violations.push(format!("player {} is essential but never paid", name(p.agent)));
            } else {
                observations.push(format!("player {} is essential but never paid", name(p.agent)));
            }
        }
        if report.degenerate && p.label == ClassLabel::Viable && p.paid_sometimes {
            violations.push(format!("viable player {} is paid in a degenerate game", name(p.agent)));
        }
    }
    for t in &report.teams {
        let label = instance.edge_label(t.edge);
        let matched_sometimes = t.label != ClassLabel::Subpar;
        if matched_sometimes && !t.always_paid_fairly {
            violations.push(format!("team {label} is {} but sometimes overpaid", t.label));
        }
        if !matched_sometimes && t.always_paid_fairly {
            if bipartite {
                violations.push(format!("team {label} is subpar but always paid fairly"));
            } else {
                observations.push(format!("team {label} is subpar but always paid fairly"));
            }
        }
        // A team whose upper bound is zero can be subpar with both
        // endpoints unpaid: its z dual absorbs the slack.
        let zero_capped = instance.edges[t.edge].upper == Some(0);
        if bipartite && t.label == ClassLabel::Subpar && !zero_capped {
            let edge = &instance.edges[t.edge];
            let ends = [edge.a, edge.b].map(|v| classes.players[v]);
            if !ends.contains(&ClassLabel::Essential) {
                violations.push(format!("subpar team {label} has no essential endpoint"));
            }
        }
        if report.degenerate && t.label == ClassLabel::Viable && !t.always_paid_fairly {
            violations.push(format!("viable team {label} is overpaid in a degenerate game"));
        }
    }
    if !bipartite && instance.num_edges() > 0 && !classes.players.contains(&ClassLabel::Essential) {
        violations.push("no essential player in a concurrent game".into());
    }
    report.violations = violations;
    report.observations = observations;
    Ok(report)
}

fn require_uniform(instance: &GameInstance, operation: &'static str) -> Result<()> {
    match instance.kind {
        GameKind::Assignment | GameKind::UniformB => Ok(()),
        kind => Err(Error::WrongKind { operation, kind }),
    }
}

/// `(min, max)` of every vertex dual over the optimal dual face.
pub fn coordinate_ranges(instance: &GameInstance) -> Result<Vec<(FaceBound, FaceBound)>> {
    let face = DualFace::new(instance)?;
    (0..instance.num_vertices())
        .map(|v| face.vertex_range(v))
        .collect()
}

/// The two extreme core imputations: one favouring the left side
/// `(u^h, v^l)` and one favouring the right side `(u^l, v^h)`.
pub fn extreme_imputations(instance: &GameInstance) -> Result<(Imputation, Imputation)> {
    require_uniform(instance, "extreme_imputations")?;
    let ranges = coordinate_ranges(instance)?;
    let finite = |b: &FaceBound| {
        b.finite()
            .cloned()
            .ok_or_else(|| Error::CheckFailed("vertex dual unbounded on the optimal face".into()))
    };
    let mut left_high = Vec::new();
    let mut right_high = Vec::new();
    for (v, (lo, hi)) in ranges.iter().enumerate() {
        let (lo, hi) = (finite(lo)?, finite(hi)?);
        if instance.vertices[v].side == Side::U {
            left_high.push(hi);
            right_high.push(lo);
        } else {
            left_high.push(lo);
            right_high.push(hi);
        }
    }
    let mut out = Vec::new();
    for values in [left_high, right_high] {
        let d = DualSolution::vertices_only(instance, values);
        if !is_optimal_dual(instance, &d) {
            return Err(Error::CheckFailed("assembled extreme is not an optimal dual".into()));
        }
        out.push(dual_to_imputation(instance, &d)?);
    }
    let right = out.pop().expect("two extremes");
    let left = out.pop().expect("two extremes");
    Ok((left, right))
}

/// For two core imputations, `(min on the left with max on the right,
/// max on the left with min on the right)`; both are again in the core.
pub fn meet_join(
    instance: &GameInstance,
    imp1: &Imputation,
    imp2: &Imputation,
    caps: &Caps,
) -> Result<(Imputation, Imputation)> {
    require_uniform(instance, "meet_join")?;
    let oracle = CoreOracle::new(instance, caps)?;
    for imp in [imp1, imp2] {
        if !oracle.check(imp)?.in_core {
            return Err(Error::NotInCore);
        }
    }
    let mut meet = Vec::new();
    let mut join = Vec::new();
    for (v, (a, b)) in imp1.payoff.iter().zip(&imp2.payoff).enumerate() {
        let (lo, hi) = (a.clone().min(b.clone()), a.clone().max(b.clone()));
        if instance.vertices[v].side == Side::U {
            meet.push(lo);
            join.push(hi);
        } else {
            meet.push(hi);
            join.push(lo);
        }
    }
    let (meet, join) = (Imputation::external(meet), Imputation::external(join));
    for imp in [&meet, &join] {
        if !oracle.check(imp)?.in_core {
            return Err(Error::CheckFailed("meet or join left the core".into()));
        }
    }
    Ok((meet, join))
}

/// A core imputation that pays exactly the essential players and overpays
/// exactly the subpar teams: the uniform average of one optimal dual per
/// essential player (maximizing its payment) and one per subpar team
/// (maximizing its slack).
pub fn simultaneous_imputation(instance: &GameInstance, caps: &Caps) -> Result<Imputation> {
    require_uniform(instance, "simultaneous_imputation")?;
    let classes = classify(instance, caps)?;
    let face = DualFace::new(instance)?;
    let mut witnesses = Vec::new();
    for (q, &label) in classes.players.iter().enumerate() {
        if label == ClassLabel::Essential {
            witnesses.extend(face.argmax_vertex(instance, q)?);
        }
    }
    for (e, &label) in classes.teams.iter().enumerate() {
        if label == ClassLabel::Subpar {
            witnesses.extend(face.argmax_slack(instance, e)?);
        }
    }
    if witnesses.is_empty() {
        witnesses.push(DualSolution::from_assignment(
            instance,
            &face.face().solution().assignment,
        ));
    }
    let k = Rational::from(witnesses.len() as u64);
    let n = instance.num_vertices();
    let vertex: Vec<Rational> = (0..n)
        .map(|v| witnesses.iter().map(|d| &d.vertex[v]).sum::<Rational>() / &k)
        .collect();
    let d = DualSolution::vertices_only(instance, vertex);
    let imp = dual_to_imputation(instance, &d)?;
    for (q, &label) in classes.players.iter().enumerate() {
        if imp.payoff[q].is_positive() != (label == ClassLabel::Essential) {
            return Err(Error::CheckFailed(format!(
                "player {} paid {} but is {label}",
                instance.vertices[q].name, imp.payoff[q]
            )));
        }
    }
    for (e, &label) in classes.teams.iter().enumerate() {
        if d.edge_slack(instance, e).is_positive() != (label == ClassLabel::Subpar) {
            return Err(Error::CheckFailed(format!(
                "team {} has slack {} but is {label}",
                instance.edge_label(e),
                d.edge_slack(instance, e)
            )));
        }
    }
    Ok(imp)
}
