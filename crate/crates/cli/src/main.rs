use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use coreduality::format::{parse_file, InstanceFile};
use coreduality::report::{
    classify_report, concurrency_report, core_check_report, extremes_report, solve_report,
    surplus_report, tum_report, FactValue, Options, Report,
};
use coreduality::reproduce::reproduce_all;
use coreduality::{Caps, Error, Imputation, Rational};

#[derive(Parser)]
#[command(name = "coreduality", version, about = "Core imputations of matching games via exact LP duality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Largest vertex count for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 12)]
    cap_vertices: usize,
    /// Largest edge count for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 16)]
    cap_edges: usize,
    /// Largest min(rows, cols) for the total-unimodularity check.
    #[arg(long, global = true, default_value_t = 8)]
    cap_tum: usize,
    /// Random objectives used when sampling optimal duals.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    /// One JSON object per line, one line per reported fact.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Primal and dual LP optima and the integral worth.
    Solve { instance: PathBuf },
    /// Essential, viable and subpar players and teams.
    Classify { instance: PathBuf },
    /// Core membership of the file's imputation (or of --imputation).
    CoreCheck {
        instance: PathBuf,
        /// Payments as `name=value` pairs, overriding the file.
        #[arg(long, num_args = 1..)]
        imputation: Option<Vec<String>>,
    },
    /// Extreme and simultaneous core imputations (uniform kinds).
    Extremes { instance: PathBuf },
    /// Fractional versus integral optimum and core emptiness.
    Concurrency { instance: PathBuf },
    /// Total unimodularity of the incidence matrix.
    TumCheck { instance: PathBuf },
    /// Surplus accounting over optimal duals (Hoffman-Kruskal).
    Surplus { instance: PathBuf },
    /// Regression checks on the built-in reference instances.
    #[command(name = "reproduce-paper", alias = "reproduce")]
    Reproduce,
}

/// Errors caused by the input rather than by the analysis.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::InvalidInstance(_)
            | Error::WrongKind { .. }
            | Error::CapExceeded { .. }
            | Error::UnknownAgent(_)
            | Error::LowerBoundsInfeasible
    )
}

enum Failure {
    Input(String),
    Analysis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_input_error(&e) {
            Failure::Input(e.to_string())
        } else {
            Failure::Analysis(e.to_string())
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_file(&text).map_err(|e| match e {
        Error::Parse { .. } | Error::InvalidInstance(_) => Failure::Input(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn payoff_from_pairs(file: &InstanceFile, pairs: &[String]) -> Result<Vec<Rational>, Failure> {
    let g = &file.instance;
    let mut payoff = vec![Rational::zero(); g.num_vertices()];
    for pair in pairs.iter().flat_map(|p| p.split([',', ' ']).filter(|s| !s.is_empty())) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("expected name=value, found `{pair}`")))?;
        let v = g.agent(name)?;
        payoff[v] = value
            .parse()
            .map_err(|_| Failure::Input(format!("invalid rational `{value}`")))?;
    }
    Ok(payoff)
}

fn value_json(v: &FactValue) -> Value {
    match v {
        FactValue::Number(r) => json!(r.to_string()),
        FactValue::Numbers(rs) => json!(rs.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
        FactValue::Flag(b) => json!(b),
        FactValue::Text(s) => json!(s),
        FactValue::Bound(b) => json!(b.to_string()),
    }
}

fn records(report: &Report) -> String {
    let mut out = String::new();
    for (section, fact) in report.facts() {
        let subject: Map<String, Value> = fact
            .subject
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let record = json!({
            "report": report.title,
            "section": section.title,
            "fact": fact.name,
            "subject": subject,
            "value": value_json(&fact.value),
        });
        out.push_str(&record.to_string());
        out.push('\n');
    }
    for failure in &report.failures {
        out.push_str(&json!({ "report": report.title, "failure": failure }).to_string());
        out.push('\n');
    }
    out
}

fn flag(report: &Report, name: &str) -> Option<bool> {
    match report.find(name).map(|f| &f.value) {
        Some(FactValue::Flag(b)) => Some(*b),
        _ => None,
    }
}

/// Verdict lines printed after the text report.
fn headline(command: &Command, report: &Report) -> Vec<&'static str> {
    let mut lines = Vec::new();
    match command {
        Command::CoreCheck { .. } => {
            lines.push(if flag(report, "in_core") == Some(true) { "IN CORE" } else { "NOT IN CORE" });
            match flag(report, "in_d_of_i") {
                Some(true) => lines.push("IN D(I)"),
                Some(false) => lines.push("NOT IN D(I)"),
                None => {}
            }
        }
        Command::Concurrency { .. } => {
            lines.push(if flag(report, "core_empty") == Some(true) { "CORE EMPTY" } else { "CORE NONEMPTY" });
        }
        Command::TumCheck { .. } => {
            lines.push(if flag(report, "totally_unimodular") == Some(true) { "TUM" } else { "NOT TUM" });
        }
        _ => {}
    }
    lines
}

fn reproduce_report(caps: &Caps) -> Result<Report, Failure> {
    let r = reproduce_all(caps)?;
    let mut report = Report::new("reproduce");
    let mut current: Option<coreduality::report::Section> = None;
    for c in &r.checks {
        if current.as_ref().is_none_or(|s| s.title != c.group) {
            report.sections.extend(current.take());
            current = Some(coreduality::report::Section::new(c.group));
        }
        let fact = coreduality::report::Fact::new(c.name.clone(), FactValue::Flag(c.passed))
            .about("detail", c.detail.clone());
        current.as_mut().expect("section").push(fact);
    }
    report.sections.extend(current);
    let mut notes = coreduality::report::Section::new("notes");
    for n in &r.notes {
        notes.push(coreduality::report::Fact::new("note", FactValue::Text(n.clone())));
    }
    report.sections.push(notes);
    report.failures = r
        .failures()
        .map(|c| format!("{}: {} ({})", c.group, c.name, c.detail))
        .collect();
    Ok(report)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let opts = Options {
        caps: Caps {
            vertices: cli.opts.cap_vertices,
            edges: cli.opts.cap_edges,
            tum: cli.opts.cap_tum,
        },
        samples: cli.opts.samples,
        seed: cli.opts.seed,
    };
    let report = match &cli.command {
        Command::Solve { instance } => solve_report(&load(instance)?.instance, &opts)?,
        Command::Classify { instance } => classify_report(&load(instance)?.instance, &opts)?,
        Command::CoreCheck { instance, imputation } => {
            let file = load(instance)?;
            let payoff = match (imputation, &file.imputation) {
                (Some(pairs), _) => payoff_from_pairs(&file, pairs)?,
                (None, Some(p)) => p.clone(),
                (None, None) => {
                    return Err(Failure::Input(format!(
                        "{}: no imputation line and no --imputation given",
                        instance.display()
                    )))
                }
            };
            core_check_report(&file.instance, &Imputation::external(payoff), &opts)?
        }
        Command::Extremes { instance } => extremes_report(&load(instance)?.instance, &opts)?,
        Command::Concurrency { instance } => concurrency_report(&load(instance)?.instance, &opts)?,
        Command::TumCheck { instance } => tum_report(&load(instance)?.instance, &opts)?,
        Command::Surplus { instance } => surplus_report(&load(instance)?.instance, &opts)?,
        Command::Reproduce => reproduce_report(&opts.caps)?,
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.opts.format {
                OutputFormat::Text => {
                    print!("{report}");
                    for line in headline(&cli.command, &report) {
                        println!("{line}");
                    }
                }
                OutputFormat::Records => print!("{}", records(&report)),
            }
            if report.succeeded() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Analysis(msg)) => {
            eprintln!("analysis failed: {msg}");
            ExitCode::from(1)
        }
    }
}
