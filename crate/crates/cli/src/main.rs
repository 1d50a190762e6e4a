//! `dpo`: batch front-end over the graph transformation engine.
//!
//! Exit codes: 0 ok, 1 parse or precondition error, 2 dangling condition
//! violated, 3 check verdict false, 4 derivations dependent, 5 internal
//! consistency error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dpo_core::format::{
    read_graph, read_json, read_rule, read_square, to_json, CommutationReport, DerivationTrace,
    GraphDoc, MorphismDoc, RuleDoc,
};
use dpo_core::generate::Generator;
use dpo_core::{
    apply, check_parallel_independence, commute, dangling_condition, find_matches, is_isomorphic,
    is_pullback, is_pushout_injective, validate_rule, verify_commutation_squares, CheckReport,
    DirectDerivation, Error, Graph, Match, ParallelPair, Rule, ValidationReport,
};

const EXIT_OK: u8 = 0;
const EXIT_PRECONDITION: u8 = 1;
const EXIT_DANGLING: u8 = 2;
const EXIT_VERDICT_FALSE: u8 = 3;
const EXIT_DEPENDENT: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "dpo", version, about = "Double-pushout graph transformation")]
struct Cli {
    /// Print only the machine-readable report, no summary on stderr.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph, rule or morphism document against its invariants.
    Validate {
        #[command(subcommand)]
        what: ValidateTarget,
    },
    /// List the injective matches of a rule's left-hand side.
    Match { rule: PathBuf, graph: PathBuf },
    /// Apply a rule at one match and write the result graph and trace.
    Apply {
        rule: PathBuf,
        graph: PathBuf,
        #[command(flatten)]
        selector: MatchSelector,
        /// Where to write H; the trace goes to `<out>.trace.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a square is a pushout or a pullback.
    CheckSquare {
        square: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pushout)]
        mode: Mode,
    },
    /// Decide parallel independence of two rule applications.
    Independent {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Commute two independent rule applications to a common graph.
    Commute {
        #[command(flatten)]
        pair: PairArgs,
        /// Where to write G'; the report goes to `<out>.report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an isomorphism between two graphs.
    Iso { first: PathBuf, second: PathBuf },
    /// Write a random rule and a host graph containing its left-hand side.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ValidateTarget {
    Graph {
        path: PathBuf,
    },
    Rule {
        path: PathBuf,
    },
    Morphism {
        path: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pushout,
    Pullback,
}

#[derive(clap::Args)]
struct MatchSelector {
    /// Position in the list printed by `dpo match`.
    #[arg(long, default_value_t = 0, conflicts_with = "match_file")]
    match_index: usize,
    /// A morphism document `L -> G` to use as the match.
    #[arg(long = "match")]
    match_file: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PairArgs {
    rule1: PathBuf,
    rule2: PathBuf,
    graph: PathBuf,
    #[arg(long, default_value_t = 0, conflicts_with = "match1")]
    match1_index: usize,
    #[arg(long)]
    match1: Option<PathBuf>,
    #[arg(long, default_value_t = 0, conflicts_with = "match2")]
    match2_index: usize,
    #[arg(long)]
    match2: Option<PathBuf>,
}

/// A failed command: its exit code and a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Precondition(_) | Error::Composition(_) | Error::Scope(_) | Error::Format(_) => {
                EXIT_PRECONDITION
            }
            Error::Dangling(_) => EXIT_DANGLING,
            Error::Dependent(_) => EXIT_DEPENDENT,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

struct Output {
    quiet: bool,
}

impl Output {
    fn report<T: Serialize>(&self, value: &T) {
        println!("{}", to_json(value));
    }

    fn summary(&self, text: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", text.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { quiet: cli.json };
    match run(cli.command, &out) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command, out: &Output) -> Outcome {
    match command {
        Command::Validate { what } => cmd_validate(what, out),
        Command::Match { rule, graph } => cmd_match(&rule, &graph, out),
        Command::Apply {
            rule,
            graph,
            selector,
            out: target,
        } => cmd_apply(&rule, &graph, &selector, target.as_deref(), out),
        Command::CheckSquare { square, mode } => cmd_check_square(&square, mode, out),
        Command::Independent { pair } => cmd_independent(&pair, out),
        Command::Commute { pair, out: target } => cmd_commute(&pair, target.as_deref(), out),
        Command::Iso { first, second } => cmd_iso(&first, &second, out),
        Command::Generate { seed, out: dir } => cmd_generate(seed, &dir, out),
    }
}

fn verdict_code(ok: bool) -> u8 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VERDICT_FALSE
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: EXIT_PRECONDITION,
        message: format!("{}: {e}", path.display()),
    })
}

/// `<path>.<suffix>` next to `path`, e.g. `h.json` -> `h.trace.json`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

fn load_valid_graph(path: &Path) -> Result<Arc<Graph>, Failure> {
    let g = read_graph(path)?;
    let report = g.validate();
    if !report.is_ok() {
        return Err(Error::Precondition(format!("{}: {report}", path.display())).into());
    }
    Ok(Arc::new(g))
}

fn load_valid_rule(path: &Path) -> Result<Rule, Failure> {
    let rule = read_rule(path)?;
    let report = validate_rule(&rule);
    if !report.is_ok() {
        return Err(Error::Precondition(format!("{}: {report}", path.display())).into());
    }
    Ok(rule)
}

fn select_match(
    rule: &Rule,
    host: &Arc<Graph>,
    index: usize,
    file: Option<&Path>,
) -> Result<Match, Failure> {
    if let Some(path) = file {
        let doc: MorphismDoc = read_json(path)?;
        return Ok(Match::new(doc.to_morphism(&rule.lhs, host))?);
    }
    let mut matches = find_matches(rule, host);
    if index >= matches.len() {
        return Err(Error::Precondition(format!(
            "match index {index} out of range: {} match(es)",
            matches.len()
        ))
        .into());
    }
    Ok(matches.swap_remove(index))
}

fn cmd_validate(what: ValidateTarget, out: &Output) -> Outcome {
    let report: ValidationReport = match what {
        ValidateTarget::Graph { path } => read_graph(&path)?.validate(),
        ValidateTarget::Rule { path } => validate_rule(&read_rule(&path)?),
        ValidateTarget::Morphism {
            path,
            source,
            target,
        } => {
            let doc: MorphismDoc = read_json(&path)?;
            let source = Arc::new(read_graph(&source)?);
            let target = Arc::new(read_graph(&target)?);
            doc.to_morphism(&source, &target).validate()
        }
    };
    out.report(&report);
    out.summary(format!("validation: {report}"));
    Ok(verdict_code(report.is_ok()))
}

#[derive(Serialize)]
struct MatchEntry {
    index: usize,
    morphism: MorphismDoc,
    dangling_condition: CheckReport,
}

fn cmd_match(rule: &Path, graph: &Path, out: &Output) -> Outcome {
    let rule = load_valid_rule(rule)?;
    let host = load_valid_graph(graph)?;
    let entries: Vec<MatchEntry> = find_matches(&rule, &host)
        .iter()
        .enumerate()
        .map(|(index, m)| MatchEntry {
            index,
            morphism: MorphismDoc::from(m.morphism()),
            dangling_condition: dangling_condition(&rule, m),
        })
        .collect();
    let applicable = entries
        .iter()
        .filter(|e| e.dangling_condition.verdict)
        .count();
    out.report(&entries);
    out.summary(format!(
        "{} match(es), {applicable} applicable",
        entries.len()
    ));
    Ok(EXIT_OK)
}

fn trace_of(d: &DirectDerivation) -> Result<DerivationTrace, Failure> {
    let left = is_pushout_injective(&d.left_square())?;
    let right = is_pushout_injective(&d.right_square())?;
    Ok(DerivationTrace::new(d, left, right))
}

fn cmd_apply(
    rule: &Path,
    graph: &Path,
    selector: &MatchSelector,
    target: Option<&Path>,
    out: &Output,
) -> Outcome {
    let rule = load_valid_rule(rule)?;
    let host = load_valid_graph(graph)?;
    let m = select_match(
        &rule,
        &host,
        selector.match_index,
        selector.match_file.as_deref(),
    )?;
    let d = match apply(&rule, &m) {
        Err(err @ Error::Dangling(_)) => {
            if let Error::Dangling(report) = &err {
                out.report(report);
            }
            return Err(Failure {
                code: EXIT_DANGLING,
                message: err.to_string(),
            });
        }
        other => other?,
    };
    let trace = trace_of(&d)?;
    match target {
        Some(path) => {
            write_file(path, &to_json(&GraphDoc::from(&**d.result())))?;
            write_file(&sibling(path, "trace"), &to_json(&trace))?;
        }
        None => out.report(&trace),
    }
    out.summary(format!(
        "applied: G has {} nodes and {} edges, H has {} nodes and {} edges",
        host.node_count(),
        host.edge_count(),
        d.result().node_count(),
        d.result().edge_count()
    ));
    Ok(EXIT_OK)
}

fn cmd_check_square(path: &Path, mode: Mode, out: &Output) -> Outcome {
    let square = read_square(path)?;
    let report = match mode {
        Mode::Pushout => is_pushout_injective(&square)?,
        Mode::Pullback => is_pullback(&square)?,
    };
    out.report(&report);
    let kind = match mode {
        Mode::Pushout => "pushout",
        Mode::Pullback => "pullback",
    };
    out.summary(format!("{kind}: {report}"));
    Ok(verdict_code(report.verdict))
}

fn load_pair(args: &PairArgs) -> Result<ParallelPair, Failure> {
    let host = load_valid_graph(&args.graph)?;
    let p1 = load_valid_rule(&args.rule1)?;
    let p2 = load_valid_rule(&args.rule2)?;
    let m1 = select_match(&p1, &host, args.match1_index, args.match1.as_deref())?;
    let m2 = select_match(&p2, &host, args.match2_index, args.match2.as_deref())?;
    let d1 = apply(&p1, &m1)?;
    let d2 = apply(&p2, &m2)?;
    Ok(ParallelPair::new(d1, d2)?)
}

#[derive(Serialize)]
struct IndependenceReport {
    independent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    j1: Option<MorphismDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j2: Option<MorphismDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn cmd_independent(args: &PairArgs, out: &Output) -> Outcome {
    let pair = load_pair(args)?;
    let (report, code) = match check_parallel_independence(&pair) {
        Ok(w) => (
            IndependenceReport {
                independent: true,
                j1: Some(MorphismDoc::from(&w.j1)),
                j2: Some(MorphismDoc::from(&w.j2)),
                reason: None,
            },
            EXIT_OK,
        ),
        Err(reason) => (
            IndependenceReport {
                independent: false,
                j1: None,
                j2: None,
                reason: Some(reason),
            },
            EXIT_DEPENDENT,
        ),
    };
    out.report(&report);
    match &report.reason {
        None => out.summary("parallel independent"),
        Some(reason) => out.summary(format!("dependent: {reason}")),
    }
    Ok(code)
}

fn cmd_commute(args: &PairArgs, target: Option<&Path>, out: &Output) -> Outcome {
    let pair = load_pair(args)?;
    let witness = check_parallel_independence(&pair).map_err(|reason| Failure {
        code: EXIT_DEPENDENT,
        message: format!("dependent: {reason}"),
    })?;
    let result = commute(&pair)?;
    let check = verify_commutation_squares(&pair, &witness, &result)?;
    let report = CommutationReport::new(&result, &check);
    match target {
        Some(path) => {
            write_file(path, &to_json(&GraphDoc::from(&*result.gp)))?;
            write_file(&sibling(path, "report"), &to_json(&report))?;
        }
        None => out.report(&report),
    }
    if !check.summary.verdict {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("decomposition check failed: {}", check.summary),
        });
    }
    out.summary(format!(
        "commuted: G' has {} nodes and {} edges; {} squares checked",
        result.gp.node_count(),
        result.gp.edge_count(),
        check.squares.len()
    ));
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IsoReport {
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<dpo_core::IsoWitness>,
}

fn cmd_iso(first: &Path, second: &Path, out: &Output) -> Outcome {
    let g = load_valid_graph(first)?;
    let h = load_valid_graph(second)?;
    let witness = is_isomorphic(&g, &h);
    let report = IsoReport {
        isomorphic: witness.is_some(),
        witness,
    };
    out.report(&report);
    out.summary(if report.isomorphic {
        "isomorphic"
    } else {
        "not isomorphic"
    });
    Ok(verdict_code(report.isomorphic))
}

fn cmd_generate(seed: u64, dir: &Path, out: &Output) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure {
        code: EXIT_PRECONDITION,
        message: format!("{}: {e}", dir.display()),
    })?;
    let mut gen = Generator::new(seed);
    let rule = gen.rule(3, 3);
    let m = gen.host_for(&rule, 3, 3);
    write_file(&dir.join("rule.json"), &to_json(&RuleDoc::from(&rule)))?;
    write_file(
        &dir.join("graph.json"),
        &to_json(&GraphDoc::from(&**m.host())),
    )?;
    write_file(
        &dir.join("match.json"),
        &to_json(&MorphismDoc::from(m.morphism())),
    )?;
    out.summary(format!(
        "wrote rule.json, graph.json and match.json to {}",
        dir.display()
    ));
    Ok(EXIT_OK)
}
