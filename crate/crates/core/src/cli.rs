//! Command-line front end. Commands return their output instead of printing
//! so they can be driven from tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::harness::{evaluate, load_corpus, parse_annotations, Mode};
use crate::lifter::Domains;
use crate::parser::{parse_goal_expr, parse_theory_with_spans, SourceMap};
use crate::pipeline::{condition_label, stage2_condition, Disposition, Execution, ScreenConfig, Survivor, DEFAULT_CAP};
use crate::scoring::{recommend, shortlist, verdicts, HeuristicSuite, DEFAULT_TOP};
use crate::tactic::{apply_induct, Candidate, DEFAULT_TIMEOUT};
use crate::term::{Goal, Term};
use crate::theory::{Theory, IMP};

#[derive(Debug, Parser)]
#[command(name = "smart-induct", version, about = "Recommends arguments for the induct tactic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank induction candidates for one goal.
    Recommend(RecommendArgs),
    /// Compare recommendations with expert annotations.
    Eval(EvalArgs),
    /// Show how one tactic fares against each heuristic.
    Explain(ExplainArgs),
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Stop enumerating after this many candidates.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub max_candidates: usize,
    /// Per-application time limit in milliseconds.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_millis() as u64)]
    pub timeout_ms: u64,
    /// Disable the per-application time limit.
    #[arg(long)]
    pub no_timeout: bool,
    /// Heuristic file replacing the shipped suite.
    #[arg(long)]
    pub heuristics: Option<PathBuf>,
    /// Run every stage on one thread.
    #[arg(long)]
    pub serial: bool,
}

impl PipelineArgs {
    fn config(&self) -> ScreenConfig {
        ScreenConfig {
            cap: self.max_candidates,
            timeout: (!self.no_timeout).then(|| Duration::from_millis(self.timeout_ms)),
            execution: if self.serial { Execution::Serial } else { Execution::Parallel },
        }
    }

    fn suite(&self) -> Result<HeuristicSuite, String> {
        match &self.heuristics {
            Some(p) => HeuristicSuite::load(p).map_err(|e| e.to_string()),
            None => Ok(HeuristicSuite::shipped()),
        }
    }
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    pub file: PathBuf,
    /// Lemma to work on.
    #[arg(long, required_unless_present = "goal_expr", conflicts_with = "goal_expr")]
    pub goal: Option<String>,
    /// A goal written inline, checked against the file's declarations.
    #[arg(long)]
    pub goal_expr: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOP, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub top: usize,
    /// Newline-delimited JSON records instead of a table.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub dir: PathBuf,
    #[arg(long)]
    pub annotations: PathBuf,
    /// Count a hit whenever the induction terms agree.
    #[arg(long)]
    pub terms_only: bool,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub goal: String,
    /// Tactic text, e.g. "induct xs arbitrary: ys".
    #[arg(long)]
    pub tactic: String,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn fail(code: i32, msg: impl Into<String>) -> Output {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Output { stdout: String::new(), stderr, code }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output::fail(1, text)
            } else {
                Output { stdout: text, stderr: String::new(), code: 0 }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Output {
    let r = match &cli.command {
        Command::Recommend(a) => cmd_recommend(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Explain(a) => cmd_explain(a),
    };
    r.unwrap_or_else(|msg| Output::fail(1, msg))
}

fn load_theory(path: &Path) -> Result<(Theory, SourceMap), String> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_theory_with_spans(&src, path).map_err(|e| e.to_string())
}

fn find_goal<'a>(thy: &'a Theory, name: &str) -> Result<&'a Goal, String> {
    thy.goal(name).ok_or_else(|| {
        let names: Vec<&str> = thy.goals.iter().map(|g| g.name.as_str()).collect();
        if names.is_empty() {
            format!("unknown goal `{name}`; the file declares no lemmas")
        } else {
            format!("unknown goal `{name}`; available goals: {}", names.join(", "))
        }
    })
}

/// Splits a top-level `==>` chain into premises and conclusion.
fn goal_of_term(name: &str, t: Term) -> Goal {
    let mut premises = Vec::new();
    let mut cur = t;
    loop {
        let (head, args) = cur.strip_comb();
        if head.as_const() == Some(IMP) && args.len() == 2 {
            premises.push(args[0].clone());
            let next = args[1].clone();
            cur = next;
        } else {
            break;
        }
    }
    Goal::new(name, premises, cur)
}

#[derive(Serialize)]
struct Record<'a> {
    rank: usize,
    tactic_text: String,
    score: usize,
    verdicts: &'a [bool],
}

pub fn cmd_recommend(a: &RecommendArgs) -> Result<Output, String> {
    let (thy, spans) = load_theory(&a.file)?;
    let suite = a.pipeline.suite()?;
    let (goal, line) = match (&a.goal, &a.goal_expr) {
        (Some(name), _) => (find_goal(&thy, name)?.clone(), spans.line_of(name)),
        (None, Some(src)) => {
            let t = parse_goal_expr(src, &thy).map_err(|e| e.to_string())?;
            if !t.ty().is_bool() {
                return Err(format!("goal must be propositional, found type {}", t.ty()));
            }
            (goal_of_term("goal", t), None)
        }
        (None, None) => return Err("one of --goal or --goal-expr is required".into()),
    };
    let cfg = a.pipeline.config();
    let rec = recommend(&goal, &thy, &cfg, &suite);
    let top = shortlist(&rec.ranked, a.top);
    let mut out = Output::default();
    if a.json {
        for s in top {
            let rec = Record { rank: s.rank, tactic_text: s.candidate.to_string(), score: s.score, verdicts: &s.verdicts };
            out.stdout.push_str(&serde_json::to_string(&rec).expect("serializable"));
            out.stdout.push('\n');
        }
    } else {
        match line {
            Some(l) => writeln!(out.stdout, "goal {} (line {l})", goal.name),
            None => writeln!(out.stdout, "goal {}", goal.name),
        }
        .ok();
        writeln!(out.stdout, "{}", rec.report.summary()).ok();
        let width = top.iter().map(|s| s.candidate.to_string().len()).max().unwrap_or(0);
        for s in top {
            writeln!(out.stdout, "{:>3}. {:<width$}  score {}/{}", s.rank, s.candidate.to_string(), s.score, suite.len())
                .ok();
        }
    }
    if rec.ranked.is_empty() {
        out.stderr = format!("no candidate survived screening ({})\n", rec.report.summary());
        out.code = 2;
    }
    Ok(out)
}

pub fn cmd_eval(a: &EvalArgs) -> Result<Output, String> {
    let corpus = load_corpus(&a.dir).map_err(|e| e.to_string())?;
    let shown = a.annotations.display().to_string();
    let src = std::fs::read_to_string(&a.annotations).map_err(|e| format!("cannot read {shown}: {e}"))?;
    let annotations = parse_annotations(&src, &shown).map_err(|e| e.to_string())?;
    let suite = a.pipeline.suite()?;
    let mode = if a.terms_only { Mode::TermsOnly } else { Mode::Full };
    let report = evaluate(&corpus, &annotations, &shown, mode, &a.pipeline.config(), &suite).map_err(|e| e.to_string())?;
    let mut out = Output::default();
    if a.json {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Line<'a> {
            Goal(&'a crate::harness::GoalRow),
            Table(&'a crate::harness::CoincidenceRow),
        }
        for g in &report.goals {
            out.stdout.push_str(&serde_json::to_string(&Line::Goal(g)).expect("serializable"));
            out.stdout.push('\n');
        }
        for r in &report.table {
            out.stdout.push_str(&serde_json::to_string(&Line::Table(r)).expect("serializable"));
            out.stdout.push('\n');
        }
    } else {
        out.stdout = report.render();
    }
    Ok(out)
}

pub fn cmd_explain(a: &ExplainArgs) -> Result<Output, String> {
    let (thy, _) = load_theory(&a.file)?;
    let goal = find_goal(&thy, &a.goal)?;
    let c = Candidate::parse(&a.tactic).map_err(|e| e.to_string())?;
    let suite = a.pipeline.suite()?;
    let cfg = a.pipeline.config();
    let mut out = Output::default();
    writeln!(out.stdout, "tactic: {c}").ok();
    let subgoals = match apply_induct(goal, &c, &thy, cfg.timeout) {
        Err(e) => {
            let d = Disposition::Stage1 { error: e.kind, detail: e.detail };
            writeln!(out.stdout, "{}", d.describe()).ok();
            return Ok(out);
        }
        Ok(s) => s,
    };
    if let Some(scheme) = crate::scheme::scheme_by_name(&thy, &subgoals.scheme) {
        writeln!(out.stdout, "scheme: {}", scheme.name).ok();
        for line in scheme.to_string().lines() {
            writeln!(out.stdout, "  {line}").ok();
        }
    }
    if let Some(k) = stage2_condition(goal, &subgoals) {
        writeln!(out.stdout, "filtered: condition {k} ({})", condition_label(k)).ok();
        return Ok(out);
    }
    let rec = recommend(goal, &thy, &cfg, &suite);
    let (verdict_row, rank) = match rec.rank_of(&c) {
        Some(s) => (s.verdicts.clone(), Some(s.rank)),
        None => {
            let d = Domains::new(goal);
            let s = Survivor { index: usize::MAX, candidate: c.clone(), subgoals };
            (verdicts(goal, &thy, &s, &suite, &d), None)
        }
    };
    writeln!(out.stdout, "status: kept").ok();
    let w = suite.names().map(str::len).max().unwrap_or(0);
    for (name, v) in suite.names().zip(&verdict_row) {
        writeln!(out.stdout, "  {name:<w$}  {}", if *v { "T" } else { "F" }).ok();
    }
    let score = verdict_row.iter().filter(|v| **v).count();
    match rank {
        Some(r) => writeln!(out.stdout, "score {score}/{}, rank {r} of {}", suite.len(), rec.ranked.len()),
        None => writeln!(out.stdout, "score {score}/{}, rank - (not among the generated candidates)", suite.len()),
    }
    .ok();
    Ok(out)
}
