//! Coincidence evaluation against expert-annotated goals.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::parser::{parse_theory_with_spans, ParseError, SourceMap};
use crate::pipeline::{Disposition, ScreenConfig};
use crate::scoring::{recommend, HeuristicSuite};
use crate::tactic::{apply_induct, Candidate};
use crate::theory::Theory;

pub const TOP_N: [usize; 4] = [1, 3, 5, 10];

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{file}:{line}: {message}")]
    Annotation { file: String, line: usize, message: String },
    #[error("goal {goal} is declared in both {first} and {second}")]
    DuplicateGoal { goal: String, first: String, second: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annotation {
    pub goal: String,
    pub expert: Candidate,
    pub rule_used: bool,
    pub arbitrary_used: bool,
    /// Line in the annotation file.
    pub line: usize,
}

fn flag(field: &str, key: &str) -> Option<bool> {
    match field.trim().strip_prefix(key)?.trim_start_matches(':').trim() {
        "yes" => Some(true),
        "no" => Some(false),
        _ => None,
    }
}

/// Parses `goal | tactic | rule:yes/no | arb:yes/no` lines; `#` starts a
/// comment line.
pub fn parse_annotations(src: &str, file: &str) -> Result<Vec<Annotation>, HarnessError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| HarnessError::Annotation { file: file.to_string(), line: i + 1, message };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [goal, tactic, rule, arb] = fields[..] else {
            return Err(bad(format!("expected 4 `|`-separated fields, found {}", fields.len())));
        };
        let expert = Candidate::parse(tactic).map_err(|e| bad(e.to_string()))?;
        let rule_used = flag(rule, "rule").ok_or_else(|| bad(format!("expected rule:yes or rule:no, found `{rule}`")))?;
        let arbitrary_used = flag(arb, "arb").ok_or_else(|| bad(format!("expected arb:yes or arb:no, found `{arb}`")))?;
        if rule_used != expert.rule.is_some() || arbitrary_used != !expert.arbitrary.is_empty() {
            return Err(bad(format!("flags disagree with tactic `{expert}`")));
        }
        out.push(Annotation { goal: goal.to_string(), expert, rule_used, arbitrary_used, line: i + 1 });
    }
    Ok(out)
}

pub struct CorpusTheory {
    /// File stem, used as the table label.
    pub label: String,
    pub path: PathBuf,
    pub theory: Theory,
    pub spans: SourceMap,
}

/// Every `.thy` file in `dir`, in file-name order.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusTheory>, HarnessError> {
    let io = |err| HarnessError::Io { path: dir.display().to_string(), err };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "thy"))
        .collect();
    paths.sort();
    let mut out: Vec<CorpusTheory> = Vec::new();
    let mut owner: HashMap<String, String> = HashMap::new();
    for path in paths {
        let src = std::fs::read_to_string(&path)
            .map_err(|err| HarnessError::Io { path: path.display().to_string(), err })?;
        let (theory, spans) = parse_theory_with_spans(&src, &path)?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for g in &theory.goals {
            if let Some(first) = owner.insert(g.name.clone(), label.clone()) {
                return Err(HarnessError::DuplicateGoal { goal: g.name.clone(), first, second: label });
            }
        }
        out.push(CorpusTheory { label, path, theory, spans });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Full,
    TermsOnly,
}

/// One annotated goal, laid out like a per-goal results table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalRow {
    pub theory: String,
    pub goal: String,
    pub line: usize,
    pub total: usize,
    pub first: usize,
    pub second_a: usize,
    pub second_b: usize,
    /// Rank of the expert's choice, absent when it did not reach scoring.
    pub nth: Option<usize>,
    pub score: Option<usize>,
    pub rule: bool,
    pub arb: bool,
    pub expert: Candidate,
    /// Why the expert's choice did not reach scoring.
    pub disposition: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoincidenceRow {
    pub theory: String,
    pub total: usize,
    /// Hits within the top 1, 3, 5 and 10.
    pub hits: [usize; 4],
}

impl CoincidenceRow {
    fn from_goals<'a>(theory: &str, rows: impl Iterator<Item = &'a GoalRow>) -> CoincidenceRow {
        let mut r = CoincidenceRow { theory: theory.to_string(), total: 0, hits: [0; 4] };
        for g in rows {
            r.total += 1;
            for (h, n) in r.hits.iter_mut().zip(TOP_N) {
                if g.nth.is_some_and(|k| k <= n) {
                    *h += 1;
                }
            }
        }
        r
    }

    pub fn percent(&self, k: usize) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.hits[k] as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub mode: Mode,
    pub goals: Vec<GoalRow>,
    /// One row per theory, then a `sum` row.
    pub table: Vec<CoincidenceRow>,
}

fn resolve<'a>(corpus: &'a [CorpusTheory], a: &Annotation, file: &str) -> Result<&'a CorpusTheory, HarnessError> {
    let bad = |message: String| HarnessError::Annotation { file: file.to_string(), line: a.line, message };
    let ct = corpus
        .iter()
        .find(|t| t.theory.goal(&a.goal).is_some())
        .ok_or_else(|| bad(format!("unknown goal {}", a.goal)))?;
    let goal = ct.theory.goal(&a.goal).expect("found");
    let free: Vec<String> = goal.free_variables().into_iter().map(|(n, _)| n).collect();
    for v in a.expert.induction_terms.iter().chain(&a.expert.arbitrary) {
        if !free.contains(v) {
            return Err(bad(format!("{v} is not a free variable of {}", a.goal)));
        }
    }
    if let Some(r) = &a.expert.rule {
        if crate::scheme::scheme_by_name(&ct.theory, r).is_none() {
            return Err(bad(format!("unknown rule {r}")));
        }
    }
    Ok(ct)
}

pub fn evaluate(
    corpus: &[CorpusTheory],
    annotations: &[Annotation],
    annotations_file: &str,
    mode: Mode,
    cfg: &ScreenConfig,
    suite: &HeuristicSuite,
) -> Result<EvalReport, HarnessError> {
    let resolved: Vec<&CorpusTheory> =
        annotations.iter().map(|a| resolve(corpus, a, annotations_file)).collect::<Result<_, _>>()?;
    let one = |(a, ct): (&Annotation, &&CorpusTheory)| -> GoalRow {
        let thy = &ct.theory;
        let goal = thy.goal(&a.goal).expect("resolved");
        let rec = recommend(goal, thy, cfg, suite);
        let hit = rec.ranked.iter().find(|s| match mode {
            Mode::Full => s.candidate == a.expert,
            Mode::TermsOnly => s.candidate.induction_terms == a.expert.induction_terms,
        });
        let disposition = match hit {
            Some(_) => None,
            None => Some(match rec.report.disposition_of(&a.expert) {
                Some(d) => d.describe(),
                None => match apply_induct(goal, &a.expert, thy, cfg.timeout) {
                    Err(e) => Disposition::Stage1 { error: e.kind, detail: e.detail }.describe(),
                    Ok(_) => "not generated".to_string(),
                },
            }),
        };
        GoalRow {
            theory: ct.label.clone(),
            goal: a.goal.clone(),
            line: ct.spans.line_of(&a.goal).unwrap_or(0),
            total: rec.report.generated,
            first: rec.report.stage1_survivors,
            second_a: rec.report.stage2a_survivors,
            second_b: rec.report.stage2_survivors,
            nth: hit.map(|s| s.rank),
            score: hit.map(|s| s.score),
            rule: a.rule_used,
            arb: a.arbitrary_used,
            expert: a.expert.clone(),
            disposition,
        }
    };
    let pairs: Vec<(&Annotation, &&CorpusTheory)> = annotations.iter().zip(resolved.iter()).collect();
    let goals: Vec<GoalRow> = match cfg.execution {
        crate::pipeline::Execution::Serial => pairs.into_iter().map(one).collect(),
        crate::pipeline::Execution::Parallel => pairs.into_par_iter().map(one).collect(),
    };
    let mut table = Vec::new();
    for ct in corpus {
        if goals.iter().any(|g| g.theory == ct.label) {
            table.push(CoincidenceRow::from_goals(&ct.label, goals.iter().filter(|g| g.theory == ct.label)));
        }
    }
    table.push(CoincidenceRow::from_goals("sum", goals.iter()));
    Ok(EvalReport { mode, goals, table })
}

fn dash(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl EvalReport {
    /// Coincidence table followed by the per-goal table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let w = self.table.iter().map(|r| r.theory.len()).max().unwrap_or(0).max(6);
        out.push_str(&format!(
            "{:<w$}  {:>5}  {:>10}  {:>10}  {:>10}  {:>10}\n",
            "theory", "total", "top_1", "top_3", "top_5", "top_10"
        ));
        for r in &self.table {
            out.push_str(&format!("{:<w$}  {:>5}", r.theory, r.total));
            for k in 0..4 {
                let cell = format!("{} ({:.0}%)", r.hits[k], r.percent(k));
                out.push_str(&format!("  {cell:>10}"));
            }
            out.push('\n');
        }
        out.push('\n');
        let gw = self.goals.iter().map(|g| g.goal.len()).max().unwrap_or(0).max(4);
        let tw = self.goals.iter().map(|g| g.theory.len()).max().unwrap_or(0).max(6);
        out.push_str(&format!(
            "{:<tw$}  {:<gw$}  {:>4}  {:>5}  {:>3}  {:>5}  {:>5}  {:>3}  {:>5}  {:>4}  {:>3}\n",
            "theory", "goal", "line", "total", "1st", "2nd-a", "2nd-b", "nth", "score", "rule", "arb"
        ));
        for g in &self.goals {
            out.push_str(&format!(
                "{:<tw$}  {:<gw$}  {:>4}  {:>5}  {:>3}  {:>5}  {:>5}  {:>3}  {:>5}  {:>4}  {:>3}\n",
                g.theory,
                g.goal,
                g.line,
                g.total,
                g.first,
                g.second_a,
                g.second_b,
                dash(g.nth),
                dash(g.score),
                yes_no(g.rule),
                yes_no(g.arb)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_lines() {
        let a = parse_annotations(
            "# expert choices\nitrev_rev | induct xs arbitrary: ys | rule:no | arb:yes\n\n",
            "a.txt",
        )
        .unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].line, 2);
        assert!(a[0].arbitrary_used && !a[0].rule_used);
        assert!(parse_annotations("g | induct xs | rule:yes | arb:no", "a.txt").is_err());
        assert!(parse_annotations("g | induct xs | rule:no", "a.txt").is_err());
        assert!(parse_annotations("g | induct xs | rule:maybe | arb:no", "a.txt").is_err());
    }

    #[test]
    fn monotone_rows() {
        let rows = [
            GoalRow {
                theory: "t".into(),
                goal: "a".into(),
                line: 1,
                total: 4,
                first: 2,
                second_a: 2,
                second_b: 1,
                nth: Some(2),
                score: Some(3),
                rule: false,
                arb: false,
                expert: Candidate::parse("induct x").unwrap(),
                disposition: None,
            },
            GoalRow { nth: None, score: None, goal: "b".into(), ..rowless() },
            GoalRow { nth: Some(11), goal: "c".into(), ..rowless() },
        ];
        let r = CoincidenceRow::from_goals("t", rows.iter());
        assert_eq!(r.total, 3);
        assert_eq!(r.hits, [0, 1, 1, 1]);
    }

    fn rowless() -> GoalRow {
        GoalRow {
            theory: "t".into(),
            goal: String::new(),
            line: 0,
            total: 0,
            first: 0,
            second_a: 0,
            second_b: 0,
            nth: None,
            score: None,
            rule: false,
            arb: false,
            expert: Candidate::parse("induct x").unwrap(),
            disposition: None,
        }
    }
}
