//! Heuristic scoring and ranking of screened candidates.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::lifter::{eval, parse_suite, Domains, EvalContext, Formula, LifterError};
use crate::pipeline::{screen, Execution, ScreenConfig, ScreenReport, Survivor};
use crate::tactic::Candidate;
use crate::term::Goal;
use crate::theory::Theory;

pub const DEFAULT_SUITE: &str = include_str!("../heuristics/default.lifter");
pub const DEFAULT_TOP: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("{}:{err}", path.as_deref().unwrap_or("<suite>"))]
    Parse { path: Option<String>, err: LifterError },
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicSuite {
    pub heuristics: Vec<(String, Formula)>,
}

impl HeuristicSuite {
    pub fn empty() -> HeuristicSuite {
        HeuristicSuite { heuristics: vec![] }
    }

    pub fn shipped() -> HeuristicSuite {
        HeuristicSuite::from_source(DEFAULT_SUITE).expect("shipped suite parses")
    }

    pub fn from_source(src: &str) -> Result<HeuristicSuite, SuiteError> {
        parse_suite(src)
            .map(|heuristics| HeuristicSuite { heuristics })
            .map_err(|err| SuiteError::Parse { path: None, err })
    }

    pub fn load(path: &Path) -> Result<HeuristicSuite, SuiteError> {
        let shown = path.display().to_string();
        let src = std::fs::read_to_string(path).map_err(|err| SuiteError::Io { path: shown.clone(), err })?;
        HeuristicSuite::from_source(&src).map_err(|e| match e {
            SuiteError::Parse { err, .. } => SuiteError::Parse { path: Some(shown), err },
            other => other,
        })
    }

    pub fn len(&self) -> usize {
        self.heuristics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heuristics.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.heuristics.iter().map(|(n, _)| n.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScoredCandidate {
    pub candidate: Candidate,
    /// Position in generation order, the tie-break.
    pub index: usize,
    pub score: usize,
    pub verdicts: Vec<bool>,
    pub rank: usize,
}

pub fn verdicts(goal: &Goal, thy: &Theory, s: &Survivor, suite: &HeuristicSuite, domains: &Domains) -> Vec<bool> {
    let ctx = EvalContext::new(goal, &s.subgoals, &s.candidate, thy, domains);
    suite.heuristics.iter().map(|(_, f)| eval(f, &ctx)).collect()
}

/// Scores every finalist and sorts by score, highest first; equal scores
/// keep generation order.
pub fn score_all(
    goal: &Goal,
    thy: &Theory,
    finalists: &[Survivor],
    suite: &HeuristicSuite,
    exec: Execution,
) -> Vec<ScoredCandidate> {
    let domains = Domains::new(goal);
    let score_one = |s: &Survivor| {
        let v = verdicts(goal, thy, s, suite, &domains);
        ScoredCandidate {
            candidate: s.candidate.clone(),
            index: s.index,
            score: v.iter().filter(|b| **b).count(),
            verdicts: v,
            rank: 0,
        }
    };
    let mut scored: Vec<ScoredCandidate> = match exec {
        Execution::Serial => finalists.iter().map(score_one).collect(),
        Execution::Parallel => finalists.par_iter().map(score_one).collect(),
    };
    scored.sort_by(|a, b| b.score.cmp(&a.score).then(a.index.cmp(&b.index)));
    for (i, s) in scored.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    scored
}

pub fn shortlist(scored: &[ScoredCandidate], k: usize) -> &[ScoredCandidate] {
    &scored[..k.min(scored.len())]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recommendation {
    pub report: ScreenReport,
    pub ranked: Vec<ScoredCandidate>,
}

impl Recommendation {
    pub fn rank_of(&self, c: &Candidate) -> Option<&ScoredCandidate> {
        self.ranked.iter().find(|s| &s.candidate == c)
    }
}

/// The whole pipeline for one goal.
pub fn recommend(goal: &Goal, thy: &Theory, cfg: &ScreenConfig, suite: &HeuristicSuite) -> Recommendation {
    let (finalists, report) = screen(goal, thy, cfg);
    let ranked = score_all(goal, thy, &finalists, suite, cfg.execution);
    Recommendation { report, ranked }
}
