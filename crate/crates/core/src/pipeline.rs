//! Candidate enumeration and the two screening stages.
//!
//! Enumeration order: induction-term sequences by length, then in
//! lexicographic order of the goal's variable order; within a sequence,
//! arbitrary sets by size then lexicographically; within those, no rule
//! first followed by the rules of the goal's constants in occurrence order.

use std::time::Duration;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::scheme::rules_for;
use crate::tactic::{apply_induct, Candidate, SubgoalSet, TacticError, DEFAULT_TIMEOUT};
use crate::term::{contains_subterm, Goal};
use crate::theory::Theory;

pub const DEFAULT_CAP: usize = 10_000;

/// Lazy, capped stream of candidates for one goal.
pub struct CandidateStream {
    pub goal: String,
    pub cap: usize,
    index: usize,
    inner: Box<dyn Iterator<Item = Candidate> + Send>,
}

impl CandidateStream {
    /// Number of candidates yielded so far.
    pub fn index(&self) -> usize {
        self.index
    }
}

impl Iterator for CandidateStream {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        if self.index >= self.cap {
            return None;
        }
        let c = self.inner.next()?;
        self.index += 1;
        Some(c)
    }
}

/// All subsets of `vars`, by size and then lexicographically.
fn subsets(vars: &[String]) -> Vec<Vec<String>> {
    (0..=vars.len()).flat_map(|k| vars.iter().cloned().combinations(k)).collect()
}

pub fn enumerate_candidates(goal: &Goal, thy: &Theory, cap: usize) -> CandidateStream {
    assert!(cap >= 1, "candidate cap must be positive");
    let vars: Vec<String> = goal.free_variables().into_iter().map(|(n, _)| n).collect();
    let mut rules: Vec<Option<String>> = vec![None];
    rules.extend(rules_for(goal, thy).into_iter().map(|s| Some(s.name)));
    let arbs = subsets(&vars);
    let n = vars.len();
    let seqs = (0..=n).flat_map(move |k| vars.clone().into_iter().permutations(k));
    let inner = seqs.flat_map(move |seq| {
        let rules = rules.clone();
        arbs.clone().into_iter().flat_map(move |arb| {
            let seq = seq.clone();
            rules.clone().into_iter().map(move |rule| Candidate {
                induction_terms: seq.clone(),
                arbitrary: arb.iter().cloned().collect(),
                rule,
            })
        })
    });
    CandidateStream { goal: goal.name.clone(), cap, index: 0, inner: Box::new(inner) }
}

/// Candidate count before capping: S(n) * 2^n * (1 + r).
pub fn candidate_count(vars: usize, rules: usize) -> usize {
    let seqs: usize = (0..=vars).map(|k| ((vars - k + 1)..=vars).product::<usize>()).sum();
    seqs * (1 << vars) * (1 + rules)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Clone, Debug)]
pub struct Survivor {
    /// Position in generation order.
    pub index: usize,
    pub candidate: Candidate,
    pub subgoals: SubgoalSet,
}

#[derive(Clone, Debug)]
pub struct Stage1 {
    pub generated: usize,
    pub survivors: Vec<Survivor>,
    pub rejected: Vec<(usize, Candidate, TacticError)>,
}

/// Applies every candidate; dispositions come back in generation order
/// whatever `exec` is.
pub fn stage1(
    goal: &Goal,
    stream: impl IntoIterator<Item = Candidate>,
    thy: &Theory,
    timeout: Option<Duration>,
    exec: Execution,
) -> Stage1 {
    let candidates: Vec<Candidate> = stream.into_iter().collect();
    let apply = |(i, c): (usize, &Candidate)| (i, apply_induct(goal, c, thy, timeout));
    let results: Vec<(usize, Result<SubgoalSet, TacticError>)> = match exec {
        Execution::Serial => candidates.iter().enumerate().map(apply).collect(),
        Execution::Parallel => candidates.par_iter().enumerate().map(apply).collect(),
    };
    let mut out = Stage1 { generated: candidates.len(), survivors: vec![], rejected: vec![] };
    for ((i, r), c) in results.into_iter().zip(candidates) {
        match r {
            Ok(subgoals) => out.survivors.push(Survivor { index: i, candidate: c, subgoals }),
            Err(e) => out.rejected.push((i, c, e)),
        }
    }
    out
}

/// The first Stage-2 condition (1, 2 or 3) a subgoal set trips, if any.
///
/// 1: two subgoals are identical. 2: every conclusion still contains the
/// original conclusion and no subgoal gained a premise. 3: a schematic
/// variable appeared although the goal had none.
pub fn stage2_condition(goal: &Goal, s: &SubgoalSet) -> Option<u8> {
    let n = s.subgoals.len();
    if (0..n).any(|i| (i + 1..n).any(|j| s.same_subgoal(i, j))) {
        return Some(1);
    }
    let keeps_conclusion = s.subgoals.iter().all(|g| contains_subterm(&g.conclusion, &goal.conclusion));
    let no_new_premise = s.subgoals.iter().all(|g| g.premises.iter().all(|p| goal.premises.contains(p)));
    if keeps_conclusion && no_new_premise {
        return Some(2);
    }
    if !goal.contains_schematic() && s.subgoals.iter().any(Goal::contains_schematic) {
        return Some(3);
    }
    None
}

#[derive(Clone, Debug)]
pub struct Stage2 {
    pub finalists: Vec<Survivor>,
    pub removed: Vec<(Survivor, u8)>,
}

pub fn stage2(goal: &Goal, survivors: Vec<Survivor>) -> Stage2 {
    let mut out = Stage2 { finalists: vec![], removed: vec![] };
    for s in survivors {
        match stage2_condition(goal, &s.subgoals) {
            None => out.finalists.push(s),
            Some(k) => out.removed.push((s, k)),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Disposition {
    Kept,
    Stage1 { error: crate::tactic::TacticErrorKind, detail: String },
    Stage2 { condition: u8 },
}

impl Disposition {
    pub fn describe(&self) -> String {
        match self {
            Disposition::Kept => "kept".into(),
            Disposition::Stage1 { error, detail } => format!("rejected: {error:?} ({detail})"),
            Disposition::Stage2 { condition } => format!("filtered: condition {condition} ({})", condition_label(*condition)),
        }
    }
}

pub fn condition_label(k: u8) -> &'static str {
    match k {
        1 => "identical subgoals",
        2 => "goal unchanged",
        3 => "schematic variable",
        _ => "unknown",
    }
}

impl Serialize for Candidate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    pub index: usize,
    pub candidate: Candidate,
    pub disposition: Disposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub goal: String,
    pub generated: usize,
    pub stage1_survivors: usize,
    /// Survivors of Stage-2 conditions 1 and 2.
    pub stage2a_survivors: usize,
    pub stage2_survivors: usize,
    pub candidates: Vec<CandidateRecord>,
}

impl ScreenReport {
    pub fn summary(&self) -> String {
        format!(
            "total {} | 1st {} | 2nd-a {} | 2nd-b {}",
            self.generated, self.stage1_survivors, self.stage2a_survivors, self.stage2_survivors
        )
    }

    pub fn disposition_of(&self, c: &Candidate) -> Option<&Disposition> {
        self.candidates.iter().find(|r| &r.candidate == c).map(|r| &r.disposition)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScreenConfig {
    pub cap: usize,
    pub timeout: Option<Duration>,
    pub execution: Execution,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        ScreenConfig { cap: DEFAULT_CAP, timeout: Some(DEFAULT_TIMEOUT), execution: Execution::Parallel }
    }
}

/// Enumeration followed by both stages.
pub fn screen(goal: &Goal, thy: &Theory, cfg: &ScreenConfig) -> (Vec<Survivor>, ScreenReport) {
    let s1 = stage1(goal, enumerate_candidates(goal, thy, cfg.cap), thy, cfg.timeout, cfg.execution);
    let generated = s1.generated;
    let stage1_survivors = s1.survivors.len();
    let mut records: Vec<CandidateRecord> = s1
        .rejected
        .into_iter()
        .map(|(index, candidate, e)| CandidateRecord {
            index,
            candidate,
            disposition: Disposition::Stage1 { error: e.kind, detail: e.detail },
        })
        .collect();
    let s2 = stage2(goal, s1.survivors);
    let stage3_removed = s2.removed.iter().filter(|(_, k)| *k == 3).count();
    for (s, k) in &s2.removed {
        records.push(CandidateRecord {
            index: s.index,
            candidate: s.candidate.clone(),
            disposition: Disposition::Stage2 { condition: *k },
        });
    }
    for s in &s2.finalists {
        records.push(CandidateRecord { index: s.index, candidate: s.candidate.clone(), disposition: Disposition::Kept });
    }
    records.sort_by_key(|r| r.index);
    let report = ScreenReport {
        goal: goal.name.clone(),
        generated,
        stage1_survivors,
        stage2a_survivors: s2.finalists.len() + stage3_removed,
        stage2_survivors: s2.finalists.len(),
        candidates: records,
    };
    (s2.finalists, report)
}
