//! Application of an induction candidate to a goal.
//!
//! Structural mode (no rule) uses the datatype scheme of the first induction
//! term; further terms are left alone. Functional mode instantiates the
//! rule's k-th position with the k-th induction term. Variables listed in
//! `arbitrary` are renamed apart in the conclusion and separately in every
//! induction hypothesis, which stands in for universal generalization.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::scheme::{scheme_by_name, structural_scheme, InductionScheme};
use crate::term::{fresh_name, Goal, Term, Type};
use crate::theory::{Theory, IMP};

/// Name of the placeholder predicate used when a rule is applied without any
/// induction term.
pub const MOTIVE: &str = "P";

pub const DEFAULT_TIMEOUT: Duration = Duration::from_millis(100);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    pub induction_terms: Vec<String>,
    pub arbitrary: BTreeSet<String>,
    pub rule: Option<String>,
}

impl Candidate {
    pub fn new(terms: &[&str], arbitrary: &[&str], rule: Option<&str>) -> Candidate {
        Candidate {
            induction_terms: terms.iter().map(|s| s.to_string()).collect(),
            arbitrary: arbitrary.iter().map(|s| s.to_string()).collect(),
            rule: rule.map(str::to_string),
        }
    }

    /// Parses `induct <v>... [arbitrary: <w>...] [rule: <name>]`. An
    /// enclosing `apply(...)` is accepted.
    pub fn parse(text: &str) -> Result<Candidate, CandidateSyntaxError> {
        let mut s = text.trim();
        if let Some(inner) = s.strip_prefix("apply").map(str::trim_start) {
            s = inner
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| CandidateSyntaxError(format!("unbalanced apply(...) in `{text}`")))?
                .trim();
        }
        let spaced = s.replace("arbitrary:", " arbitrary: ").replace("rule:", " rule: ");
        let mut words = spaced.split_whitespace();
        if words.next() != Some("induct") {
            return Err(CandidateSyntaxError(format!("tactic must start with `induct`: `{text}`")));
        }
        #[derive(PartialEq)]
        enum Section {
            Terms,
            Arbitrary,
            Rule,
        }
        let mut sec = Section::Terms;
        let mut c = Candidate { induction_terms: vec![], arbitrary: BTreeSet::new(), rule: None };
        let mut seen_arb = false;
        for w in words {
            match w {
                "arbitrary:" if sec == Section::Terms && !seen_arb => {
                    sec = Section::Arbitrary;
                    seen_arb = true;
                }
                "rule:" if c.rule.is_none() && sec != Section::Rule => sec = Section::Rule,
                _ if w.ends_with(':') => {
                    return Err(CandidateSyntaxError(format!("unexpected `{w}` in `{text}`")));
                }
                _ => match sec {
                    Section::Terms => {
                        if c.induction_terms.iter().any(|t| t == w) {
                            return Err(CandidateSyntaxError(format!("induction term {w} repeated")));
                        }
                        c.induction_terms.push(w.to_string())
                    }
                    Section::Arbitrary => {
                        c.arbitrary.insert(w.to_string());
                    }
                    Section::Rule => {
                        if c.rule.is_some() {
                            return Err(CandidateSyntaxError(format!("more than one rule in `{text}`")));
                        }
                        c.rule = Some(w.to_string());
                    }
                },
            }
        }
        if sec == Section::Rule && c.rule.is_none() {
            return Err(CandidateSyntaxError(format!("missing rule name in `{text}`")));
        }
        Ok(c)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("induct")?;
        for t in &self.induction_terms {
            write!(f, " {t}")?;
        }
        if !self.arbitrary.is_empty() {
            f.write_str(" arbitrary:")?;
            for a in &self.arbitrary {
                write!(f, " {a}")?;
            }
        }
        if let Some(r) = &self.rule {
            write!(f, " rule: {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct CandidateSyntaxError(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TacticErrorKind {
    NoArguments,
    UnknownVariable,
    ArbitraryOverlapsInductionTerm,
    NonDatatypeVariable,
    RuleArityExceeded,
    PositionTypeMismatch,
    UnknownRule,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind:?}: {detail}")]
pub struct TacticError {
    pub kind: TacticErrorKind,
    pub detail: String,
}

fn fail<T>(kind: TacticErrorKind, detail: String) -> Result<T, TacticError> {
    Err(TacticError { kind, detail })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgoalSet {
    pub scheme: String,
    pub case_names: Vec<String>,
    pub subgoals: Vec<Goal>,
}

impl SubgoalSet {
    /// Subgoal `i` and `j` have identical premises and conclusion.
    pub fn same_subgoal(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.subgoals[i], &self.subgoals[j]);
        a.premises == b.premises && a.conclusion == b.conclusion
    }
}

/// Sets `var := term` per induction position plus the renamings for
/// generalized variables.
fn instantiate(goal_part: &Term, sub: &HashMap<String, Term>) -> Term {
    goal_part.subst_free(sub)
}

fn imp(a: Term, b: Term) -> Term {
    let c = Term::constant(IMP, Type::fun_n([Type::bool(), Type::bool()], Type::bool()));
    Term::apps(c, [a, b])
}

/// Applies `c` to `goal`. `timeout = None` means no limit.
pub fn apply_induct(
    goal: &Goal,
    c: &Candidate,
    thy: &Theory,
    timeout: Option<Duration>,
) -> Result<SubgoalSet, TacticError> {
    use TacticErrorKind::*;
    let start = Instant::now();
    if c.induction_terms.is_empty() && c.rule.is_none() {
        return fail(NoArguments, "no induction terms and no rule".into());
    }
    let free = goal.free_variables();
    let var_ty = |n: &str| free.iter().find(|(m, _)| m == n).map(|(_, t)| t.clone());
    for v in c.induction_terms.iter().chain(&c.arbitrary) {
        if var_ty(v).is_none() {
            return fail(UnknownVariable, format!("{v} is not a free variable of {}", goal.name));
        }
    }
    if let Some(v) = c.induction_terms.iter().find(|v| c.arbitrary.contains(*v)) {
        return fail(ArbitraryOverlapsInductionTerm, format!("{v} is both an induction term and arbitrary"));
    }

    let (scheme, replaced, tsub): (InductionScheme, Vec<String>, HashMap<String, Type>) = match &c.rule {
        None => {
            let v = &c.induction_terms[0];
            let ty = var_ty(v).expect("checked");
            let Some(d) = thy.datatype_of_type(&ty) else {
                return fail(NonDatatypeVariable, format!("{v} has type {ty}, which is not a datatype"));
            };
            let scheme = structural_scheme(d).map_err(|e| TacticError { kind: NonDatatypeVariable, detail: e.to_string() })?;
            let Type::Con(_, args) = &ty else { unreachable!("datatype type") };
            (scheme, vec![v.clone()], d.instantiate(args))
        }
        Some(r) => {
            let Some(scheme) = scheme_by_name(thy, r) else {
                return fail(UnknownRule, format!("no rule named {r}"));
            };
            if c.induction_terms.len() > scheme.arity {
                return fail(
                    RuleArityExceeded,
                    format!("{r} has {} position(s), got {} induction terms", scheme.arity, c.induction_terms.len()),
                );
            }
            let mut tsub = HashMap::new();
            for (k, v) in c.induction_terms.iter().enumerate() {
                let ty = var_ty(v).expect("checked");
                if !scheme.positions[k].match_into(&ty, &mut tsub) {
                    return fail(
                        PositionTypeMismatch,
                        format!("{v} : {ty} does not fit position {} of {r} : {}", k + 1, scheme.positions[k]),
                    );
                }
            }
            (scheme, c.induction_terms.clone(), tsub)
        }
    };

    let positions: Vec<Type> = scheme.positions.iter().map(|t| t.subst(&tsub)).collect();
    let motive = (replaced.is_empty())
        .then(|| Term::schematic(MOTIVE, Type::fun_n(positions.iter().cloned(), Type::bool())));
    let generalized: Vec<(String, Type)> =
        free.iter().filter(|(n, _)| c.arbitrary.contains(n)).cloned().collect();
    let base_used: HashSet<String> =
        free.iter().map(|(n, _)| n.clone()).filter(|n| !replaced.contains(n)).collect();

    let mut case_names = Vec::new();
    let mut subgoals = Vec::new();
    for case in &scheme.cases {
        let mut used = base_used.clone();
        let mut rename = HashMap::new();
        for (n, ty) in &case.fresh_vars {
            let fresh = fresh_name(n, &used);
            used.insert(fresh.clone());
            rename.insert(n.clone(), Term::free(&fresh, ty.subst(&tsub)));
        }
        let prep = |t: &Term| t.subst_type(&tsub).subst_free(&rename);
        let copy_generalized = |used: &mut HashSet<String>| -> HashMap<String, Term> {
            generalized
                .iter()
                .map(|(w, ty)| {
                    let fresh = fresh_name(&format!("{w}'"), used);
                    used.insert(fresh.clone());
                    (w.clone(), Term::free(&fresh, ty.clone()))
                })
                .collect()
        };
        // The goal instantiated at one argument tuple, with its own copies
        // of the generalized variables.
        let at = |tuple: &[Term], gen: HashMap<String, Term>| -> (Vec<Term>, Term) {
            let mut sub = gen;
            for (v, t) in replaced.iter().zip(tuple) {
                sub.insert(v.clone(), t.clone());
            }
            let prems = goal.premises.iter().map(|p| instantiate(p, &sub)).collect();
            let concl = match &motive {
                Some(m) => Term::apps(m.clone(), tuple.iter().cloned()),
                None => instantiate(&goal.conclusion, &sub),
            };
            (prems, concl)
        };

        let patterns: Vec<Term> = case.patterns.iter().map(prep).collect();
        let gen = copy_generalized(&mut used);
        let (own_prems, conclusion) = at(&patterns, gen);
        let mut premises = Vec::new();
        for h in &case.hypotheses {
            let tuple: Vec<Term> = h.iter().map(prep).collect();
            let gen = copy_generalized(&mut used);
            let (hp, hc) = at(&tuple, gen);
            let ih = if motive.is_some() { hc } else { hp.into_iter().rev().fold(hc, |acc, p| imp(p, acc)) };
            premises.push(ih);
        }
        premises.extend(own_prems);
        case_names.push(case.name.clone());
        subgoals.push(Goal { name: format!("{}.{}", goal.name, case.name), premises, conclusion });
        if let Some(limit) = timeout {
            if start.elapsed() >= limit {
                return fail(Timeout, format!("exceeded {} ms", limit.as_millis()));
            }
        }
    }
    Ok(SubgoalSet { scheme: scheme.name, case_names, subgoals })
}
