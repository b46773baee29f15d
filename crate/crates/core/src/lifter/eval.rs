use std::collections::HashMap;

use super::{Arg, Atom, Formula, Quantifier, Restriction, Sort};
use crate::tactic::{Candidate, SubgoalSet};
use crate::term::{Goal, Location, Occurrence, Term};
use crate::theory::{FunDef, Theory};

/// Finite domains of one goal, shared by every candidate on that goal.
#[derive(Clone, Debug)]
pub struct Domains {
    /// Distinct sub-terms, first occurrence first.
    pub terms: Vec<Term>,
    pub occurrences: Vec<Occurrence>,
    /// Index into `terms` of each occurrence's sub-term.
    pub occurrence_term: Vec<usize>,
    /// Occurrences of each term, in order.
    pub occurrences_of: Vec<Vec<usize>>,
    pub max_arity: usize,
}

impl Domains {
    pub fn new(goal: &Goal) -> Domains {
        let occurrences = goal.all_occurrences();
        let mut terms: Vec<Term> = Vec::new();
        let mut index: HashMap<&Term, usize> = HashMap::new();
        let mut occurrence_term = Vec::with_capacity(occurrences.len());
        for o in &occurrences {
            let i = *index.entry(&o.term).or_insert_with(|| {
                terms.push(o.term.clone());
                terms.len() - 1
            });
            occurrence_term.push(i);
        }
        let mut occurrences_of = vec![Vec::new(); terms.len()];
        for (o, &t) in occurrence_term.iter().enumerate() {
            occurrences_of[t].push(o);
        }
        let max_arity = occurrences.iter().map(Occurrence::applied_args).max().unwrap_or(0);
        Domains { terms, occurrences, occurrence_term, occurrences_of, max_arity }
    }

    pub fn term_index(&self, t: &Term) -> Option<usize> {
        self.terms.iter().position(|x| x == t)
    }
}

pub struct EvalContext<'a> {
    pub goal: &'a Goal,
    pub subgoals: &'a SubgoalSet,
    pub candidate: &'a Candidate,
    pub thy: &'a Theory,
    pub number_bound: usize,
    pub domains: &'a Domains,
    /// Term indices of the candidate's induction terms, in order.
    pub induction_terms: Vec<usize>,
    pub rules: Vec<String>,
}

impl<'a> EvalContext<'a> {
    pub fn new(
        goal: &'a Goal,
        subgoals: &'a SubgoalSet,
        candidate: &'a Candidate,
        thy: &'a Theory,
        domains: &'a Domains,
    ) -> EvalContext<'a> {
        let free = goal.free_variables();
        let induction_terms = candidate
            .induction_terms
            .iter()
            .filter_map(|v| {
                let (n, ty) = free.iter().find(|(n, _)| n == v)?;
                domains.term_index(&Term::free(n, ty.clone()))
            })
            .collect();
        let number_bound = domains.max_arity.max(candidate.induction_terms.len()).max(1);
        EvalContext {
            goal,
            subgoals,
            candidate,
            thy,
            number_bound,
            domains,
            induction_terms,
            rules: candidate.rule.iter().cloned().collect(),
        }
    }

    /// Values a quantifier of this sort ranges over, given the current
    /// bindings.
    pub fn domain(&self, sort: Sort, restriction: &Restriction, env: &[(&str, usize)]) -> Vec<usize> {
        match (sort, restriction) {
            (Sort::Number, _) => (1..=self.number_bound).collect(),
            (Sort::Rule, _) => (0..self.rules.len()).collect(),
            (Sort::Term, Restriction::InductionTerms) => self.induction_terms.clone(),
            (Sort::Term, _) => (0..self.domains.terms.len()).collect(),
            (Sort::Occurrence, Restriction::OccurrencesOf(t)) => self.domains.occurrences_of[lookup(env, t)].clone(),
            (Sort::Occurrence, _) => (0..self.domains.occurrences.len()).collect(),
        }
    }

    fn fundef_of_term(&self, t: usize) -> Option<&FunDef> {
        self.domains.terms[t].as_const().and_then(|c| self.thy.fundef(c))
    }

    pub fn atom(&self, atom: Atom, args: &[usize]) -> bool {
        let d = self.domains;
        match atom {
            Atom::IsRuleOf => {
                let t = d.occurrence_term[args[1]];
                self.fundef_of_term(t).is_some_and(|f| f.rule_bearing && f.rule_name() == self.rules[args[0]])
            }
            Atom::IsNthArgumentOf => {
                let (arg, n, head) = (&d.occurrences[args[0]], args[1], &d.occurrences[args[2]]);
                !head.term.is_app()
                    && arg.location == head.location
                    && head.nth_argument_path(n).is_some_and(|p| p == arg.path)
            }
            Atom::IsNthInductionTerm => args[1] >= 1 && self.induction_terms.get(args[1] - 1) == Some(&args[0]),
            Atom::IsFreeVariable => d.terms[args[0]].as_free().is_some(),
            Atom::IsConstant => d.terms[args[0]].as_const().is_some(),
            Atom::IsInArbitrary => d.terms[args[0]].as_free().is_some_and(|v| self.candidate.arbitrary.contains(v)),
            Atom::IsOfDatatype => self.thy.datatype_of_type(&d.terms[args[0]].ty()).is_some(),
            Atom::OccursInConclusion => d.occurrences[args[0]].location == Location::Conclusion,
            Atom::IsRecursiveConstant => self.fundef_of_term(args[0]).is_some_and(FunDef::is_recursive),
            Atom::SameTerm => d.occurrence_term[args[0]] == args[1],
            Atom::PatternMatchesOn => self.fundef_of_term(args[0]).is_some_and(|f| f.pattern_matches_on(args[1])),
            Atom::ChangesInRecursion => self.fundef_of_term(args[0]).is_some_and(|f| f.changes_in_recursion(args[1])),
        }
    }
}

fn lookup(env: &[(&str, usize)], v: &str) -> usize {
    env.iter().rev().find(|(n, _)| *n == v).map(|(_, x)| *x).expect("formula is closed")
}

/// Evaluates a closed, well-sorted formula.
pub fn eval(f: &Formula, ctx: &EvalContext<'_>) -> bool {
    let mut env = Vec::new();
    go(f, ctx, &mut env)
}

fn go<'f>(f: &'f Formula, ctx: &EvalContext<'_>, env: &mut Vec<(&'f str, usize)>) -> bool {
    match f {
        Formula::True => true,
        Formula::Not(x) => !go(x, ctx, env),
        Formula::And(a, b) => go(a, ctx, env) && go(b, ctx, env),
        Formula::Or(a, b) => go(a, ctx, env) || go(b, ctx, env),
        Formula::Implies(a, b) => !go(a, ctx, env) || go(b, ctx, env),
        Formula::Quant { q, var, sort, restriction, body } => {
            let dom = ctx.domain(*sort, restriction, env);
            let mut test = |x: usize| {
                env.push((var.as_str(), x));
                let r = go(body, ctx, env);
                env.pop();
                r
            };
            match q {
                Quantifier::Exists => dom.into_iter().any(&mut test),
                Quantifier::Forall => dom.into_iter().all(&mut test),
            }
        }
        Formula::Atom(atom, args) => {
            let vals: Vec<usize> = args
                .iter()
                .map(|a| match a {
                    Arg::Var(v) => lookup(env, v),
                    Arg::Num(n) => *n,
                })
                .collect();
            ctx.atom(*atom, &vals)
        }
    }
}
