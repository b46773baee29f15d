//! Shared fixtures and an independent, deliberately naive formula evaluator.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use smart_induct::lifter::{Arg, Atom, Formula, Quantifier, Restriction, Sort};
use smart_induct::parser::parse_theory;
use smart_induct::pipeline::{screen, ScreenConfig, Survivor};
use smart_induct::tactic::Candidate;
use smart_induct::term::{Branch, Goal, Location, Term};
use smart_induct::theory::Theory;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load(name: &str) -> Theory {
    let src = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
    parse_theory(&src).unwrap()
}

pub fn running() -> Theory {
    load("rev_itrev.thy")
}

pub fn exact() -> ScreenConfig {
    ScreenConfig { timeout: None, ..Default::default() }
}

pub const EXTRA_THEORY: &str = r#"
datatype sw = On | Off
datatype 'a opt = Nope | Some 'a
fun pick :: "nat => sw => nat" where "pick n On = n" | "pick n Off = n"
fun zip2 :: "'a list => 'b list => nat" where
  "zip2 [] ys = 0"
| "zip2 (x # xs) [] = 0"
| "zip2 (x # xs) (y # ys) = Suc (zip2 xs ys)"
primrec get :: "'a opt => 'a list" where "get Nope = []" | "get (Some x) = [x]"
lemma pick_id: "pick m s = m"
lemma zip2_sym: "zip2 as bs = zip2 bs as"
lemma guarded: "zip2 xs ys = 0 ==> get o @ xs = xs"
"#;

/// Several small theories, each with at least one goal.
pub fn theories() -> Vec<Theory> {
    let mut out: Vec<Theory> =
        ["rev_itrev.thy", "lists.thy", "nat.thy", "trees.thy"].iter().map(|f| load(f)).collect();
    out.push(parse_theory(EXTRA_THEORY).unwrap());
    out
}

/// (theory index, goal, finalist) triples over all bundled theories.
pub fn contexts(theories: &[Theory]) -> Vec<(usize, Goal, Survivor)> {
    let mut out = Vec::new();
    for (i, thy) in theories.iter().enumerate() {
        for g in &thy.goals {
            let (finalists, _) = screen(g, thy, &exact());
            for s in finalists {
                out.push((i, g.clone(), s));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Num(usize),
    Rule(String),
    Tm(Term),
    Occ(Location, Vec<Branch>, Term),
}

/// Reference semantics: values are the objects themselves, domains are
/// rebuilt on every quantifier, and connectives evaluate both sides.
pub struct Naive<'a> {
    pub goal: &'a Goal,
    pub candidate: &'a Candidate,
    pub thy: &'a Theory,
}

fn all_subterms(t: &Term, out: &mut Vec<Term>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    if let Term::App(f, a) = t {
        all_subterms(f, out);
        all_subterms(a, out);
    }
}

fn positions(t: &Term, path: &mut Vec<Branch>, out: &mut Vec<(Vec<Branch>, Term)>) {
    out.push((path.clone(), t.clone()));
    if let Term::App(f, a) = t {
        path.push(Branch::Fun);
        positions(f, path, out);
        path.pop();
        path.push(Branch::Arg);
        positions(a, path, out);
        path.pop();
    }
}

fn spine_len(t: &Term) -> usize {
    match t {
        Term::App(f, _) => 1 + spine_len(f),
        _ => 0,
    }
}

fn mentions_const(t: &Term, c: &str) -> bool {
    match t {
        Term::Const(n, _) => n == c,
        Term::App(f, a) => mentions_const(f, c) || mentions_const(a, c),
        _ => false,
    }
}

/// Full-arity applications of `c` anywhere in `t`, as argument lists.
fn calls(t: &Term, c: &str, arity: usize, out: &mut Vec<Vec<Term>>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push((**a).clone());
        head = f;
    }
    args.reverse();
    if matches!(head, Term::Const(n, _) if n == c) && args.len() == arity && arity > 0 {
        out.push(args);
    }
    if let Term::App(f, a) = t {
        calls(f, c, arity, out);
        calls(a, c, arity, out);
    }
}

impl<'a> Naive<'a> {
    fn parts(&self) -> Vec<(Location, &Term)> {
        let mut v: Vec<(Location, &Term)> =
            self.goal.premises.iter().enumerate().map(|(i, p)| (Location::Premise(i), p)).collect();
        v.push((Location::Conclusion, &self.goal.conclusion));
        v
    }

    fn terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for (_, t) in self.parts() {
            all_subterms(t, &mut out);
        }
        out
    }

    fn occurrences(&self) -> Vec<Value> {
        let mut out = Vec::new();
        for (loc, t) in self.parts() {
            let mut ps = Vec::new();
            positions(t, &mut Vec::new(), &mut ps);
            out.extend(ps.into_iter().map(|(p, s)| Value::Occ(loc, p, s)));
        }
        out
    }

    fn number_bound(&self) -> usize {
        let arity = self.terms().iter().map(spine_len).max().unwrap_or(0);
        arity.max(self.candidate.induction_terms.len()).max(1)
    }

    fn domain(&self, sort: Sort, r: &Restriction, env: &[(String, Value)]) -> Vec<Value> {
        match sort {
            Sort::Number => (1..=self.number_bound()).map(Value::Num).collect(),
            Sort::Rule => self.candidate.rule.iter().cloned().map(Value::Rule).collect(),
            Sort::Term => match r {
                Restriction::InductionTerms => {
                    let terms = self.terms();
                    self.candidate
                        .induction_terms
                        .iter()
                        .filter_map(|v| terms.iter().find(|t| matches!(t, Term::Free(n, _) if n == v)))
                        .cloned()
                        .map(Value::Tm)
                        .collect()
                }
                _ => self.terms().into_iter().map(Value::Tm).collect(),
            },
            Sort::Occurrence => {
                let all = self.occurrences();
                match r {
                    Restriction::OccurrencesOf(v) => {
                        let Value::Tm(t) = lookup(env, v) else { panic!("term expected") };
                        all.into_iter().filter(|o| matches!(o, Value::Occ(_, _, s) if *s == t)).collect()
                    }
                    _ => all,
                }
            }
        }
    }

    fn fundef(&self, t: &Term) -> Option<&smart_induct::theory::FunDef> {
        match t {
            Term::Const(c, _) => self.thy.all_fundefs().find(|f| &f.name == c),
            _ => None,
        }
    }

    fn atom(&self, atom: Atom, v: &[Value]) -> bool {
        use Value::*;
        match (atom, v) {
            (Atom::IsRuleOf, [Rule(r), Occ(_, _, t)]) => {
                matches!(self.fundef(t), Some(f) if f.rule_bearing && format!("{}.induct", f.name) == *r)
            }
            (Atom::IsNthArgumentOf, [Occ(l2, p2, _), Num(n), Occ(l1, p1, t1)]) => {
                if matches!(t1, Term::App(..)) || l1 != l2 {
                    return false;
                }
                let k = p1.iter().rev().take_while(|b| **b == Branch::Fun).count();
                let mut node = p1[..p1.len() - k].to_vec();
                let mut found = false;
                for j in (1..=k).rev() {
                    let mut arg = node.clone();
                    arg.push(Branch::Arg);
                    if j == *n && arg == *p2 {
                        found = true;
                    }
                    node.push(Branch::Fun);
                }
                found
            }
            (Atom::IsNthInductionTerm, [Tm(t), Num(n)]) => {
                *n >= 1
                    && matches!(t, Term::Free(name, _) if self.candidate.induction_terms.get(*n - 1) == Some(name))
            }
            (Atom::IsFreeVariable, [Tm(t)]) => matches!(t, Term::Free(..)),
            (Atom::IsConstant, [Tm(t)]) => matches!(t, Term::Const(..)),
            (Atom::IsInArbitrary, [Tm(t)]) => {
                matches!(t, Term::Free(n, _) if self.candidate.arbitrary.contains(n))
            }
            (Atom::IsOfDatatype, [Tm(t)]) => match t.ty() {
                smart_induct::Type::Con(name, _) => self.thy.all_datatypes().any(|d| d.name == name),
                _ => false,
            },
            (Atom::OccursInConclusion, [Occ(l, _, _)]) => *l == Location::Conclusion,
            (Atom::IsRecursiveConstant, [Tm(t)]) => {
                matches!(self.fundef(t), Some(f) if f.equations.iter().any(|e| mentions_const(&e.rhs, &f.name)))
            }
            (Atom::SameTerm, [Occ(_, _, s), Tm(t)]) => s == t,
            (Atom::PatternMatchesOn, [Tm(t), Num(n)]) => match self.fundef(t) {
                Some(f) if *n >= 1 => f
                    .equations
                    .iter()
                    .any(|e| e.patterns.get(*n - 1).is_some_and(|p| !matches!(p, Term::Free(..)))),
                _ => false,
            },
            (Atom::ChangesInRecursion, [Tm(t), Num(n)]) => match self.fundef(t) {
                Some(f) if *n >= 1 => f.equations.iter().any(|e| {
                    let arity = e.patterns.len();
                    if *n > arity {
                        return false;
                    }
                    let mut cs = Vec::new();
                    calls(&e.rhs, &f.name, arity, &mut cs);
                    cs.iter().any(|args| args[*n - 1] != e.patterns[*n - 1])
                }),
                _ => false,
            },
            _ => panic!("ill-sorted atom {atom:?}"),
        }
    }

    pub fn eval(&self, f: &Formula) -> bool {
        self.go(f, &mut Vec::new())
    }

    fn go(&self, f: &Formula, env: &mut Vec<(String, Value)>) -> bool {
        match f {
            Formula::True => true,
            Formula::Not(x) => !self.go(x, env),
            Formula::And(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                x & y
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                x | y
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                !x | y
            }
            Formula::Quant { q, var, sort, restriction, body } => {
                let results: Vec<bool> = self
                    .domain(*sort, restriction, env)
                    .into_iter()
                    .map(|v| {
                        env.push((var.clone(), v));
                        let r = self.go(body, env);
                        env.pop();
                        r
                    })
                    .collect();
                match q {
                    Quantifier::Exists => results.iter().fold(false, |a, b| a | b),
                    Quantifier::Forall => results.iter().fold(true, |a, b| a & b),
                }
            }
            Formula::Atom(a, args) => {
                let vals: Vec<Value> = args
                    .iter()
                    .map(|x| match x {
                        Arg::Var(v) => lookup(env, v),
                        Arg::Num(n) => Value::Num(*n),
                    })
                    .collect();
                self.atom(*a, &vals)
            }
        }
    }
}

fn lookup(env: &[(String, Value)], v: &str) -> Value {
    env.iter().rev().find(|(n, _)| n == v).map(|(_, x)| x.clone()).expect("bound")
}

/// Random closed, well-sorted formula of depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    random_body(rng, depth, vec![])
}

/// Random well-sorted formula whose free variables come from `scope`.
pub fn random_body<R: Rng>(rng: &mut R, depth: usize, mut scope: Vec<(String, Sort)>) -> Formula {
    let mut fresh = 0;
    gen(rng, depth, &mut scope, &mut fresh)
}

fn gen<R: Rng>(rng: &mut R, depth: usize, scope: &mut Vec<(String, Sort)>, fresh: &mut usize) -> Formula {
    if depth == 0 {
        return leaf(rng, scope);
    }
    match rng.gen_range(0..10) {
        0 => leaf(rng, scope),
        1 => Formula::not(gen(rng, depth - 1, scope, fresh)),
        2 => Formula::and(gen(rng, depth - 1, scope, fresh), gen(rng, depth - 1, scope, fresh)),
        3 => Formula::or(gen(rng, depth - 1, scope, fresh), gen(rng, depth - 1, scope, fresh)),
        4 => Formula::implies(gen(rng, depth - 1, scope, fresh), gen(rng, depth - 1, scope, fresh)),
        _ => {
            let sort = *Sort::ALL.choose(rng).unwrap();
            let terms: Vec<String> = scope.iter().filter(|(_, s)| *s == Sort::Term).map(|(n, _)| n.clone()).collect();
            let restriction = match sort {
                Sort::Term if rng.gen_bool(0.4) => Restriction::InductionTerms,
                Sort::Occurrence if !terms.is_empty() && rng.gen_bool(0.6) => {
                    Restriction::OccurrencesOf(terms.choose(rng).unwrap().clone())
                }
                _ => Restriction::Unrestricted,
            };
            *fresh += 1;
            let var = format!("v{fresh}");
            scope.push((var.clone(), sort));
            let body = gen(rng, depth - 1, scope, fresh);
            scope.pop();
            let q = if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
            Formula::quant(q, &var, sort, restriction, body)
        }
    }
}

fn leaf<R: Rng>(rng: &mut R, scope: &[(String, Sort)]) -> Formula {
    let usable: Vec<Atom> = Atom::ALL
        .into_iter()
        .filter(|a| a.signature().iter().all(|s| *s == Sort::Number || scope.iter().any(|(_, t)| t == s)))
        .collect();
    if usable.is_empty() || rng.gen_bool(0.1) {
        return Formula::True;
    }
    let atom = *usable.choose(rng).unwrap();
    let args = atom
        .signature()
        .iter()
        .map(|s| {
            let vars: Vec<&String> = scope.iter().filter(|(_, t)| t == s).map(|(n, _)| n).collect();
            if *s == Sort::Number && (vars.is_empty() || rng.gen_bool(0.3)) {
                Arg::Num(rng.gen_range(0..=3))
            } else {
                Arg::Var(vars.choose(rng).unwrap().to_string())
            }
        })
        .collect();
    Formula::Atom(atom, args)
}
