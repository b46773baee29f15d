//! Terms, types, goals and occurrences.
//!
//! The language is first order in shape: variables, schematic variables,
//! constants and curried application. There are no binders; universally
//! generalized variables inside subgoals are ordinary free variables with
//! fresh names.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Name of the function type constructor.
pub const FUN: &str = "fun";
pub const BOOL: &str = "bool";

/// Simple types: type variables (`'a`) and type constructor applications.
///
/// Function types are `Con("fun", [dom, cod])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Con(String, Vec<Type>),
}

impl Type {
    pub fn var(name: &str) -> Type {
        debug_assert!(name.starts_with('\'') && name.len() > 1);
        Type::Var(name.to_string())
    }

    pub fn con(name: &str, args: Vec<Type>) -> Type {
        Type::Con(name.to_string(), args)
    }

    pub fn bool() -> Type {
        Type::con(BOOL, vec![])
    }

    pub fn fun(dom: Type, cod: Type) -> Type {
        Type::Con(FUN.to_string(), vec![dom, cod])
    }

    /// `a1 => a2 => ... => cod`
    pub fn fun_n(args: impl IntoIterator<Item = Type>, cod: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(cod, |acc, a| Type::fun(a, acc))
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Type::Con(n, a) if n == BOOL && a.is_empty())
    }

    pub fn dest_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Con(n, a) if n == FUN && a.len() == 2 => Some((&a[0], &a[1])),
            _ => None,
        }
    }

    pub fn is_fun(&self) -> bool {
        self.dest_fun().is_some()
    }

    /// Splits `a1 => ... => an => r` into `([a1..an], r)` where `r` is not a
    /// function type.
    pub fn strip_fun(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut ty = self;
        while let Some((d, c)) = ty.dest_fun() {
            args.push(d);
            ty = c;
        }
        (args, ty)
    }

    /// Head constructor name, when this is a non-function constructor type.
    pub fn head(&self) -> Option<&str> {
        match self {
            Type::Con(n, _) if n != FUN => Some(n),
            _ => None,
        }
    }

    pub fn subst(&self, sub: &HashMap<String, Type>) -> Type {
        match self {
            Type::Var(v) => sub.get(v).cloned().unwrap_or_else(|| self.clone()),
            Type::Con(n, args) => Type::Con(n.clone(), args.iter().map(|a| a.subst(sub)).collect()),
        }
    }

    pub fn type_vars(&self, out: &mut Vec<String>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Type::Con(_, args) => args.iter().for_each(|a| a.type_vars(out)),
        }
    }

    /// One-way matching: extends `sub` so that `self.subst(sub) == target`.
    pub fn match_into(&self, target: &Type, sub: &mut HashMap<String, Type>) -> bool {
        match (self, target) {
            (Type::Var(v), _) => match sub.get(v) {
                Some(bound) => bound == target,
                None => {
                    sub.insert(v.clone(), target.clone());
                    true
                }
            },
            (Type::Con(n1, a1), Type::Con(n2, a2)) => {
                n1 == n2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| x.match_into(y, sub))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::print::fmt_type(self, f)
    }
}

/// A term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Free(String, Type),
    Schematic(String, Type),
    Const(String, Type),
    App(Arc<Term>, Arc<Term>),
}

/// Step from an application node: 0 selects the function, 1 the argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    Fun = 0,
    Arg = 1,
}

impl Term {
    pub fn free(name: &str, ty: Type) -> Term {
        Term::Free(name.to_string(), ty)
    }

    pub fn schematic(name: &str, ty: Type) -> Term {
        Term::Schematic(name.to_string(), ty)
    }

    pub fn constant(name: &str, ty: Type) -> Term {
        Term::Const(name.to_string(), ty)
    }

    /// Application. Callers are responsible for type correctness; it is
    /// checked in debug builds.
    pub fn app(fun: Term, arg: Term) -> Term {
        debug_assert!(
            fun.ty().dest_fun().map(|(d, _)| *d == arg.ty()).unwrap_or(false),
            "ill-typed application {fun:?} to {arg:?}"
        );
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn ty(&self) -> Type {
        match self {
            Term::Free(_, t) | Term::Schematic(_, t) | Term::Const(_, t) => t.clone(),
            Term::App(f, _) => match f.ty() {
                Type::Con(n, mut a) if n == FUN && a.len() == 2 => a.pop().expect("codomain"),
                other => panic!("application of non-function type {other}"),
            },
        }
    }

    pub fn is_app(&self) -> bool {
        matches!(self, Term::App(..))
    }

    pub fn as_free(&self) -> Option<&str> {
        match self {
            Term::Free(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(n, _) => Some(n),
            _ => None,
        }
    }

    /// `f a1 .. an` into `(f, [a1..an])`.
    pub fn strip_comb(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn at_path(&self, path: &[Branch]) -> Option<&Term> {
        let mut t = self;
        for b in path {
            match (t, b) {
                (Term::App(f, _), Branch::Fun) => t = f,
                (Term::App(_, a), Branch::Arg) => t = a,
                _ => return None,
            }
        }
        Some(t)
    }

    /// Pre-order walk, function before argument. The visitor receives the
    /// path of each node.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&[Branch], &'a Term)) {
        fn go<'a>(t: &'a Term, path: &mut Vec<Branch>, visit: &mut dyn FnMut(&[Branch], &'a Term)) {
            visit(path, t);
            if let Term::App(f, a) = t {
                path.push(Branch::Fun);
                go(f, path, visit);
                path.pop();
                path.push(Branch::Arg);
                go(a, path, visit);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), visit)
    }

    pub fn contains_schematic(&self) -> bool {
        match self {
            Term::Schematic(..) => true,
            Term::App(f, a) => f.contains_schematic() || a.contains_schematic(),
            _ => false,
        }
    }

    /// Replaces free variables by name.
    pub fn subst_free(&self, sub: &HashMap<String, Term>) -> Term {
        if sub.is_empty() {
            return self.clone();
        }
        match self {
            Term::Free(n, _) => sub.get(n).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, a) => Term::App(Arc::new(f.subst_free(sub)), Arc::new(a.subst_free(sub))),
            _ => self.clone(),
        }
    }

    /// Instantiates type variables everywhere in the term.
    pub fn subst_type(&self, sub: &HashMap<String, Type>) -> Term {
        if sub.is_empty() {
            return self.clone();
        }
        match self {
            Term::Free(n, t) => Term::Free(n.clone(), t.subst(sub)),
            Term::Schematic(n, t) => Term::Schematic(n.clone(), t.subst(sub)),
            Term::Const(n, t) => Term::Const(n.clone(), t.subst(sub)),
            Term::App(f, a) => Term::App(Arc::new(f.subst_type(sub)), Arc::new(a.subst_type(sub))),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }

    pub fn free_names(&self, out: &mut HashSet<String>) {
        match self {
            Term::Free(n, _) => {
                out.insert(n.clone());
            }
            Term::App(f, a) => {
                f.free_names(out);
                a.free_names(out);
            }
            _ => {}
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::print::fmt_term(self, f)
    }
}

/// Distinct free variables in leftmost-outermost order.
pub fn free_variables(t: &Term) -> Vec<(String, Type)> {
    let mut out = Vec::new();
    collect_free(t, &mut out);
    out
}

fn collect_free(t: &Term, out: &mut Vec<(String, Type)>) {
    match t {
        Term::Free(n, ty) => {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), ty.clone()));
            }
        }
        Term::App(f, a) => {
            collect_free(f, out);
            collect_free(a, out);
        }
        _ => {}
    }
}

pub fn contains_subterm(haystack: &Term, needle: &Term) -> bool {
    if haystack == needle {
        return true;
    }
    match haystack {
        Term::App(f, a) => contains_subterm(f, needle) || contains_subterm(a, needle),
        _ => false,
    }
}

/// Which part of a goal an occurrence lives in. Premises order before the
/// conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Location {
    Premise(usize),
    Conclusion,
}

/// A position inside a goal together with the sub-term found there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub location: Location,
    pub path: Vec<Branch>,
    pub term: Term,
}

impl Occurrence {
    /// Number of arguments applied to this node, i.e. trailing function
    /// steps on its path.
    pub fn applied_args(&self) -> usize {
        self.path.iter().rev().take_while(|b| **b == Branch::Fun).count()
    }

    /// Path of the `n`-th (1-indexed) argument of the application whose head
    /// sits at this occurrence.
    pub fn nth_argument_path(&self, n: usize) -> Option<Vec<Branch>> {
        let k = self.applied_args();
        if n == 0 || n > k {
            return None;
        }
        let base = self.path.len() - k;
        let mut p = self.path[..base + (k - n)].to_vec();
        p.push(Branch::Arg);
        Some(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Goal {
    pub name: String,
    pub premises: Vec<Term>,
    pub conclusion: Term,
}

impl Goal {
    pub fn new(name: &str, premises: Vec<Term>, conclusion: Term) -> Goal {
        Goal { name: name.to_string(), premises, conclusion }
    }

    pub fn part(&self, loc: Location) -> Option<&Term> {
        match loc {
            Location::Premise(i) => self.premises.get(i),
            Location::Conclusion => Some(&self.conclusion),
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (Location, &Term)> {
        self.premises
            .iter()
            .enumerate()
            .map(|(i, p)| (Location::Premise(i), p))
            .chain(std::iter::once((Location::Conclusion, &self.conclusion)))
    }

    pub fn resolve(&self, loc: Location, path: &[Branch]) -> Option<&Term> {
        self.part(loc)?.at_path(path)
    }

    /// Free variables of premises then conclusion, first-occurrence order.
    pub fn free_variables(&self) -> Vec<(String, Type)> {
        let mut out = Vec::new();
        for (_, t) in self.parts() {
            collect_free(t, &mut out);
        }
        out
    }

    pub fn contains_schematic(&self) -> bool {
        self.parts().any(|(_, t)| t.contains_schematic())
    }

    /// Every occurrence of every sub-term, premises first, pre-order.
    pub fn all_occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (loc, t) in self.parts() {
            t.walk(&mut |path, sub| {
                out.push(Occurrence { location: loc, path: path.to_vec(), term: sub.clone() })
            });
        }
        out
    }
}

/// All positions in `goal` whose sub-term equals `t`, in path order.
pub fn occurrences_of(t: &Term, goal: &Goal) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (loc, part) in goal.parts() {
        part.walk(&mut |path, sub| {
            if sub == t {
                out.push(Occurrence { location: loc, path: path.to_vec(), term: sub.clone() })
            }
        });
    }
    out
}

pub fn contains_schematic(g: &Goal) -> bool {
    g.contains_schematic()
}

/// Picks a name based on `base` that is not in `used`, adding primes.
pub fn fresh_name(base: &str, used: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    name
}
