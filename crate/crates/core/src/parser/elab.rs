//! Type inference for parsed inner syntax.
//!
//! First-order unification over type metavariables. Declared type variables
//! of the function being defined are rigid at its defining occurrence;
//! every other use of a polymorphic constant gets fresh metavariables.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::{span_at, split_imp, BinOp, PTerm, ParseError, Pos};
use crate::term::{Goal, Term, Type, FUN};
use crate::theory::{Equation, FunDef, Theory, NIL, SUC, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ITy {
    Meta(usize),
    Rigid(String),
    Con(String, Vec<ITy>),
}

impl ITy {
    fn fun(a: ITy, b: ITy) -> ITy {
        ITy::Con(FUN.into(), vec![a, b])
    }

    fn bool() -> ITy {
        ITy::Con("bool".into(), vec![])
    }

    fn from_rigid(t: &Type) -> ITy {
        match t {
            Type::Var(v) => ITy::Rigid(v.clone()),
            Type::Con(n, a) => ITy::Con(n.clone(), a.iter().map(ITy::from_rigid).collect()),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum ETerm {
    Free(String, ITy),
    Sch(String, ITy),
    Const(String, ITy),
    App(Box<ETerm>, Box<ETerm>),
}

pub(crate) struct OwnFun {
    pub name: String,
    pub declared: Option<Type>,
    pub rule_bearing: bool,
}

pub(crate) enum Mode {
    Lemma,
    Pattern,
    Rhs(HashSet<String>),
}

pub(crate) struct Elab<'t> {
    thy: &'t Theory,
    file: &'t Path,
    sol: Vec<Option<ITy>>,
    vars: HashMap<String, ITy>,
    schematics: HashMap<String, ITy>,
    seeds: HashMap<String, ITy>,
    own: Option<(String, ITy, ITy)>,
}

impl<'t> Elab<'t> {
    pub(crate) fn new(thy: &'t Theory, file: &'t Path) -> Self {
        Elab {
            thy,
            file,
            sol: Vec::new(),
            vars: HashMap::new(),
            schematics: HashMap::new(),
            seeds: HashMap::new(),
            own: None,
        }
    }

    fn err(&self, pos: Pos, msg: String) -> ParseError {
        ParseError::new(span_at(self.file, pos), msg, vec![])
    }

    fn fresh(&mut self) -> ITy {
        self.sol.push(None);
        ITy::Meta(self.sol.len() - 1)
    }

    fn instantiate_with(&mut self, t: &Type, map: &mut HashMap<String, ITy>) -> ITy {
        match t {
            Type::Var(v) => {
                if let Some(m) = map.get(v) {
                    return m.clone();
                }
                let m = self.fresh();
                map.insert(v.clone(), m.clone());
                m
            }
            Type::Con(n, a) => ITy::Con(n.clone(), a.iter().map(|x| self.instantiate_with(x, map)).collect()),
        }
    }

    fn instantiate(&mut self, t: &Type) -> ITy {
        self.instantiate_with(t, &mut HashMap::new())
    }

    /// Free variable types taken from an existing goal; type variables are
    /// shared within one call.
    pub(crate) fn seed_vars(&mut self, vars: &[(String, Type)]) {
        let mut map = HashMap::new();
        for (n, t) in vars {
            if !self.seeds.contains_key(n) {
                let it = self.instantiate_with(t, &mut map);
                self.seeds.insert(n.clone(), it);
            }
        }
    }

    fn shallow(&self, t: &ITy) -> ITy {
        let mut t = t.clone();
        while let ITy::Meta(m) = t {
            match &self.sol[m] {
                Some(s) => t = s.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: usize, t: &ITy) -> bool {
        match self.shallow(t) {
            ITy::Meta(n) => n == m,
            ITy::Rigid(_) => false,
            ITy::Con(_, a) => a.iter().any(|x| self.occurs(m, x)),
        }
    }

    fn unify(&mut self, a: &ITy, b: &ITy) -> bool {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (ITy::Meta(m), ITy::Meta(n)) if m == n => true,
            (ITy::Meta(m), _) => {
                if self.occurs(*m, &b) {
                    return false;
                }
                self.sol[*m] = Some(b.clone());
                true
            }
            (_, ITy::Meta(_)) => self.unify(&b, &a),
            (ITy::Rigid(x), ITy::Rigid(y)) => x == y,
            (ITy::Con(n1, a1), ITy::Con(n2, a2)) => {
                n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    pub(crate) fn zonk_ity(&self, t: &ITy) -> ITy {
        match self.shallow(t) {
            ITy::Con(n, a) => ITy::Con(n, a.iter().map(|x| self.zonk_ity(x)).collect()),
            other => other,
        }
    }

    /// Resolved type with unsolved metavariables shown as `'?N`, used for
    /// messages and for the propositional check.
    pub(crate) fn zonk(&self, t: &ITy) -> Type {
        match self.zonk_ity(t) {
            ITy::Meta(m) => Type::Var(format!("'?{m}")),
            ITy::Rigid(v) => Type::Var(v),
            ITy::Con(n, a) => Type::Con(n, a.iter().map(|x| self.zonk(x)).collect()),
        }
    }

    fn mismatch(&self, pos: Pos, expected: &ITy, found: &ITy) -> ParseError {
        self.err(
            pos,
            format!("type mismatch: expected {}, found {}", self.zonk(expected), self.zonk(found)),
        )
    }

    fn constant(&mut self, name: &str, pos: Pos) -> Result<ETerm, ParseError> {
        let info = self.thy.constant(name).ok_or_else(|| self.err(pos, format!("unknown constant {name}")))?;
        let ty = self.instantiate(&info.ty);
        Ok(ETerm::Const(name.to_string(), ty))
    }

    fn ident(&mut self, name: &str, pos: Pos, mode: &Mode) -> Result<ETerm, ParseError> {
        if let Some((own, _, use_ty)) = &self.own {
            if own == name {
                if matches!(mode, Mode::Pattern) {
                    return Err(self.err(pos, format!("pattern contains non-constructor {name}")));
                }
                return Ok(ETerm::Const(name.to_string(), use_ty.clone()));
            }
        }
        if let Some(info) = self.thy.constant(name) {
            if matches!(mode, Mode::Pattern) && !self.thy.is_constructor(name) {
                return Err(self.err(pos, format!("pattern contains non-constructor {name}")));
            }
            let ty = self.instantiate(&info.ty);
            return Ok(ETerm::Const(name.to_string(), ty));
        }
        if let Mode::Rhs(bound) = mode {
            if !bound.contains(name) {
                return Err(self.err(pos, format!("unknown constant {name}")));
            }
        }
        let ty = match self.vars.get(name) {
            Some(t) => t.clone(),
            None => {
                let t = match self.seeds.get(name) {
                    Some(s) => s.clone(),
                    None => self.fresh(),
                };
                self.vars.insert(name.to_string(), t.clone());
                t
            }
        };
        Ok(ETerm::Free(name.to_string(), ty))
    }

    fn apply(&mut self, pos: Pos, f: (ETerm, ITy), a: (ETerm, ITy)) -> Result<(ETerm, ITy), ParseError> {
        let r = self.fresh();
        let expected = ITy::fun(a.1.clone(), r.clone());
        if !self.unify(&f.1, &expected) {
            let f_ty = self.shallow(&f.1);
            return Err(match f_ty {
                ITy::Con(ref n, ref args) if n == FUN => self.mismatch(pos, &args[0], &a.1),
                _ => self.err(pos, format!("cannot apply a term of type {} to an argument", self.zonk(&f.1))),
            });
        }
        Ok((ETerm::App(Box::new(f.0), Box::new(a.0)), r))
    }

    pub(crate) fn elab(&mut self, p: &PTerm, mode: &Mode) -> Result<(ETerm, ITy), ParseError> {
        match p {
            PTerm::Ident(n, pos) => {
                let t = self.ident(n, *pos, mode)?;
                let ty = ety(&t);
                Ok((t, ty))
            }
            PTerm::Schematic(n, pos) => {
                if !matches!(mode, Mode::Lemma) {
                    return Err(self.err(*pos, "schematic variables are only allowed in goals".into()));
                }
                let ty = match self.schematics.get(n) {
                    Some(t) => t.clone(),
                    None => {
                        let t = self.fresh();
                        self.schematics.insert(n.clone(), t.clone());
                        t
                    }
                };
                Ok((ETerm::Sch(n.clone(), ty.clone()), ty))
            }
            PTerm::Num(n, pos) => {
                let mut t = self.constant(ZERO, *pos)?;
                for _ in 0..*n {
                    let suc = self.constant(SUC, *pos)?;
                    t = ETerm::App(Box::new(suc), Box::new(t));
                }
                Ok((t, ITy::Con("nat".into(), vec![])))
            }
            PTerm::Nil(pos) => {
                let t = self.constant(NIL, *pos)?;
                let ty = ety(&t);
                Ok((t, ty))
            }
            PTerm::List(elems, pos) => {
                let mut acc = PTerm::Nil(*pos);
                for e in elems.iter().rev() {
                    acc = PTerm::Bin(BinOp::Cons, Box::new(e.clone()), Box::new(acc), e.pos());
                }
                self.elab(&acc, mode)
            }
            PTerm::App(f, a) => {
                let ef = self.elab(f, mode)?;
                let ea = self.elab(a, mode)?;
                self.apply(a.pos(), ef, ea)
            }
            PTerm::Bin(op, l, r, pos) => {
                if matches!(mode, Mode::Pattern) && *op != BinOp::Cons {
                    return Err(self.err(*pos, format!("pattern contains non-constructor {}", op.const_name())));
                }
                let c = self.constant(op.const_name(), *pos)?;
                let cty = ety(&c);
                let el = self.elab(l, mode)?;
                let partial = self.apply(l.pos(), (c, cty), el)?;
                let er = self.elab(r, mode)?;
                self.apply(r.pos(), partial, er)
            }
            PTerm::Section(op, pos) => {
                if matches!(mode, Mode::Pattern) {
                    return Err(self.err(*pos, "operator section in pattern".into()));
                }
                let t = self.constant(op.const_name(), *pos)?;
                let ty = ety(&t);
                Ok((t, ty))
            }
        }
    }

    /// Converts to kernel terms, naming unsolved metavariables `'a`, `'b`, ...
    /// in order of first appearance, skipping rigid names already in use.
    pub(crate) fn finish(&self, terms: &[ETerm]) -> Vec<Term> {
        self.finish_with(&[], terms).1
    }

    fn finish_with(&self, types: &[ITy], terms: &[ETerm]) -> (Vec<Type>, Vec<Term>) {
        let mut rigid = HashSet::new();
        for t in types {
            collect_rigid(&self.zonk_ity(t), &mut rigid);
        }
        for t in terms {
            each_type(t, &mut |ty| collect_rigid(&self.zonk_ity(ty), &mut rigid));
        }
        let mut namer = Namer { names: HashMap::new(), rigid, next: 0 };
        let tys = types.iter().map(|t| self.to_type(t, &mut namer)).collect();
        let tms = terms.iter().map(|t| self.to_term(t, &mut namer)).collect();
        (tys, tms)
    }

    fn to_type(&self, t: &ITy, namer: &mut Namer) -> Type {
        match self.zonk_ity(t) {
            ITy::Meta(m) => Type::Var(namer.name(m)),
            ITy::Rigid(v) => Type::Var(v),
            ITy::Con(n, a) => Type::Con(n, a.iter().map(|x| self.to_type(x, namer)).collect()),
        }
    }

    fn to_term(&self, t: &ETerm, namer: &mut Namer) -> Term {
        match t {
            ETerm::Free(n, ty) => Term::Free(n.clone(), self.to_type(ty, namer)),
            ETerm::Sch(n, ty) => Term::Schematic(n.clone(), self.to_type(ty, namer)),
            ETerm::Const(n, ty) => Term::Const(n.clone(), self.to_type(ty, namer)),
            ETerm::App(f, a) => {
                let f = self.to_term(f, namer);
                let a = self.to_term(a, namer);
                Term::app(f, a)
            }
        }
    }
}

struct Namer {
    names: HashMap<usize, String>,
    rigid: HashSet<String>,
    next: usize,
}

impl Namer {
    fn name(&mut self, m: usize) -> String {
        if let Some(n) = self.names.get(&m) {
            return n.clone();
        }
        loop {
            let n = self.next;
            self.next += 1;
            let letter = (b'a' + (n % 26) as u8) as char;
            let cand = if n < 26 { format!("'{letter}") } else { format!("'{letter}{}", n / 26) };
            if !self.rigid.contains(&cand) {
                self.names.insert(m, cand.clone());
                return cand;
            }
        }
    }
}

fn collect_rigid(t: &ITy, out: &mut HashSet<String>) {
    match t {
        ITy::Rigid(v) => {
            out.insert(v.clone());
        }
        ITy::Con(_, a) => a.iter().for_each(|x| collect_rigid(x, out)),
        ITy::Meta(_) => {}
    }
}

fn each_type(t: &ETerm, f: &mut dyn FnMut(&ITy)) {
    match t {
        ETerm::Free(_, ty) | ETerm::Sch(_, ty) | ETerm::Const(_, ty) => f(ty),
        ETerm::App(a, b) => {
            each_type(a, f);
            each_type(b, f);
        }
    }
}

fn ety(t: &ETerm) -> ITy {
    match t {
        ETerm::Free(_, ty) | ETerm::Sch(_, ty) | ETerm::Const(_, ty) => ty.clone(),
        ETerm::App(..) => unreachable!("only called on leaves"),
    }
}

fn pattern_vars(p: &PTerm, thy: &Theory, own: &str, out: &mut Vec<(String, Pos)>) {
    match p {
        PTerm::Ident(n, pos) if thy.constant(n).is_none() && n != own => out.push((n.clone(), *pos)),
        PTerm::List(es, _) => es.iter().for_each(|e| pattern_vars(e, thy, own, out)),
        PTerm::App(f, a) => {
            pattern_vars(f, thy, own, out);
            pattern_vars(a, thy, own, out);
        }
        PTerm::Bin(_, l, r, _) => {
            pattern_vars(l, thy, own, out);
            pattern_vars(r, thy, own, out);
        }
        _ => {}
    }
}

pub(crate) fn elab_fundef(thy: &Theory, file: &Path, own: OwnFun, eqs: &[PTerm]) -> Result<FunDef, ParseError> {
    let mut el = Elab::new(thy, file);
    // Type at the defining occurrence and at recursive calls.
    let (def_ty, self_meta) = match &own.declared {
        Some(t) => (ITy::from_rigid(t), None),
        None => {
            let m = el.fresh();
            (m.clone(), Some(m))
        }
    };
    let mut arity = None;
    let mut parts: Vec<(Vec<ETerm>, ETerm)> = Vec::new();
    for eq in eqs {
        let PTerm::Bin(BinOp::Eq, lhs, rhs, _) = eq else {
            return Err(el.err(eq.pos(), format!("expected a defining equation for {}", own.name)));
        };
        let (head, pats) = lhs.strip_app();
        match head {
            PTerm::Ident(n, _) if *n == own.name => {}
            _ => return Err(el.err(lhs.pos(), format!("equation must define {}", own.name))),
        }
        match arity {
            None => arity = Some(pats.len()),
            Some(a) if a != pats.len() => {
                return Err(el.err(lhs.pos(), "equations have different numbers of arguments".into()))
            }
            _ => {}
        }
        if pats.is_empty() {
            return Err(el.err(lhs.pos(), format!("equation for {} has no arguments", own.name)));
        }
        let mut pvars = Vec::new();
        for p in &pats {
            pattern_vars(p, thy, &own.name, &mut pvars);
        }
        let mut bound = HashSet::new();
        for (v, pos) in &pvars {
            if !bound.insert(v.clone()) {
                return Err(el.err(*pos, format!("variable {v} occurs twice in patterns")));
            }
        }
        el.vars.clear();
        let rec_ty = match &own.declared {
            Some(t) => el.instantiate(t),
            None => self_meta.clone().expect("meta"),
        };
        el.own = Some((own.name.clone(), def_ty.clone(), def_ty.clone()));
        let mut acc = (ETerm::Const(own.name.clone(), def_ty.clone()), def_ty.clone());
        let mut epats = Vec::new();
        for p in &pats {
            let ep = el.elab(p, &Mode::Pattern)?;
            epats.push(ep.0.clone());
            acc = el.apply(p.pos(), acc, ep)?;
        }
        el.own = Some((own.name.clone(), def_ty.clone(), rec_ty));
        let erhs = el.elab(rhs, &Mode::Rhs(bound))?;
        if !el.unify(&acc.1, &erhs.1) {
            return Err(el.mismatch(rhs.pos(), &acc.1, &erhs.1));
        }
        parts.push((epats, erhs.0));
    }
    let flat: Vec<ETerm> = parts.iter().flat_map(|(ps, r)| ps.iter().cloned().chain([r.clone()])).collect();
    let (tys, terms) = el.finish_with(&[def_ty], &flat);
    let mut it = terms.into_iter();
    let equations = parts
        .iter()
        .map(|(ps, _)| {
            let patterns: Vec<Term> = it.by_ref().take(ps.len()).collect();
            let rhs = it.next().expect("rhs");
            Equation { patterns, rhs }
        })
        .collect();
    Ok(FunDef { name: own.name, ty: tys[0].clone(), equations, rule_bearing: own.rule_bearing })
}

pub(crate) fn elab_lemma(thy: &Theory, file: &Path, name: &str, p: &PTerm) -> Result<Goal, ParseError> {
    let mut el = Elab::new(thy, file);
    let mut parts = Vec::new();
    for part in split_imp(p) {
        let (t, ty) = el.elab(part, &Mode::Lemma)?;
        if !el.unify(&ty, &ITy::bool()) {
            return Err(ParseError::new(
                span_at(file, part.pos()),
                format!("goal must be propositional, found type {}", el.zonk(&ty)),
                vec!["a term of type bool".into()],
            ));
        }
        parts.push(t);
    }
    let mut terms = el.finish(&parts);
    let conclusion = terms.pop().expect("conclusion");
    Ok(Goal::new(name, terms, conclusion))
}
