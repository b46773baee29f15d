//! Parser for theory files and goal expressions.
//!
//! ```text
//! datatype tree 'a = Leaf | Node "'a tree" 'a "'a tree"
//! primrec rev :: "'a list => 'a list" where
//!   "rev [] = []"
//! | "rev (x # xs) = rev xs @ [x]"
//! fun itrev :: "'a list => 'a list => 'a list" where ...
//! lemma itrev_rev: "itrev xs ys = rev xs @ ys"
//! ```
//!
//! Inner syntax (inside quotes) has the fixed infix table `==>` (right),
//! `=`, `#` and `@` (both right), then application. `[a, b]` is list
//! notation and numerals abbreviate `Suc` chains.

mod elab;
mod lexer;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::term::{Term, Type};
use crate::theory::{Constructor, DatatypeDef, Theory};
use elab::{Elab, Mode, OwnFun};
use lexer::{lex_inner, lex_outer, ITok, Spanned, Tok};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: &Path, line: usize, column: usize) -> SourceSpan {
        SourceSpan { file: file.to_path_buf(), line, column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: String, expected: Vec<String>) -> ParseError {
        debug_assert!(!message.is_empty());
        ParseError { span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// Where each declaration starts.
#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    pub decls: Vec<(String, SourceSpan)>,
}

impl SourceMap {
    pub fn line_of(&self, name: &str) -> Option<usize> {
        self.decls.iter().find(|(n, _)| n == name).map(|(_, s)| s.line)
    }
}

const KEYWORDS: [&str; 5] = ["datatype", "primrec", "fun", "lemma", "where"];
const DEFAULT_FILE: &str = "<input>";

pub fn parse_theory(source: &str) -> Result<Theory, ParseError> {
    parse_theory_with_spans(source, Path::new(DEFAULT_FILE)).map(|(t, _)| t)
}

pub fn parse_theory_with_spans(source: &str, file: &Path) -> Result<(Theory, SourceMap), ParseError> {
    let toks = lex_outer(source, file)?;
    let mut p = OuterParser { toks, pos: 0, file, thy: Theory::new(), map: SourceMap::default() };
    p.theory()?;
    Ok((p.thy, p.map))
}

/// Parses a standalone expression against `ctx`. Variables that occur in
/// the context's lemmas take their types from there.
pub fn parse_goal_expr(source: &str, ctx: &Theory) -> Result<Term, ParseError> {
    let file = Path::new(DEFAULT_FILE);
    let toks = lex_inner(source, file, 1, 1)?;
    let mut ip = InnerParser { toks, pos: 0, file };
    let pt = ip.parse_all()?;
    let mut el = Elab::new(ctx, file);
    for g in &ctx.goals {
        el.seed_vars(&g.free_variables());
    }
    let (et, ty) = el.elab(&pt, &Mode::Lemma)?;
    let ty = el.zonk(&ty);
    if ty.is_fun() {
        return Err(ParseError::new(
            SourceSpan::new(file, 1, 1),
            "goal must be propositional".into(),
            vec!["a term of type bool".into()],
        ));
    }
    let mut out = el.finish(&[et]);
    Ok(out.pop().expect("one term"))
}

/// Parses a type in the inner syntax.
pub fn parse_type(source: &str, ctx: &Theory) -> Result<Type, ParseError> {
    let file = Path::new(DEFAULT_FILE);
    let toks = lex_inner(source, file, 1, 1)?;
    let mut ip = InnerParser { toks, pos: 0, file };
    let ty = ip.ty(ctx, None)?;
    ip.expect_eof()?;
    Ok(ty)
}

/// Untyped inner syntax tree.
#[derive(Clone, Debug)]
pub(crate) enum PTerm {
    Ident(String, Pos),
    Schematic(String, Pos),
    Num(u32, Pos),
    Nil(Pos),
    List(Vec<PTerm>, Pos),
    App(Box<PTerm>, Box<PTerm>),
    Bin(BinOp, Box<PTerm>, Box<PTerm>, Pos),
    /// `(=)`, `(#)` and friends.
    Section(BinOp, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    Imp,
    Eq,
    Cons,
    Append,
}

impl BinOp {
    pub(crate) fn const_name(self) -> &'static str {
        use crate::theory::*;
        match self {
            BinOp::Imp => IMP,
            BinOp::Eq => EQ,
            BinOp::Cons => CONS,
            BinOp::Append => APPEND,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PTerm {
    pub(crate) fn pos(&self) -> Pos {
        match self {
            PTerm::Ident(_, p)
            | PTerm::Schematic(_, p)
            | PTerm::Num(_, p)
            | PTerm::Nil(p)
            | PTerm::List(_, p)
            | PTerm::Bin(_, _, _, p)
            | PTerm::Section(_, p) => *p,
            PTerm::App(f, _) => f.pos(),
        }
    }

    /// `f a1 .. an` spine.
    pub(crate) fn strip_app(&self) -> (&PTerm, Vec<&PTerm>) {
        let mut args = Vec::new();
        let mut t = self;
        while let PTerm::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }
}

struct InnerParser<'f> {
    toks: Vec<Spanned<ITok>>,
    pos: usize,
    file: &'f Path,
}

impl<'f> InnerParser<'f> {
    fn peek(&self) -> &ITok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> Pos {
        let t = &self.toks[self.pos];
        Pos { line: t.line, col: t.col }
    }

    fn bump(&mut self) -> ITok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: String, expected: Vec<String>) -> ParseError {
        let p = self.here();
        ParseError::new(SourceSpan::new(self.file, p.line, p.col), msg, expected)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(
            format!("unexpected {}", self.peek().describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, t: ITok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&t.describe()]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == ITok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of quoted text"]))
        }
    }

    fn parse_all(&mut self) -> Result<PTerm, ParseError> {
        let t = self.prop()?;
        self.expect_eof()?;
        Ok(t)
    }

    fn prop(&mut self) -> Result<PTerm, ParseError> {
        let lhs = self.eqn()?;
        if *self.peek() == ITok::Imp {
            let pos = self.here();
            self.bump();
            let rhs = self.prop()?;
            return Ok(PTerm::Bin(BinOp::Imp, Box::new(lhs), Box::new(rhs), pos));
        }
        Ok(lhs)
    }

    fn eqn(&mut self) -> Result<PTerm, ParseError> {
        let lhs = self.cons()?;
        if *self.peek() == ITok::Eq {
            let pos = self.here();
            self.bump();
            let rhs = self.cons()?;
            return Ok(PTerm::Bin(BinOp::Eq, Box::new(lhs), Box::new(rhs), pos));
        }
        Ok(lhs)
    }

    fn cons(&mut self) -> Result<PTerm, ParseError> {
        let lhs = self.app()?;
        let op = match self.peek() {
            ITok::Hash => BinOp::Cons,
            ITok::At => BinOp::Append,
            _ => return Ok(lhs),
        };
        let pos = self.here();
        self.bump();
        let rhs = self.cons()?;
        Ok(PTerm::Bin(op, Box::new(lhs), Box::new(rhs), pos))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            ITok::Ident(_) | ITok::Schematic(_) | ITok::Num(_) | ITok::LParen | ITok::LBrack
        )
    }

    fn app(&mut self) -> Result<PTerm, ParseError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = PTerm::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<PTerm, ParseError> {
        let pos = self.here();
        match self.peek().clone() {
            ITok::Ident(s) => {
                self.bump();
                Ok(PTerm::Ident(s, pos))
            }
            ITok::Schematic(s) => {
                self.bump();
                Ok(PTerm::Schematic(s, pos))
            }
            ITok::Num(n) => {
                self.bump();
                Ok(PTerm::Num(n, pos))
            }
            ITok::LParen => {
                self.bump();
                let section = match self.peek() {
                    ITok::Eq => Some(BinOp::Eq),
                    ITok::Hash => Some(BinOp::Cons),
                    ITok::At => Some(BinOp::Append),
                    ITok::Imp => Some(BinOp::Imp),
                    _ => None,
                };
                if let Some(op) = section {
                    self.bump();
                    self.expect(ITok::RParen)?;
                    return Ok(PTerm::Section(op, pos));
                }
                let t = self.prop()?;
                self.expect(ITok::RParen)?;
                Ok(t)
            }
            ITok::LBrack => {
                self.bump();
                if *self.peek() == ITok::RBrack {
                    self.bump();
                    return Ok(PTerm::Nil(pos));
                }
                let mut elems = vec![self.prop()?];
                while *self.peek() == ITok::Comma {
                    self.bump();
                    elems.push(self.prop()?);
                }
                self.expect(ITok::RBrack)?;
                Ok(PTerm::List(elems, pos))
            }
            _ => Err(self.unexpected(&["a term"])),
        }
    }

    /// Types: `ty := app (=> ty)?`, `app := atom ident*`. Type variables are
    /// checked against `params` when given.
    fn ty(&mut self, thy: &Theory, params: Option<&[String]>) -> Result<Type, ParseError> {
        let dom = self.ty_app(thy, params)?;
        if *self.peek() == ITok::Arrow {
            self.bump();
            let cod = self.ty(thy, params)?;
            return Ok(Type::fun(dom, cod));
        }
        Ok(dom)
    }

    fn ty_app(&mut self, thy: &Theory, params: Option<&[String]>) -> Result<Type, ParseError> {
        let mut args: Vec<Type> = match self.peek().clone() {
            ITok::TyVar(v) => {
                if params.is_some_and(|ps| !ps.contains(&v)) {
                    return Err(self.error(format!("type variable {v} is not a parameter"), vec![]));
                }
                self.bump();
                vec![Type::Var(v)]
            }
            ITok::Ident(_) => vec![],
            ITok::LParen => {
                self.bump();
                let mut v = vec![self.ty(thy, params)?];
                while *self.peek() == ITok::Comma {
                    self.bump();
                    v.push(self.ty(thy, params)?);
                }
                self.expect(ITok::RParen)?;
                v
            }
            _ => return Err(self.unexpected(&["a type"])),
        };
        while let ITok::Ident(name) = self.peek().clone() {
            let arity = thy
                .type_arity(&name)
                .ok_or_else(|| self.error(format!("unknown type {name}"), vec![]))?;
            if arity != args.len() {
                return Err(self.error(
                    format!("type {name} expects {arity} argument(s), got {}", args.len()),
                    vec![],
                ));
            }
            self.bump();
            args = vec![Type::Con(name, args)];
        }
        if args.len() != 1 {
            return Err(self.unexpected(&["a type constructor"]));
        }
        Ok(args.pop().expect("one type"))
    }
}

struct OuterParser<'f> {
    toks: Vec<Spanned<Tok>>,
    pos: usize,
    file: &'f Path,
    thy: Theory,
    map: SourceMap,
}

impl<'f> OuterParser<'f> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        let t = &self.toks[self.pos];
        SourceSpan::new(self.file, t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError::new(self.span(), msg, vec![])
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.span(),
            format!("unexpected {}", self.peek().describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn is_keyword(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if KEYWORDS.contains(&s.as_str()))
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                if s.contains('.') {
                    return Err(self.error(format!("{what} name `{s}` may not contain `.`")));
                }
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&t.describe()]))
        }
    }

    fn string(&mut self) -> Result<(String, usize, usize), ParseError> {
        match self.peek().clone() {
            Tok::Str(s, l, c) => {
                self.bump();
                Ok((s, l, c))
            }
            _ => Err(self.unexpected(&["quoted string"])),
        }
    }

    fn inner(&self, s: &str, line: usize, col: usize) -> Result<InnerParser<'f>, ParseError> {
        Ok(InnerParser { toks: lex_inner(s, self.file, line, col)?, pos: 0, file: self.file })
    }

    fn theory(&mut self) -> Result<(), ParseError> {
        loop {
            let start = self.span();
            match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Ident(k) if k == "datatype" => {
                    self.bump();
                    let name = self.datatype()?;
                    self.map.decls.push((name, start));
                }
                Tok::Ident(k) if k == "primrec" || k == "fun" => {
                    self.bump();
                    let name = self.fundef(k == "fun")?;
                    self.map.decls.push((name, start));
                }
                Tok::Ident(k) if k == "lemma" => {
                    self.bump();
                    let name = self.lemma()?;
                    self.map.decls.push((name, start));
                }
                _ => return Err(self.unexpected(&["`datatype`", "`primrec`", "`fun`", "`lemma`"])),
            }
        }
    }

    fn datatype(&mut self) -> Result<String, ParseError> {
        let mut params = Vec::new();
        while let Tok::TyVar(v) = self.peek().clone() {
            self.bump();
            params.push(v);
        }
        let name_span = self.span();
        let name = self.name("datatype name")?;
        if !params.is_empty() && matches!(self.peek(), Tok::TyVar(_)) {
            return Err(self.error("type parameters given both before and after the name".into()));
        }
        while let Tok::TyVar(v) = self.peek().clone() {
            self.bump();
            params.push(v);
        }
        let mut seen = HashSet::new();
        for p in &params {
            if !seen.insert(p) {
                return Err(ParseError::new(name_span, format!("duplicate type parameter {p}"), vec![]));
            }
        }
        if self.thy.type_arity(&name).is_some() {
            return Err(ParseError::new(name_span, format!("duplicate type {name}"), vec![]));
        }
        self.expect(Tok::Eq)?;
        // Registered early so constructor arguments may refer to it.
        self.thy.datatypes.push(DatatypeDef { name: name.clone(), params: params.clone(), constructors: vec![] });
        let mut ctors: Vec<Constructor> = Vec::new();
        loop {
            let cspan = self.span();
            let cname = self.name("constructor name")?;
            if self.thy.constant(&cname).is_some() || ctors.iter().any(|c| c.name == cname) {
                return Err(ParseError::new(cspan, format!("duplicate constant {cname}"), vec![]));
            }
            let mut args = Vec::new();
            loop {
                if self.is_keyword() {
                    break;
                }
                match self.peek().clone() {
                    Tok::TyVar(v) => {
                        if !params.contains(&v) {
                            return Err(self.error(format!("type variable {v} is not a parameter")));
                        }
                        self.bump();
                        args.push(Type::Var(v));
                    }
                    Tok::Ident(t) => {
                        match self.thy.type_arity(&t) {
                            Some(0) => {}
                            Some(n) => {
                                return Err(self.error(format!("type {t} expects {n} argument(s), got 0")))
                            }
                            None => return Err(self.error(format!("unknown type {t}"))),
                        }
                        self.bump();
                        args.push(Type::Con(t, vec![]));
                    }
                    Tok::Str(s, l, c) => {
                        self.bump();
                        let mut ip = self.inner(&s, l, c)?;
                        let ty = ip.ty(&self.thy, Some(&params))?;
                        ip.expect_eof()?;
                        args.push(ty);
                    }
                    _ => break,
                }
            }
            ctors.push(Constructor { name: cname, args });
            if *self.peek() == Tok::Bar {
                self.bump();
            } else {
                break;
            }
        }
        self.thy.datatypes.last_mut().expect("registered").constructors = ctors;
        Ok(name)
    }

    fn fundef(&mut self, rule_bearing: bool) -> Result<String, ParseError> {
        let name_span = self.span();
        let name = self.name("function name")?;
        if self.thy.constant(&name).is_some() {
            return Err(ParseError::new(name_span, format!("duplicate constant {name}"), vec![]));
        }
        let declared = if *self.peek() == Tok::DoubleColon {
            self.bump();
            let (s, l, c) = self.string()?;
            let mut ip = self.inner(&s, l, c)?;
            let ty = ip.ty(&self.thy, None)?;
            ip.expect_eof()?;
            Some(ty)
        } else {
            None
        };
        match self.peek() {
            Tok::Ident(w) if w == "where" => {
                self.bump();
            }
            _ => return Err(self.unexpected(&["`where`"])),
        }
        let mut eqs = Vec::new();
        loop {
            let (s, l, c) = self.string()?;
            let mut ip = self.inner(&s, l, c)?;
            eqs.push(ip.parse_all()?);
            if *self.peek() == Tok::Bar {
                self.bump();
            } else {
                break;
            }
        }
        let own = OwnFun { name: name.clone(), declared, rule_bearing };
        let fd = elab::elab_fundef(&self.thy, self.file, own, &eqs)?;
        self.thy.fundefs.push(fd);
        Ok(name)
    }

    fn lemma(&mut self) -> Result<String, ParseError> {
        let name_span = self.span();
        let name = self.name("lemma name")?;
        if self.thy.goal(&name).is_some() {
            return Err(ParseError::new(name_span, format!("duplicate lemma {name}"), vec![]));
        }
        self.expect(Tok::Colon)?;
        let (s, l, c) = self.string()?;
        let mut ip = self.inner(&s, l, c)?;
        let pt = ip.parse_all()?;
        let goal = elab::elab_lemma(&self.thy, self.file, &name, &pt)?;
        self.thy.goals.push(goal);
        Ok(name)
    }
}

/// Splits a top-level `A ==> B ==> C` chain.
pub(crate) fn split_imp(p: &PTerm) -> Vec<&PTerm> {
    let mut out = Vec::new();
    let mut t = p;
    while let PTerm::Bin(BinOp::Imp, l, r, _) = t {
        out.push(&**l);
        t = r;
    }
    out.push(t);
    out
}

pub(crate) fn span_at(file: &Path, pos: Pos) -> SourceSpan {
    SourceSpan::new(file, pos.line, pos.col)
}

#[cfg(test)]
mod tests;
