//! Surface syntax. ASCII and Unicode connectives are interchangeable:
//! `!`/`¬`, `&`/`∧`, `|`/`∨`, `-->`/`→`, `EX`/`∃`, `ALL`/`∀`, `in`/`∈`.
//!
//! A quantifier body extends over `&` and `|` but stops at `-->`, so
//! `EX r : rule. True --> phi` reads as `(EX r : rule. True) --> phi`.
//! Implication is right associative.

use super::{Arg, Atom, Formula, Quantifier, Restriction, Sort};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct LifterError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Exists,
    Forall,
    In,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`-->`".into(),
            Tok::Exists => "`EX`".into(),
            Tok::Forall => "`ALL`".into(),
            Tok::In => "`in`".into(),
            Tok::Eof => "end of formula".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line0: usize) -> Result<Vec<Spanned>, LifterError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (line0, 1);
    let err = |line, column, message: String| LifterError { line, column, message };
    loop {
        while let Some(&c) = chars.peek() {
            if !c.is_whitespace() {
                break;
            }
            chars.next();
            if c == '\n' {
                line += 1;
                col = 1;
            } else if c != '\r' {
                col += 1;
            }
        }
        let (l, c0) = (line, col);
        let Some(c) = chars.next() else {
            out.push(Spanned { tok: Tok::Eof, line: l, col: c0 });
            return Ok(out);
        };
        col += 1;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '!' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Imp,
            '∃' => Tok::Exists,
            '∀' => Tok::Forall,
            '∈' => Tok::In,
            '-' => {
                if chars.next() == Some('-') && chars.next() == Some('>') {
                    col += 2;
                    Tok::Imp
                } else {
                    return Err(err(l, c0, "expected `-->`".into()));
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = c.to_string();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                Tok::Num(s.parse().map_err(|_| err(l, c0, format!("number `{s}` too large")))?)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = c.to_string();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_' || **d == '\'') {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                match s.as_str() {
                    "EX" => Tok::Exists,
                    "ALL" => Tok::Forall,
                    "in" => Tok::In,
                    _ => Tok::Ident(s),
                }
            }
            other => return Err(err(l, c0, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, line: l, col: c0 });
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Bound variables, innermost last.
    scope: Vec<(String, Sort)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> LifterError {
        let s = &self.toks[self.pos];
        LifterError { line: s.line, column: s.col, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), LifterError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LifterError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.error_here(format!("expected {what}, found {}", t.describe()))),
        }
    }

    fn sort_of(&self, v: &str) -> Option<Sort> {
        self.scope.iter().rev().find(|(n, _)| n == v).map(|(_, s)| *s)
    }

    fn implication(&mut self) -> Result<Formula, LifterError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LifterError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, LifterError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, LifterError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.quantified(),
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "True" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "False" => {
                self.bump();
                Ok(Formula::not(Formula::True))
            }
            Tok::Ident(_) => self.atom(),
            t => Err(self.error_here(format!("expected a formula, found {}", t.describe()))),
        }
    }

    fn sort(&mut self) -> Result<Sort, LifterError> {
        let at = self.error_here(String::new());
        let s = self.ident("a sort")?;
        Sort::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or(LifterError { message: format!("unknown sort `{s}`"), ..at })
    }

    fn quantified(&mut self) -> Result<Formula, LifterError> {
        let q = if self.bump() == Tok::Exists { Quantifier::Exists } else { Quantifier::Forall };
        let var = self.ident("a variable name")?;
        if Atom::from_name(&var).is_some() || var == "True" || var == "False" {
            return Err(self.error_here(format!("`{var}` is reserved")));
        }
        self.expect(Tok::Colon)?;
        let sort = self.sort()?;
        let mut restriction = Restriction::Unrestricted;
        if *self.peek() == Tok::In {
            self.bump();
            let at = self.error_here(String::new());
            let name = self.ident("`induction_term` or a term variable")?;
            if name == "induction_term" || name == "induction_terms" {
                if sort != Sort::Term {
                    return Err(LifterError { message: "only term quantifiers range over induction terms".into(), ..at });
                }
                restriction = Restriction::InductionTerms;
            } else {
                if *self.peek() == Tok::Colon {
                    self.bump();
                    if self.sort()? != Sort::Term {
                        return Err(LifterError { message: format!("`{name}` must be annotated as a term"), ..at });
                    }
                }
                match self.sort_of(&name) {
                    Some(Sort::Term) => {}
                    Some(s) => {
                        return Err(LifterError {
                            message: format!("`{name}` is a {}, expected a term", s.keyword()),
                            ..at
                        })
                    }
                    None => return Err(LifterError { message: format!("unbound variable `{name}`"), ..at }),
                }
                if sort != Sort::Occurrence {
                    return Err(LifterError {
                        message: "only term_occurrence quantifiers range over the occurrences of a term".into(),
                        ..at
                    });
                }
                restriction = Restriction::OccurrencesOf(name);
            }
        }
        self.expect(Tok::Dot)?;
        self.scope.push((var.clone(), sort));
        let body = self.disjunction();
        self.scope.pop();
        Ok(Formula::quant(q, &var, sort, restriction, body?))
    }

    fn arg(&mut self, want: Sort) -> Result<Arg, LifterError> {
        let at = self.error_here(String::new());
        match self.bump() {
            Tok::Num(n) if want == Sort::Number => Ok(Arg::Num(n)),
            Tok::Num(n) => {
                Err(LifterError { message: format!("number {n} where a {} is expected", want.keyword()), ..at })
            }
            Tok::Ident(v) => match self.sort_of(&v) {
                Some(s) if s == want => Ok(Arg::Var(v)),
                Some(s) => Err(LifterError {
                    message: format!("sort error: `{v}` is a {}, expected a {}", s.keyword(), want.keyword()),
                    ..at
                }),
                None => Err(LifterError { message: format!("unbound variable `{v}`"), ..at }),
            },
            t => Err(LifterError { message: format!("expected an argument, found {}", t.describe()), ..at }),
        }
    }

    fn atom(&mut self) -> Result<Formula, LifterError> {
        let at = self.error_here(String::new());
        let first = self.ident("an assertion")?;
        if let Some(atom) = Atom::from_name(&first) {
            let sig = atom.signature();
            let mut args = Vec::new();
            if *self.peek() == Tok::LParen {
                self.bump();
                for (i, s) in sig.iter().enumerate() {
                    if i > 0 {
                        self.expect(Tok::Comma)?;
                    }
                    args.push(self.arg(*s)?);
                }
                self.expect(Tok::RParen)?;
            } else {
                for s in sig {
                    args.push(self.arg(*s)?);
                }
            }
            return Ok(Formula::Atom(atom, args));
        }
        // Infix form `a name b` for binary assertions.
        let here = self.error_here(String::new());
        let Tok::Ident(name) = self.bump() else {
            let msg = if self.sort_of(&first).is_some() {
                format!("expected an assertion after `{first}`")
            } else {
                format!("unknown assertion or unbound variable `{first}`")
            };
            return Err(LifterError { message: msg, ..at });
        };
        let atom = Atom::from_name(&name)
            .ok_or_else(|| LifterError { message: format!("unknown assertion `{name}`"), ..here.clone() })?;
        let sig = atom.signature();
        if sig.len() != 2 {
            return Err(LifterError { message: format!("`{name}` is not binary and cannot be used infix"), ..here });
        }
        self.pos -= 2;
        let a = self.arg(sig[0])?;
        self.bump();
        let b = self.arg(sig[1])?;
        Ok(Formula::Atom(atom, vec![a, b]))
    }
}

fn parse_at(src: &str, line0: usize) -> Result<Formula, LifterError> {
    let mut p = Parser { toks: lex(src, line0)?, pos: 0, scope: vec![] };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {} after formula", p.peek().describe())));
    }
    Ok(f)
}

/// Parses a closed, well-sorted formula.
pub fn parse_formula(src: &str) -> Result<Formula, LifterError> {
    parse_at(src, 1)
}

/// Parses a heuristic file: blocks introduced by `heuristic <name>:` lines,
/// each followed by one formula. Lines starting with `#` are comments.
pub fn parse_suite(src: &str) -> Result<Vec<(String, Formula)>, LifterError> {
    let mut blocks: Vec<(String, usize, String)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            // Keep line numbering intact for error spans.
            if let Some(b) = blocks.last_mut() {
                b.2.push('\n');
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("heuristic ") {
            let name = rest.trim().strip_suffix(':').map(str::trim).filter(|n| !n.is_empty());
            let Some(name) = name else {
                return Err(LifterError { line: i + 1, column: 1, message: "expected `heuristic <name>:`".into() });
            };
            if blocks.iter().any(|b| b.0 == name) {
                return Err(LifterError { line: i + 1, column: 1, message: format!("duplicate heuristic `{name}`") });
            }
            blocks.push((name.to_string(), i + 2, String::new()));
            continue;
        }
        match blocks.last_mut() {
            Some(b) => {
                b.2.push_str(raw);
                b.2.push('\n');
            }
            None if line.is_empty() => {}
            None => {
                return Err(LifterError { line: i + 1, column: 1, message: "formula outside a heuristic block".into() })
            }
        }
    }
    blocks
        .into_iter()
        .map(|(name, line0, text)| parse_at(&text, line0).map(|f| (name, f)))
        .collect()
}
