//! Surface-syntax printing for types, terms and theories. The output is
//! accepted by the theory parser.

use std::fmt::{self, Write};

use crate::term::{Term, Type};
use crate::theory::{DatatypeDef, FunDef, Theory, APPEND, CONS, EQ, IMP, NIL};

pub(crate) fn fmt_type(ty: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str(&type_to_string(ty, 0))
}

/// Precedence 0: anything; 1: argument of a type constructor.
fn type_to_string(ty: &Type, prec: u8) -> String {
    match ty {
        Type::Var(v) => v.clone(),
        Type::Con(_, _) if ty.is_fun() => {
            let (d, c) = ty.dest_fun().expect("fun");
            let s = format!("{} => {}", type_to_string(d, 1), type_to_string(c, 0));
            if prec > 0 {
                format!("({s})")
            } else {
                s
            }
        }
        Type::Con(n, args) => match args.len() {
            0 => n.clone(),
            1 => format!("{} {}", type_to_string(&args[0], 1), n),
            _ => {
                let inner: Vec<String> = args.iter().map(|a| type_to_string(a, 0)).collect();
                format!("({}) {}", inner.join(", "), n)
            }
        },
    }
}

fn infix(name: &str) -> Option<(&'static str, u8)> {
    match name {
        IMP => Some(("==>", 1)),
        EQ => Some(("=", 2)),
        CONS => Some(("#", 3)),
        APPEND => Some(("@", 3)),
        _ => None,
    }
}

pub(crate) fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str(&term_to_string(t))
}

pub fn term_to_string(t: &Term) -> String {
    let mut s = String::new();
    write_term(t, 0, &mut s);
    s
}

fn write_atom(t: &Term, out: &mut String) {
    match t {
        Term::Free(n, _) => out.push_str(n),
        Term::Schematic(n, _) => {
            out.push('?');
            out.push_str(n)
        }
        Term::Const(n, _) if n == NIL => out.push_str("[]"),
        Term::Const(n, _) => match infix(n) {
            Some((op, _)) => {
                let _ = write!(out, "({op})");
            }
            None => out.push_str(n),
        },
        Term::App(..) => unreachable!(),
    }
}

/// Precedences: 1 `==>` (right), 2 `=` (none), 3 `#`/`@` (right), 4
/// application, 5 atom.
fn write_term(t: &Term, prec: u8, out: &mut String) {
    let (head, args) = t.strip_comb();
    if args.is_empty() {
        write_atom(t, out);
        return;
    }
    if let Some((op, p)) = head.as_const().and_then(infix) {
        if args.len() == 2 {
            let (lp, rp) = match p {
                1 | 3 => (p + 1, p),
                _ => (p + 1, p + 1),
            };
            if prec > p {
                out.push('(');
            }
            write_term(args[0], lp, out);
            let _ = write!(out, " {op} ");
            write_term(args[1], rp, out);
            if prec > p {
                out.push(')');
            }
            return;
        }
    }
    if prec > 4 {
        out.push('(');
    }
    write_atom(head, out);
    for a in args {
        out.push(' ');
        write_term(a, 5, out);
    }
    if prec > 4 {
        out.push(')');
    }
}

fn write_datatype(d: &DatatypeDef, out: &mut String) {
    let _ = write!(out, "datatype {}", d.name);
    for p in &d.params {
        let _ = write!(out, " {p}");
    }
    out.push_str(" =");
    for (i, c) in d.constructors.iter().enumerate() {
        if i > 0 {
            out.push_str(" |");
        }
        let _ = write!(out, " {}", c.name);
        for a in &c.args {
            let _ = write!(out, " \"{a}\"");
        }
    }
    out.push('\n');
}

fn write_fundef(fd: &FunDef, out: &mut String) {
    let kw = if fd.rule_bearing { "fun" } else { "primrec" };
    let _ = writeln!(out, "{kw} {} :: \"{}\" where", fd.name, fd.ty);
    for (i, eq) in fd.equations.iter().enumerate() {
        let lhs = Term::apps(fd.head(), eq.patterns.iter().cloned());
        let sep = if i == 0 { "  " } else { "| " };
        let _ = writeln!(out, "{sep}\"{} = {}\"", term_to_string_prec(&lhs, 3), term_to_string_prec(&eq.rhs, 3));
    }
}

fn term_to_string_prec(t: &Term, prec: u8) -> String {
    let mut s = String::new();
    write_term(t, prec, &mut s);
    s
}

/// Prints a theory's user declarations in source order: datatypes, then
/// functions, then lemmas.
pub fn print_theory(thy: &Theory) -> String {
    let mut out = String::new();
    for d in &thy.datatypes {
        write_datatype(d, &mut out);
    }
    for fd in &thy.fundefs {
        write_fundef(fd, &mut out);
    }
    for g in &thy.goals {
        let mut parts: Vec<String> = g.premises.iter().map(|p| term_to_string_prec(p, 2)).collect();
        parts.push(term_to_string_prec(&g.conclusion, 1));
        let _ = writeln!(out, "lemma {}: \"{}\"", g.name, parts.join(" ==> "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_print_postfix() {
        let a = Type::var("'a");
        let l = Type::con("list", vec![a.clone()]);
        assert_eq!(Type::fun(l.clone(), l.clone()).to_string(), "'a list => 'a list");
        assert_eq!(Type::fun(Type::fun(a.clone(), a.clone()), l).to_string(), "('a => 'a) => 'a list");
        let p = Type::con("pair", vec![a.clone(), Type::con("nat", vec![])]);
        assert_eq!(p.to_string(), "('a, nat) pair");
    }
}
