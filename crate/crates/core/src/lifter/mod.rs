//! A small language of quantified formulas over a goal and an induction
//! candidate, used to write heuristics independent of any theory.

mod eval;
mod parse;

use std::fmt;

pub use eval::{eval, Domains, EvalContext};
pub use parse::{parse_formula, parse_suite, LifterError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Number,
    Rule,
    Term,
    Occurrence,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Number => "number",
            Sort::Rule => "rule",
            Sort::Term => "term",
            Sort::Occurrence => "term_occurrence",
        }
    }

    pub const ALL: [Sort; 4] = [Sort::Number, Sort::Rule, Sort::Term, Sort::Occurrence];
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Restriction {
    Unrestricted,
    /// Occurrences of the value bound to a term variable.
    OccurrencesOf(String),
    InductionTerms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arg {
    Var(String),
    Num(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    IsRuleOf,
    IsNthArgumentOf,
    IsNthInductionTerm,
    IsFreeVariable,
    IsConstant,
    IsInArbitrary,
    IsOfDatatype,
    OccursInConclusion,
    IsRecursiveConstant,
    SameTerm,
    PatternMatchesOn,
    ChangesInRecursion,
}

impl Atom {
    pub const ALL: [Atom; 12] = [
        Atom::IsRuleOf,
        Atom::IsNthArgumentOf,
        Atom::IsNthInductionTerm,
        Atom::IsFreeVariable,
        Atom::IsConstant,
        Atom::IsInArbitrary,
        Atom::IsOfDatatype,
        Atom::OccursInConclusion,
        Atom::IsRecursiveConstant,
        Atom::SameTerm,
        Atom::PatternMatchesOn,
        Atom::ChangesInRecursion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Atom::IsRuleOf => "is_rule_of",
            Atom::IsNthArgumentOf => "is_nth_argument_of",
            Atom::IsNthInductionTerm => "is_nth_induction_term",
            Atom::IsFreeVariable => "is_free_variable",
            Atom::IsConstant => "is_constant",
            Atom::IsInArbitrary => "is_in_arbitrary",
            Atom::IsOfDatatype => "is_of_datatype",
            Atom::OccursInConclusion => "occurs_in_conclusion",
            Atom::IsRecursiveConstant => "is_recursive_constant",
            Atom::SameTerm => "same_term",
            Atom::PatternMatchesOn => "pattern_matches_on",
            Atom::ChangesInRecursion => "changes_in_recursion",
        }
    }

    pub fn from_name(s: &str) -> Option<Atom> {
        Atom::ALL.into_iter().find(|a| a.name() == s)
    }

    pub fn signature(self) -> &'static [Sort] {
        use Sort::*;
        match self {
            Atom::IsRuleOf => &[Rule, Occurrence],
            Atom::IsNthArgumentOf => &[Occurrence, Number, Occurrence],
            Atom::IsNthInductionTerm => &[Term, Number],
            Atom::IsFreeVariable
            | Atom::IsConstant
            | Atom::IsInArbitrary
            | Atom::IsOfDatatype
            | Atom::IsRecursiveConstant => &[Term],
            Atom::OccursInConclusion => &[Occurrence],
            Atom::SameTerm => &[Occurrence, Term],
            Atom::PatternMatchesOn | Atom::ChangesInRecursion => &[Term, Number],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant { q: Quantifier, var: String, sort: Sort, restriction: Restriction, body: Box<Formula> },
    Atom(Atom, Vec<Arg>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quantifier, var: &str, sort: Sort, restriction: Restriction, body: Formula) -> Formula {
        Formula::Quant { q, var: var.to_string(), sort, restriction, body: Box::new(body) }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(..) => 0,
            Formula::Not(f) | Formula::Quant { body: f, .. } => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Var(v) => f.write_str(v),
            Arg::Num(n) => write!(f, "{n}"),
        }
    }
}

/// ASCII syntax, parenthesized so that it parses back unchanged.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("True"),
            Formula::Not(x) => write!(f, "!{x}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} --> {b})"),
            Formula::Quant { q, var, sort, restriction, body } => {
                let kw = match q {
                    Quantifier::Exists => "EX",
                    Quantifier::Forall => "ALL",
                };
                write!(f, "({kw} {var} : {}", sort.keyword())?;
                match restriction {
                    Restriction::Unrestricted => {}
                    Restriction::InductionTerms => f.write_str(" in induction_term")?,
                    Restriction::OccurrencesOf(t) => write!(f, " in {t} : term")?,
                }
                write!(f, ". {body})")
            }
            Formula::Atom(a, args) => {
                let parts: Vec<String> = args.iter().map(|x| x.to_string()).collect();
                write!(f, "{}({})", a.name(), parts.join(", "))
            }
        }
    }
}
