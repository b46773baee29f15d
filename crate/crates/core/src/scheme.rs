//! Induction schemes derived from datatypes (structural) and from `fun`
//! definitions (functional).

use std::collections::HashMap;
use std::fmt;

use crate::term::{free_variables, Goal, Term, Type};
use crate::theory::{DatatypeDef, FunDef, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeCase {
    pub name: String,
    pub fresh_vars: Vec<(String, Type)>,
    /// One tuple per induction hypothesis.
    pub hypotheses: Vec<Vec<Term>>,
    pub patterns: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionScheme {
    pub name: String,
    pub arity: usize,
    pub positions: Vec<Type>,
    pub cases: Vec<SchemeCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("datatype {0} has no constructors")]
    NoConstructors(String),
    #[error("{0} has no induction rule")]
    NotRuleBearing(String),
    #[error("{0} takes no arguments")]
    NoArguments(String),
}

fn base_name(ty: &Type) -> String {
    match ty {
        Type::Var(_) => "x".into(),
        _ if ty.is_fun() => "f".into(),
        Type::Con(n, _) => match n.as_str() {
            "list" => "xs".into(),
            "nat" => "n".into(),
            "bool" => "b".into(),
            other => other
                .chars()
                .next()
                .filter(|c| c.is_alphabetic())
                .map(|c| c.to_lowercase().to_string())
                .unwrap_or_else(|| "x".into()),
        },
    }
}

/// Names constructor arguments by type; repeated names get numbered.
fn argument_names(args: &[Type]) -> Vec<String> {
    let bases: Vec<String> = args.iter().map(base_name).collect();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    bases
        .iter()
        .map(|b| {
            let total = bases.iter().filter(|x| *x == b).count();
            if total == 1 {
                b.clone()
            } else {
                let k = seen.entry(b).or_insert(0);
                *k += 1;
                format!("{b}{k}")
            }
        })
        .collect()
}

pub fn structural_scheme(d: &DatatypeDef) -> Result<InductionScheme, SchemeError> {
    if d.constructors.is_empty() {
        return Err(SchemeError::NoConstructors(d.name.clone()));
    }
    let self_ty = d.self_type();
    let cases = d
        .constructors
        .iter()
        .map(|c| {
            let names = argument_names(&c.args);
            let vars: Vec<Term> = names.iter().zip(&c.args).map(|(n, t)| Term::free(n, t.clone())).collect();
            let hypotheses = vars
                .iter()
                .zip(&c.args)
                .filter(|(_, t)| **t == self_ty)
                .map(|(v, _)| vec![v.clone()])
                .collect();
            let head = Term::constant(&c.name, d.constructor_type(c));
            SchemeCase {
                name: c.name.clone(),
                fresh_vars: names.into_iter().zip(c.args.iter().cloned()).collect(),
                hypotheses,
                patterns: vec![Term::apps(head, vars)],
            }
        })
        .collect();
    Ok(InductionScheme { name: format!("{}.induct", d.name), arity: 1, positions: vec![self_ty], cases })
}

pub fn functional_scheme(f: &FunDef) -> Result<InductionScheme, SchemeError> {
    if !f.rule_bearing {
        return Err(SchemeError::NotRuleBearing(f.name.clone()));
    }
    let arity = f.arity();
    if arity == 0 {
        return Err(SchemeError::NoArguments(f.name.clone()));
    }
    let (arg_tys, _) = f.ty.strip_fun();
    let positions = arg_tys.into_iter().take(arity).cloned().collect();
    let cases = f
        .equations
        .iter()
        .enumerate()
        .map(|(i, eq)| {
            let mut fresh_vars = Vec::new();
            for p in &eq.patterns {
                for v in free_variables(p) {
                    if !fresh_vars.contains(&v) {
                        fresh_vars.push(v);
                    }
                }
            }
            let hypotheses = f
                .calls_in(&eq.rhs)
                .into_iter()
                .map(|args| args.into_iter().cloned().collect())
                .collect();
            SchemeCase { name: (i + 1).to_string(), fresh_vars, hypotheses, patterns: eq.patterns.clone() }
        })
        .collect();
    Ok(InductionScheme { name: f.rule_name(), arity, positions, cases })
}

/// Functional rules of the rule-bearing constants in `goal`, first
/// occurrence first.
pub fn rules_for(goal: &Goal, thy: &Theory) -> Vec<InductionScheme> {
    let mut names: Vec<&str> = Vec::new();
    for (_, part) in goal.parts() {
        part.walk(&mut |_, t| {
            if let Some(c) = t.as_const() {
                if !names.contains(&c) {
                    names.push(c);
                }
            }
        });
    }
    names
        .into_iter()
        .filter_map(|c| thy.fundef(c))
        .filter(|f| f.rule_bearing)
        .filter_map(|f| functional_scheme(f).ok())
        .collect()
}

/// Resolves `<fun>.induct` or `<datatype>.induct`.
pub fn scheme_by_name(thy: &Theory, name: &str) -> Option<InductionScheme> {
    let owner = name.strip_suffix(".induct")?;
    if let Some(f) = thy.fundef(owner).filter(|f| f.rule_bearing) {
        return functional_scheme(f).ok();
    }
    thy.datatype(owner).and_then(|d| structural_scheme(d).ok())
}

fn tuple(ts: &[Term]) -> String {
    let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
    format!("P({})", parts.join(", "))
}

impl fmt::Display for SchemeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self.hypotheses.iter().map(|h| tuple(h)).collect();
        write!(f, "case {}: hyps [{}] ⟹ {}", self.name, hyps.join(", "), tuple(&self.patterns))
    }
}

/// One case per line.
impl fmt::Display for InductionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_theory;

    #[test]
    fn list_scheme() {
        let thy = Theory::new();
        let s = structural_scheme(thy.datatype("list").unwrap()).unwrap();
        assert_eq!(s.name, "list.induct");
        assert_eq!(s.to_string(), "case Nil: hyps [] ⟹ P([])\ncase Cons: hyps [P(xs)] ⟹ P(x # xs)\n");
    }

    #[test]
    fn nat_scheme() {
        let thy = Theory::new();
        let s = structural_scheme(thy.datatype("nat").unwrap()).unwrap();
        assert_eq!(s.to_string(), "case 0: hyps [] ⟹ P(0)\ncase Suc: hyps [P(n)] ⟹ P(Suc n)\n");
    }

    #[test]
    fn enum_scheme_has_no_hypotheses() {
        let thy = parse_theory("datatype color = R | G | B").unwrap();
        let s = structural_scheme(thy.datatype("color").unwrap()).unwrap();
        assert_eq!(s.cases.len(), 3);
        assert!(s.cases.iter().all(|c| c.hypotheses.is_empty()));
    }

    #[test]
    fn tree_arguments_numbered() {
        let thy = parse_theory("datatype tree 'a = Leaf | Node \"'a tree\" 'a \"'a tree\"").unwrap();
        let s = structural_scheme(thy.datatype("tree").unwrap()).unwrap();
        assert_eq!(s.cases[1].to_string(), "case Node: hyps [P(t1), P(t2)] ⟹ P(Node t1 x t2)");
    }

    #[test]
    fn empty_datatype_rejected() {
        let d = DatatypeDef { name: "void".into(), params: vec![], constructors: vec![] };
        assert_eq!(structural_scheme(&d), Err(SchemeError::NoConstructors("void".into())));
    }

    #[test]
    fn primrec_has_no_rule() {
        let thy = parse_theory("primrec id1 :: \"'a => 'a\" where \"id1 x = x\"").unwrap();
        assert!(matches!(functional_scheme(thy.fundef("id1").unwrap()), Err(SchemeError::NotRuleBearing(_))));
    }

    #[test]
    fn non_recursive_fun() {
        let thy = parse_theory("fun id2 where \"id2 x = x\"").unwrap();
        let s = functional_scheme(thy.fundef("id2").unwrap()).unwrap();
        assert_eq!(s.cases.len(), 1);
        assert!(s.cases[0].hypotheses.is_empty());
    }

    #[test]
    fn nested_recursion_outer_call_first() {
        let thy = parse_theory(
            "fun f :: \"nat list => nat list\" where \"f [] = []\" | \"f (x # xs) = f (x # f xs)\"",
        )
        .unwrap();
        let s = functional_scheme(thy.fundef("f").unwrap()).unwrap();
        let hyps: Vec<String> = s.cases[1].hypotheses.iter().map(|h| h[0].to_string()).collect();
        assert_eq!(hyps, ["x # f xs", "xs"]);
    }
}
