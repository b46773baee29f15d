//! Theory declarations and the builtin prelude.

use std::collections::HashMap;
use std::sync::LazyLock;

use crate::term::{Goal, Term, Type};

pub const EQ: &str = "eq";
pub const IMP: &str = "imp";
pub const NIL: &str = "Nil";
pub const CONS: &str = "Cons";
pub const APPEND: &str = "append";
pub const ZERO: &str = "0";
pub const SUC: &str = "Suc";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub args: Vec<Type>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatatypeDef {
    pub name: String,
    /// Type parameters, `'`-prefixed.
    pub params: Vec<String>,
    pub constructors: Vec<Constructor>,
}

impl DatatypeDef {
    /// The datatype applied to its own parameters, e.g. `'a list`.
    pub fn self_type(&self) -> Type {
        Type::Con(self.name.clone(), self.params.iter().map(|p| Type::Var(p.clone())).collect())
    }

    pub fn constructor_type(&self, c: &Constructor) -> Type {
        Type::fun_n(c.args.iter().cloned(), self.self_type())
    }

    /// Constructor argument types instantiated for a concrete application of
    /// this datatype.
    pub fn instantiate(&self, args: &[Type]) -> HashMap<String, Type> {
        self.params.iter().cloned().zip(args.iter().cloned()).collect()
    }
}

/// One defining equation `f p1 .. pn = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub patterns: Vec<Term>,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDef {
    pub name: String,
    pub ty: Type,
    pub equations: Vec<Equation>,
    /// `fun` definitions carry a derived induction rule, `primrec` ones do not.
    pub rule_bearing: bool,
}

impl FunDef {
    pub fn arity(&self) -> usize {
        self.equations.first().map(|e| e.patterns.len()).unwrap_or(0)
    }

    pub fn head(&self) -> Term {
        Term::Const(self.name.clone(), self.ty.clone())
    }

    pub fn rule_name(&self) -> String {
        format!("{}.induct", self.name)
    }

    /// Argument tuples of full-arity calls to this function in `t`,
    /// leftmost-outermost.
    pub fn calls_in<'a>(&self, t: &'a Term) -> Vec<Vec<&'a Term>> {
        let mut out = Vec::new();
        let arity = self.arity();
        fn go<'a>(name: &str, arity: usize, t: &'a Term, under_fun: bool, out: &mut Vec<Vec<&'a Term>>) {
            if !under_fun {
                let (head, args) = t.strip_comb();
                if head.as_const() == Some(name) && args.len() == arity && arity > 0 {
                    out.push(args.clone());
                }
            }
            if let Term::App(f, a) = t {
                go(name, arity, f, true, out);
                go(name, arity, a, false, out);
            }
        }
        go(&self.name, arity, t, false, &mut out);
        out
    }

    pub fn is_recursive(&self) -> bool {
        self.equations.iter().any(|e| {
            let mut found = false;
            e.rhs.walk(&mut |_, s| found |= s.as_const() == Some(self.name.as_str()));
            found
        })
    }

    /// Some equation matches a constructor pattern at argument `n` (1-indexed).
    pub fn pattern_matches_on(&self, n: usize) -> bool {
        n >= 1
            && self
                .equations
                .iter()
                .any(|e| e.patterns.get(n - 1).map(|p| p.as_free().is_none()).unwrap_or(false))
    }

    /// Some recursive call passes, at argument `n`, something other than the
    /// variable bound at that position by the equation's own pattern.
    pub fn changes_in_recursion(&self, n: usize) -> bool {
        if n == 0 || n > self.arity() {
            return false;
        }
        self.equations.iter().any(|e| {
            let pat = &e.patterns[n - 1];
            self.calls_in(&e.rhs).iter().any(|args| args[n - 1] != pat)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Theory {
    pub datatypes: Vec<DatatypeDef>,
    pub fundefs: Vec<FunDef>,
    pub goals: Vec<Goal>,
}

/// What a constant name refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstKind<'a> {
    Constructor(&'a DatatypeDef, &'a Constructor),
    Function(&'a FunDef),
    /// `eq` and `imp`.
    Logical,
}

#[derive(Clone, Debug)]
pub struct ConstInfo<'a> {
    pub ty: Type,
    pub kind: ConstKind<'a>,
}

pub struct Prelude {
    pub datatypes: Vec<DatatypeDef>,
    pub fundefs: Vec<FunDef>,
}

pub static PRELUDE: LazyLock<Prelude> = LazyLock::new(build_prelude);

fn build_prelude() -> Prelude {
    let a = Type::var("'a");
    let list_a = Type::con("list", vec![a.clone()]);
    let nat = Type::con("nat", vec![]);
    let bool_dt = DatatypeDef {
        name: "bool".into(),
        params: vec![],
        constructors: vec![
            Constructor { name: "True".into(), args: vec![] },
            Constructor { name: "False".into(), args: vec![] },
        ],
    };
    let nat_dt = DatatypeDef {
        name: "nat".into(),
        params: vec![],
        constructors: vec![
            Constructor { name: ZERO.into(), args: vec![] },
            Constructor { name: SUC.into(), args: vec![nat] },
        ],
    };
    let list_dt = DatatypeDef {
        name: "list".into(),
        params: vec!["'a".into()],
        constructors: vec![
            Constructor { name: NIL.into(), args: vec![] },
            Constructor { name: CONS.into(), args: vec![a.clone(), list_a.clone()] },
        ],
    };

    let app_ty = Type::fun_n([list_a.clone(), list_a.clone()], list_a.clone());
    let append = Term::constant(APPEND, app_ty.clone());
    let nil = Term::constant(NIL, list_a.clone());
    let cons = Term::constant(CONS, list_dt.constructor_type(&list_dt.constructors[1]));
    let x = Term::free("x", a);
    let xs = Term::free("xs", list_a.clone());
    let ys = Term::free("ys", list_a);
    let append_def = FunDef {
        name: APPEND.into(),
        ty: app_ty,
        equations: vec![
            Equation { patterns: vec![nil, ys.clone()], rhs: ys.clone() },
            Equation {
                patterns: vec![Term::apps(cons.clone(), [x.clone(), xs.clone()]), ys.clone()],
                rhs: Term::apps(cons, [x, Term::apps(append, [xs, ys])]),
            },
        ],
        rule_bearing: false,
    };
    Prelude { datatypes: vec![bool_dt, nat_dt, list_dt], fundefs: vec![append_def] }
}

/// Type of the builtin logical constants.
pub fn logical_const_type(name: &str) -> Option<Type> {
    match name {
        EQ => {
            let a = Type::var("'a");
            Some(Type::fun_n([a.clone(), a], Type::bool()))
        }
        IMP => Some(Type::fun_n([Type::bool(), Type::bool()], Type::bool())),
        _ => None,
    }
}

impl Theory {
    pub fn new() -> Theory {
        Theory::default()
    }

    pub fn all_datatypes(&self) -> impl Iterator<Item = &DatatypeDef> {
        PRELUDE.datatypes.iter().chain(self.datatypes.iter())
    }

    pub fn all_fundefs(&self) -> impl Iterator<Item = &FunDef> {
        PRELUDE.fundefs.iter().chain(self.fundefs.iter())
    }

    pub fn datatype(&self, name: &str) -> Option<&DatatypeDef> {
        self.all_datatypes().find(|d| d.name == name)
    }

    pub fn fundef(&self, name: &str) -> Option<&FunDef> {
        self.all_fundefs().find(|f| f.name == name)
    }

    pub fn goal(&self, name: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.name == name)
    }

    /// Datatype declaration behind a type, when it is a datatype application.
    pub fn datatype_of_type(&self, ty: &Type) -> Option<&DatatypeDef> {
        match ty {
            Type::Con(n, args) => self.datatype(n).filter(|d| d.params.len() == args.len()),
            Type::Var(_) => None,
        }
    }

    pub fn constant(&self, name: &str) -> Option<ConstInfo<'_>> {
        if let Some(ty) = logical_const_type(name) {
            return Some(ConstInfo { ty, kind: ConstKind::Logical });
        }
        for d in self.all_datatypes() {
            if let Some(c) = d.constructors.iter().find(|c| c.name == name) {
                return Some(ConstInfo { ty: d.constructor_type(c), kind: ConstKind::Constructor(d, c) });
            }
        }
        self.fundef(name).map(|f| ConstInfo { ty: f.ty.clone(), kind: ConstKind::Function(f) })
    }

    pub fn is_constructor(&self, name: &str) -> bool {
        matches!(self.constant(name), Some(ConstInfo { kind: ConstKind::Constructor(..), .. }))
    }

    /// Function definition whose derived rule is called `rule`.
    pub fn rule_owner(&self, rule: &str) -> Option<&FunDef> {
        let name = rule.strip_suffix(".induct")?;
        self.fundef(name).filter(|f| f.rule_bearing)
    }

    /// Declared arity of a type constructor.
    pub fn type_arity(&self, name: &str) -> Option<usize> {
        if name == crate::term::FUN {
            return Some(2);
        }
        self.datatype(name).map(|d| d.params.len())
    }
}
