use super::*;
use crate::print::print_theory;
use crate::term::free_variables;

const RUNNING: &str = include_str!("../../corpus/rev_itrev.thy");

#[test]
fn running_example_parses() {
    let thy = parse_theory(RUNNING).unwrap();
    assert_eq!(thy.fundefs.len(), 2);
    assert_eq!(thy.goals.len(), 1);
    assert!(!thy.fundef("rev").unwrap().rule_bearing);
    assert!(thy.fundef("itrev").unwrap().rule_bearing);
    let g = &thy.goals[0];
    assert!(g.premises.is_empty());
    assert_eq!(g.conclusion.to_string(), "itrev xs ys = rev xs @ ys");
    let fv: Vec<String> = free_variables(&g.conclusion).into_iter().map(|(n, _)| n).collect();
    assert_eq!(fv, ["xs", "ys"]);
    assert_eq!(g.conclusion.ty(), Type::bool());
}

#[test]
fn empty_theory() {
    let thy = parse_theory("").unwrap();
    assert_eq!(thy, Theory::new());
    let thy = parse_theory("  (* only a comment *)\n").unwrap();
    assert_eq!(thy, Theory::new());
}

#[test]
fn unknown_constant_in_equation() {
    let err = parse_theory("fun f where \"f x = g x\"").unwrap_err();
    assert_eq!(err.message, "unknown constant g");
    assert_eq!((err.span.line, err.span.column), (1, 20));
}

#[test]
fn goal_expr_in_context() {
    let thy = parse_theory(RUNNING).unwrap();
    let t = parse_goal_expr("itrev xs ys = rev xs @ ys", &thy).unwrap();
    assert_eq!(t, thy.goals[0].conclusion);

    let xs = parse_goal_expr("xs", &thy).unwrap();
    assert_eq!(xs, Term::free("xs", Type::con("list", vec![Type::var("'a")])));

    let err = parse_goal_expr("itrev xs", &thy).unwrap_err();
    assert_eq!(err.message, "goal must be propositional");
}

#[test]
fn datatype_declarations() {
    let src = "datatype tree 'a = Leaf | Node \"'a tree\" 'a \"'a tree\"\n\
               datatype 'a box = Box 'a\n\
               datatype color = R | G | B";
    let thy = parse_theory(src).unwrap();
    assert_eq!(thy.datatypes.len(), 3);
    let tree = thy.datatype("tree").unwrap();
    assert_eq!(tree.params, ["'a"]);
    assert_eq!(tree.constructors[1].args.len(), 3);
    assert_eq!(thy.datatype("color").unwrap().constructors.len(), 3);
    assert_eq!(thy.datatype("box").unwrap().params, ["'a"]);
}

#[test]
fn ill_typed_equation_rejected() {
    let err = parse_theory("fun f :: \"'a => 'a\" where \"f x = Suc x\"").unwrap_err();
    assert!(err.message.starts_with("type mismatch"), "{}", err.message);
}

#[test]
fn non_propositional_lemma_rejected() {
    let err = parse_theory("lemma l: \"Suc 0\"").unwrap_err();
    assert!(err.message.starts_with("goal must be propositional"), "{}", err.message);
}

#[test]
fn duplicates_rejected() {
    let err = parse_theory("datatype nat = Z").unwrap_err();
    assert_eq!(err.message, "duplicate type nat");
    let err = parse_theory("lemma a: \"x = x\"\nlemma a: \"y = y\"").unwrap_err();
    assert_eq!(err.message, "duplicate lemma a");
    assert_eq!(err.span.line, 2);
    let err = parse_theory("datatype c = A | A").unwrap_err();
    assert_eq!(err.message, "duplicate constant A");
}

#[test]
fn patterns_must_be_constructors() {
    let err = parse_theory(&format!("{RUNNING}\nfun g where \"g (rev xs) = xs\"")).unwrap_err();
    assert_eq!(err.message, "pattern contains non-constructor rev");
    let err = parse_theory("fun g where \"g x x = x\"").unwrap_err();
    assert_eq!(err.message, "variable x occurs twice in patterns");
}

#[test]
fn unannotated_fun_is_generalized() {
    let thy = parse_theory("fun len where \"len [] = 0\" | \"len (x # xs) = Suc (len xs)\"").unwrap();
    let f = thy.fundef("len").unwrap();
    assert_eq!(f.ty.to_string(), "'a list => nat");
    assert!(f.rule_bearing);
}

#[test]
fn premises_split_on_implication() {
    let thy = parse_theory(&format!("{RUNNING}\nlemma p: \"xs = [] ==> ys = [] ==> itrev xs ys = []\"")).unwrap();
    let g = thy.goal("p").unwrap();
    assert_eq!(g.premises.len(), 2);
    assert_eq!(g.conclusion.to_string(), "itrev xs ys = []");
}

#[test]
fn numerals_and_list_literals() {
    let thy = parse_theory("lemma n: \"[x, y] = x # y # [] ==> 2 = Suc (Suc 0)\"").unwrap();
    let g = thy.goal("n").unwrap();
    assert_eq!(g.premises[0].to_string(), "x # y # [] = x # y # []");
    assert_eq!(g.conclusion.to_string(), "Suc (Suc 0) = Suc (Suc 0)");
}

#[test]
fn schematic_goal() {
    let thy = parse_theory("lemma s: \"?P []\"").unwrap();
    assert!(thy.goals[0].contains_schematic());
}

#[test]
fn crlf_input() {
    let src = RUNNING.replace('\n', "\r\n");
    assert_eq!(parse_theory(&src).unwrap(), parse_theory(RUNNING).unwrap());
}

#[test]
fn print_round_trip_running_example() {
    let thy = parse_theory(RUNNING).unwrap();
    let printed = print_theory(&thy);
    assert_eq!(parse_theory(&printed).unwrap(), thy, "{printed}");
}

#[test]
fn sections_round_trip() {
    let thy = parse_theory("primrec ap :: \"('a => 'b) => 'a => 'b\" where \"ap f x = f x\"\nlemma s: \"ap ((#) x) [] = [x]\"").unwrap();
    let printed = print_theory(&thy);
    assert_eq!(parse_theory(&printed).unwrap(), thy, "{printed}");
}
