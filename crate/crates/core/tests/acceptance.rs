//! Acceptance gate: each criterion prints one PASS/FAIL line.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smart_induct::cli;
use smart_induct::harness::{evaluate, load_corpus, parse_annotations, Mode};
use smart_induct::lifter::{eval, Domains, EvalContext};
use smart_induct::parser::parse_theory;
use smart_induct::pipeline::{enumerate_candidates, screen, stage2_condition, Disposition, DEFAULT_CAP};
use smart_induct::scheme::{functional_scheme, structural_scheme};
use smart_induct::scoring::{recommend, HeuristicSuite};
use smart_induct::tactic::{apply_induct, Candidate};

use common::*;

const PRF1: &str = "induct xs arbitrary: ys";
const PRF2: &str = "induct xs ys rule: itrev.induct";

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn c1_candidate_count() -> Result<(), String> {
    let start = Instant::now();
    let thy = running();
    let n = enumerate_candidates(&thy.goals[0], &thy, DEFAULT_CAP).count();
    ensure(n == 40, format!("{n} candidates"))?;
    within(start, Duration::from_secs(1))
}

fn c2_experts_rank() -> Result<(), String> {
    let start = Instant::now();
    let thy = running();
    let goal = &thy.goals[0];
    let (finalists, report) = screen(goal, &thy, &exact());
    for t in [PRF1, PRF2] {
        let c = Candidate::parse(t).unwrap();
        ensure(report.disposition_of(&c) == Some(&Disposition::Kept), format!("{t} was screened out"))?;
        ensure(finalists.iter().any(|s| s.candidate == c), format!("{t} missing from finalists"))?;
    }
    let file = corpus_dir().join("rev_itrev.thy");
    let out = cli::run(["smart-induct", "recommend", file.to_str().unwrap(), "--goal", "itrev_rev"]);
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stderr))?;
    let listed: Vec<&str> = out.stdout.lines().filter(|l| l.contains(". induct")).collect();
    ensure(listed.len() == 10, format!("{} lines listed", listed.len()))?;
    for t in [PRF1, PRF2] {
        let hit = listed.iter().any(|l| l.split(". ").nth(1).is_some_and(|rest| rest.split("  ").next() == Some(t)));
        ensure(hit, format!("{t} not in the printed top 10"))?;
    }
    within(start, Duration::from_secs(5))
}

fn c3_rule_argument_verdicts() -> Result<(), String> {
    let thy = running();
    let goal = &thy.goals[0];
    let suite = HeuristicSuite::shipped();
    let (name, program) = &suite.heuristics[0];
    ensure(name == "rule_arguments_in_order", format!("first heuristic is {name}"))?;
    let domains = Domains::new(goal);
    for (t, want) in [(PRF2, true), (PRF1, true), ("induct ys rule: itrev.induct", false)] {
        let c = Candidate::parse(t).unwrap();
        let s = apply_induct(goal, &c, &thy, None).map_err(|e| e.to_string())?;
        let got = eval(program, &EvalContext::new(goal, &s, &c, &thy, &domains));
        ensure(got == want, format!("{t}: interpreter says {got}"))?;
        let naive = Naive { goal, candidate: &c, thy: &thy }.eval(program);
        ensure(naive == want, format!("{t}: reference evaluator says {naive}"))?;
    }
    Ok(())
}

fn c4_oracle_equivalence() -> Result<(), String> {
    let start = Instant::now();
    let theories = theories();
    ensure(theories.len() >= 5, "fewer than 5 theories")?;
    let contexts = contexts(&theories);
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7e5);
    let (mut pairs, mut formulas, mut truths) = (0, 0, 0);
    for (ti, thy) in theories.iter().enumerate() {
        let local: Vec<_> = contexts.iter().filter(|(i, _, _)| *i == ti).collect();
        ensure(!local.is_empty(), format!("theory {ti} has no finalists"))?;
        for k in 0..30 {
            let f = common::random_formula(&mut rng, 5);
            assert!(f.depth() <= 5);
            formulas += 1;
            for (_, goal, s) in local.iter().skip(k % 3).step_by(3).take(6) {
                let d = Domains::new(goal);
                let fast = eval(&f, &EvalContext::new(goal, &s.subgoals, &s.candidate, thy, &d));
                let slow = Naive { goal, candidate: &s.candidate, thy }.eval(&f);
                ensure(fast == slow, format!("disagreement on {f} for {} / {}", goal.name, s.candidate))?;
                pairs += 1;
                truths += fast as usize;
            }
        }
    }
    ensure(formulas >= 100, format!("{formulas} formulas"))?;
    ensure(truths > 0 && truths < pairs, "degenerate sample: all verdicts equal")?;
    within(start, Duration::from_secs(60))
}

fn c5_schemes() -> Result<(), String> {
    let thy = running();
    let list = structural_scheme(thy.datatype("list").unwrap()).map_err(|e| e.to_string())?;
    let nat = structural_scheme(thy.datatype("nat").unwrap()).map_err(|e| e.to_string())?;
    let shape = |s: &smart_induct::scheme::InductionScheme| -> Vec<(String, Vec<Vec<String>>, Vec<String>)> {
        s.cases
            .iter()
            .map(|c| {
                let hyps = c.hypotheses.iter().map(|h| h.iter().map(|t| t.to_string()).collect()).collect();
                (c.name.clone(), hyps, c.patterns.iter().map(|t| t.to_string()).collect())
            })
            .collect()
    };
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    ensure(list.arity == 1 && nat.arity == 1, "structural arity")?;
    ensure(
        shape(&list) == vec![("Nil".into(), vec![], v(&["[]"])), ("Cons".into(), vec![v(&["xs"])], v(&["x # xs"]))],
        format!("list scheme {:?}", shape(&list)),
    )?;
    ensure(
        shape(&nat) == vec![("0".into(), vec![], v(&["0"])), ("Suc".into(), vec![v(&["n"])], v(&["Suc n"]))],
        format!("nat scheme {:?}", shape(&nat)),
    )?;
    let itrev = functional_scheme(thy.fundef("itrev").unwrap()).map_err(|e| e.to_string())?;
    ensure(itrev.arity == 2, "itrev arity")?;
    ensure(
        shape(&itrev)
            == vec![
                ("1".into(), vec![], v(&["[]", "ys"])),
                ("2".into(), vec![v(&["xs", "x # ys"])], v(&["x # xs", "ys"])),
            ],
        format!("itrev scheme {:?}", shape(&itrev)),
    )
}

fn c6_screening_fixtures() -> Result<(), String> {
    let thy = parse_theory(
        "datatype sw = On | Off\n\
         fun pick :: \"nat => sw => nat\" where \"pick n On = n\" | \"pick n Off = n\"\n\
         fun id2 where \"id2 x = x\"\n\
         lemma pick_id: \"pick m s = m\"\n\
         lemma id2_id: \"id2 x = x\"",
    )
    .map_err(|e| e.to_string())?;
    let running = running();
    let cases = [
        (&thy, "pick_id", "induct m rule: pick.induct", 1u8),
        (&thy, "id2_id", "induct x rule: id2.induct", 2),
        (&running, "itrev_rev", "induct rule: itrev.induct", 3),
    ];
    for (t, g, tactic, want) in cases {
        let goal = t.goal(g).unwrap();
        let c = Candidate::parse(tactic).unwrap();
        let s = apply_induct(goal, &c, t, None).map_err(|e| e.to_string())?;
        let got = stage2_condition(goal, &s);
        ensure(got == Some(want), format!("{tactic} on {g}: {got:?}, expected condition {want}"))?;
        let (_, report) = screen(goal, t, &exact());
        ensure(
            report.disposition_of(&c) == Some(&Disposition::Stage2 { condition: want }),
            format!("{tactic} on {g}: pipeline disposition {:?}", report.disposition_of(&c)),
        )?;
    }
    Ok(())
}

fn c7_determinism() -> Result<(), String> {
    let file = corpus_dir().join("rev_itrev.thy");
    let f = file.to_str().unwrap();
    for json in [false, true] {
        let mut base = vec!["smart-induct", "recommend", f, "--goal", "itrev_rev", "--no-timeout"];
        if json {
            base.push("--json");
        }
        let parallel = cli::run(base.clone());
        let again = cli::run(base.clone());
        let mut serial_args = base.clone();
        serial_args.push("--serial");
        let serial = cli::run(serial_args);
        ensure(parallel.code == 0, parallel.stderr.clone())?;
        ensure(parallel == again, "two parallel runs differ")?;
        ensure(parallel == serial, "serial and parallel runs differ")?;
    }
    Ok(())
}

fn c8_score_bounds() -> Result<(), String> {
    let suite = HeuristicSuite::shipped();
    ensure(suite.len() == 20, format!("suite has {} heuristics", suite.len()))?;
    let corpus = load_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let mut seen = 0;
    for ct in &corpus {
        for g in &ct.theory.goals {
            for s in recommend(g, &ct.theory, &exact(), &suite).ranked {
                let trues = s.verdicts.iter().filter(|v| **v).count();
                ensure(s.verdicts.len() == 20, "verdict count")?;
                ensure(s.score <= 20 && s.score == trues, format!("{}: score {}", s.candidate, s.score))?;
                seen += 1;
            }
        }
    }
    ensure(seen > 0, "no candidate scored")
}

fn c9_eval_shape() -> Result<(), String> {
    let dir = corpus_dir();
    let ann_path = dir.join("annotations.txt");
    let corpus = load_corpus(&dir).map_err(|e| e.to_string())?;
    let anns = parse_annotations(&std::fs::read_to_string(&ann_path).unwrap(), "annotations.txt")
        .map_err(|e| e.to_string())?;
    ensure(anns.len() >= 10, format!("{} annotated goals", anns.len()))?;
    let suite = HeuristicSuite::shipped();
    let full = evaluate(&corpus, &anns, "annotations.txt", Mode::Full, &exact(), &suite).map_err(|e| e.to_string())?;
    let terms =
        evaluate(&corpus, &anns, "annotations.txt", Mode::TermsOnly, &exact(), &suite).map_err(|e| e.to_string())?;
    for report in [&full, &terms] {
        ensure(report.table.last().map(|r| r.theory.as_str()) == Some("sum"), "no sum row")?;
        for r in &report.table {
            let h = r.hits;
            ensure(h[0] <= h[1] && h[1] <= h[2] && h[2] <= h[3] && h[3] <= r.total, format!("row {}: {h:?}", r.theory))?;
        }
    }
    for (a, b) in full.goals.iter().zip(&terms.goals) {
        if let (Some(f), Some(t)) = (a.nth, b.nth) {
            ensure(t <= f, format!("{}: terms-only rank {t} > full rank {f}", a.goal))?;
        }
        ensure(a.nth.is_none() || b.nth.is_some(), format!("{}: terms-only lost the hit", a.goal))?;
    }
    let out = cli::run([
        "smart-induct",
        "eval",
        dir.to_str().unwrap(),
        "--annotations",
        ann_path.to_str().unwrap(),
        "--no-timeout",
    ]);
    ensure(out.code == 0, out.stderr.clone())?;
    let lines: Vec<&str> = out.stdout.lines().collect();
    let header = lines.first().copied().unwrap_or("");
    ensure(
        ["theory", "total", "top_1", "top_3", "top_5", "top_10"].iter().all(|c| header.contains(c)),
        format!("table header `{header}`"),
    )?;
    ensure(lines.iter().any(|l| l.starts_with("sum")), "printed table lacks a sum row")?;
    let goal_header = lines.iter().find(|l| l.contains("2nd-a")).copied().unwrap_or("");
    ensure(
        ["line", "total", "1st", "2nd-a", "2nd-b", "nth", "score", "rule", "arb"]
            .iter()
            .all(|c| goal_header.contains(c)),
        format!("per-goal header `{goal_header}`"),
    )
}

#[test]
fn acceptance_criteria() {
    type Check = fn() -> Result<(), String>;
    let criteria: [(&str, Check); 9] = [
        ("candidate count is 40 on the running example", c1_candidate_count),
        ("expert tactics survive screening and reach the top 10", c2_experts_rank),
        ("rule-argument heuristic verdicts match on three candidates", c3_rule_argument_verdicts),
        ("interpreter agrees with the reference evaluator", c4_oracle_equivalence),
        ("structural and functional schemes have the expected shape", c5_schemes),
        ("each screening condition fires on its fixture", c6_screening_fixtures),
        ("recommend output is deterministic, serial or parallel", c7_determinism),
        ("scores stay within bounds and count true verdicts", c8_score_bounds),
        ("eval tables are well formed and terms-only never ranks worse", c9_eval_shape),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let line = match &result {
            Ok(()) => format!("criterion {}: PASS  {name}\n", i + 1),
            Err(e) => format!("criterion {}: FAIL  {name}: {e}\n", i + 1),
        };
        stdout.write_all(line.as_bytes()).unwrap();
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    stdout.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
