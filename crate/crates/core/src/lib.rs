//! Recommends arguments for an `induct` tactic: enumerates candidate
//! argument combinations, screens them by applying the tactic, scores the
//! survivors with quantified heuristics and ranks them.

pub mod cli;
pub mod harness;
pub mod lifter;
pub mod parser;
pub mod pipeline;
pub mod print;
pub mod scheme;
pub mod scoring;
pub mod tactic;
pub mod term;
pub mod theory;

pub use parser::{parse_goal_expr, parse_theory, ParseError, SourceSpan};
pub use term::{Goal, Term, Type};
pub use theory::Theory;
