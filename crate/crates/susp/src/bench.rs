//! Step-count benchmarks over fixed corpora.

use std::str::FromStr;

use serde::Serialize;

use crate::bridges::ls::ls_normalize;
use crate::bridges::lsig::{lsig_normalize, susp_to_lsig, LsigRule};
use crate::bridges::lu::{lu_normalize, LuRule};
use crate::error::{Error, Result};
use crate::expr::SuspExpr;
use crate::gen::{church, church_add, church_mul};
use crate::oracle::DbTerm;
use crate::rewrite::{normal_form, RuleSet, Status, Strategy};
use crate::suites::{db_to_ls, db_to_lu};

pub const BENCH_FUEL: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corpus {
    Church,
    DeepRedex,
}

impl FromStr for Corpus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "church" => Ok(Corpus::Church),
            "deep-redex" => Ok(Corpus::DeepRedex),
            _ => Err(Error::Config(format!("unknown corpus {s:?}, expected church or deep-redex"))),
        }
    }
}

impl Corpus {
    pub fn name(self) -> &'static str {
        match self {
            Corpus::Church => "church",
            Corpus::DeepRedex => "deep-redex",
        }
    }

    pub fn terms(self) -> Vec<(String, DbTerm)> {
        match self {
            Corpus::Church => {
                let mut out = Vec::new();
                for m in 0..=5 {
                    for n in 0..=5 {
                        out.push((format!("add_{m}_{n}"), DbTerm::apps(church_add(), [church(m), church(n)])));
                        out.push((format!("mul_{m}_{n}"), DbTerm::apps(church_mul(), [church(m), church(n)])));
                    }
                }
                out
            }
            Corpus::DeepRedex => {
                (1..=8).flat_map(|d| [(format!("spine_{d}"), spine(d)), (format!("nest_{d}"), nest(d))]).collect()
            }
        }
    }
}

/// `(\ ... \ #d #1) c1 ... cd`: the first argument is substituted `d` binders deep.
fn spine(d: usize) -> DbTerm {
    let mut body = DbTerm::app(DbTerm::Index(d), DbTerm::Index(1));
    for _ in 0..d {
        body = DbTerm::abs(body);
    }
    DbTerm::apps(body, (1..=d).map(|i| DbTerm::Const(format!("c{i}").into())))
}

/// `I (I (... (I c)))` with `d` identity redexes.
fn nest(d: usize) -> DbTerm {
    let id = DbTerm::abs(DbTerm::Index(1));
    (0..d).fold(DbTerm::Const("c".into()), |t, _| DbTerm::app(id.clone(), t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub corpus: String,
    pub term_id: String,
    pub calculus: String,
    pub ruleset: String,
    pub strategy: String,
    pub steps: usize,
    pub status: Status,
}

const STRATEGIES: [Strategy; 2] = [Strategy::LeftmostOutermost, Strategy::LeftmostInnermost];

pub fn run(corpus: Corpus) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (id, t) in corpus.terms() {
        for strategy in STRATEGIES {
            let mut row = |calculus: &str, ruleset: &str, steps: usize, status: Status| {
                rows.push(BenchRow {
                    corpus: corpus.name().into(),
                    term_id: id.clone(),
                    calculus: calculus.into(),
                    ruleset: ruleset.into(),
                    strategy: strategy.to_string(),
                    steps,
                    status,
                })
            };
            let x = SuspExpr::Term(t.to_susp());
            for (name, rules) in [("rmbeta", RuleSet::rmbeta()), ("rbeta", RuleSet::rbeta())] {
                let out = normal_form(&x, rules, strategy, BENCH_FUEL)?;
                row("susp", name, out.steps, out.status);
            }
            let out = lsig_normalize(&susp_to_lsig(&t.to_susp())?, &LsigRule::ALL, strategy, BENCH_FUEL);
            row("lsig", "all", out.steps, out.status);
            let out = lu_normalize(&db_to_lu(&t), &LuRule::ALL, strategy, BENCH_FUEL);
            row("lu", "all", out.steps, out.status);
            let out = ls_normalize(&db_to_ls(&t), false, strategy, BENCH_FUEL);
            row("ls", "ls", out.steps, out.status);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_reaches_normal_form() {
        let rows = run(Corpus::DeepRedex).unwrap();
        assert_eq!(rows.len(), 16 * 2 * 5);
        assert!(rows.iter().all(|r| r.status == Status::NormalForm));
    }

    #[test]
    fn innermost_nest_costs_three_steps_per_level() {
        let rows = run(Corpus::DeepRedex).unwrap();
        for d in 1..=8 {
            let id = format!("nest_{d}");
            let r = rows.iter().find(|r| r.term_id == id && r.calculus == "susp" && r.strategy == "li").unwrap();
            // (\ #1) c: beta_s, then r4 to [c, 0, 0, nil], then r1
            assert_eq!(r.steps, 3 * d);
        }
    }
}
