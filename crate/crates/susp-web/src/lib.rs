//! Browser bindings: normalize with a trace, list and fire redexes, translate
//! from the other calculi. Every function takes strings and returns a JSON
//! object, either `{"ok": ...}` or `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use susp::bridges::ls::ls_to_susp;
use susp::bridges::lsig::{lsig_subst_to_triple, lsig_to_susp};
use susp::bridges::lu::{lu_subst_to_triple, lu_to_susp};
use susp::bridges::EnvTriple;
use susp::rewrite::{self, RuleId, RuleSet, Strategy};
use susp::syntax::ls::parse_ls;
use susp::syntax::lsig::parse_lsig;
use susp::syntax::lu::parse_lu;
use susp::syntax::parse_expr;
use susp::{Path, Result};

/// Demo step cap; the page is interactive, so long runs are cut short.
const FUEL: usize = 2_000;

fn reply(r: Result<Value>) -> String {
    match r {
        Ok(v) => json!({ "ok": v }),
        Err(e) => json!({ "error": e.to_string() }),
    }
    .to_string()
}

fn triple(t: &EnvTriple) -> Value {
    json!(format!("ol = {}, nl = {}, env = {}", t.ol, t.nl, t.env))
}

fn normalize_json(expr: &str, rules: &str, strategy: &str) -> Result<Value> {
    let x = parse_expr(expr)?;
    let t = rewrite::normalize(&x, rules.parse::<RuleSet>()?, strategy.parse::<Strategy>()?, FUEL)?;
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| json!({ "rule": s.rule.to_string(), "at": s.at.to_string(), "result": s.result.to_string() }))
        .collect();
    Ok(json!({ "result": t.result().to_string(), "status": format!("{:?}", t.status), "steps": steps }))
}

/// Normalizes a suspension expression under a rule preset and strategy.
#[wasm_bindgen]
pub fn normalize(expr: &str, rules: &str, strategy: &str) -> String {
    reply(normalize_json(expr, rules, strategy))
}

fn redexes_json(expr: &str, rules: &str) -> Result<Value> {
    let x = parse_expr(expr)?;
    let found: Vec<Value> = rewrite::redexes(&x, rules.parse::<RuleSet>()?)
        .into_iter()
        .map(|(p, r)| json!({ "at": p.to_string(), "rule": r.to_string() }))
        .collect();
    Ok(json!(found))
}

/// Lists every redex of `expr` allowed by `rules`.
#[wasm_bindgen]
pub fn redexes(expr: &str, rules: &str) -> String {
    reply(redexes_json(expr, rules))
}

fn step_json(expr: &str, at: &str, rule: &str) -> Result<Value> {
    let x = parse_expr(expr)?;
    let y = rewrite::step_at(&x, &at.parse::<Path>()?, rule.parse::<RuleId>()?)?;
    Ok(json!(y.to_string()))
}

/// Fires one rule at one position.
#[wasm_bindgen]
pub fn step(expr: &str, at: &str, rule: &str) -> String {
    reply(step_json(expr, at, rule))
}

fn translate_json(from: &str, expr: &str) -> Result<Value> {
    match from {
        "lsig" => {
            let a = parse_lsig(expr)?;
            if a.is_term() {
                Ok(json!(lsig_to_susp(&a)?.to_string()))
            } else {
                Ok(triple(&lsig_subst_to_triple(&a)?))
            }
        }
        "lu" => {
            let a = parse_lu(expr)?;
            if a.is_term() {
                Ok(json!(lu_to_susp(&a)?.to_string()))
            } else {
                Ok(triple(&lu_subst_to_triple(&a)?))
            }
        }
        "ls" => Ok(json!(ls_to_susp(&parse_ls(expr)?)?.to_string())),
        _ => Err(susp::Error::Config(format!("unknown calculus {from}"))),
    }
}

/// Translates a lambda-sigma, lambda-upsilon or lambda-s expression into suspension notation.
#[wasm_bindgen]
pub fn translate(from: &str, expr: &str) -> String {
    reply(translate_json(from, expr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn normalize_reports_every_step() {
        let v = parse(normalize("(\\ #1) c", "rmbeta", "lo"));
        assert_eq!(v["ok"]["result"], "c");
        assert_eq!(v["ok"]["status"], "NormalForm");
        assert_eq!(v["ok"]["steps"][0]["rule"], "betas");
        assert_eq!(v["ok"]["steps"][0]["at"], "[]");
    }

    #[test]
    fn fuel_is_capped() {
        let v = parse(normalize("(\\ #1 #1) (\\ #1 #1)", "rmbeta", "lo"));
        assert_eq!(v["ok"]["status"], "FuelExhausted");
    }

    #[test]
    fn redexes_then_step() {
        let v = parse(redexes("(\\ #1) ((\\ #1) c)", "rmbeta"));
        assert_eq!(v["ok"].as_array().unwrap().len(), 2);
        assert_eq!(v["ok"][1]["at"], "[1]");
        let v = parse(step("(\\ #1) ((\\ #1) c)", "[1]", "betas"));
        assert_eq!(v["ok"], "(\\ #1) [#1, 1, 0, (c, 0) :: nil]");
    }

    #[test]
    fn translations() {
        assert_eq!(parse(translate("lsig", "1[^ o ^]"))["ok"], "#3");
        assert_eq!(parse(translate("lu", "lift(c/)"))["ok"], "ol = 2, nl = 1, env = (#1, 1) :: (c, 0) :: nil");
        assert_eq!(parse(translate("ls", "sig(1, 1, c)"))["ok"], "[#1, 1, 0, (c, 0) :: nil]");
    }

    #[test]
    fn errors_are_reported_not_thrown() {
        assert!(parse(normalize("(\\", "rm", "lo"))["error"].is_string());
        assert!(parse(step("c", "[]", "r1"))["error"].is_string());
        assert!(parse(translate("pascal", "c"))["error"].is_string());
        assert!(parse(redexes("c", "r9"))["error"].is_string());
    }
}
