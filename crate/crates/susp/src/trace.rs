//! JSON rewrite traces and their replay.

use serde::{Deserialize, Serialize};

use crate::bridges::engine::{self, BridgeOutcome, Calculus};
use crate::bridges::ls::LsCalc;
use crate::bridges::lsig::LsigCalc;
use crate::bridges::lu::LuCalc;
use crate::error::{Error, Result};
use crate::expr::Path;
use crate::rewrite::{step_at, RuleId, Status, Strategy, Trace};
use crate::syntax::{ls::parse_ls, lsig::parse_lsig, lu::parse_lu, parse_expr, Calc};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub path: Vec<usize>,
    pub result: String,
}

/// Expressions are stored in canonical concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    #[serde(default)]
    pub calculus: Calc,
    pub initial: String,
    pub steps: Vec<TraceStep>,
    pub status: Status,
}

impl TraceFile {
    pub fn from_trace(t: &Trace) -> Self {
        TraceFile {
            calculus: Calc::Susp,
            initial: t.initial.to_string(),
            steps: t
                .steps
                .iter()
                .map(|s| TraceStep { rule: s.rule.to_string(), path: s.at.0.clone(), result: s.result.to_string() })
                .collect(),
            status: t.status,
        }
    }

    /// Normalizes `x` in a bridge calculus, recording every step.
    pub fn record_bridge<C: Calculus>(
        calculus: Calc,
        x: &C::Expr,
        rules: &[C::Rule],
        strategy: Strategy,
        fuel: usize,
    ) -> (BridgeOutcome<C::Expr>, Self) {
        let mut steps = Vec::new();
        let out = engine::normalize_with::<C>(x, rules, strategy, fuel, |s| {
            steps.push(TraceStep { rule: s.rule.to_string(), path: s.at.0.clone(), result: s.result.to_string() })
        });
        let file = TraceFile { calculus, initial: x.to_string(), steps, status: out.status };
        (out, file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })
    }

    /// Re-applies every recorded step and checks that each result matches.
    pub fn replay(&self) -> Result<()> {
        match self.calculus {
            Calc::Susp => {
                let mut cur = parse_expr(&self.initial)?;
                self.check_initial(&cur.to_string())?;
                for (i, s) in self.steps.iter().enumerate() {
                    let rule: RuleId = s.rule.parse()?;
                    cur = step_at(&cur, &Path(s.path.clone()), rule)?;
                    check_step(i, &cur.to_string(), &s.result)?;
                }
                Ok(())
            }
            Calc::Lsig => self.replay_bridge::<LsigCalc>(parse_lsig),
            Calc::Lu => self.replay_bridge::<LuCalc>(parse_lu),
            Calc::Ls => self.replay_bridge::<LsCalc>(parse_ls),
        }
    }

    fn replay_bridge<C: Calculus>(&self, parse: fn(&str) -> Result<C::Expr>) -> Result<()> {
        let mut cur = parse(&self.initial)?;
        self.check_initial(&cur.to_string())?;
        for (i, s) in self.steps.iter().enumerate() {
            let rule = engine::parse_rule::<C>(&s.rule)?;
            cur = engine::step_at::<C>(&cur, &Path(s.path.clone()), rule)?;
            check_step(i, &cur.to_string(), &s.result)?;
        }
        Ok(())
    }

    fn check_initial(&self, printed: &str) -> Result<()> {
        if printed != self.initial {
            return Err(Error::Constraint(format!(
                "initial expression is not canonical: {} reads as {printed}",
                self.initial
            )));
        }
        Ok(())
    }
}

fn check_step(i: usize, got: &str, recorded: &str) -> Result<()> {
    if got != recorded {
        return Err(Error::Constraint(format!("step {i} gives {got}, trace records {recorded}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{normalize, RuleSet, Strategy};

    #[test]
    fn json_round_trip_and_replay() {
        let x = parse_expr("[(\\ #1 #2) c, 0, 1, nil]").unwrap();
        let t = normalize(&x, RuleSet::rmbeta(), Strategy::LeftmostOutermost, 100).unwrap();
        let file = TraceFile::from_trace(&t);
        let back = TraceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        back.replay().unwrap();
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let x = parse_expr("(\\ #1) c").unwrap();
        let t = normalize(&x, RuleSet::rmbeta(), Strategy::LeftmostOutermost, 100).unwrap();
        let mut file = TraceFile::from_trace(&t);
        file.steps[0].result = "d".into();
        assert!(file.replay().is_err());
    }

    #[test]
    fn lsig_trace_replays() {
        let x = parse_lsig("((\\ 1 1[^]) c)[^]").unwrap();
        let (out, file) = TraceFile::record_bridge::<LsigCalc>(
            Calc::Lsig,
            &x,
            &crate::bridges::lsig::LsigRule::ALL,
            Strategy::LeftmostInnermost,
            100,
        );
        assert_eq!(out.status, Status::NormalForm);
        assert_eq!(file.steps.len(), out.steps);
        TraceFile::from_json(&file.to_json()).unwrap().replay().unwrap();
    }

    #[test]
    fn calculus_defaults_to_susp() {
        let f = TraceFile::from_json(r#"{"initial": "c", "steps": [], "status": "NormalForm"}"#).unwrap();
        assert_eq!(f.calculus, Calc::Susp);
    }
}
