//! The lambda-upsilon calculus and its translation into suspensions.

use std::fmt;
use std::sync::Arc;

use super::engine::{self, BridgeOutcome, Calculus};
use super::EnvTriple;
use crate::error::{plus, Error, Result};
use crate::expr::{Name, Path, SuspEnv, SuspTerm};
use crate::rewrite::Strategy;

/// Terms and substitutions share one type; `is_term` tells the sorts apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lu {
    Var(usize),
    Const(Name),
    App(Box<Lu>, Box<Lu>),
    Abs(Box<Lu>),
    Clos(Box<Lu>, Box<Lu>),
    Slash(Box<Lu>),
    Lift(Box<Lu>),
    Shift,
}

impl Lu {
    pub fn constant(c: &str) -> Lu {
        Lu::Const(Arc::from(c))
    }
    pub fn app(a: Lu, b: Lu) -> Lu {
        Lu::App(Box::new(a), Box::new(b))
    }
    pub fn abs(a: Lu) -> Lu {
        Lu::Abs(Box::new(a))
    }
    pub fn clos(a: Lu, s: Lu) -> Lu {
        Lu::Clos(Box::new(a), Box::new(s))
    }
    pub fn slash(a: Lu) -> Lu {
        Lu::Slash(Box::new(a))
    }
    pub fn lift(s: Lu) -> Lu {
        Lu::Lift(Box::new(s))
    }

    pub fn is_term(&self) -> bool {
        matches!(self, Lu::Var(_) | Lu::Const(_) | Lu::App(..) | Lu::Abs(_) | Lu::Clos(..))
    }

    pub fn size(&self) -> usize {
        1 + LuCalc::children(self).into_iter().map(Lu::size).sum::<usize>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LuRule {
    B,
    App,
    Lambda,
    FVar,
    RVar,
    VarShift,
    FVarLift,
    RVarLift,
}

impl LuRule {
    pub const ALL: [LuRule; 8] = [
        LuRule::B,
        LuRule::App,
        LuRule::Lambda,
        LuRule::FVar,
        LuRule::RVar,
        LuRule::VarShift,
        LuRule::FVarLift,
        LuRule::RVarLift,
    ];

    /// Everything but `B`.
    pub const UPSILON: [LuRule; 7] =
        [LuRule::App, LuRule::Lambda, LuRule::FVar, LuRule::RVar, LuRule::VarShift, LuRule::FVarLift, LuRule::RVarLift];
}

impl fmt::Display for LuRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub struct LuCalc;

impl Calculus for LuCalc {
    type Expr = Lu;
    type Rule = LuRule;
    const RULES: &'static [LuRule] = &LuRule::ALL;

    fn children(x: &Lu) -> Vec<&Lu> {
        match x {
            Lu::App(a, b) | Lu::Clos(a, b) => vec![a, b],
            Lu::Abs(a) | Lu::Slash(a) | Lu::Lift(a) => vec![a],
            _ => vec![],
        }
    }

    fn with_child(x: &Lu, i: usize, c: Lu) -> Lu {
        match x {
            Lu::App(a, b) if i == 0 => Lu::app(c, (**b).clone()),
            Lu::App(a, _) => Lu::app((**a).clone(), c),
            Lu::Clos(_, s) if i == 0 => Lu::clos(c, (**s).clone()),
            Lu::Clos(a, _) => Lu::clos((**a).clone(), c),
            Lu::Abs(_) => Lu::abs(c),
            Lu::Slash(_) => Lu::slash(c),
            Lu::Lift(_) => Lu::lift(c),
            _ => unreachable!("leaf has no children"),
        }
    }

    fn apply(rule: LuRule, x: &Lu) -> Option<Lu> {
        match (rule, x) {
            (LuRule::B, Lu::App(f, b)) => match &**f {
                Lu::Abs(a) => Some(Lu::clos((**a).clone(), Lu::slash((**b).clone()))),
                _ => None,
            },
            (LuRule::App, Lu::Clos(a, s)) => match &**a {
                Lu::App(a1, a2) => {
                    Some(Lu::app(Lu::clos((**a1).clone(), (**s).clone()), Lu::clos((**a2).clone(), (**s).clone())))
                }
                _ => None,
            },
            (LuRule::Lambda, Lu::Clos(a, s)) => match &**a {
                Lu::Abs(b) => Some(Lu::abs(Lu::clos((**b).clone(), Lu::lift((**s).clone())))),
                _ => None,
            },
            (LuRule::FVar, Lu::Clos(a, s)) => match (&**a, &**s) {
                (Lu::Var(1), Lu::Slash(b)) => Some((**b).clone()),
                _ => None,
            },
            (LuRule::RVar, Lu::Clos(a, s)) => match (&**a, &**s) {
                (Lu::Var(n), Lu::Slash(_)) if *n > 1 => Some(Lu::Var(n - 1)),
                _ => None,
            },
            (LuRule::VarShift, Lu::Clos(a, s)) => match (&**a, &**s) {
                (Lu::Var(n), Lu::Shift) => Some(Lu::Var(plus(*n, 1))),
                _ => None,
            },
            (LuRule::FVarLift, Lu::Clos(a, s)) => match (&**a, &**s) {
                (Lu::Var(1), Lu::Lift(_)) => Some(Lu::Var(1)),
                _ => None,
            },
            (LuRule::RVarLift, Lu::Clos(a, s)) => match (&**a, &**s) {
                (Lu::Var(n), Lu::Lift(t)) if *n > 1 => {
                    Some(Lu::clos(Lu::clos(Lu::Var(n - 1), (**t).clone()), Lu::Shift))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

pub fn lu_step(x: &Lu, at: &Path, rule: LuRule) -> Result<Lu> {
    engine::step_at::<LuCalc>(x, at, rule)
}

/// Normalizes with `rules`, usually [`LuRule::ALL`] or [`LuRule::UPSILON`].
pub fn lu_normalize(x: &Lu, rules: &[LuRule], strategy: Strategy, fuel: usize) -> BridgeOutcome<Lu> {
    engine::normalize::<LuCalc>(x, rules, strategy, fuel)
}

pub fn lu_to_susp(a: &Lu) -> Result<SuspTerm> {
    Ok(match a {
        Lu::Var(n) => SuspTerm::Index(*n),
        Lu::Const(c) => SuspTerm::Const(c.clone()),
        Lu::App(a, b) => SuspTerm::app(lu_to_susp(a)?, lu_to_susp(b)?),
        Lu::Abs(a) => SuspTerm::abs(lu_to_susp(a)?),
        Lu::Clos(a, s) => {
            let tr = lu_subst_to_triple(s)?;
            SuspTerm::susp(lu_to_susp(a)?, tr.ol, tr.nl, tr.env)
        }
        _ => return Err(Error::Constraint(format!("expected a lambda-upsilon term, found {a}"))),
    })
}

pub fn lu_subst_to_triple(s: &Lu) -> Result<EnvTriple> {
    Ok(match s {
        Lu::Slash(a) => EnvTriple { ol: 1, nl: 0, env: SuspEnv::cons(lu_to_susp(a)?, 0, SuspEnv::Nil) },
        Lu::Shift => EnvTriple { ol: 0, nl: 1, env: SuspEnv::Nil },
        Lu::Lift(s) => {
            let t = lu_subst_to_triple(s)?;
            let nl = plus(t.nl, 1);
            EnvTriple { ol: plus(t.ol, 1), nl, env: SuspEnv::cons(SuspTerm::Index(1), nl, t.env) }
        }
        _ => return Err(Error::Constraint(format!("expected a lambda-upsilon substitution, found {s}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridges::engine::normalize;
    use crate::rewrite::Strategy;
    use crate::syntax::lu::parse_lu;

    #[test]
    fn upsilon_normalizes_beta_contractum() {
        let t = parse_lu("(\\ 2_ 1_) c").unwrap();
        let out = normalize::<LuCalc>(&t, &LuRule::ALL, Strategy::LeftmostOutermost, 100);
        assert_eq!(out.result.to_string(), "1_ c");
    }

    #[test]
    fn lift_translation() {
        let s = parse_lu("lift(c/)").unwrap();
        let tr = lu_subst_to_triple(&s).unwrap();
        assert_eq!((tr.ol, tr.nl), (2, 1));
        assert_eq!(tr.env.to_string(), "(#1, 1) :: (c, 0) :: nil");
    }
}
