//! The lambda-s calculus, its extension lambda-s-e, and the translation into suspensions.

use std::fmt;
use std::sync::Arc;

use super::engine::{self, BridgeOutcome, Calculus};
use crate::error::{plus, Error, Result};
use crate::expr::{Name, Path, SuspEnv, SuspTerm};
use crate::rewrite::Strategy;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ls {
    Var(usize),
    Const(Name),
    App(Box<Ls>, Box<Ls>),
    Abs(Box<Ls>),
    /// `a sigma^i b`
    Sigma(usize, Box<Ls>, Box<Ls>),
    /// `phi^i_k a`, stored as `(k, i, a)`
    Phi(usize, usize, Box<Ls>),
}

impl Ls {
    pub fn constant(c: &str) -> Ls {
        Ls::Const(Arc::from(c))
    }
    pub fn app(a: Ls, b: Ls) -> Ls {
        Ls::App(Box::new(a), Box::new(b))
    }
    pub fn abs(a: Ls) -> Ls {
        Ls::Abs(Box::new(a))
    }
    pub fn sigma(i: usize, a: Ls, b: Ls) -> Ls {
        Ls::Sigma(i, Box::new(a), Box::new(b))
    }
    pub fn phi(k: usize, i: usize, a: Ls) -> Ls {
        Ls::Phi(k, i, Box::new(a))
    }

    pub fn size(&self) -> usize {
        1 + LsCalc::children(self).into_iter().map(Ls::size).sum::<usize>()
    }

    /// Indices are positive, `sigma^i` and `phi^i` have `i >= 1`.
    pub fn well_formed(&self) -> bool {
        match self {
            Ls::Var(n) => *n >= 1,
            Ls::Sigma(i, ..) | Ls::Phi(_, i, _) if *i == 0 => false,
            _ => LsCalc::children(self).into_iter().all(Ls::well_formed),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LsRule {
    SigmaGen,
    SigmaLam,
    SigmaApp,
    SigmaDest,
    PhiLam,
    PhiApp,
    PhiDest,
    SigmaSigma,
    SigmaPhi1,
    SigmaPhi2,
    PhiSigma,
    PhiPhi1,
    PhiPhi2,
}

impl LsRule {
    pub const ALL: [LsRule; 13] = [
        LsRule::SigmaGen,
        LsRule::SigmaLam,
        LsRule::SigmaApp,
        LsRule::SigmaDest,
        LsRule::PhiLam,
        LsRule::PhiApp,
        LsRule::PhiDest,
        LsRule::SigmaSigma,
        LsRule::SigmaPhi1,
        LsRule::SigmaPhi2,
        LsRule::PhiSigma,
        LsRule::PhiPhi1,
        LsRule::PhiPhi2,
    ];

    /// The rules of lambda-s.
    pub const LS: [LsRule; 7] = [
        LsRule::SigmaGen,
        LsRule::SigmaLam,
        LsRule::SigmaApp,
        LsRule::SigmaDest,
        LsRule::PhiLam,
        LsRule::PhiApp,
        LsRule::PhiDest,
    ];
}

impl fmt::Display for LsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub struct LsCalc;

impl Calculus for LsCalc {
    type Expr = Ls;
    type Rule = LsRule;
    const RULES: &'static [LsRule] = &LsRule::ALL;

    fn children(x: &Ls) -> Vec<&Ls> {
        match x {
            Ls::App(a, b) | Ls::Sigma(_, a, b) => vec![a, b],
            Ls::Abs(a) | Ls::Phi(_, _, a) => vec![a],
            _ => vec![],
        }
    }

    fn with_child(x: &Ls, i: usize, c: Ls) -> Ls {
        match x {
            Ls::App(_, b) if i == 0 => Ls::app(c, (**b).clone()),
            Ls::App(a, _) => Ls::app((**a).clone(), c),
            Ls::Sigma(j, _, b) if i == 0 => Ls::sigma(*j, c, (**b).clone()),
            Ls::Sigma(j, a, _) => Ls::sigma(*j, (**a).clone(), c),
            Ls::Abs(_) => Ls::abs(c),
            Ls::Phi(k, j, _) => Ls::phi(*k, *j, c),
            _ => unreachable!("leaf has no children"),
        }
    }

    fn apply(rule: LsRule, x: &Ls) -> Option<Ls> {
        use LsRule as R;
        match (rule, x) {
            (R::SigmaGen, Ls::App(f, b)) => match &**f {
                Ls::Abs(a) => Some(Ls::sigma(1, (**a).clone(), (**b).clone())),
                _ => None,
            },
            (R::SigmaLam, Ls::Sigma(i, a, b)) => match &**a {
                Ls::Abs(a) => Some(Ls::abs(Ls::sigma(plus(*i, 1), (**a).clone(), (**b).clone()))),
                _ => None,
            },
            (R::SigmaApp, Ls::Sigma(i, a, b)) => match &**a {
                Ls::App(a1, a2) => Some(Ls::app(
                    Ls::sigma(*i, (**a1).clone(), (**b).clone()),
                    Ls::sigma(*i, (**a2).clone(), (**b).clone()),
                )),
                _ => None,
            },
            (R::SigmaDest, Ls::Sigma(i, a, b)) => match &**a {
                Ls::Var(n) if n > i => Some(Ls::Var(n - 1)),
                Ls::Var(n) if n == i => Some(Ls::phi(0, *i, (**b).clone())),
                Ls::Var(n) => Some(Ls::Var(*n)),
                _ => None,
            },
            (R::PhiLam, Ls::Phi(k, i, a)) => match &**a {
                Ls::Abs(a) => Some(Ls::abs(Ls::phi(plus(*k, 1), *i, (**a).clone()))),
                _ => None,
            },
            (R::PhiApp, Ls::Phi(k, i, a)) => match &**a {
                Ls::App(a1, a2) => Some(Ls::app(Ls::phi(*k, *i, (**a1).clone()), Ls::phi(*k, *i, (**a2).clone()))),
                _ => None,
            },
            (R::PhiDest, Ls::Phi(k, i, a)) => match &**a {
                Ls::Var(n) if n > k => Some(Ls::Var(plus(*n, *i) - 1)),
                Ls::Var(n) => Some(Ls::Var(*n)),
                _ => None,
            },
            (R::SigmaSigma, Ls::Sigma(j, a, c)) => match &**a {
                Ls::Sigma(i, a, b) if i <= j => Some(Ls::sigma(
                    *i,
                    Ls::sigma(plus(*j, 1), (**a).clone(), (**c).clone()),
                    Ls::sigma(j - i + 1, (**b).clone(), (**c).clone()),
                )),
                _ => None,
            },
            (R::SigmaPhi1, Ls::Sigma(j, a, _)) => match &**a {
                Ls::Phi(k, i, a) if k < j && *j < plus(*k, *i) => Some(Ls::phi(*k, i - 1, (**a).clone())),
                _ => None,
            },
            (R::SigmaPhi2, Ls::Sigma(j, a, b)) => match &**a {
                Ls::Phi(k, i, a) if plus(*k, *i) <= *j => {
                    Some(Ls::phi(*k, *i, Ls::sigma(j - i + 1, (**a).clone(), (**b).clone())))
                }
                _ => None,
            },
            (R::PhiSigma, Ls::Phi(k, i, a)) => match &**a {
                Ls::Sigma(j, a, b) if *j <= plus(*k, 1) => Some(Ls::sigma(
                    *j,
                    Ls::phi(plus(*k, 1), *i, (**a).clone()),
                    Ls::phi(plus(*k, 1) - j, *i, (**b).clone()),
                )),
                _ => None,
            },
            (R::PhiPhi1, Ls::Phi(k, i, a)) => match &**a {
                Ls::Phi(l, j, a) if plus(*l, *j) <= *k => {
                    Some(Ls::phi(*l, *j, Ls::phi(plus(*k, 1) - j, *i, (**a).clone())))
                }
                _ => None,
            },
            (R::PhiPhi2, Ls::Phi(k, i, a)) => match &**a {
                Ls::Phi(l, j, a) if l <= k && *k < plus(*l, *j) => Some(Ls::phi(*l, plus(*j, *i) - 1, (**a).clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

pub fn ls_step(x: &Ls, at: &Path, rule: LsRule) -> Result<Ls> {
    engine::step_at::<LsCalc>(x, at, rule)
}

pub fn ls_normalize(x: &Ls, include_se: bool, strategy: Strategy, fuel: usize) -> BridgeOutcome<Ls> {
    let rules: &[LsRule] = if include_se { &LsRule::ALL } else { &LsRule::LS };
    engine::normalize::<LsCalc>(x, rules, strategy, fuel)
}

/// `(#1, hi) :: ... :: (#1, lo) :: tail`
fn dummies(hi: usize, lo: usize, tail: SuspEnv) -> SuspEnv {
    (lo..=hi).fold(tail, |e, l| SuspEnv::cons(SuspTerm::Index(1), l, e))
}

pub fn ls_to_susp(a: &Ls) -> Result<SuspTerm> {
    if let Ls::Sigma(0, ..) | Ls::Phi(_, 0, _) = a {
        return Err(Error::Constraint(format!("operator index must be positive in {a}")));
    }
    Ok(match a {
        Ls::Var(n) => SuspTerm::Index(*n),
        Ls::Const(c) => SuspTerm::Const(c.clone()),
        Ls::App(a, b) => SuspTerm::app(ls_to_susp(a)?, ls_to_susp(b)?),
        Ls::Abs(a) => SuspTerm::abs(ls_to_susp(a)?),
        Ls::Sigma(i, a, b) => {
            let tail = SuspEnv::cons(ls_to_susp(b)?, 0, SuspEnv::Nil);
            SuspTerm::susp(ls_to_susp(a)?, *i, i - 1, dummies(i - 1, 1, tail))
        }
        Ls::Phi(k, i, a) => {
            let nl = plus(*k, *i) - 1;
            SuspTerm::susp(ls_to_susp(a)?, *k, nl, dummies(nl, *i, SuspEnv::Nil))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridges::engine::{normalize, step_at};
    use crate::env::is_well_formed;
    use crate::expr::{Path, SuspExpr};
    use crate::rewrite::Strategy;
    use crate::syntax::ls::parse_ls;

    #[test]
    fn translation_shapes() {
        let t = ls_to_susp(&parse_ls("sig(3, 1, c)").unwrap()).unwrap();
        assert_eq!(t.to_string(), "[#1, 3, 2, (#1, 2) :: (#1, 1) :: (c, 0) :: nil]");
        let u = ls_to_susp(&parse_ls("phi(1, 2, 2)").unwrap()).unwrap();
        assert_eq!(u.to_string(), "[#2, 1, 2, (#1, 2) :: nil]");
        assert!(is_well_formed(&SuspExpr::Term(t)));
        assert!(is_well_formed(&SuspExpr::Term(u)));
    }

    #[test]
    fn phi_phi_composition() {
        let x = parse_ls("phi(0, 2, phi(0, 1, a))").unwrap();
        let y = step_at::<LsCalc>(&x, &Path::root(), LsRule::PhiPhi2).unwrap();
        assert_eq!(y, parse_ls("phi(0, 2, a)").unwrap());
    }

    #[test]
    fn beta_reduces() {
        let x = parse_ls("(\\ \\ 2 1) (\\ 1)").unwrap();
        let out = normalize::<LsCalc>(&x, &LsRule::LS, Strategy::LeftmostOutermost, 100);
        assert_eq!(out.result, parse_ls("\\ 1").unwrap());
    }
}
