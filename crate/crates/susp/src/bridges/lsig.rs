//! The lambda-sigma calculus and its translations to and from suspensions.

use std::fmt;
use std::sync::Arc;

use super::engine::{self, BridgeOutcome, Calculus};
use super::EnvTriple;
use crate::env::lev;
use crate::error::{monus, plus, Error, Result};
use crate::expr::{Name, Path, SuspEnv, SuspTerm};
use crate::rewrite::Strategy;

/// Terms and substitutions share one type; `is_term` tells the sorts apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lsig {
    One,
    Const(Name),
    App(Box<Lsig>, Box<Lsig>),
    Abs(Box<Lsig>),
    Clos(Box<Lsig>, Box<Lsig>),
    Id,
    Shift,
    Cons(Box<Lsig>, Box<Lsig>),
    Comp(Box<Lsig>, Box<Lsig>),
}

impl Lsig {
    pub fn constant(c: &str) -> Lsig {
        Lsig::Const(Arc::from(c))
    }
    pub fn app(a: Lsig, b: Lsig) -> Lsig {
        Lsig::App(Box::new(a), Box::new(b))
    }
    pub fn abs(a: Lsig) -> Lsig {
        Lsig::Abs(Box::new(a))
    }
    pub fn clos(a: Lsig, s: Lsig) -> Lsig {
        Lsig::Clos(Box::new(a), Box::new(s))
    }
    pub fn cons(a: Lsig, s: Lsig) -> Lsig {
        Lsig::Cons(Box::new(a), Box::new(s))
    }
    pub fn comp(s: Lsig, t: Lsig) -> Lsig {
        Lsig::Comp(Box::new(s), Box::new(t))
    }

    /// `^n`, nested to the right; `^0` is `id`.
    pub fn shift_pow(n: usize) -> Lsig {
        match n {
            0 => Lsig::Id,
            1 => Lsig::Shift,
            _ => Lsig::comp(Lsig::Shift, Lsig::shift_pow(n - 1)),
        }
    }

    /// The `n >= 1` with `self == ^n`.
    pub fn as_shift_pow(&self) -> Option<usize> {
        match self {
            Lsig::Shift => Some(1),
            Lsig::Comp(a, b) if **a == Lsig::Shift => b.as_shift_pow().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, Lsig::One | Lsig::Const(_) | Lsig::App(..) | Lsig::Abs(_) | Lsig::Clos(..))
    }

    pub fn size(&self) -> usize {
        1 + LsigCalc::children(self).into_iter().map(Lsig::size).sum::<usize>()
    }

    /// Checks that every position holds the right sort.
    pub fn well_sorted(&self) -> bool {
        let kids = LsigCalc::children(self);
        let want: &[bool] = match self {
            Lsig::App(..) => &[true, true],
            Lsig::Abs(_) => &[true],
            Lsig::Clos(..) | Lsig::Cons(..) => &[true, false],
            Lsig::Comp(..) => &[false, false],
            _ => &[],
        };
        kids.iter().zip(want).all(|(k, &t)| k.is_term() == t && k.well_sorted())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LsigRule {
    Beta,
    App,
    Abs,
    VarId,
    VarCons,
    Clos,
    Map,
    Ass,
    IdL,
    ShiftId,
    ShiftCons,
}

impl LsigRule {
    pub const ALL: [LsigRule; 11] = [
        LsigRule::Beta,
        LsigRule::App,
        LsigRule::Abs,
        LsigRule::VarId,
        LsigRule::VarCons,
        LsigRule::Clos,
        LsigRule::Map,
        LsigRule::Ass,
        LsigRule::IdL,
        LsigRule::ShiftId,
        LsigRule::ShiftCons,
    ];

    /// Everything but `Beta`.
    pub const SIGMA: [LsigRule; 10] = [
        LsigRule::App,
        LsigRule::Abs,
        LsigRule::VarId,
        LsigRule::VarCons,
        LsigRule::Clos,
        LsigRule::Map,
        LsigRule::Ass,
        LsigRule::IdL,
        LsigRule::ShiftId,
        LsigRule::ShiftCons,
    ];
}

impl fmt::Display for LsigRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub struct LsigCalc;

impl Calculus for LsigCalc {
    type Expr = Lsig;
    type Rule = LsigRule;
    const RULES: &'static [LsigRule] = &LsigRule::ALL;

    fn children(x: &Lsig) -> Vec<&Lsig> {
        match x {
            Lsig::App(a, b) | Lsig::Clos(a, b) | Lsig::Cons(a, b) | Lsig::Comp(a, b) => vec![a, b],
            Lsig::Abs(a) => vec![a],
            _ => vec![],
        }
    }

    fn with_child(x: &Lsig, i: usize, c: Lsig) -> Lsig {
        let pick = |a: &Lsig, b: &Lsig| if i == 0 { (c.clone(), b.clone()) } else { (a.clone(), c.clone()) };
        match x {
            Lsig::App(a, b) => {
                let (a, b) = pick(a, b);
                Lsig::app(a, b)
            }
            Lsig::Clos(a, b) => {
                let (a, b) = pick(a, b);
                Lsig::clos(a, b)
            }
            Lsig::Cons(a, b) => {
                let (a, b) = pick(a, b);
                Lsig::cons(a, b)
            }
            Lsig::Comp(a, b) => {
                let (a, b) = pick(a, b);
                Lsig::comp(a, b)
            }
            Lsig::Abs(_) => Lsig::abs(c),
            _ => unreachable!("leaf has no children"),
        }
    }

    fn apply(rule: LsigRule, x: &Lsig) -> Option<Lsig> {
        use Lsig as L;
        match (rule, x) {
            (LsigRule::Beta, L::App(f, b)) => match &**f {
                L::Abs(a) => Some(L::clos((**a).clone(), L::cons((**b).clone(), L::Id))),
                _ => None,
            },
            (LsigRule::App, L::Clos(a, s)) => match &**a {
                L::App(a1, a2) => {
                    Some(L::app(L::clos((**a1).clone(), (**s).clone()), L::clos((**a2).clone(), (**s).clone())))
                }
                _ => None,
            },
            (LsigRule::Abs, L::Clos(a, s)) => match &**a {
                L::Abs(b) => Some(L::abs(L::clos((**b).clone(), L::cons(L::One, L::comp((**s).clone(), L::Shift))))),
                _ => None,
            },
            (LsigRule::VarId, L::Clos(a, s)) if **a == L::One && **s == L::Id => Some(L::One),
            (LsigRule::VarCons, L::Clos(a, s)) if **a == L::One => match &**s {
                L::Cons(b, _) => Some((**b).clone()),
                _ => None,
            },
            (LsigRule::Clos, L::Clos(a, t)) => match &**a {
                L::Clos(b, s) => Some(L::clos((**b).clone(), L::comp((**s).clone(), (**t).clone()))),
                _ => None,
            },
            (LsigRule::Map, L::Comp(s, t)) => match &**s {
                L::Cons(a, s1) => {
                    Some(L::cons(L::clos((**a).clone(), (**t).clone()), L::comp((**s1).clone(), (**t).clone())))
                }
                _ => None,
            },
            (LsigRule::Ass, L::Comp(s, u)) => match &**s {
                L::Comp(s1, t) => Some(L::comp((**s1).clone(), L::comp((**t).clone(), (**u).clone()))),
                _ => None,
            },
            (LsigRule::IdL, L::Comp(s, t)) if **s == L::Id => Some((**t).clone()),
            (LsigRule::ShiftId, L::Comp(s, t)) if **s == L::Shift && **t == L::Id => Some(L::Shift),
            (LsigRule::ShiftCons, L::Comp(s, t)) if **s == L::Shift => match &**t {
                L::Cons(_, u) => Some((**u).clone()),
                _ => None,
            },
            _ => None,
        }
    }
}

pub fn lsig_step(x: &Lsig, at: &Path, rule: LsigRule) -> Result<Lsig> {
    engine::step_at::<LsigCalc>(x, at, rule)
}

/// Normalizes with `rules`, usually [`LsigRule::ALL`] or [`LsigRule::SIGMA`].
pub fn lsig_normalize(x: &Lsig, rules: &[LsigRule], strategy: Strategy, fuel: usize) -> BridgeOutcome<Lsig> {
    engine::normalize::<LsigCalc>(x, rules, strategy, fuel)
}

/// Translates a suspension term; meta variables have no counterpart.
pub fn susp_to_lsig(t: &SuspTerm) -> Result<Lsig> {
    Ok(match t {
        SuspTerm::Index(1) => Lsig::One,
        SuspTerm::Index(n) => Lsig::clos(Lsig::One, Lsig::shift_pow(n - 1)),
        SuspTerm::Const(c) => Lsig::Const(c.clone()),
        SuspTerm::Meta(m) => return Err(Error::Constraint(format!("meta variable {m} has no lambda-sigma image"))),
        SuspTerm::App(a, b) => Lsig::app(susp_to_lsig(a)?, susp_to_lsig(b)?),
        SuspTerm::Abs(a) => Lsig::abs(susp_to_lsig(a)?),
        SuspTerm::Susp { term, nl, env, .. } => Lsig::clos(susp_to_lsig(term)?, env_to_lsig(env, *nl)?),
    })
}

/// Translates an environment read at embedding level `i`, which must be at least its level.
pub fn env_to_lsig(e: &SuspEnv, i: usize) -> Result<Lsig> {
    let l = lev(e);
    if l > i {
        return Err(Error::Constraint(format!("environment level {l} exceeds {i}")));
    }
    env_at(e, i)
}

fn shifted(mut s: Lsig, k: usize) -> Lsig {
    for _ in 0..k {
        s = Lsig::comp(s, Lsig::Shift);
    }
    s
}

fn env_at(e: &SuspEnv, i: usize) -> Result<Lsig> {
    Ok(match e {
        SuspEnv::Nil => shifted(Lsig::Id, i),
        SuspEnv::Cons(item, rest) => {
            let n = item.index;
            shifted(Lsig::cons(susp_to_lsig(&item.term)?, env_at(rest, n)?), monus(i, n))
        }
        SuspEnv::Merge { e1, nl1, ol2, e2 } => Lsig::comp(env_at(e1, *nl1)?, env_at(e2, monus(i, monus(*nl1, *ol2)))?),
    })
}

/// Translates a lambda-sigma term.
pub fn lsig_to_susp(a: &Lsig) -> Result<SuspTerm> {
    Ok(match a {
        Lsig::One => SuspTerm::Index(1),
        Lsig::Const(c) => SuspTerm::Const(c.clone()),
        Lsig::App(a, b) => SuspTerm::app(lsig_to_susp(a)?, lsig_to_susp(b)?),
        Lsig::Abs(a) => SuspTerm::abs(lsig_to_susp(a)?),
        Lsig::Clos(a, s) => match (&**a, s.as_shift_pow()) {
            (Lsig::One, Some(n)) => SuspTerm::Index(plus(n, 1)),
            _ => {
                let tr = lsig_subst_to_triple(s)?;
                SuspTerm::susp(lsig_to_susp(a)?, tr.ol, tr.nl, tr.env)
            }
        },
        s => return Err(Error::Constraint(format!("expected a term, found a {}", sort_name(s)))),
    })
}

fn sort_name(s: &Lsig) -> &'static str {
    if s.is_term() {
        "term"
    } else {
        "substitution"
    }
}

/// Translates a substitution to its `(ol, nl, env)` triple.
pub fn lsig_subst_to_triple(s: &Lsig) -> Result<EnvTriple> {
    Ok(match s {
        Lsig::Id => EnvTriple { ol: 0, nl: 0, env: SuspEnv::Nil },
        Lsig::Shift => EnvTriple { ol: 0, nl: 1, env: SuspEnv::Nil },
        Lsig::Cons(a, s) => {
            let t = lsig_subst_to_triple(s)?;
            EnvTriple { ol: plus(t.ol, 1), nl: t.nl, env: SuspEnv::cons(lsig_to_susp(a)?, t.nl, t.env) }
        }
        Lsig::Comp(s1, s2) if **s2 == Lsig::Shift => {
            let t = lsig_subst_to_triple(s1)?;
            EnvTriple { ol: t.ol, nl: plus(t.nl, 1), env: t.env }
        }
        Lsig::Comp(s1, s2) => {
            let a = lsig_subst_to_triple(s1)?;
            let b = lsig_subst_to_triple(s2)?;
            EnvTriple {
                ol: plus(a.ol, monus(b.ol, a.nl)),
                nl: plus(b.nl, monus(a.nl, b.ol)),
                env: SuspEnv::merge(a.env, a.nl, b.ol, b.env),
            }
        }
        t => return Err(Error::Constraint(format!("expected a substitution, found a {}", sort_name(t)))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::is_well_formed;
    use crate::expr::SuspExpr;
    use crate::syntax::lsig::parse_lsig;
    use crate::syntax::parse_term;

    #[test]
    fn shift_powers() {
        assert_eq!(Lsig::shift_pow(3).as_shift_pow(), Some(3));
        assert_eq!(Lsig::Id.as_shift_pow(), None);
        assert_eq!(Lsig::comp(Lsig::Shift, Lsig::Id).as_shift_pow(), None);
    }

    #[test]
    fn indices_round_trip() {
        for n in 1..6 {
            let t = SuspTerm::Index(n);
            assert_eq!(lsig_to_susp(&susp_to_lsig(&t).unwrap()).unwrap(), t);
        }
    }

    #[test]
    fn environment_translation() {
        let e = crate::syntax::parse_env("(c, 1) :: nil").unwrap();
        assert_eq!(env_to_lsig(&e, 3).unwrap().to_string(), "((c . (id o ^)) o ^) o ^");
        assert!(env_to_lsig(&e, 0).is_err());
    }

    #[test]
    fn translations_are_well_formed() {
        let s = parse_lsig("(1 . (^ o ^)) o ((a . id) o ^)").unwrap();
        let tr = lsig_subst_to_triple(&s).unwrap();
        assert!(is_well_formed(&SuspExpr::Env(tr.env.clone())));
        let t = lsig_to_susp(&parse_lsig("1[(1 . (^ o ^)) o ((a . id) o ^)]").unwrap()).unwrap();
        assert!(is_well_formed(&SuspExpr::Term(t)));
    }

    #[test]
    fn suspension_to_lsig() {
        let t = parse_term("[#2, 1, 1, (c, 0) :: nil]").unwrap();
        assert_eq!(susp_to_lsig(&t).unwrap().to_string(), "1[^][(c . id) o ^]");
    }
}
