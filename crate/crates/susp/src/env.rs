//! Length, level and index of environments; well-formedness.

use std::fmt;

use serde::Serialize;

use crate::error::{monus, plus, Error, Result};
use crate::expr::{EnvItem, ExprRef, Path, SuspEnv, SuspExpr, SuspTerm};

pub fn len(e: &SuspEnv) -> usize {
    match e {
        SuspEnv::Nil => 0,
        SuspEnv::Cons(_, rest) => plus(1, len(rest)),
        SuspEnv::Merge { e1, nl1, e2, .. } => plus(len(e1), monus(len(e2), *nl1)),
    }
}

pub fn lev(e: &SuspEnv) -> usize {
    match e {
        SuspEnv::Nil => 0,
        SuspEnv::Cons(item, _) => item.index,
        SuspEnv::Merge { nl1, ol2, e2, .. } => plus(lev(e2), monus(*nl1, *ol2)),
    }
}

/// The `i`-th index of an environment.
pub fn ind(e: &SuspEnv, i: usize) -> usize {
    match e {
        SuspEnv::Nil => 0,
        SuspEnv::Cons(item, rest) => {
            if i == 0 {
                item.index
            } else {
                ind(rest, i - 1)
            }
        }
        SuspEnv::Merge { e1, nl1, ol2, e2 } => {
            let l = len(e1);
            if i < l {
                let m = monus(*nl1, ind(e1, i));
                if len(e2) > m {
                    plus(ind(e2, m), monus(*nl1, *ol2))
                } else {
                    ind(e1, i)
                }
            } else {
                ind(e2, plus(i - l, *nl1))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `[t, ol, nl, e]` needs `len(e) = ol`.
    SuspLength,
    /// `[t, ol, nl, e]` needs `lev(e) <= nl`.
    SuspLevel,
    /// `(t, l) :: e` needs `l >= lev(e)`.
    ConsLevel,
    /// `{e1, nl1, ol2, e2}` needs `lev(e1) <= nl1`.
    MergeLevel,
    /// `{e1, nl1, ol2, e2}` needs `len(e2) = ol2`.
    MergeLength,
    /// `#0` is not an index.
    IndexZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Path,
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {}: {}", self.clause, self.path, self.detail)
    }
}

/// All well-formedness violations of `x`, in preorder. Empty means well-formed.
pub fn check_well_formed(x: &SuspExpr) -> Vec<Violation> {
    check_ref(x.as_ref())
}

pub fn check_ref(x: ExprRef<'_>) -> Vec<Violation> {
    let mut out = Vec::new();
    x.walk(&mut |path, node| {
        let mut bad = |clause, detail: String| out.push(Violation { path: path.clone(), clause, detail });
        match node {
            ExprRef::Term(SuspTerm::Index(0)) => bad(Clause::IndexZero, "#0".into()),
            ExprRef::Term(SuspTerm::Susp { ol, nl, env, .. }) => {
                let (l, v) = (len(env), lev(env));
                if l != *ol {
                    bad(Clause::SuspLength, format!("len(e)={l} but ol={ol}"));
                }
                if v > *nl {
                    bad(Clause::SuspLevel, format!("lev(e)={v} exceeds nl={nl}"));
                }
            }
            ExprRef::Env(SuspEnv::Cons(item, rest)) => {
                let v = lev(rest);
                if item.index < v {
                    bad(Clause::ConsLevel, format!("index {} below lev(rest)={v}", item.index));
                }
            }
            ExprRef::Env(SuspEnv::Merge { e1, nl1, ol2, e2 }) => {
                let v = lev(e1);
                if v > *nl1 {
                    bad(Clause::MergeLevel, format!("lev(e1)={v} exceeds nl1={nl1}"));
                }
                let l = len(e2);
                if l != *ol2 {
                    bad(Clause::MergeLength, format!("len(e2)={l} but ol2={ol2}"));
                }
            }
            _ => {}
        }
    });
    out
}

pub fn is_well_formed(x: &SuspExpr) -> bool {
    check_well_formed(x).is_empty()
}

/// Built from `nil` and `::` only.
pub fn is_simple(e: &SuspEnv) -> bool {
    match e {
        SuspEnv::Nil => true,
        SuspEnv::Cons(_, rest) => is_simple(rest),
        SuspEnv::Merge { .. } => false,
    }
}

/// Contains no suspension.
pub fn is_debruijn(t: &SuspTerm) -> bool {
    match t {
        SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => true,
        SuspTerm::App(f, a) => is_debruijn(f) && is_debruijn(a),
        SuspTerm::Abs(b) => is_debruijn(b),
        SuspTerm::Susp { .. } => false,
    }
}

/// `e[i]`, counting from 0.
pub fn env_item_at(e: &SuspEnv, i: usize) -> Result<&EnvItem> {
    let mut cur = e;
    let mut k = i;
    loop {
        match cur {
            SuspEnv::Nil => return Err(Error::IndexOutOfRange { index: i, len: i - k }),
            SuspEnv::Cons(item, rest) => {
                if k == 0 {
                    return Ok(item);
                }
                k -= 1;
                cur = rest;
            }
            SuspEnv::Merge { .. } => return Err(Error::NotSimple),
        }
    }
}

/// `e{i}`: the environment without its first `i` items, `nil` past the end.
pub fn env_drop(e: &SuspEnv, i: usize) -> Result<SuspEnv> {
    let mut cur = e;
    for _ in 0..i {
        match cur {
            SuspEnv::Nil => break,
            SuspEnv::Cons(_, rest) => cur = rest,
            SuspEnv::Merge { .. } => return Err(Error::NotSimple),
        }
    }
    if !is_simple(cur) {
        return Err(Error::NotSimple);
    }
    Ok(cur.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SuspTerm as T;

    fn c(n: &str) -> T {
        T::constant(n)
    }

    #[test]
    fn len_lev_clauses() {
        assert_eq!(len(&SuspEnv::Nil), 0);
        let two = SuspEnv::from_items([(c("t"), 0), (c("s"), 0)]);
        assert_eq!(len(&two), 2);
        let m = SuspEnv::merge(SuspEnv::from_items([(c("t"), 0)]), 0, 1, SuspEnv::from_items([(c("s"), 0)]));
        assert_eq!(len(&m), 2);
        assert_eq!(lev(&SuspEnv::Nil), 0);
        assert_eq!(lev(&SuspEnv::from_items([(c("t"), 3), (c("s"), 1)])), 3);
        let m = SuspEnv::merge(SuspEnv::Nil, 2, 1, SuspEnv::from_items([(c("s"), 0)]));
        assert_eq!(lev(&m), 1);
    }

    #[test]
    fn ind_clauses() {
        assert_eq!(ind(&SuspEnv::Nil, 5), 0);
        let e = SuspEnv::from_items([(c("t"), 2), (c("s"), 1)]);
        assert_eq!(ind(&e, 0), 2);
        assert_eq!(ind(&e, 1), 1);
        assert_eq!(ind(&e, 2), 0);
    }

    #[test]
    fn well_formedness_verdicts() {
        let ok: SuspExpr = T::susp(T::index(1), 1, 0, SuspEnv::from_items([(c("c"), 0)])).into();
        assert!(check_well_formed(&ok).is_empty());

        let bad: SuspExpr = T::susp(T::index(1), 2, 0, SuspEnv::from_items([(c("c"), 0)])).into();
        let v = check_well_formed(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause, Clause::SuspLength);
        assert_eq!(v[0].path, Path::root());

        let bad: SuspExpr = SuspEnv::from_items([(c("t"), 0), (c("s"), 1)]).into();
        let v = check_well_formed(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause, Clause::ConsLevel);
        assert_eq!(v[0].path, Path::root());

        let nested: SuspExpr = T::abs(T::susp(c("c"), 0, 0, SuspEnv::from_items([(c("c"), 1)]))).into();
        let v = check_well_formed(&nested);
        let clauses: Vec<_> = v.iter().map(|x| (x.clause, x.path.clone())).collect();
        assert_eq!(clauses, vec![(Clause::SuspLength, Path(vec![0])), (Clause::SuspLevel, Path(vec![0]))]);
    }

    #[test]
    fn simple_accessors() {
        let e = SuspEnv::from_items([(c("a"), 1), (c("b"), 0)]);
        assert_eq!(env_item_at(&e, 1).unwrap(), &EnvItem { term: c("b"), index: 0 });
        assert_eq!(env_item_at(&e, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
        assert_eq!(env_drop(&e, 1).unwrap(), SuspEnv::from_items([(c("b"), 0)]));
        assert_eq!(env_drop(&SuspEnv::from_items([(c("a"), 1)]), 5).unwrap(), SuspEnv::Nil);
    }

    #[test]
    fn simple_and_debruijn() {
        assert!(is_simple(&SuspEnv::Nil));
        assert!(!is_simple(&SuspEnv::merge(SuspEnv::Nil, 0, 0, SuspEnv::Nil)));
        assert!(is_debruijn(&T::abs(T::app(T::index(1), T::index(2)))));
        assert!(!is_debruijn(&T::susp(c("c"), 0, 0, SuspEnv::Nil)));
    }
}
