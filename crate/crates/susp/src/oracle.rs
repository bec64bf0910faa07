//! Ground truth: de Bruijn beta reduction, similarity, and parallel beta_s steps.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{EnvItem, ExprRef, Name, Path, SuspEnv, SuspExpr, SuspTerm};
use crate::rewrite::Status;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DbTerm {
    Const(Name),
    Index(usize),
    App(Box<DbTerm>, Box<DbTerm>),
    Abs(Box<DbTerm>),
}

impl DbTerm {
    pub fn app(f: DbTerm, a: DbTerm) -> Self {
        DbTerm::App(Box::new(f), Box::new(a))
    }

    pub fn abs(b: DbTerm) -> Self {
        DbTerm::Abs(Box::new(b))
    }

    pub fn apps(head: DbTerm, args: impl IntoIterator<Item = DbTerm>) -> Self {
        args.into_iter().fold(head, DbTerm::app)
    }

    /// `None` when `t` contains a suspension or a meta variable.
    pub fn from_susp(t: &SuspTerm) -> Option<DbTerm> {
        Some(match t {
            SuspTerm::Const(c) => DbTerm::Const(c.clone()),
            SuspTerm::Index(i) => DbTerm::Index(*i),
            SuspTerm::App(f, a) => DbTerm::app(DbTerm::from_susp(f)?, DbTerm::from_susp(a)?),
            SuspTerm::Abs(b) => DbTerm::abs(DbTerm::from_susp(b)?),
            SuspTerm::Meta(_) | SuspTerm::Susp { .. } => return None,
        })
    }

    pub fn to_susp(&self) -> SuspTerm {
        match self {
            DbTerm::Const(c) => SuspTerm::Const(c.clone()),
            DbTerm::Index(i) => SuspTerm::Index(*i),
            DbTerm::App(f, a) => SuspTerm::app(f.to_susp(), a.to_susp()),
            DbTerm::Abs(b) => SuspTerm::abs(b.to_susp()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            DbTerm::Const(_) | DbTerm::Index(_) => 1,
            DbTerm::App(f, a) => 1 + f.size() + a.size(),
            DbTerm::Abs(b) => 1 + b.size(),
        }
    }
}

impl fmt::Display for DbTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_susp())
    }
}

/// The substitution `s_1, ..., s_n, #(1+d), #(2+d), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbSubst {
    pub explicit: Vec<DbTerm>,
    pub tail_shift: isize,
}

impl DbSubst {
    /// `t, #1, #2, ...`, the substitution of a beta contraction.
    pub fn beta(t: DbTerm) -> Self {
        DbSubst { explicit: vec![t], tail_shift: 0 }
    }

    /// `#2, #3, ...`
    pub fn shift() -> Self {
        DbSubst { explicit: vec![], tail_shift: 1 }
    }

    fn lift(&self) -> Self {
        let sh = DbSubst::shift();
        let mut explicit = Vec::with_capacity(self.explicit.len() + 1);
        explicit.push(DbTerm::Index(1));
        explicit.extend(self.explicit.iter().map(|t| db_subst(t, &sh)));
        DbSubst { explicit, tail_shift: self.tail_shift + 1 }
    }
}

pub fn db_subst(t: &DbTerm, s: &DbSubst) -> DbTerm {
    match t {
        DbTerm::Const(_) => t.clone(),
        DbTerm::Index(i) => {
            let n = s.explicit.len();
            if *i <= n {
                s.explicit[i - 1].clone()
            } else {
                let k = (*i - n) as isize + s.tail_shift;
                assert!(k >= 1, "substitution produced a non-positive index");
                DbTerm::Index(k as usize)
            }
        }
        DbTerm::App(f, a) => DbTerm::app(db_subst(f, s), db_subst(a, s)),
        DbTerm::Abs(b) => DbTerm::abs(db_subst(b, &s.lift())),
    }
}

fn contract(t: &DbTerm) -> Option<DbTerm> {
    match t {
        DbTerm::App(f, a) => match &**f {
            DbTerm::Abs(b) => Some(db_subst(b, &DbSubst::beta((**a).clone()))),
            _ => None,
        },
        _ => None,
    }
}

/// Contracts the beta redex at `at`. Children: application 0 and 1, abstraction 0.
pub fn db_beta_step(t: &DbTerm, at: &Path) -> Result<DbTerm> {
    fn go(t: &DbTerm, path: &[usize]) -> Option<DbTerm> {
        match (path.split_first(), t) {
            (None, _) => contract(t),
            (Some((0, rest)), DbTerm::App(f, a)) => Some(DbTerm::App(Box::new(go(f, rest)?), a.clone())),
            (Some((1, rest)), DbTerm::App(f, a)) => Some(DbTerm::App(f.clone(), Box::new(go(a, rest)?))),
            (Some((0, rest)), DbTerm::Abs(b)) => Some(DbTerm::abs(go(b, rest)?)),
            _ => None,
        }
    }
    go(t, &at.0).ok_or_else(|| Error::InvalidPath(at.clone()))
}

fn lo_step(t: &DbTerm) -> Option<DbTerm> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        DbTerm::App(f, a) => {
            if let Some(f2) = lo_step(f) {
                return Some(DbTerm::App(Box::new(f2), a.clone()));
            }
            lo_step(a).map(|a2| DbTerm::App(f.clone(), Box::new(a2)))
        }
        DbTerm::Abs(b) => lo_step(b).map(DbTerm::abs),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbOutcome {
    pub result: DbTerm,
    pub steps: usize,
    pub status: Status,
}

/// Leftmost-outermost beta reduction.
pub fn db_normalize(t: &DbTerm, fuel: usize) -> DbOutcome {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        let Some(next) = lo_step(&cur) else {
            return DbOutcome { result: cur, steps, status: Status::NormalForm };
        };
        if steps == fuel {
            return DbOutcome { result: cur, steps, status: Status::FuelExhausted };
        }
        cur = next;
        steps += 1;
    }
}

/// Decides the similarity relation between two terms or two environments.
pub fn similar(a: ExprRef<'_>, b: ExprRef<'_>) -> Result<bool> {
    match (a, b) {
        (ExprRef::Term(s), ExprRef::Term(t)) => Ok(sim_term(s, t)),
        (ExprRef::Env(e), ExprRef::Env(f)) => Ok(sim_env(e, f)),
        _ => Err(Error::Category { path: Path::root(), expected: a.to_owned().kind() }),
    }
}

pub fn sim_term(s: &SuspTerm, t: &SuspTerm) -> bool {
    use SuspTerm as T;
    match (s, t) {
        (T::Const(a), T::Const(b)) | (T::Meta(a), T::Meta(b)) => a == b,
        (T::Index(i), T::Index(j)) => i == j,
        (T::App(f, a), T::App(g, b)) => sim_term(f, g) && sim_term(a, b),
        (T::Abs(a), T::Abs(b)) => sim_term(a, b),
        (T::Susp { term: s1, ol: o1, nl: n1, env: e1 }, T::Susp { term: s2, ol: o2, nl: n2, env: e2 }) => {
            o1 == o2 && n1 == n2 && sim_term(s1, s2) && sim_env(e1, e2)
        }
        _ => false,
    }
}

pub fn sim_env(e: &SuspEnv, f: &SuspEnv) -> bool {
    match (e, f) {
        (SuspEnv::Nil, SuspEnv::Nil) => true,
        (SuspEnv::Cons(x, r), SuspEnv::Cons(y, q)) => {
            (displaced(x, y) || (x.index == y.index && sim_term(&x.term, &y.term))) && sim_env(r, q)
        }
        (SuspEnv::Merge { e1, nl1, ol2, e2 }, SuspEnv::Merge { e1: f1, nl1: m1, ol2: p2, e2: f2 }) => {
            nl1 == m1 && ol2 == p2 && sim_env(e1, f1) && sim_env(e2, f2)
        }
        _ => false,
    }
}

/// The rule relating `([t, ol, nl, r], nl + k)` to `([t', ol, nl', r'], nl' + k)`.
fn displaced(x: &EnvItem, y: &EnvItem) -> bool {
    match (&x.term, &y.term) {
        (SuspTerm::Susp { term: t, ol: o1, nl: n1, env: r }, SuspTerm::Susp { term: u, ol: o2, nl: n2, env: q }) => {
            o1 == o2
                && x.index >= *n1
                && y.index >= *n2
                && x.index - n1 == y.index - n2
                && sim_term(t, u)
                && sim_env(r, q)
        }
        _ => false,
    }
}

/// A representative of the similarity class of `x`: two expressions are similar
/// exactly when their keys are equal.
pub fn sim_key(x: &SuspExpr) -> SuspExpr {
    match x {
        SuspExpr::Term(t) => SuspExpr::Term(key_term(t)),
        SuspExpr::Env(e) => SuspExpr::Env(key_env(e)),
    }
}

fn key_term(t: &SuspTerm) -> SuspTerm {
    match t {
        SuspTerm::App(f, a) => SuspTerm::app(key_term(f), key_term(a)),
        SuspTerm::Abs(b) => SuspTerm::abs(key_term(b)),
        SuspTerm::Susp { term, ol, nl, env } => SuspTerm::susp(key_term(term), *ol, *nl, key_env(env)),
        _ => t.clone(),
    }
}

/// Displaced items keep only the offset `k` of `([t, ol, nl, r], nl + k)`; their
/// embedding level is zeroed and the offset is tagged by an extra wrapper.
fn key_env(e: &SuspEnv) -> SuspEnv {
    match e {
        SuspEnv::Nil => SuspEnv::Nil,
        SuspEnv::Cons(item, rest) => {
            let term = match &item.term {
                SuspTerm::Susp { term, ol, nl, env } if item.index >= *nl => {
                    let inner = SuspTerm::susp(key_term(term), *ol, 0, key_env(env));
                    let k = item.index - nl;
                    return SuspEnv::cons(SuspTerm::susp(inner, 0, k, SuspEnv::Nil), usize::MAX, key_env(rest));
                }
                t => key_term(t),
            };
            SuspEnv::cons(term, item.index, key_env(rest))
        }
        SuspEnv::Merge { e1, nl1, ol2, e2 } => SuspEnv::merge(key_env(e1), *nl1, *ol2, key_env(e2)),
    }
}

/// Every expression one parallel beta_s step away from `x`, including `x` itself.
pub fn par_successors(x: &SuspExpr) -> BTreeSet<SuspExpr> {
    match x {
        SuspExpr::Term(t) => par_term(t).into_iter().map(SuspExpr::Term).collect(),
        SuspExpr::Env(e) => par_env(e).into_iter().map(SuspExpr::Env).collect(),
    }
}

fn par_term(t: &SuspTerm) -> BTreeSet<SuspTerm> {
    use SuspTerm as T;
    match t {
        T::Const(_) | T::Meta(_) | T::Index(_) => BTreeSet::from([t.clone()]),
        T::Abs(b) => par_term(b).into_iter().map(T::abs).collect(),
        T::App(f, a) => {
            let fs = par_term(f);
            let as_ = par_term(a);
            let mut out = BTreeSet::new();
            for f2 in &fs {
                for a2 in &as_ {
                    out.insert(T::app(f2.clone(), a2.clone()));
                }
            }
            if let T::Abs(body) = &**f {
                for b2 in par_term(body) {
                    for a2 in &as_ {
                        out.insert(T::susp(b2.clone(), 1, 0, SuspEnv::cons(a2.clone(), 0, SuspEnv::Nil)));
                    }
                }
            }
            out
        }
        T::Susp { term, ol, nl, env } => {
            let es = par_env(env);
            let mut out = BTreeSet::new();
            for t2 in par_term(term) {
                for e2 in &es {
                    out.insert(T::susp(t2.clone(), *ol, *nl, e2.clone()));
                }
            }
            out
        }
    }
}

fn par_env(e: &SuspEnv) -> BTreeSet<SuspEnv> {
    match e {
        SuspEnv::Nil => BTreeSet::from([SuspEnv::Nil]),
        SuspEnv::Cons(item, rest) => {
            let rs = par_env(rest);
            let mut out = BTreeSet::new();
            for t2 in par_term(&item.term) {
                for r2 in &rs {
                    out.insert(SuspEnv::cons(t2.clone(), item.index, r2.clone()));
                }
            }
            out
        }
        SuspEnv::Merge { e1, nl1, ol2, e2 } => {
            let bs = par_env(e2);
            let mut out = BTreeSet::new();
            for a2 in par_env(e1) {
                for b2 in &bs {
                    out.insert(SuspEnv::merge(a2.clone(), *nl1, *ol2, b2.clone()));
                }
            }
            out
        }
    }
}

/// Number of parallel successors, computed without building them.
pub fn par_count(x: ExprRef<'_>) -> u128 {
    fn term(t: &SuspTerm) -> u128 {
        match t {
            SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => 1,
            SuspTerm::Abs(b) => term(b),
            SuspTerm::App(f, a) => {
                let extra = if let SuspTerm::Abs(b) = &**f { term(b) } else { 0 };
                (term(f) + extra).saturating_mul(term(a))
            }
            SuspTerm::Susp { term: s, env: e, .. } => term(s).saturating_mul(env(e)),
        }
    }
    fn env(e: &SuspEnv) -> u128 {
        match e {
            SuspEnv::Nil => 1,
            SuspEnv::Cons(it, r) => term(&it.term).saturating_mul(env(r)),
            SuspEnv::Merge { e1, e2, .. } => env(e1).saturating_mul(env(e2)),
        }
    }
    match x {
        ExprRef::Term(t) => term(t),
        ExprRef::Env(e) => env(e),
    }
}
