//! Measures and the recursive path ordering used to certify termination of
//! the reading and merging rules.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::plus;
use crate::expr::{ExprRef, SuspEnv, SuspExpr, SuspTerm};

pub const DEFAULT_ETA_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MeasureTerm {
    Star,
    Lam(Box<MeasureTerm>),
    AppT(Box<MeasureTerm>, Box<MeasureTerm>),
    ConsT(Box<MeasureTerm>, Box<MeasureTerm>),
    S(usize, Box<MeasureTerm>, Box<MeasureTerm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Sym {
    Star,
    Lam,
    App,
    Cons,
    S(usize),
}

impl MeasureTerm {
    fn head(&self) -> (Sym, Vec<&MeasureTerm>) {
        match self {
            MeasureTerm::Star => (Sym::Star, vec![]),
            MeasureTerm::Lam(a) => (Sym::Lam, vec![a]),
            MeasureTerm::AppT(a, b) => (Sym::App, vec![a, b]),
            MeasureTerm::ConsT(a, b) => (Sym::Cons, vec![a, b]),
            MeasureTerm::S(i, a, b) => (Sym::S(*i), vec![a, b]),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.head().1.iter().map(|a| a.size()).sum::<usize>()
    }
}

impl fmt::Display for MeasureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureTerm::Star => write!(f, "*"),
            MeasureTerm::Lam(a) => write!(f, "lam({a})"),
            MeasureTerm::AppT(a, b) => write!(f, "app({a}, {b})"),
            MeasureTerm::ConsT(a, b) => write!(f, "cons({a}, {b})"),
            MeasureTerm::S(i, a, b) => write!(f, "s{i}({a}, {b})"),
        }
    }
}

/// Precedence on function symbols.
fn prec_gt(f: Sym, g: Sym) -> bool {
    match (f, g) {
        (Sym::S(i), Sym::S(j)) => i > j,
        (Sym::S(_), _) => true,
        _ => false,
    }
}

pub fn mu(x: ExprRef<'_>) -> usize {
    match x {
        ExprRef::Term(t) => mu_term(t),
        ExprRef::Env(e) => mu_env(e),
    }
}

fn mu_term(t: &SuspTerm) -> usize {
    match t {
        SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => 0,
        SuspTerm::Abs(b) => mu_term(b),
        SuspTerm::App(f, a) => mu_term(f).max(mu_term(a)),
        SuspTerm::Susp { term, env, .. } => plus(plus(mu_term(term), mu_env(env)), 1),
    }
}

fn mu_env(e: &SuspEnv) -> usize {
    match e {
        SuspEnv::Nil => 0,
        SuspEnv::Cons(item, rest) => mu_term(&item.term).max(mu_env(rest)),
        SuspEnv::Merge { e1, e2, .. } => plus(plus(mu_env(e1), mu_env(e2)), 1),
    }
}

pub fn eta(x: ExprRef<'_>, i: usize) -> usize {
    match x {
        ExprRef::Term(t) => eta_term(t, i),
        ExprRef::Env(e) => eta_env(e, i),
    }
}

fn eta_term(t: &SuspTerm, i: usize) -> usize {
    match t {
        SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => 1,
        SuspTerm::Abs(b) => plus(eta_term(b, i), 1),
        SuspTerm::App(f, a) => plus(eta_term(f, i).max(eta_term(a, i)), 1),
        SuspTerm::Susp { term, env, .. } => {
            let j = plus(i, 1);
            plus(plus(eta_term(term, j), eta_env(env, plus(j, mu_term(term)))), 1)
        }
    }
}

fn eta_env(e: &SuspEnv, i: usize) -> usize {
    match e {
        SuspEnv::Nil => 0,
        SuspEnv::Cons(item, rest) => eta_term(&item.term, i).max(eta_env(rest, i)),
        SuspEnv::Merge { e1, e2, .. } => {
            let j = plus(i, 1);
            plus(plus(eta_env(e1, j), eta_env(e2, plus(j, mu_env(e1)))), 1)
        }
    }
}

pub fn essence(x: ExprRef<'_>) -> MeasureTerm {
    match x {
        ExprRef::Term(t) => essence_term(t),
        ExprRef::Env(e) => essence_env(e),
    }
}

fn essence_term(t: &SuspTerm) -> MeasureTerm {
    match t {
        SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => MeasureTerm::Star,
        SuspTerm::App(f, a) => MeasureTerm::AppT(Box::new(essence_term(f)), Box::new(essence_term(a))),
        SuspTerm::Abs(b) => MeasureTerm::Lam(Box::new(essence_term(b))),
        SuspTerm::Susp { term, env, .. } => {
            MeasureTerm::S(eta_term(t, 0), Box::new(essence_term(term)), Box::new(essence_env(env)))
        }
    }
}

fn essence_env(e: &SuspEnv) -> MeasureTerm {
    match e {
        SuspEnv::Nil => MeasureTerm::Star,
        SuspEnv::Cons(item, rest) => {
            MeasureTerm::ConsT(Box::new(essence_term(&item.term)), Box::new(essence_env(rest)))
        }
        SuspEnv::Merge { e1, e2, .. } => {
            MeasureTerm::S(eta_env(e, 0), Box::new(essence_env(e1)), Box::new(essence_env(e2)))
        }
    }
}

/// Hash-consed copy of a pair of measure terms, so that comparisons can be memoized.
#[derive(Default)]
struct Arena {
    nodes: Vec<(Sym, Vec<usize>)>,
    ids: HashMap<(Sym, Vec<usize>), usize>,
    memo: HashMap<(usize, usize), bool>,
}

impl Arena {
    fn intern(&mut self, t: &MeasureTerm) -> usize {
        let (sym, args) = t.head();
        let args: Vec<usize> = args.into_iter().map(|a| self.intern(a)).collect();
        let key = (sym, args);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(key.clone());
        self.ids.insert(key, id);
        id
    }

    fn gt(&mut self, s: usize, t: usize) -> bool {
        if let Some(&v) = self.memo.get(&(s, t)) {
            return v;
        }
        let v = self.gt_uncached(s, t);
        self.memo.insert((s, t), v);
        v
    }

    fn gt_uncached(&mut self, s: usize, t: usize) -> bool {
        let (f, ss) = self.nodes[s].clone();
        let (g, ts) = self.nodes[t].clone();
        if ss.iter().any(|&si| si == t || self.gt(si, t)) {
            return true;
        }
        let dominates_args = |this: &mut Self| ts.iter().all(|&tj| this.gt(s, tj));
        if prec_gt(f, g) {
            return dominates_args(self);
        }
        if f == g {
            let lex = match ss.iter().zip(&ts).find(|(a, b)| a != b) {
                Some((&a, &b)) => self.gt(a, b),
                None => false,
            };
            return lex && dominates_args(self);
        }
        false
    }
}

/// The recursive path ordering `a ≻ b`.
pub fn rpo_gt(a: &MeasureTerm, b: &MeasureTerm) -> bool {
    let mut arena = Arena::default();
    let (x, y) = (arena.intern(a), arena.intern(b));
    arena.gt(x, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecreaseReport {
    pub essence_decreases: bool,
    pub mu_nonincreasing: bool,
    pub eta_nonincreasing: bool,
    /// η_i was compared for every i up to and including this bound.
    pub eta_bound: usize,
    pub first_eta_failure: Option<usize>,
}

impl DecreaseReport {
    pub fn holds(&self) -> bool {
        self.essence_decreases && self.mu_nonincreasing && self.eta_nonincreasing
    }
}

pub fn check_step_decrease(before: &SuspExpr, after: &SuspExpr, k: usize) -> DecreaseReport {
    let (b, a) = (before.as_ref(), after.as_ref());
    let first_eta_failure = (0..=k).find(|&i| eta(b, i) < eta(a, i));
    DecreaseReport {
        essence_decreases: rpo_gt(&essence(b), &essence(a)),
        mu_nonincreasing: mu(b) >= mu(a),
        eta_nonincreasing: first_eta_failure.is_none(),
        eta_bound: k,
        first_eta_failure,
    }
}
