//! Positioned rewriting shared by the bridge calculi.

use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Path;
use crate::rewrite::{Status, Strategy};

pub trait Calculus {
    type Expr: Clone + Eq + Hash + fmt::Debug + fmt::Display;
    type Rule: Copy + Eq + fmt::Debug + fmt::Display + 'static;

    /// Every rule, in tiebreak order.
    const RULES: &'static [Self::Rule];

    fn children(x: &Self::Expr) -> Vec<&Self::Expr>;
    fn with_child(x: &Self::Expr, i: usize, c: Self::Expr) -> Self::Expr;
    fn apply(rule: Self::Rule, x: &Self::Expr) -> Option<Self::Expr>;
}

pub fn subexpr<'a, C: Calculus>(x: &'a C::Expr, path: &Path) -> Result<&'a C::Expr> {
    let mut cur = x;
    for &i in &path.0 {
        cur = *C::children(cur).get(i).ok_or_else(|| Error::InvalidPath(path.clone()))?;
    }
    Ok(cur)
}

fn replace<C: Calculus>(x: &C::Expr, path: &[usize], new: C::Expr) -> C::Expr {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let child = replace::<C>(C::children(x)[i], rest, new);
            C::with_child(x, i, child)
        }
    }
}

pub fn redexes<C: Calculus>(x: &C::Expr, allowed: &[C::Rule]) -> Vec<(Path, C::Rule)> {
    fn go<C: Calculus>(x: &C::Expr, allowed: &[C::Rule], path: &mut Vec<usize>, out: &mut Vec<(Path, C::Rule)>) {
        for r in C::RULES.iter().filter(|r| allowed.contains(r)) {
            if C::apply(*r, x).is_some() {
                out.push((Path(path.clone()), *r));
            }
        }
        for (i, c) in C::children(x).into_iter().enumerate() {
            path.push(i);
            go::<C>(c, allowed, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go::<C>(x, allowed, &mut Vec::new(), &mut out);
    out
}

pub fn step_at<C: Calculus>(x: &C::Expr, at: &Path, rule: C::Rule) -> Result<C::Expr> {
    let node = subexpr::<C>(x, at)?;
    let new = C::apply(rule, node).ok_or_else(|| Error::Constraint(format!("{rule} does not apply at {at}")))?;
    Ok(replace::<C>(x, &at.0, new))
}

fn first_match<C: Calculus>(x: &C::Expr, allowed: &[C::Rule]) -> Option<(C::Rule, C::Expr)> {
    C::RULES.iter().filter(|r| allowed.contains(r)).find_map(|r| C::apply(*r, x).map(|y| (*r, y)))
}

/// Rewrites the leftmost-outermost (or innermost) redex, returning the new expression.
fn step_directed<C: Calculus>(x: &C::Expr, allowed: &[C::Rule], outer: bool) -> Option<(Path, C::Rule, C::Expr)> {
    fn go<C: Calculus>(
        x: &C::Expr,
        allowed: &[C::Rule],
        outer: bool,
        path: &mut Vec<usize>,
    ) -> Option<(C::Rule, C::Expr)> {
        if outer {
            if let Some(hit) = first_match::<C>(x, allowed) {
                return Some(hit);
            }
        }
        for (i, c) in C::children(x).into_iter().enumerate() {
            path.push(i);
            if let Some((r, c2)) = go::<C>(c, allowed, outer, path) {
                return Some((r, C::with_child(x, i, c2)));
            }
            path.pop();
        }
        if !outer {
            return first_match::<C>(x, allowed);
        }
        None
    }
    let mut path = Vec::new();
    let found = go::<C>(x, allowed, outer, &mut path)?;
    Some((Path(path), found.0, found.1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeOutcome<E> {
    pub result: E,
    pub steps: usize,
    pub status: Status,
}

pub struct BridgeStep<C: Calculus> {
    pub rule: C::Rule,
    pub at: Path,
    pub result: C::Expr,
}

/// Normalizes, calling `observe` after every step.
pub fn normalize_with<C: Calculus>(
    x: &C::Expr,
    allowed: &[C::Rule],
    strategy: Strategy,
    fuel: usize,
    mut observe: impl FnMut(&BridgeStep<C>),
) -> BridgeOutcome<C::Expr> {
    let mut rng = match strategy {
        Strategy::RandomSeeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        _ => None,
    };
    let mut cur = x.clone();
    let mut steps = 0;
    loop {
        let next = match strategy {
            Strategy::LeftmostOutermost | Strategy::HeadFirst => step_directed::<C>(&cur, allowed, true),
            Strategy::LeftmostInnermost => step_directed::<C>(&cur, allowed, false),
            Strategy::RandomSeeded(_) => {
                let all = redexes::<C>(&cur, allowed);
                if all.is_empty() {
                    None
                } else {
                    let (p, r) = all[rng.as_mut().unwrap().gen_range(0..all.len())].clone();
                    let y = step_at::<C>(&cur, &p, r).expect("listed redex applies");
                    Some((p, r, y))
                }
            }
        };
        let Some((at, rule, y)) = next else {
            return BridgeOutcome { result: cur, steps, status: Status::NormalForm };
        };
        if steps == fuel {
            return BridgeOutcome { result: cur, steps, status: Status::FuelExhausted };
        }
        steps += 1;
        let st = BridgeStep::<C> { rule, at, result: y };
        observe(&st);
        cur = st.result;
    }
}

pub fn normalize<C: Calculus>(
    x: &C::Expr,
    allowed: &[C::Rule],
    strategy: Strategy,
    fuel: usize,
) -> BridgeOutcome<C::Expr> {
    normalize_with::<C>(x, allowed, strategy, fuel, |_| {})
}

/// All one-step successors.
pub fn successors<C: Calculus>(x: &C::Expr, allowed: &[C::Rule]) -> Vec<(Path, C::Rule, C::Expr)> {
    redexes::<C>(x, allowed)
        .into_iter()
        .map(|(p, r)| {
            let y = step_at::<C>(x, &p, r).expect("listed redex applies");
            (p, r, y)
        })
        .collect()
}

/// Looks a rule up by its printed name, ignoring case.
pub fn parse_rule<C: Calculus>(name: &str) -> Result<C::Rule> {
    C::RULES
        .iter()
        .copied()
        .find(|r| r.to_string().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Config(format!("unknown rule {name}")))
}
