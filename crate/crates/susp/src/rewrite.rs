//! Reading, merging and beta rules, positioned rewriting and normalization.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{env_item_at, is_simple};
use crate::error::{add, monus, sub, Error, Result};
use crate::expr::{EnvItem, ExprRef, Path, SuspEnv, SuspExpr, SuspTerm};

pub const DEFAULT_RM_FUEL: usize = 100_000;
pub const DEFAULT_FRONTIER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    BetaS,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    R3Prime,
    LookupDerived,
}

impl RuleId {
    pub const ALL: [RuleId; 16] = [
        RuleId::BetaS,
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::M1,
        RuleId::M2,
        RuleId::M3,
        RuleId::M4,
        RuleId::M5,
        RuleId::M6,
        RuleId::R3Prime,
        RuleId::LookupDerived,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::BetaS => "betas",
            RuleId::R1 => "r1",
            RuleId::R2 => "r2",
            RuleId::R3 => "r3",
            RuleId::R4 => "r4",
            RuleId::R5 => "r5",
            RuleId::R6 => "r6",
            RuleId::R7 => "r7",
            RuleId::M1 => "m1",
            RuleId::M2 => "m2",
            RuleId::M3 => "m3",
            RuleId::M4 => "m4",
            RuleId::M5 => "m5",
            RuleId::M6 => "m6",
            RuleId::R3Prime => "r3prime",
            RuleId::LookupDerived => "lookup",
        }
    }

    fn bit(self) -> u32 {
        1 << (self as u32)
    }

    /// True for rules whose left-hand side is an environment.
    pub fn on_env(self) -> bool {
        matches!(self, RuleId::M2 | RuleId::M3 | RuleId::M4 | RuleId::M5 | RuleId::M6)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s || (s == "beta_s" && *r == RuleId::BetaS) || (s == "r3'" && *r == RuleId::R3Prime))
            .ok_or_else(|| Error::Config(format!("unknown rule {s}")))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSet(u32);

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet(0)
    }

    pub fn of(rules: &[RuleId]) -> Self {
        rules.iter().fold(RuleSet(0), |s, r| s.with(*r))
    }

    /// Reading rules (r1)-(r6).
    pub fn r() -> Self {
        RuleSet::of(&[RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5, RuleId::R6])
    }

    /// Reading and merging rules.
    pub fn rm() -> Self {
        RuleSet::r().union(RuleSet::of(&[RuleId::M1, RuleId::M2, RuleId::M3, RuleId::M4, RuleId::M5, RuleId::M6]))
    }

    pub fn rmbeta() -> Self {
        RuleSet::rm().with(RuleId::BetaS)
    }

    pub fn rbeta() -> Self {
        RuleSet::r().with(RuleId::BetaS)
    }

    /// Adds (r7), making meta variables opaque to substitution.
    pub fn logical(self) -> Self {
        self.with(RuleId::R7)
    }

    pub fn with(self, r: RuleId) -> Self {
        RuleSet(self.0 | r.bit())
    }

    pub fn without(self, r: RuleId) -> Self {
        RuleSet(self.0 & !r.bit())
    }

    pub fn union(self, other: RuleSet) -> Self {
        RuleSet(self.0 | other.0)
    }

    pub fn contains(self, r: RuleId) -> bool {
        self.0 & r.bit() != 0
    }

    pub fn is_logical(self) -> bool {
        self.contains(RuleId::R7)
    }

    pub fn has_beta(self) -> bool {
        self.contains(RuleId::BetaS)
    }

    pub fn iter(self) -> impl Iterator<Item = RuleId> {
        RuleId::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    /// Rejects (r3') when graftable meta variables may occur.
    pub fn validate_for(self, x: &SuspExpr) -> Result<()> {
        if self.contains(RuleId::R3Prime) && !self.is_logical() && x.has_meta() {
            return Err(Error::Config("r3prime is unsound with graftable meta variables".into()));
        }
        Ok(())
    }
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromStr for RuleSet {
    type Err = Error;

    /// Preset names (`rm`, `r`, `rmbeta`, `rbeta`, optionally suffixed `+logical`)
    /// or a comma separated list of rule names, `+`-joined with presets.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = RuleSet::empty();
        for part in s.split(['+', ',']).map(str::trim).filter(|p| !p.is_empty()) {
            set = set.union(match part.to_ascii_lowercase().as_str() {
                "rm" => RuleSet::rm(),
                "r" => RuleSet::r(),
                "rmbeta" => RuleSet::rmbeta(),
                "rbeta" => RuleSet::rbeta(),
                "logical" => RuleSet::of(&[RuleId::R7]),
                other => RuleSet::of(&[other.parse()?]),
            });
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    LeftmostOutermost,
    LeftmostInnermost,
    HeadFirst,
    RandomSeeded(u64),
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lo" => Ok(Strategy::LeftmostOutermost),
            "li" => Ok(Strategy::LeftmostInnermost),
            "head" => Ok(Strategy::HeadFirst),
            _ => match s.strip_prefix("rand:") {
                Some(seed) => {
                    seed.parse().map(Strategy::RandomSeeded).map_err(|_| Error::Config(format!("bad seed in {s}")))
                }
                None => Err(Error::Config(format!("unknown strategy {s}"))),
            },
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostOutermost => write!(f, "lo"),
            Strategy::LeftmostInnermost => write!(f, "li"),
            Strategy::HeadFirst => write!(f, "head"),
            Strategy::RandomSeeded(s) => write!(f, "rand:{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    NormalForm,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub at: Path,
    pub result: SuspExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: SuspExpr,
    pub steps: Vec<Step>,
    pub status: Status,
}

impl Trace {
    pub fn result(&self) -> &SuspExpr {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.initial)
    }
}

/// Result of a normalization run that does not keep intermediate expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub result: SuspExpr,
    pub steps: usize,
    pub status: Status,
}

fn item(term: SuspTerm, index: usize) -> Box<EnvItem> {
    Box::new(EnvItem { term, index })
}

/// Does `rule` match at the root of `x`, side conditions included?
pub fn matches(rule: RuleId, x: ExprRef<'_>) -> bool {
    use SuspTerm as T;
    match x {
        ExprRef::Term(t) => match (rule, t) {
            (RuleId::BetaS, T::App(f, _)) => matches!(**f, T::Abs(_)),
            (_, T::Susp { term, ol, nl, env }) => match (rule, &**term, &**env) {
                (RuleId::R1, T::Const(_), _) => true,
                (RuleId::R2, T::Index(_), SuspEnv::Nil) => *ol == 0,
                (RuleId::R3, T::Index(1), SuspEnv::Cons(..)) => true,
                (RuleId::R4, T::Index(i), SuspEnv::Cons(..)) => *i > 1,
                (RuleId::R5, T::App(..), _) => true,
                (RuleId::R6, T::Abs(_), _) => true,
                (RuleId::R7, T::Meta(_), _) => true,
                (RuleId::M1, T::Susp { .. }, _) => true,
                (RuleId::R3Prime, T::Index(1), SuspEnv::Cons(it, _)) => *nl == 0 && it.index == 0,
                (RuleId::LookupDerived, T::Index(_), e) => is_simple(e),
                _ => false,
            },
            _ => false,
        },
        ExprRef::Env(SuspEnv::Merge { e1, nl1, ol2, e2 }) => match (rule, &**e1, &**e2) {
            (RuleId::M2, _, SuspEnv::Nil) => *ol2 == 0,
            (RuleId::M3, SuspEnv::Nil, _) => *nl1 == 0,
            (RuleId::M4, SuspEnv::Nil, SuspEnv::Cons(..)) => *nl1 >= 1,
            (RuleId::M5, SuspEnv::Cons(it, _), SuspEnv::Cons(..)) => *nl1 > it.index,
            (RuleId::M6, SuspEnv::Cons(it, _), SuspEnv::Cons(..)) => *nl1 == it.index,
            _ => false,
        },
        ExprRef::Env(_) => false,
    }
}

/// Applies `rule` at the root of `x`. `Ok(None)` when it does not match.
pub fn rule_apply(rule: RuleId, x: ExprRef<'_>) -> Result<Option<SuspExpr>> {
    use SuspTerm as T;
    if !matches(rule, x) {
        return Ok(None);
    }
    let out: SuspExpr = match x {
        ExprRef::Term(T::App(f, a)) => {
            let T::Abs(body) = &**f else { unreachable!() };
            T::susp((**body).clone(), 1, 0, SuspEnv::cons((**a).clone(), 0, SuspEnv::Nil)).into()
        }
        ExprRef::Term(T::Susp { term, ol, nl, env }) => {
            let (ol, nl) = (*ol, *nl);
            match (rule, &**term) {
                (RuleId::R1, c) | (RuleId::R7, c) => c.clone().into(),
                (RuleId::R2, T::Index(i)) => T::Index(add(*i, nl)?).into(),
                (RuleId::R3, _) => {
                    let SuspEnv::Cons(it, _) = &**env else { unreachable!() };
                    T::susp(it.term.clone(), 0, sub(nl, it.index)?, SuspEnv::Nil).into()
                }
                (RuleId::R4, T::Index(i)) => {
                    let SuspEnv::Cons(_, rest) = &**env else { unreachable!() };
                    T::susp(T::Index(i - 1), sub(ol, 1)?, nl, (**rest).clone()).into()
                }
                (RuleId::R5, T::App(t1, t2)) => T::app(
                    T::susp((**t1).clone(), ol, nl, (**env).clone()),
                    T::susp((**t2).clone(), ol, nl, (**env).clone()),
                )
                .into(),
                (RuleId::R6, T::Abs(b)) => {
                    let (ol1, nl1) = (add(ol, 1)?, add(nl, 1)?);
                    T::abs(T::susp((**b).clone(), ol1, nl1, SuspEnv::cons(T::Index(1), nl1, (**env).clone()))).into()
                }
                (RuleId::M1, T::Susp { term: t, ol: ol1, nl: nl1, env: e1 }) => {
                    let (ol2, nl2, e2) = (ol, nl, env);
                    T::susp(
                        (**t).clone(),
                        add(*ol1, monus(ol2, *nl1))?,
                        add(nl2, monus(*nl1, ol2))?,
                        SuspEnv::merge((**e1).clone(), *nl1, ol2, (**e2).clone()),
                    )
                    .into()
                }
                (RuleId::R3Prime, _) => {
                    let SuspEnv::Cons(it, _) = &**env else { unreachable!() };
                    it.term.clone().into()
                }
                (RuleId::LookupDerived, T::Index(n)) => lookup(*n, ol, nl, env)?.into(),
                _ => unreachable!("matches admitted {rule} on an unexpected shape"),
            }
        }
        ExprRef::Env(SuspEnv::Merge { e1, nl1, ol2, e2 }) => {
            let (nl1, ol2) = (*nl1, *ol2);
            match rule {
                RuleId::M2 | RuleId::M3 => {
                    if rule == RuleId::M2 {
                        (**e1).clone().into()
                    } else {
                        (**e2).clone().into()
                    }
                }
                RuleId::M4 | RuleId::M5 => {
                    let SuspEnv::Cons(_, rest2) = &**e2 else { unreachable!() };
                    SuspEnv::merge((**e1).clone(), sub(nl1, 1)?, sub(ol2, 1)?, (**rest2).clone()).into()
                }
                RuleId::M6 => {
                    let SuspEnv::Cons(it1, rest1) = &**e1 else { unreachable!() };
                    let SuspEnv::Cons(it2, _) = &**e2 else { unreachable!() };
                    let n = it1.index;
                    let l = it2.index;
                    let head = T::susp(it1.term.clone(), ol2, l, (**e2).clone());
                    SuspEnv::Cons(
                        item(head, add(l, monus(n, ol2))?),
                        Box::new(SuspEnv::merge((**rest1).clone(), n, ol2, (**e2).clone())),
                    )
                    .into()
                }
                _ => unreachable!(),
            }
        }
        _ => unreachable!(),
    };
    Ok(Some(out))
}

/// Reads index `#n` directly out of a simple environment.
///
/// An item `(#1, l)` with `l >= 1` is the image of a dummy and reads as a renumbered
/// index; any other item is wrapped in a renumbering suspension.
fn lookup(n: usize, ol: usize, nl: usize, env: &SuspEnv) -> Result<SuspTerm> {
    if n > ol {
        return Ok(SuspTerm::Index(add(sub(n, ol)?, nl)?));
    }
    let it = env_item_at(env, n - 1)?;
    let shift = sub(nl, it.index)?;
    if it.term == SuspTerm::Index(1) && it.index >= 1 {
        Ok(SuspTerm::Index(add(shift, 1)?))
    } else {
        Ok(SuspTerm::susp(it.term.clone(), 0, shift, SuspEnv::Nil))
    }
}

/// Every matching (position, rule) pair, in preorder with rule order as tiebreak.
pub fn redexes(x: &SuspExpr, rules: RuleSet) -> Vec<(Path, RuleId)> {
    let mut out = Vec::new();
    x.as_ref().walk(&mut |p, node| {
        for r in rules.iter() {
            if matches(r, node) {
                out.push((p.clone(), r));
            }
        }
    });
    out
}

pub fn step_at(x: &SuspExpr, at: &Path, rule: RuleId) -> Result<SuspExpr> {
    let node = x.subexpr(at)?;
    let new = rule_apply(rule, node)?.ok_or_else(|| Error::NoMatch { rule, path: at.clone() })?;
    x.clone().replace(at, new)
}

/// All one-step successors.
pub fn successors(x: &SuspExpr, rules: RuleSet) -> Result<Vec<(Path, RuleId, SuspExpr)>> {
    redexes(x, rules).into_iter().map(|(p, r)| step_at(x, &p, r).map(|y| (p, r, y))).collect()
}

fn first_rule(node: ExprRef<'_>, rules: RuleSet) -> Option<RuleId> {
    rules.iter().find(|r| matches(*r, node))
}

/// Leftmost-outermost redex, optionally restricted to the head spine.
fn outermost(x: ExprRef<'_>, rules: RuleSet, head_only: bool) -> Option<(Path, RuleId)> {
    fn go(x: ExprRef<'_>, rules: RuleSet, head_only: bool, path: &mut Vec<usize>) -> Option<RuleId> {
        if let Some(r) = first_rule(x, rules) {
            return Some(r);
        }
        for sel in 0..x.arity() {
            if head_only && !on_spine(x, sel) {
                continue;
            }
            path.push(sel);
            if let Some(r) = go(x.child(sel).unwrap(), rules, head_only, path) {
                return Some(r);
            }
            path.pop();
        }
        None
    }
    let mut path = Vec::new();
    go(x, rules, head_only, &mut path).map(|r| (Path(path), r))
}

/// Children that lie on the head spine: everything except application
/// arguments and the terms stored in environment items.
fn on_spine(x: ExprRef<'_>, sel: usize) -> bool {
    !matches!((x, sel), (ExprRef::Term(SuspTerm::App(..)), 1) | (ExprRef::Env(SuspEnv::Cons(..)), 0))
}

fn innermost(x: ExprRef<'_>, rules: RuleSet) -> Option<(Path, RuleId)> {
    fn go(x: ExprRef<'_>, rules: RuleSet, path: &mut Vec<usize>) -> Option<RuleId> {
        for sel in 0..x.arity() {
            path.push(sel);
            if let Some(r) = go(x.child(sel).unwrap(), rules, path) {
                return Some(r);
            }
            path.pop();
        }
        first_rule(x, rules)
    }
    let mut path = Vec::new();
    go(x, rules, &mut path).map(|r| (Path(path), r))
}

struct Selector {
    strategy: Strategy,
    rng: Option<ChaCha8Rng>,
}

impl Selector {
    fn new(strategy: Strategy) -> Self {
        let rng = match strategy {
            Strategy::RandomSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Selector { strategy, rng }
    }

    fn pick(&mut self, x: &SuspExpr, rules: RuleSet) -> Option<(Path, RuleId)> {
        match self.strategy {
            Strategy::LeftmostOutermost => outermost(x.as_ref(), rules, false),
            Strategy::LeftmostInnermost => innermost(x.as_ref(), rules),
            Strategy::HeadFirst => outermost(x.as_ref(), rules, true).or_else(|| outermost(x.as_ref(), rules, false)),
            Strategy::RandomSeeded(_) => {
                let all = redexes(x, rules);
                if all.is_empty() {
                    None
                } else {
                    let k = self.rng.as_mut().unwrap().gen_range(0..all.len());
                    Some(all[k].clone())
                }
            }
        }
    }
}

/// Normalizes, recording every step.
pub fn normalize(x: &SuspExpr, rules: RuleSet, strategy: Strategy, fuel: usize) -> Result<Trace> {
    rules.validate_for(x)?;
    let mut sel = Selector::new(strategy);
    let mut steps: Vec<Step> = Vec::new();
    let mut cur = x.clone();
    loop {
        let Some((at, rule)) = sel.pick(&cur, rules) else {
            return Ok(Trace { initial: x.clone(), steps, status: Status::NormalForm });
        };
        if steps.len() == fuel {
            return Ok(Trace { initial: x.clone(), steps, status: Status::FuelExhausted });
        }
        cur = step_at(&cur, &at, rule)?;
        steps.push(Step { rule, at, result: cur.clone() });
    }
}

/// Normalizes without recording intermediate expressions.
pub fn normal_form(x: &SuspExpr, rules: RuleSet, strategy: Strategy, fuel: usize) -> Result<Outcome> {
    rules.validate_for(x)?;
    let mut sel = Selector::new(strategy);
    let mut cur = x.clone();
    let mut steps = 0;
    loop {
        let Some((at, rule)) = sel.pick(&cur, rules) else {
            return Ok(Outcome { result: cur, steps, status: Status::NormalForm });
        };
        if steps == fuel {
            return Ok(Outcome { result: cur, steps, status: Status::FuelExhausted });
        }
        cur = step_at(&cur, &at, rule)?;
        steps += 1;
    }
}

/// RM normal form with the default fuel; `None` if fuel runs out.
pub fn rm_normal(x: &SuspExpr) -> Result<Option<SuspExpr>> {
    let out = normal_form(x, RuleSet::rm(), Strategy::LeftmostOutermost, DEFAULT_RM_FUEL)?;
    Ok((out.status == Status::NormalForm).then_some(out.result))
}

/// Applies merging rules along the spine of `e` (through merges and cons tails,
/// never into item terms) until it is simple.
pub fn simplify_env(e: &SuspEnv, fuel: usize) -> Result<Option<SuspEnv>> {
    let mut cur = SuspExpr::Env(e.clone());
    for _ in 0..=fuel {
        let spine = redexes(&cur, RuleSet::rm()).into_iter().find(|(at, _)| {
            (0..=at.0.len()).all(|k| matches!(cur.subexpr(&Path(at.0[..k].to_vec())), Ok(ExprRef::Env(_))))
        });
        let Some((at, rule)) = spine else {
            return Ok(cur.into_env());
        };
        cur = step_at(&cur, &at, rule)?;
    }
    Ok(None)
}

/// Rewrites with reading, merging and beta steps on the head spine only, until the
/// spine ends in an index, constant or meta variable.
pub fn head_normalize(t: &SuspTerm, fuel: usize) -> Result<Trace> {
    let x = SuspExpr::Term(t.clone());
    let rules = RuleSet::rmbeta();
    let mut steps: Vec<Step> = Vec::new();
    let mut cur = x.clone();
    loop {
        let Some((at, rule)) = outermost(cur.as_ref(), rules, true) else {
            return Ok(Trace { initial: x, steps, status: Status::NormalForm });
        };
        if steps.len() == fuel {
            return Ok(Trace { initial: x, steps, status: Status::FuelExhausted });
        }
        cur = step_at(&cur, &at, rule)?;
        steps.push(Step { rule, at, result: cur.clone() });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinVerdict {
    pub joinable: bool,
    /// The search gave up before deciding.
    pub inconclusive: bool,
    pub common: Option<SuspExpr>,
}

/// Tries leftmost-outermost normalization of both sides, then a breadth-first
/// search of the reduct spaces bounded by `frontier` expressions.
pub fn joinable(a: &SuspExpr, b: &SuspExpr, rules: RuleSet, fuel: usize) -> Result<JoinVerdict> {
    joinable_within(a, b, rules, fuel, DEFAULT_FRONTIER)
}

pub fn joinable_within(
    a: &SuspExpr,
    b: &SuspExpr,
    rules: RuleSet,
    fuel: usize,
    frontier: usize,
) -> Result<JoinVerdict> {
    if a == b {
        return Ok(JoinVerdict { joinable: true, inconclusive: false, common: Some(a.clone()) });
    }
    let na = normal_form(a, rules, Strategy::LeftmostOutermost, fuel)?;
    let nb = normal_form(b, rules, Strategy::LeftmostOutermost, fuel)?;
    if na.result == nb.result {
        return Ok(JoinVerdict { joinable: true, inconclusive: false, common: Some(na.result) });
    }
    search_join(a, b, rules, frontier)
}

/// Breadth-first search for a common reduct of `a` and `b`.
pub fn search_join(a: &SuspExpr, b: &SuspExpr, rules: RuleSet, frontier: usize) -> Result<JoinVerdict> {
    search_join_by(a, b, rules, frontier, |x| Some(x.clone()))
}

/// Like [`search_join`], but two reducts meet when their keys agree; reducts
/// keyed `None` never meet.
pub fn search_join_by<K: Eq + Hash>(
    a: &SuspExpr,
    b: &SuspExpr,
    rules: RuleSet,
    frontier: usize,
    key: impl Fn(&SuspExpr) -> Option<K>,
) -> Result<JoinVerdict> {
    search_join_where(a, b, rules, frontier, |_, _| true, key)
}

/// Like [`search_join_by`], but only rewrites at positions `allow` accepts.
pub fn search_join_where<K: Eq + Hash>(
    a: &SuspExpr,
    b: &SuspExpr,
    rules: RuleSet,
    frontier: usize,
    allow: impl Fn(&SuspExpr, &Path) -> bool,
    key: impl Fn(&SuspExpr) -> Option<K>,
) -> Result<JoinVerdict> {
    let mut seen = [HashSet::new(), HashSet::new()];
    let mut keys: [HashMap<K, SuspExpr>; 2] = [HashMap::new(), HashMap::new()];
    let mut queues = [VecDeque::new(), VecDeque::new()];
    for (side, x) in [a, b].into_iter().enumerate() {
        seen[side].insert(x.clone());
        queues[side].push_back(x.clone());
        if let Some(k) = key(x) {
            if keys[1 - side].contains_key(&k) {
                return Ok(JoinVerdict { joinable: true, inconclusive: false, common: Some(x.clone()) });
            }
            keys[side].insert(k, x.clone());
        }
    }
    let mut side = 0;
    while !queues[0].is_empty() || !queues[1].is_empty() {
        if queues[side].is_empty() {
            side = 1 - side;
        }
        let x = queues[side].pop_front().unwrap();
        for (at, _, y) in successors(&x, rules)? {
            if !allow(&x, &at) || !seen[side].insert(y.clone()) {
                continue;
            }
            if let Some(k) = key(&y) {
                if keys[1 - side].contains_key(&k) {
                    return Ok(JoinVerdict { joinable: true, inconclusive: false, common: Some(y) });
                }
                keys[side].insert(k, y.clone());
            }
            if seen[0].len() + seen[1].len() > frontier {
                return Ok(JoinVerdict { joinable: false, inconclusive: true, common: None });
            }
            queues[side].push_back(y);
        }
        side = 1 - side;
    }
    Ok(JoinVerdict { joinable: false, inconclusive: false, common: None })
}

/// Every expression reachable from `x`, or `None` if more than `cap` are found.
pub fn reachable(x: &SuspExpr, rules: RuleSet, cap: usize) -> Result<Option<HashSet<SuspExpr>>> {
    let (seen, complete) = explore(x, rules, cap)?;
    Ok(complete.then_some(seen))
}

/// Breadth-first exploration of the reducts of `x`, stopping after `cap` expressions.
/// The flag is true when every reduct was visited.
pub fn explore(x: &SuspExpr, rules: RuleSet, cap: usize) -> Result<(HashSet<SuspExpr>, bool)> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(x.clone());
    queue.push_back(x.clone());
    while let Some(y) = queue.pop_front() {
        for (_, _, z) in successors(&y, rules)? {
            if seen.contains(&z) {
                continue;
            }
            if seen.len() == cap {
                return Ok((seen, false));
            }
            seen.insert(z.clone());
            queue.push_back(z);
        }
    }
    Ok((seen, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SuspTerm as T;

    fn c(n: &str) -> T {
        T::constant(n)
    }

    fn cons1(t: T, l: usize) -> SuspEnv {
        SuspEnv::cons(t, l, SuspEnv::Nil)
    }

    fn ex(t: T) -> SuspExpr {
        SuspExpr::Term(t)
    }

    #[test]
    fn beta_s_builds_suspension() {
        let t = ex(T::app(T::abs(T::index(1)), c("c")));
        let got = rule_apply(RuleId::BetaS, t.as_ref()).unwrap().unwrap();
        assert_eq!(got, ex(T::susp(T::index(1), 1, 0, cons1(c("c"), 0))));
        assert_eq!(rule_apply(RuleId::R1, ex(c("c")).as_ref()).unwrap(), None);
    }

    #[test]
    fn merge_one_on_nested_suspensions() {
        let body = T::abs(T::apps(T::index(1), [T::index(2), T::index(3)]));
        let t = ex(T::susp(T::susp(body.clone(), 1, 0, cons1(c("t2"), 0)), 1, 0, cons1(c("t3"), 0)));
        let got = rule_apply(RuleId::M1, t.as_ref()).unwrap().unwrap();
        let want = T::susp(body, 2, 0, SuspEnv::merge(cons1(c("t2"), 0), 0, 1, cons1(c("t3"), 0)));
        assert_eq!(got, ex(want));
    }

    #[test]
    fn side_conditions() {
        let e = cons1(c("a"), 0);
        assert!(!matches(RuleId::R4, ex(T::susp(T::index(1), 1, 0, e.clone())).as_ref()));
        assert!(matches(RuleId::R4, ex(T::susp(T::index(2), 1, 0, e.clone())).as_ref()));
        let m = SuspExpr::Env(SuspEnv::merge(cons1(c("a"), 1), 1, 1, cons1(c("b"), 0)));
        assert!(!matches(RuleId::M5, m.as_ref()));
        assert!(matches(RuleId::M6, m.as_ref()));
        let m = SuspExpr::Env(SuspEnv::merge(cons1(c("a"), 0), 1, 1, cons1(c("b"), 0)));
        assert!(matches(RuleId::M5, m.as_ref()));
        assert!(!matches(RuleId::M6, m.as_ref()));
    }

    #[test]
    fn redex_listing() {
        assert!(redexes(&ex(c("c")), RuleSet::rm()).is_empty());
        let s = ex(T::susp(c("c"), 0, 0, SuspEnv::Nil));
        assert_eq!(redexes(&s, RuleSet::rm()), vec![(Path::root(), RuleId::R1)]);
    }

    #[test]
    fn step_at_positions() {
        let t = ex(T::abs(T::susp(c("c"), 0, 0, SuspEnv::Nil)));
        assert_eq!(step_at(&t, &Path(vec![0]), RuleId::R1).unwrap(), ex(T::abs(c("c"))));
        assert!(matches!(step_at(&t, &Path(vec![0]), RuleId::R2), Err(Error::NoMatch { .. })));
        assert!(matches!(step_at(&t, &Path(vec![1]), RuleId::R1), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn fuel_and_omega() {
        let tr = normalize(&ex(c("c")), RuleSet::rm(), Strategy::LeftmostOutermost, 0).unwrap();
        assert_eq!(tr.status, Status::NormalForm);
        assert!(tr.steps.is_empty());
        let w = T::abs(T::app(T::index(1), T::index(1)));
        let omega = ex(T::app(w.clone(), w));
        let tr = normalize(&omega, RuleSet::rmbeta(), Strategy::LeftmostOutermost, 50).unwrap();
        assert_eq!(tr.status, Status::FuelExhausted);
        assert_eq!(tr.steps.len(), 50);
    }

    #[test]
    fn r7_only_in_logical_mode() {
        let t = ex(T::susp(T::meta("X"), 1, 0, cons1(c("a"), 0)));
        assert!(redexes(&t, RuleSet::rm()).is_empty());
        assert_eq!(redexes(&t, RuleSet::rm().logical()), vec![(Path::root(), RuleId::R7)]);
    }

    #[test]
    fn r3prime_rejected_with_graftable_metas() {
        let t = ex(T::susp(T::meta("X"), 0, 0, SuspEnv::Nil));
        let rules = RuleSet::r().with(RuleId::R3Prime);
        assert!(normalize(&t, rules, Strategy::LeftmostOutermost, 10).is_err());
        assert!(normalize(&t, rules.logical(), Strategy::LeftmostOutermost, 10).is_ok());
    }

    #[test]
    fn lookup_clauses() {
        let e = SuspEnv::from_items([(T::index(1), 2), (c("b"), 0)]);
        let r =
            |n| rule_apply(RuleId::LookupDerived, ex(T::susp(T::index(n), 2, 3, e.clone())).as_ref()).unwrap().unwrap();
        assert_eq!(r(4), ex(T::index(5)));
        assert_eq!(r(1), ex(T::index(2)));
        assert_eq!(r(2), ex(T::susp(c("b"), 0, 3, SuspEnv::Nil)));
    }

    #[test]
    fn rule_set_parsing() {
        assert_eq!("rm".parse::<RuleSet>().unwrap(), RuleSet::rm());
        assert_eq!("rbeta+lookup".parse::<RuleSet>().unwrap(), RuleSet::rbeta().with(RuleId::LookupDerived));
        assert_eq!("rm+logical".parse::<RuleSet>().unwrap(), RuleSet::rm().logical());
        assert!("rx".parse::<RuleSet>().is_err());
        assert_eq!("rand:7".parse::<Strategy>().unwrap(), Strategy::RandomSeeded(7));
    }

    #[test]
    fn joinable_is_reflexive() {
        let x = ex(T::susp(c("c"), 0, 0, SuspEnv::Nil));
        assert!(joinable(&x, &x, RuleSet::rm(), 0).unwrap().joinable);
    }
}
