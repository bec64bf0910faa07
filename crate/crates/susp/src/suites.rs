//! Seeded property suites shared by `susp fuzz` and the acceptance tests.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bridges::engine::{self, Calculus};
use crate::bridges::ls::Ls;
use crate::bridges::ls::{ls_to_susp, LsCalc, LsRule};
use crate::bridges::lsig::{
    env_to_lsig, lsig_normalize, lsig_subst_to_triple, lsig_to_susp, susp_to_lsig, Lsig, LsigCalc, LsigRule,
};
use crate::bridges::lu::{lu_normalize, lu_to_susp, Lu, LuRule};
use crate::env::{check_well_formed, is_simple, len, lev};
use crate::expr::{ExprRef, Path, SuspEnv, SuspExpr, SuspTerm};
use crate::gen::{case_seed, church, church_add, church_mul, Gen, GenConfig, GenMode};
use crate::oracle::{db_normalize, par_successors, sim_env, sim_key, similar, DbTerm};
use crate::order::{check_step_decrease, DEFAULT_ETA_BOUND};
use crate::rewrite::{
    joinable_within, normal_form, normalize, rm_normal, search_join_by, search_join_where, simplify_env, step_at,
    successors, RuleId, RuleSet, Status, Strategy, DEFAULT_FRONTIER, DEFAULT_RM_FUEL,
};

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub max_size: usize,
    pub max_level: usize,
}

impl SuiteConfig {
    pub fn new(cases: usize, seed: u64) -> Self {
        SuiteConfig { cases, seed, max_size: 40, max_level: 8 }
    }

    fn gen(&self, i: usize) -> Gen {
        Gen::new(self.gen_config(i))
    }

    fn gen_config(&self, i: usize) -> GenConfig {
        GenConfig {
            seed: case_seed(self.seed, i as u64),
            max_size: self.max_size,
            max_level: self.max_level,
            ..GenConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseResult {
    Pass,
    Fail(String),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub first_failure: Option<(usize, String)>,
    pub first_inconclusive: Option<(usize, String)>,
    /// Counters describing what the cases exercised.
    pub stats: Vec<(String, usize)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.inconclusive == 0 && self.cases > 0
    }

    pub fn stat(&self, key: &str) -> usize {
        self.stats.iter().find(|(k, _)| k == key).map_or(0, |(_, v)| *v)
    }

    /// Combines reports of sub-suites under one name.
    pub fn merge(name: &str, parts: Vec<SuiteReport>) -> SuiteReport {
        let mut out = SuiteReport {
            name: name.into(),
            cases: 0,
            failures: 0,
            inconclusive: 0,
            first_failure: None,
            first_inconclusive: None,
            stats: Vec::new(),
        };
        for p in parts {
            out.cases += p.cases;
            out.failures += p.failures;
            out.inconclusive += p.inconclusive;
            let tag = |(i, m): (usize, String)| (i, format!("{}: {m}", p.name));
            out.first_failure = out.first_failure.or(p.first_failure.map(tag));
            out.first_inconclusive = out.first_inconclusive.or(p.first_inconclusive.map(tag));
            out.stats.extend(p.stats.into_iter().map(|(k, v)| (format!("{}.{k}", p.name), v)));
        }
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {} cases, {} failures, {} inconclusive",
            self.name, self.cases, self.failures, self.inconclusive
        )?;
        for (k, v) in &self.stats {
            write!(f, ", {k}={v}")?;
        }
        if let Some((i, m)) = &self.first_failure {
            write!(f, "\n  first failure (case {i}): {m}")?;
        }
        if let Some((i, m)) = &self.first_inconclusive {
            write!(f, "\n  first inconclusive (case {i}): {m}")?;
        }
        Ok(())
    }
}

/// Counters a case can bump.
#[derive(Default)]
pub struct Stats(HashMap<String, usize>);

impl Stats {
    pub fn add(&mut self, key: &str, n: usize) {
        *self.0.entry(key.to_string()).or_default() += n;
    }
}

/// Runs `cases` independent cases in index order.
pub fn run_cases(name: &str, cases: usize, mut case: impl FnMut(usize, &mut Stats) -> CaseResult) -> SuiteReport {
    let mut report = SuiteReport {
        name: name.into(),
        cases,
        failures: 0,
        inconclusive: 0,
        first_failure: None,
        first_inconclusive: None,
        stats: Vec::new(),
    };
    let mut stats = Stats::default();
    for i in 0..cases {
        match case(i, &mut stats) {
            CaseResult::Pass => {}
            CaseResult::Fail(m) => {
                report.failures += 1;
                report.first_failure.get_or_insert((i, m));
            }
            CaseResult::Inconclusive(m) => {
                report.inconclusive += 1;
                report.first_inconclusive.get_or_insert((i, m));
            }
        }
    }
    let mut stats: Vec<_> = stats.0.into_iter().collect();
    stats.sort();
    report.stats = stats;
    report
}

macro_rules! fail_if {
    ($cond:expr, $($msg:tt)*) => {
        if $cond {
            return CaseResult::Fail(format!($($msg)*));
        }
    };
}

macro_rules! try_case {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return CaseResult::Fail(format!("error: {err}")),
        }
    };
}

/// Meta variables appear in every other case.
fn mixed_expr(cfg: &SuiteConfig, i: usize) -> SuspExpr {
    let mut gc = cfg.gen_config(i);
    gc.allow_metavars = i % 2 == 1;
    Gen::new(gc).susp_expr()
}

/// Every one-step successor is well formed, and a rewritten environment keeps its
/// length without raising its level.
pub fn preservation(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("preservation", cfg.cases, |i, st| {
        let x = mixed_expr(cfg, i);
        for rules in [RuleSet::rmbeta(), RuleSet::rmbeta().logical()] {
            for (at, rule, y) in try_case!(successors(&x, rules)) {
                st.add("steps", 1);
                let v = check_well_formed(&y);
                fail_if!(!v.is_empty(), "{rule} at {at} turns {x} into ill-formed {y}: {}", v[0]);
                if let (Ok(ExprRef::Env(before)), Ok(ExprRef::Env(after))) = (x.subexpr(&at), y.subexpr(&at)) {
                    st.add("env_steps", 1);
                    fail_if!(len(before) != len(after), "{rule} at {at} changes len: {before} to {after}");
                    fail_if!(lev(after) > lev(before), "{rule} at {at} raises lev: {before} to {after}");
                }
            }
        }
        CaseResult::Pass
    })
}

fn strategies(seed: u64) -> Vec<Strategy> {
    let mut out = vec![Strategy::LeftmostOutermost, Strategy::LeftmostInnermost];
    out.extend((0..5).map(|k| Strategy::RandomSeeded(seed.wrapping_add(k))));
    out
}

/// RM normalizes under every strategy, and every observed step decreases the measures.
pub fn termination(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("termination", cfg.cases, |i, st| {
        let x = mixed_expr(cfg, i);
        let mut first_bad = None;
        for s in strategies(case_seed(cfg.seed, i as u64)) {
            let trace = try_case!(normalize(&x, RuleSet::rm(), s, DEFAULT_RM_FUEL));
            if trace.status != Status::NormalForm {
                st.add("fuel_exhausted", 1);
                return CaseResult::Fail(format!("{x} does not normalize under {s}"));
            }
            let mut before = &trace.initial;
            for step in &trace.steps {
                st.add("steps", 1);
                let rep = check_step_decrease(before, &step.result, DEFAULT_ETA_BOUND);
                if !rep.holds() {
                    let nil_env = matches!(
                        before.subexpr(&step.at),
                        Ok(ExprRef::Term(SuspTerm::Susp { env, .. })) if **env == SuspEnv::Nil
                    );
                    let tag = if nil_env { "_nil_env" } else { "" };
                    st.add(&format!("no_decrease_{}{tag}", step.rule), 1);
                    first_bad.get_or_insert_with(|| {
                        format!("{} at {} from {before} to {}: {rep:?}", step.rule, step.at, step.result)
                    });
                }
                before = &step.result;
            }
        }
        match first_bad {
            Some(m) => CaseResult::Fail(m),
            None => CaseResult::Pass,
        }
    })
}

/// All strategies agree on the RM normal form, as does every one-step successor.
pub fn confluence(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("confluence", cfg.cases, |i, st| {
        let x = mixed_expr(cfg, i);
        let mut forms = BTreeSet::new();
        for s in strategies(case_seed(cfg.seed, i as u64)) {
            forms.insert(try_case!(normal_form(&x, RuleSet::rm(), s, DEFAULT_RM_FUEL)).result);
        }
        fail_if!(forms.len() != 1, "{x} has {} distinct normal forms", forms.len());
        let nf = forms.into_iter().next().unwrap();
        for (at, rule, y) in try_case!(successors(&x, RuleSet::rm())) {
            st.add("successors", 1);
            let ny = try_case!(rm_normal(&y));
            fail_if!(ny.as_ref() != Some(&nf), "{rule} at {at} from {x} leads to a different normal form");
        }
        CaseResult::Pass
    })
}

/// Replaces some free-standing leaves of a term by meta variables.
fn sprinkle_metas(t: &DbTerm, g: &mut Gen) -> SuspTerm {
    match t {
        DbTerm::Index(_) | DbTerm::Const(_) if g.rng().gen_bool(0.35) => {
            SuspTerm::meta(["X", "Y"].choose(g.rng()).unwrap())
        }
        DbTerm::App(f, a) => SuspTerm::app(sprinkle_metas(f, g), sprinkle_metas(a, g)),
        DbTerm::Abs(b) => SuspTerm::abs(sprinkle_metas(b, g)),
        _ => t.to_susp(),
    }
}

fn random_walk(x: &SuspExpr, rules: RuleSet, steps: usize, g: &mut Gen) -> crate::Result<SuspExpr> {
    let mut cur = x.clone();
    for _ in 0..steps {
        let r = crate::rewrite::redexes(&cur, rules);
        let Some((at, rule)) = r.choose(g.rng()).cloned() else { break };
        cur = step_at(&cur, &at, rule)?;
    }
    Ok(cur)
}

/// Two random RMBETA reducts of a meta-variable term are joinable.
pub fn grafting_peaks(cfg: &SuiteConfig) -> SuiteReport {
    let rules = RuleSet::rmbeta();
    run_cases("grafting-peaks", cfg.cases, |i, st| {
        let mut g = Gen::new(GenConfig { mode: GenMode::SnDeBruijn, ..cfg.gen_config(i) });
        let t = g.sn_term();
        let src = SuspExpr::Term(sprinkle_metas(&t, &mut g));
        let warm = g.rng().gen_range(0..=6);
        let src = try_case!(random_walk(&src, rules, warm, &mut g));
        let (n1, n2) = (g.rng().gen_range(0..=20), g.rng().gen_range(0..=20));
        let a = try_case!(random_walk(&src, rules, n1, &mut g));
        let b = try_case!(random_walk(&src, rules, n2, &mut g));
        if a != b {
            st.add("distinct_peaks", 1);
        }
        let v = try_case!(joinable_within(&a, &b, rules, DEFAULT_RM_FUEL, DEFAULT_FRONTIER));
        if v.inconclusive {
            return CaseResult::Inconclusive(format!("{a} and {b}"));
        }
        fail_if!(!v.joinable, "reducts {a} and {b} of {src} do not join");
        CaseResult::Pass
    })
}

/// RMBETA leftmost-outermost normal forms coincide with de Bruijn beta normal forms.
pub fn simulation(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("simulation", cfg.cases, |i, st| {
        let t = Gen::new(GenConfig { mode: GenMode::SnDeBruijn, ..cfg.gen_config(i) }).sn_term();
        let expected = db_normalize(&t, DEFAULT_RM_FUEL);
        fail_if!(expected.status != Status::NormalForm, "oracle does not normalize {t}");
        st.add("beta_steps", expected.steps);
        let x = SuspExpr::Term(t.to_susp());
        let out = try_case!(normal_form(&x, RuleSet::rmbeta(), Strategy::LeftmostOutermost, 10 * DEFAULT_RM_FUEL));
        fail_if!(out.status != Status::NormalForm, "{t} does not normalize under RMBETA");
        let got = out.result.as_term().and_then(DbTerm::from_susp);
        fail_if!(got.as_ref() != Some(&expected.result), "{t}: expected {}, got {}", expected.result, out.result);
        CaseResult::Pass
    })
}

/// Cons positions whose item is a suspension with index at least its new level.
fn displaceable(x: &SuspExpr) -> Vec<Path> {
    let mut out = Vec::new();
    x.as_ref().walk(&mut |p, n| {
        if let ExprRef::Env(SuspEnv::Cons(item, _)) = n {
            if let SuspTerm::Susp { nl, .. } = &item.term {
                if item.index >= *nl {
                    out.push(p.clone());
                }
            }
        }
    });
    out
}

/// Rewrites one displaced item `([t, ol, nl, r], nl + k)` to a new level `nl'`,
/// keeping the result well formed.
pub fn displace(x: &SuspExpr, g: &mut Gen, max_level: usize) -> Option<SuspExpr> {
    let mut spots = displaceable(x);
    spots.shuffle(g.rng());
    for at in spots {
        let Ok(ExprRef::Env(SuspEnv::Cons(item, rest))) = x.subexpr(&at) else { unreachable!() };
        let SuspTerm::Susp { term, ol, nl, env } = &item.term else { unreachable!() };
        let k = item.index - nl;
        let mut levels: Vec<usize> = (lev(env)..=max_level).filter(|l| l != nl).collect();
        levels.shuffle(g.rng());
        for nl2 in levels {
            let item2 = SuspTerm::susp((**term).clone(), *ol, nl2, (**env).clone());
            let node = SuspExpr::Env(SuspEnv::cons(item2, nl2 + k, (**rest).clone()));
            let Ok(y) = x.clone().replace(&at, node) else { continue };
            if check_well_formed(&y).is_empty() {
                return Some(y);
            }
        }
    }
    None
}

fn is_simple_env(x: &SuspExpr) -> bool {
    matches!(x, SuspExpr::Env(e) if is_simple(e))
}

/// Similar meta-free terms share their RM normal form; similar environments
/// reduce to similar simple environments.
pub fn similarity(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("similarity", cfg.cases, |i, st| {
        let mut g = cfg.gen(i);
        let (x, y) = loop {
            let x = g.susp_expr();
            if let Some(y) = displace(&x, &mut g, cfg.max_level) {
                break (x, y);
            }
        };
        fail_if!(!similar(x.as_ref(), y.as_ref()).unwrap_or(false), "displacement broke similarity: {x} vs {y}");
        fail_if!(sim_key(&x) != sim_key(&y), "similarity key disagrees with the relation: {x} vs {y}");
        let nx = try_case!(rm_normal(&x)).expect("RM terminates");
        let ny = try_case!(rm_normal(&y)).expect("RM terminates");
        match (&nx, &ny) {
            (SuspExpr::Term(_), _) => {
                st.add("terms", 1);
                fail_if!(nx != ny, "{x} ~ {y} but normal forms {nx} and {ny} differ");
            }
            (SuspExpr::Env(_), SuspExpr::Env(_)) => {
                st.add("envs", 1);
                match try_case!(similar_reducts(&x, &y, true, st)) {
                    Some(true) => {}
                    Some(false) => return CaseResult::Fail(format!("{x} ~ {y} but no simple reducts are similar")),
                    None => {
                        return CaseResult::Inconclusive(format!("no similar simple reducts found for {x} and {y}"))
                    }
                }
            }
            _ => unreachable!("normal forms keep the category"),
        }
        CaseResult::Pass
    })
}

/// Every two parallel successors of a term have a common parallel successor.
pub fn diamond(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("diamond", cfg.cases, |i, st| {
        let mut g = cfg.gen(i);
        let x = SuspExpr::Term(loop {
            let n = g.rng().gen_range(1..=cfg.max_size);
            let t = g.susp_term(n);
            if !t.has_meta() {
                break t;
            }
        });
        let ps: Vec<SuspExpr> = par_successors(&x).into_iter().collect();
        st.add("successors", ps.len());
        let nexts: Vec<BTreeSet<SuspExpr>> = ps.iter().map(par_successors).collect();
        for a in 0..ps.len() {
            for b in a + 1..ps.len() {
                st.add("pairs", 1);
                let (small, big) =
                    if nexts[a].len() <= nexts[b].len() { (&nexts[a], &nexts[b]) } else { (&nexts[b], &nexts[a]) };
                fail_if!(
                    !small.iter().any(|s| big.contains(s)),
                    "{} and {} from {x} have no common successor",
                    ps[a],
                    ps[b]
                );
            }
        }
        CaseResult::Pass
    })
}

/// Translating a meta-free suspension term to lambda-sigma and back is the identity.
pub fn retraction(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("retraction", cfg.cases, |i, _| {
        let mut g = cfg.gen(i);
        let n = g.rng().gen_range(1..=cfg.max_size);
        let t = g.susp_term(n);
        let back = try_case!(susp_to_lsig(&t).and_then(|s| lsig_to_susp(&s)));
        fail_if!(back != t, "{t} comes back as {back}");
        CaseResult::Pass
    })
}

fn pure_config(cfg: &SuiteConfig, i: usize) -> GenConfig {
    GenConfig { allow_constants: false, ..cfg.gen_config(i) }
}

/// Picks a random one-step rewrite of a fresh expression, retrying until one exists.
fn random_bridge_step<C: Calculus>(
    g: &mut Gen,
    rules: &[C::Rule],
    mut fresh: impl FnMut(&mut Gen) -> C::Expr,
) -> (C::Expr, Path, C::Rule, C::Expr) {
    loop {
        let a = fresh(g);
        let steps = engine::successors::<C>(&a, rules);
        if let Some((p, r, b)) = steps.choose(g.rng()).cloned() {
            return (a, p, r, b);
        }
    }
}

/// Each lambda-s step is exactly one suspension step under R, beta_s and the derived lookup.
pub fn ls_correspondence(cfg: &SuiteConfig) -> SuiteReport {
    let rules = RuleSet::rbeta().with(crate::rewrite::RuleId::LookupDerived);
    run_cases("ls-one-step", cfg.cases, |i, st| {
        let mut g = Gen::new(pure_config(cfg, i));
        let (a, at, rule, b) = random_bridge_step::<LsCalc>(&mut g, &LsRule::LS, |g| g.ls_term());
        st.add(rule_key_ls(rule), 1);
        let ta = SuspExpr::Term(try_case!(ls_to_susp(&a)));
        let tb = SuspExpr::Term(try_case!(ls_to_susp(&b)));
        let succ = try_case!(successors(&ta, rules));
        fail_if!(
            !succ.iter().any(|(_, _, y)| *y == tb),
            "{rule} at {at}: {a} to {b}, but {tb} is not one step from {ta}"
        );
        CaseResult::Pass
    })
}

fn rule_key_ls(r: LsRule) -> &'static str {
    match r {
        LsRule::SigmaGen => "sigma_gen",
        LsRule::SigmaLam => "sigma_lam",
        LsRule::SigmaApp => "sigma_app",
        LsRule::SigmaDest => "sigma_dest",
        LsRule::PhiLam => "phi_lam",
        LsRule::PhiApp => "phi_app",
        LsRule::PhiDest => "phi_dest",
        _ => "se",
    }
}

fn sigma_nf(x: &Lsig, fuel: usize) -> Option<Lsig> {
    let out = lsig_normalize(x, &LsigRule::SIGMA, Strategy::LeftmostOutermost, fuel);
    (out.status == Status::NormalForm).then_some(out.result)
}

pub const BRIDGE_FUEL: usize = 10_000;

/// RM steps on meta-free expressions become sigma-joinable lambda-sigma expressions.
pub fn lsig_forward(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("lsig-forward", cfg.cases, |i, st| {
        let mut g = Gen::new(pure_config(cfg, i));
        let (u, at, rule, v) = loop {
            let u = g.susp_expr();
            let steps = try_case!(successors(&u, RuleSet::rm()));
            if let Some((p, r, v)) = steps.choose(g.rng()).cloned() {
                break (u, p, r, v);
            }
        };
        let (su, sv) = match (&u, &v) {
            (SuspExpr::Term(a), SuspExpr::Term(b)) => {
                st.add("terms", 1);
                (try_case!(susp_to_lsig(a)), try_case!(susp_to_lsig(b)))
            }
            (SuspExpr::Env(a), SuspExpr::Env(b)) => {
                st.add("envs", 1);
                let l = lev(a);
                (try_case!(env_to_lsig(a, l)), try_case!(env_to_lsig(b, l)))
            }
            _ => unreachable!("steps keep the category"),
        };
        match (sigma_nf(&su, BRIDGE_FUEL), sigma_nf(&sv, BRIDGE_FUEL)) {
            (Some(a), Some(b)) => fail_if!(a != b, "{rule} at {at}: {u} to {v}; sigma normal forms {a} and {b} differ"),
            _ => return CaseResult::Inconclusive(format!("sigma fuel exhausted on {su} or {sv}")),
        }
        CaseResult::Pass
    })
}

/// Sigma steps become RM-joinable suspension expressions; substitutions keep their
/// levels and reach similar environments.
pub fn lsig_backward(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("lsig-backward", cfg.cases, |i, st| {
        let mut g = Gen::new(pure_config(cfg, i));
        let (a, at, rule, b) = random_bridge_step::<LsigCalc>(&mut g, &LsigRule::SIGMA, |g| g.lsig_expr());
        if a.is_term() {
            st.add("terms", 1);
            let ta = SuspExpr::Term(try_case!(lsig_to_susp(&a)));
            let tb = SuspExpr::Term(try_case!(lsig_to_susp(&b)));
            let (na, nb) = (try_case!(rm_normal(&ta)), try_case!(rm_normal(&tb)));
            fail_if!(
                na != nb,
                "{rule} at {at}: {a} to {b}; RM normal forms {} and {} differ",
                na.unwrap(),
                nb.unwrap()
            );
            return CaseResult::Pass;
        }
        st.add("substitutions", 1);
        let ea = try_case!(lsig_subst_to_triple(&a));
        let eb = try_case!(lsig_subst_to_triple(&b));
        fail_if!(
            (ea.ol, ea.nl) != (eb.ol, eb.nl),
            "{rule} at {at}: {a} to {b} changes levels ({}, {}) to ({}, {})",
            ea.ol,
            ea.nl,
            eb.ol,
            eb.nl
        );
        let (xa, xb) = (SuspExpr::Env(ea.env), SuspExpr::Env(eb.env));
        match try_case!(similar_reducts(&xa, &xb, false, st)) {
            Some(true) => CaseResult::Pass,
            Some(false) => {
                st.add(&format!("dissimilar_{rule}"), 1);
                CaseResult::Fail(format!("{rule} at {at}: {a} to {b}; no reducts of {xa} and {xb} are similar"))
            }
            None => {
                st.add(&format!("undecided_{rule}"), 1);
                CaseResult::Inconclusive(format!("{rule} at {at}: no similar reducts found for {xa} and {xb}"))
            }
        }
    })
}

/// Looks for RM reducts of two environments that are similar, trying the normal
/// forms, then the spine-simplified forms, then a bounded search. `None` when the
/// search gives up.
fn similar_reducts(x: &SuspExpr, y: &SuspExpr, simple: bool, st: &mut Stats) -> crate::Result<Option<bool>> {
    let (nx, ny) = (rm_normal(x)?, rm_normal(y)?);
    if nx.is_some() && nx.as_ref().map(sim_key) == ny.as_ref().map(sim_key) {
        st.add("normal_forms_similar", 1);
        return Ok(Some(true));
    }
    if let (Some(ex), Some(ey)) = (x.as_env(), y.as_env()) {
        if let (Some(sx), Some(sy)) = (simplify_env(ex, DEFAULT_RM_FUEL)?, simplify_env(ey, DEFAULT_RM_FUEL)?) {
            if sim_env(&sx, &sy) {
                st.add("spine_forms_similar", 1);
                return Ok(Some(true));
            }
            let (sx, sy) = (SuspExpr::Env(sx), SuspExpr::Env(sy));
            let v = search_join_where(&sx, &sy, RuleSet::rm(), DEFAULT_FRONTIER, item_spine, item_key)?;
            if v.joinable {
                st.add("joined_by_item_search", 1);
                return Ok(Some(true));
            }
        }
    }
    let key = |z: &SuspExpr| (!simple || is_simple_env(z)).then(|| sim_key(z));
    let v = search_join_by(x, y, RuleSet::rm(), DEFAULT_FRONTIER, key)?;
    if v.inconclusive {
        return Ok(None);
    }
    if v.joinable {
        st.add("joined_by_search", 1);
    }
    Ok(Some(v.joinable))
}

/// Environment spines, item roots, and the environment spines of item suspensions.
pub fn item_spine(x: &SuspExpr, at: &Path) -> bool {
    let mut node = x.as_ref();
    let mut item_root = false;
    for &sel in &at.0 {
        let ok = match node {
            ExprRef::Env(_) => true,
            ExprRef::Term(SuspTerm::Susp { .. }) => item_root && sel == 1,
            ExprRef::Term(_) => false,
        };
        if !ok {
            return false;
        }
        item_root = matches!(node, ExprRef::Env(SuspEnv::Cons(..))) && sel == 0;
        node = node.child(sel).expect("path from a redex");
    }
    true
}

/// Similarity key of a simple environment whose items have their parts normalized:
/// displaced suspensions keep their root, other items are normalized whole.
pub fn item_key(x: &SuspExpr) -> Option<SuspExpr> {
    let SuspExpr::Env(e) = x else { return None };
    if !is_simple(e) {
        return None;
    }
    let nf_term = |t: &SuspTerm| rm_normal(&SuspExpr::Term(t.clone())).ok().flatten().and_then(SuspExpr::into_term);
    let nf_env = |e: &SuspEnv| rm_normal(&SuspExpr::Env(e.clone())).ok().flatten().and_then(SuspExpr::into_env);
    let mut items = Vec::new();
    let mut cur = e;
    while let SuspEnv::Cons(item, rest) = cur {
        let t = match &item.term {
            SuspTerm::Susp { term, ol, nl, env } if item.index >= *nl => {
                SuspTerm::susp(nf_term(term)?, *ol, *nl, nf_env(env)?)
            }
            t => nf_term(t)?,
        };
        items.push((t, item.index));
        cur = rest;
    }
    Some(sim_key(&SuspExpr::Env(SuspEnv::from_items(items))))
}

/// The fixed corpus for cross-calculus agreement: Church sums and products up to
/// five, then seeded simply typed terms.
pub fn sn_corpus(size: usize) -> Vec<DbTerm> {
    let mut out = Vec::new();
    for m in 0..=5 {
        for n in 0..=5 {
            out.push(DbTerm::apps(church_add(), [church(m), church(n)]));
            out.push(DbTerm::apps(church_mul(), [church(m), church(n)]));
        }
    }
    let mut i = 0;
    while out.len() < size {
        let cfg = GenConfig {
            seed: case_seed(0x5eed, i),
            allow_constants: false,
            mode: GenMode::SnDeBruijn,
            ..GenConfig::default()
        };
        out.push(Gen::new(cfg).sn_term());
        i += 1;
    }
    out.truncate(size);
    out
}

pub fn db_to_lu(t: &DbTerm) -> Lu {
    match t {
        DbTerm::Const(c) => Lu::Const(c.clone()),
        DbTerm::Index(i) => Lu::Var(*i),
        DbTerm::App(f, a) => Lu::app(db_to_lu(f), db_to_lu(a)),
        DbTerm::Abs(b) => Lu::abs(db_to_lu(b)),
    }
}

pub fn db_to_ls(t: &DbTerm) -> Ls {
    match t {
        DbTerm::Const(c) => Ls::Const(c.clone()),
        DbTerm::Index(i) => Ls::Var(*i),
        DbTerm::App(f, a) => Ls::app(db_to_ls(f), db_to_ls(a)),
        DbTerm::Abs(b) => Ls::abs(db_to_ls(b)),
    }
}

pub const CROSS_FUEL: usize = 1_000_000;

/// Normal form of `t` in each calculus, decoded back to a de Bruijn term.
pub fn cross_normal_forms(t: &DbTerm) -> crate::Result<Vec<(&'static str, Option<DbTerm>)>> {
    let lo = Strategy::LeftmostOutermost;
    let lu = lu_normalize(&db_to_lu(t), &LuRule::ALL, lo, CROSS_FUEL);
    let ls = engine::normalize::<LsCalc>(&db_to_ls(t), &LsRule::LS, lo, CROSS_FUEL);
    let lsig = lsig_normalize(&susp_to_lsig(&t.to_susp())?, &LsigRule::ALL, lo, CROSS_FUEL);
    let susp = normal_form(&SuspExpr::Term(t.to_susp()), RuleSet::rmbeta(), lo, CROSS_FUEL)?;
    let decode =
        |ok: bool, s: crate::Result<SuspTerm>| if ok { s.ok().and_then(|s| DbTerm::from_susp(&s)) } else { None };
    Ok(vec![
        ("lu", decode(lu.status == Status::NormalForm, lu_to_susp(&lu.result))),
        ("ls", decode(ls.status == Status::NormalForm, ls_to_susp(&ls.result))),
        ("lsig", decode(lsig.status == Status::NormalForm, lsig_to_susp(&lsig.result))),
        ("susp", decode(susp.status == Status::NormalForm, susp.result.into_term().ok_or(crate::Error::NotSimple))),
    ])
}

/// Every calculus reaches the de Bruijn normal form on the fixed corpus.
pub fn cross_calculus(size: usize) -> SuiteReport {
    let corpus = sn_corpus(size);
    run_cases("cross-calculus", corpus.len(), |i, _| {
        let t = &corpus[i];
        let expected = db_normalize(t, CROSS_FUEL);
        fail_if!(expected.status != Status::NormalForm, "oracle does not normalize {t}");
        for (calc, got) in try_case!(cross_normal_forms(t)) {
            fail_if!(
                got.as_ref() != Some(&expected.result),
                "{calc} on {t}: expected {}, got {got:?}",
                expected.result
            );
        }
        CaseResult::Pass
    })
}

/// All bridge suites together.
pub fn bridges(cfg: &SuiteConfig) -> SuiteReport {
    SuiteReport::merge("bridges", vec![retraction(cfg), ls_correspondence(cfg), lsig_forward(cfg), lsig_backward(cfg)])
}

fn mentions(x: ExprRef<'_>, name: &str) -> bool {
    let mut found = false;
    x.walk(&mut |_, n| {
        if let ExprRef::Term(SuspTerm::Const(c) | SuspTerm::Meta(c)) = n {
            found |= &**c == name;
        }
    });
    found
}

/// Occurrences of `name` in `t` outside the environments of nested suspensions.
fn mentions_in_skeleton(t: &SuspTerm, name: &str) -> bool {
    match t {
        SuspTerm::Const(c) | SuspTerm::Meta(c) => &**c == name,
        SuspTerm::Index(_) => false,
        SuspTerm::App(f, a) => mentions_in_skeleton(f, name) || mentions_in_skeleton(a, name),
        SuspTerm::Abs(b) => mentions_in_skeleton(b, name),
        SuspTerm::Susp { term, .. } => mentions_in_skeleton(term, name),
    }
}

/// A suspension whose environment contains `marker` standing directly over a term
/// whose skeleton contains `marker`: an environment over a term that came out of itself.
pub fn self_scoping(x: &SuspExpr, marker: &str) -> bool {
    let mut found = false;
    x.as_ref().walk(&mut |_, n| {
        if let ExprRef::Term(SuspTerm::Susp { term, env, .. }) = n {
            found |= mentions_in_skeleton(term, marker) && mentions(ExprRef::Env(env), marker);
        }
    });
    found
}

/// The lambda-sigma reduction in which a substitution comes to stand over a term it
/// contains, as canonical concrete syntax.
pub const MELLIES_LINES: [&str; 4] = [
    "((\\a') b')[((\\a) b) . id]",
    "(\\a'[1 . ((((\\a) b) . id) o ^)]) b'[((\\a) b) . id]",
    "a'[1 . ((((\\a) b) . id) o ^)][b'[((\\a) b) . id] . id]",
    "a'[b'[((\\a) b) . id] . ((((\\a) b) . id) o (^ o (b'[((\\a) b) . id] . id)))]",
];

/// The substitution produced by distributing the last shift composition with (Map).
pub const MELLIES_MAP: &str = "((\\a) b)[^ o (b'[((\\a) b) . id] . id)] . (id o (^ o (b'[((\\a) b) . id] . id)))";

/// Rule applications taking each line to the next.
pub const MELLIES_STEPS: [&[(LsigRule, &[usize])]; 3] = [
    &[(LsigRule::App, &[]), (LsigRule::Abs, &[0])],
    &[(LsigRule::Beta, &[])],
    &[(LsigRule::Clos, &[]), (LsigRule::Map, &[1]), (LsigRule::VarCons, &[1, 0]), (LsigRule::Ass, &[1, 1])],
];

pub const MELLIES_FRONTIER: usize = 10_000;

/// Replays the lambda-sigma sequence, then searches the suspension counterpart for
/// self-scoping environments.
type Check = Box<dyn Fn(&mut Stats) -> CaseResult>;

pub fn mellies() -> SuiteReport {
    let checks: Vec<Check> = vec![
        Box::new(|_| mellies_lines()),
        Box::new(|_| {
            let l4 = try_case!(crate::syntax::lsig::parse_lsig(MELLIES_LINES[3]));
            let at = Path(vec![1, 1]);
            let after = try_case!(crate::bridges::lsig::lsig_step(&l4, &at, LsigRule::Map));
            let got = try_case!(engine::subexpr::<LsigCalc>(&after, &at));
            let want = try_case!(crate::syntax::lsig::parse_lsig(MELLIES_MAP));
            fail_if!(*got != want, "Map at [1,1] gives {got}, expected {want}");
            fail_if!(got.to_string() != MELLIES_MAP, "printed as {got}");
            let susp = SuspExpr::Term(try_case!(lsig_to_susp(&after)));
            fail_if!(!self_scoping(&susp, "a"), "the shape predicate misses the self-scoping term {susp}");
            CaseResult::Pass
        }),
        Box::new(|st| {
            let l1 = try_case!(crate::syntax::lsig::parse_lsig(MELLIES_LINES[0]));
            let x = SuspExpr::Term(try_case!(lsig_to_susp(&l1)));
            mellies_search(&x, "a", RuleSet::rmbeta(), "constants", st)
        }),
        Box::new(|st| {
            let x = try_case!(crate::syntax::parse_expr("[(\\ A') B', 1, 0, ((\\ A) B, 0) :: nil]"));
            mellies_search(&x, "A", RuleSet::rmbeta(), "metas", st)
        }),
        Box::new(|st| {
            let x = try_case!(crate::syntax::parse_expr("[(\\ A') B', 1, 0, ((\\ A) B, 0) :: nil]"));
            mellies_search(&x, "A", RuleSet::rmbeta().logical(), "logical", st)
        }),
    ];
    run_cases("mellies", checks.len(), |i, st| checks[i](st))
}

fn mellies_lines() -> CaseResult {
    let lines: Vec<Lsig> = try_case!(MELLIES_LINES.iter().map(|s| crate::syntax::lsig::parse_lsig(s)).collect());
    for (k, steps) in MELLIES_STEPS.iter().enumerate() {
        let mut cur = lines[k].clone();
        for (rule, at) in *steps {
            cur = try_case!(crate::bridges::lsig::lsig_step(&cur, &Path(at.to_vec()), *rule));
        }
        fail_if!(cur != lines[k + 1], "line {} reduces to {cur}, expected {}", k + 1, lines[k + 1]);
        fail_if!(cur.to_string() != MELLIES_LINES[k + 1], "line {} prints as {cur}", k + 2);
    }
    CaseResult::Pass
}

fn mellies_search(x: &SuspExpr, marker: &str, rules: RuleSet, tag: &str, st: &mut Stats) -> CaseResult {
    fail_if!(self_scoping(x, marker), "{x} is self-scoping from the start");
    let (seen, complete) = try_case!(crate::rewrite::explore(x, rules, MELLIES_FRONTIER));
    st.add(&format!("{tag}_states"), seen.len());
    st.add(&format!("{tag}_complete"), complete as usize);
    let mut bad: Vec<&SuspExpr> = seen.iter().filter(|y| self_scoping(y, marker)).collect();
    bad.sort();
    fail_if!(!bad.is_empty(), "{} self-scoping states, e.g. {}", bad.len(), bad[0]);
    CaseResult::Pass
}

fn reaches_by(x: &SuspExpr, seq: &[RuleId], target: &SuspExpr) -> crate::Result<bool> {
    let Some((first, rest)) = seq.split_first() else { return Ok(x == target) };
    for (_, _, y) in successors(x, RuleSet::of(&[*first]))? {
        if reaches_by(&y, rest, target)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Each lambda-upsilon step is one beta_s or reading step, except that (FVar) is (r3'),
/// (RVar) is (r4) then (r2), (FVarLift) is (r3) then (r2), and (RVarLift) is checked
/// up to RM normal forms.
pub fn lu_rule_mapping(cfg: &SuiteConfig) -> SuiteReport {
    let one_step = RuleSet::rbeta().with(RuleId::R3Prime);
    run_cases("lu-rule-mapping", cfg.cases, |i, st| {
        let mut g = Gen::new(pure_config(cfg, i));
        let (a, at, rule, b) = random_bridge_step::<crate::bridges::lu::LuCalc>(&mut g, &LuRule::ALL, |g| {
            let n = g.rng().gen_range(1..=cfg.max_size);
            g.lu_term(n)
        });
        st.add(&format!("{rule}"), 1);
        let ta = SuspExpr::Term(try_case!(lu_to_susp(&a)));
        let tb = SuspExpr::Term(try_case!(lu_to_susp(&b)));
        let seq: &[RuleId] = match rule {
            LuRule::RVarLift => {
                let (na, nb) = (try_case!(rm_normal(&ta)), try_case!(rm_normal(&tb)));
                fail_if!(na != nb, "{rule} at {at}: {ta} and {tb} have different RM normal forms");
                return CaseResult::Pass;
            }
            LuRule::RVar => &[RuleId::R4, RuleId::R2],
            LuRule::FVarLift => &[RuleId::R3, RuleId::R2],
            _ => {
                let succ = try_case!(successors(&ta, one_step));
                fail_if!(!succ.iter().any(|(_, _, y)| *y == tb), "{rule} at {at}: {tb} is not one step from {ta}");
                return CaseResult::Pass;
            }
        };
        fail_if!(!try_case!(reaches_by(&ta, seq, &tb)), "{rule} at {at}: {tb} is not reached from {ta} by {seq:?}");
        CaseResult::Pass
    })
}
