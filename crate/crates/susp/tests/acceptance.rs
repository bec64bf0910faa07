//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Three criteria fail on counterexamples that contradict the stated theorems.
//! Those are listed in `KNOWN_RED` together with a check that the failures are
//! exactly the documented ones; the run exits non-zero if any other criterion
//! fails, if a known-red criterion starts passing, or if a known-red criterion
//! fails in an undocumented way.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use susp::rewrite::{
    explore, joinable_within, search_join, step_at, RuleId, RuleSet, DEFAULT_FRONTIER, DEFAULT_RM_FUEL,
};
use susp::suites::{self, SuiteConfig, SuiteReport};
use susp::syntax::parse_expr;
use susp::{Path, SuspExpr};

const SEED: u64 = 1;
const TIME_LIMIT: Duration = Duration::from_secs(60);

type Criterion = (u32, &'static str, Box<dyn Fn() -> Outcome>);
type Documented = (u32, &'static str, fn(&Outcome) -> Result<(), String>);

struct Outcome {
    pass: bool,
    detail: String,
    reports: Vec<SuiteReport>,
}

impl Outcome {
    fn suites(reports: Vec<SuiteReport>) -> Self {
        Outcome {
            pass: reports.iter().all(SuiteReport::passed),
            detail: reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n    "),
            reports,
        }
    }

    fn and(mut self, name: &str, check: Result<(), String>) -> Self {
        match check {
            Ok(()) => self.detail = format!("{name}: ok\n    {}", self.detail),
            Err(e) => {
                self.pass = false;
                self.detail = format!("{name}: {e}\n    {}", self.detail);
            }
        }
        self
    }
}

fn e(s: &str) -> SuspExpr {
    parse_expr(s).unwrap_or_else(|err| panic!("fixture {s}: {err}"))
}

fn cfg(cases: usize) -> SuiteConfig {
    SuiteConfig::new(cases, SEED)
}

/// The worked beta/merge trace, then reading steps to the head form.
fn worked_trace() -> Result<(), String> {
    let steps: [(RuleId, &[usize], &str); 5] = [
        (RuleId::BetaS, &[0, 0], "(\\ [\\ #1 #2 #3, 1, 0, (t2, 0) :: nil]) t3"),
        (RuleId::BetaS, &[], "[[\\ #1 #2 #3, 1, 0, (t2, 0) :: nil], 1, 0, (t3, 0) :: nil]"),
        (RuleId::M1, &[], "[\\ #1 #2 #3, 2, 0, {(t2, 0) :: nil, 0, 1, (t3, 0) :: nil}]"),
        (RuleId::M6, &[1], "[\\ #1 #2 #3, 2, 0, ([t2, 1, 0, (t3, 0) :: nil], 0) :: {nil, 0, 1, (t3, 0) :: nil}]"),
        (RuleId::M3, &[1, 1], "[\\ #1 #2 #3, 2, 0, ([t2, 1, 0, (t3, 0) :: nil], 0) :: (t3, 0) :: nil]"),
    ];
    let mut cur = e("(\\ (\\ \\ #1 #2 #3) t2) t3");
    for (i, (rule, at, want)) in steps.iter().enumerate() {
        cur = step_at(&cur, &Path(at.to_vec()), *rule).map_err(|err| format!("line {}: {err}", i + 1))?;
        if cur != e(want) {
            return Err(format!("line {}: got {cur}, expected {want}", i + 1));
        }
    }
    let head = e("\\ #1 [[t2, 1, 0, (t3, 0) :: nil], 0, 1, nil] [t3, 0, 1, nil]");
    let (seen, complete) = explore(&cur, RuleSet::r(), 10_000).map_err(|err| err.to_string())?;
    if !seen.contains(&head) {
        return Err(format!("head form {head} not reached by reading steps (search complete: {complete})"));
    }
    Ok(())
}

/// Both reducts of ((\ ((\ X) t1)) t2) join with merging, and provably not without it.
fn divergent_pair() -> Result<(), String> {
    let src = e("(\\ (\\ X) t1) t2");
    let a = e("[[X, 1, 0, (t1, 0) :: nil], 1, 0, (t2, 0) :: nil]");
    let b = e("[[X, 2, 1, (#1, 1) :: (t2, 0) :: nil], 1, 0, ([t1, 1, 0, (t2, 0) :: nil], 0) :: nil]");
    let (reducts, _) = explore(&src, RuleSet::rmbeta(), DEFAULT_FRONTIER).map_err(|err| err.to_string())?;
    for x in [&a, &b] {
        if !reducts.contains(x) {
            return Err(format!("{x} is not a reduct of {src}"));
        }
    }
    let rm =
        joinable_within(&a, &b, RuleSet::rm(), DEFAULT_RM_FUEL, DEFAULT_FRONTIER).map_err(|err| err.to_string())?;
    if !rm.joinable {
        return Err("not joinable under RM".into());
    }
    for (name, rules) in [("R", RuleSet::r()), ("R+betas", RuleSet::rbeta())] {
        let v = search_join(&a, &b, rules, DEFAULT_FRONTIER).map_err(|err| err.to_string())?;
        if v.joinable || v.inconclusive {
            return Err(format!("under {name}: joinable={}, inconclusive={}", v.joinable, v.inconclusive));
        }
    }
    Ok(())
}

fn criteria() -> Vec<Criterion> {
    vec![
        (1, "well-formedness preservation", Box::new(|| Outcome::suites(vec![suites::preservation(&cfg(10_000))]))),
        (2, "RM termination", Box::new(|| Outcome::suites(vec![suites::termination(&cfg(10_000))]))),
        (3, "RM confluence", Box::new(|| Outcome::suites(vec![suites::confluence(&cfg(10_000))]))),
        (
            4,
            "grafting confluence",
            Box::new(|| {
                Outcome::suites(vec![suites::grafting_peaks(&cfg(2_000))]).and("divergent pair", divergent_pair())
            }),
        ),
        (
            5,
            "beta simulation",
            Box::new(|| Outcome::suites(vec![suites::simulation(&cfg(5_000))]).and("worked trace", worked_trace())),
        ),
        (6, "similarity", Box::new(|| Outcome::suites(vec![suites::similarity(&cfg(2_000))]))),
        (7, "diamond property of parallel reduction", Box::new(|| Outcome::suites(vec![suites::diamond(&cfg(2_000))]))),
        (8, "bridge retraction", Box::new(|| Outcome::suites(vec![suites::retraction(&cfg(10_000))]))),
        (
            9,
            "lambda-s one-step correspondence",
            Box::new(|| Outcome::suites(vec![suites::ls_correspondence(&cfg(2_000))])),
        ),
        (
            10,
            "lambda-sigma correspondences",
            Box::new(|| Outcome::suites(vec![suites::lsig_forward(&cfg(2_000)), suites::lsig_backward(&cfg(2_000))])),
        ),
        (11, "cross-calculus normal forms", Box::new(|| Outcome::suites(vec![suites::cross_calculus(200)]))),
        (12, "Mellies regression", Box::new(|| Outcome::suites(vec![suites::mellies()]))),
    ]
}

/// Criteria that fail on counterexamples to the theorems they test, with a check
/// that the observed failures are the documented ones.
const KNOWN_RED: &[Documented] = &[
    (2, "r6 over a nil environment raises eta_0 and breaks the essence decrease", termination_failures_documented),
    (4, "(\\ #1) ((\\ X) X) has two RMBETA normal forms under grafting", grafting_failures_documented),
    (10, "Map with a shift tail yields dissimilar environments", backward_failures_documented),
];

fn only_keys(r: &SuiteReport, prefix: &str, allowed: &[&str]) -> Result<usize, String> {
    let mut total = 0;
    for (k, v) in &r.stats {
        if let Some(rest) = k.strip_prefix(prefix) {
            if !allowed.contains(&rest) {
                return Err(format!("undocumented failure class {k}={v}"));
            }
            total += v;
        }
    }
    Ok(total)
}

fn termination_failures_documented(o: &Outcome) -> Result<(), String> {
    let r = &o.reports[0];
    if r.stat("fuel_exhausted") > 0 || r.inconclusive > 0 {
        return Err("some expression failed to normalize".into());
    }
    let bad = only_keys(r, "no_decrease_", &["r6_nil_env"])?;
    (bad > 0 && r.failures > 0).then_some(()).ok_or_else(|| "no decrease failures recorded".into())
}

fn grafting_failures_documented(o: &Outcome) -> Result<(), String> {
    if !o.detail.contains("divergent pair: ok") {
        return Err("the divergent pair check failed".into());
    }
    let x = e("(\\ #1) ((\\ X) X)");
    let (reducts, complete) = explore(&x, RuleSet::rmbeta(), DEFAULT_FRONTIER).map_err(|err| err.to_string())?;
    let normal: Vec<_> = reducts.iter().filter(|y| susp::rewrite::redexes(y, RuleSet::rmbeta()).is_empty()).collect();
    if !complete || normal.len() != 2 {
        return Err(format!("expected exactly two normal forms, found {} (complete: {complete})", normal.len()));
    }
    let r = &o.reports[0];
    (r.failures + r.inconclusive > 0).then_some(()).ok_or_else(|| "no failing peaks".into())
}

fn backward_failures_documented(o: &Outcome) -> Result<(), String> {
    if !o.reports[0].passed() {
        return Err("the forward direction failed".into());
    }
    let r = &o.reports[1];
    let bad = only_keys(r, "dissimilar_", &["Map"])?;
    let undecided = only_keys(r, "undecided_", &["Map"])?;
    if bad != r.failures || undecided != r.inconclusive {
        return Err("failures outside the substitution similarity check".into());
    }
    (bad > 0).then_some(()).ok_or_else(|| "no failures recorded".into())
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (n, name, run) in criteria() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if elapsed > TIME_LIMIT {
            o.pass = false;
            o.detail = format!("took {elapsed:?}, over the {TIME_LIMIT:?} limit\n    {}", o.detail);
        }
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {n}: {name} [{:.1}s]\n    {}", elapsed.as_secs_f64(), o.detail);
        match (o.pass, KNOWN_RED.iter().find(|(k, _, _)| *k == n)) {
            (true, None) => {}
            (false, None) => unexpected.push(format!("criterion {n} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {n} is listed as known red but passed")),
            (false, Some((_, why, documented))) => match documented(&o) {
                Ok(()) => println!("    known red: {why}"),
                Err(err) => unexpected.push(format!("criterion {n} failed in an undocumented way: {err}")),
            },
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every criterion passed or failed exactly as documented");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
