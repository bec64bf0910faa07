//! Property tests over seeded generator output.

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use susp::env::{check_well_formed, ind, is_debruijn, is_simple, len, lev};
use susp::gen::{Gen, GenConfig, GenMode};
use susp::oracle::{db_normalize, sim_key, sim_term, DbTerm};
use susp::order::{essence, rpo_gt, MeasureTerm};
use susp::rewrite::{
    matches, normal_form, normalize, redexes, rm_normal, rule_apply, step_at, RuleId, RuleSet, Status,
    Strategy as Order,
};
use susp::suites::displace;
use susp::syntax::ls::parse_ls;
use susp::syntax::lsig::parse_lsig;
use susp::syntax::lu::parse_lu;
use susp::syntax::parse_expr;
use susp::trace::TraceFile;
use susp::{ExprRef, SuspEnv, SuspExpr, SuspTerm};

/// Seeded runs, so every test input is reproducible.
fn fixed(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() }
}

fn gen(seed: u64, mode: GenMode, metas: bool) -> Gen {
    Gen::new(GenConfig { seed, mode, allow_metavars: metas, ..GenConfig::default() })
}

fn susp(seed: u64) -> SuspExpr {
    gen(seed, GenMode::WellFormedSusp, seed.is_multiple_of(3)).susp_expr()
}

fn all_rules() -> impl Iterator<Item = RuleId> {
    RuleSet::rmbeta().logical().with(RuleId::R3Prime).with(RuleId::LookupDerived).iter()
}

fn strategy(k: u8) -> Order {
    match k % 4 {
        0 => Order::LeftmostOutermost,
        1 => Order::LeftmostInnermost,
        2 => Order::HeadFirst,
        _ => Order::RandomSeeded(k as u64),
    }
}

proptest! {
    #![proptest_config(fixed(10_000))]

    #[test]
    fn susp_round_trip(seed: u64) {
        let x = susp(seed);
        prop_assert_eq!(parse_expr(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn lsig_round_trip(seed: u64) {
        let x = gen(seed, GenMode::LsigExpr, false).lsig_expr();
        prop_assert_eq!(parse_lsig(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn lu_round_trip(seed: u64) {
        let x = gen(seed, GenMode::LuExpr, false).lu_expr();
        prop_assert_eq!(parse_lu(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn ls_round_trip(seed: u64) {
        let x = gen(seed, GenMode::LsExpr, false).ls_term();
        prop_assert_eq!(parse_ls(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn generated_expressions_are_well_formed(seed: u64) {
        let x = susp(seed);
        prop_assert!(check_well_formed(&x).is_empty(), "{}", x);
    }
}

proptest! {
    #![proptest_config(fixed(1_000))]

    #[test]
    fn sn_terms_reach_normal_form(seed: u64) {
        let t = gen(seed, GenMode::SnDeBruijn, false).sn_term();
        prop_assert_eq!(db_normalize(&t, 100_000).status, Status::NormalForm);
    }

    #[test]
    fn matches_agrees_with_rule_apply(seed: u64) {
        let x = susp(seed);
        let mut checked = Vec::new();
        x.as_ref().walk(&mut |_, node| checked.push(node.to_owned()));
        for node in checked {
            for r in all_rules() {
                let applied = rule_apply(r, node.as_ref()).unwrap();
                prop_assert_eq!(matches(r, node.as_ref()), applied.is_some(), "{} on {}", r, node);
            }
        }
    }

    #[test]
    fn steps_preserve_well_formedness(seed: u64) {
        let x = susp(seed);
        for (at, r) in redexes(&x, RuleSet::rmbeta().logical()) {
            let y = step_at(&x, &at, r).unwrap();
            prop_assert!(check_well_formed(&y).is_empty(), "{} at {} from {}", r, at, x);
        }
    }

    #[test]
    fn ind_is_bounded_by_lev_and_non_increasing(seed: u64) {
        let mut g = gen(seed, GenMode::WellFormedSusp, false);
        let e = g.susp_env(30);
        let n = len(&e);
        if n > 0 {
            prop_assert!(lev(&e) >= ind(&e, 0), "{}", e);
        }
        for i in 1..n {
            prop_assert!(ind(&e, i - 1) >= ind(&e, i), "{} at {}", e, i);
        }
    }

    #[test]
    fn trace_replays(seed: u64, k: u8) {
        let x = susp(seed);
        let t = normalize(&x, RuleSet::rmbeta(), strategy(k), 200).unwrap();
        let file = TraceFile::from_json(&TraceFile::from_trace(&t).to_json()).unwrap();
        prop_assert!(file.replay().is_ok());
    }

    #[test]
    fn similarity_is_key_equality(seed: u64, other: u64) {
        let x = susp(seed);
        let mut g = gen(seed ^ 0x51, GenMode::WellFormedSusp, false);
        let candidates = [displace(&x, &mut g, 8), Some(susp(other))];
        for y in candidates.into_iter().flatten() {
            if let (SuspExpr::Term(a), SuspExpr::Term(b)) = (&x, &y) {
                prop_assert_eq!(sim_term(a, b), sim_key(&x) == sim_key(&y), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn rm_normal_meta_free_terms_are_de_bruijn(seed: u64) {
        let x = gen(seed, GenMode::WellFormedSusp, false).susp_term(30);
        let nf = rm_normal(&SuspExpr::Term(x)).unwrap().unwrap().into_term().unwrap();
        prop_assert!(is_debruijn(&nf), "{}", nf);
        prop_assert!(redexes(&SuspExpr::Term(nf), RuleSet::rm()).is_empty());
    }

    #[test]
    fn beta_s_steps_preserve_beta_normal_forms(seed: u64, pick: usize) {
        let t = gen(seed, GenMode::SnDeBruijn, false).sn_term();
        let x = SuspExpr::Term(t.to_susp());
        let betas: Vec<_> = redexes(&x, RuleSet::of(&[RuleId::BetaS]));
        prop_assume!(!betas.is_empty());
        let (at, _) = &betas[pick % betas.len()];
        let y = step_at(&x, at, RuleId::BetaS).unwrap();
        let decode = |e: &SuspExpr| {
            let nf = rm_normal(e).unwrap().unwrap().into_term().unwrap();
            db_normalize(&DbTerm::from_susp(&nf).unwrap(), 100_000).result
        };
        prop_assert_eq!(decode(&x), decode(&y));
    }

    #[test]
    fn merge_nestings_reach_a_common_simple_environment(seed: u64, a: usize, b: usize) {
        let mut g = gen(seed, GenMode::WellFormedSusp, false);
        let mut simple = |n| rm_normal(&SuspExpr::Env(g.susp_env(n))).unwrap().unwrap().into_env().unwrap();
        let (e1, e2, e3) = (simple(12), simple(12), simple(12));
        let nl1 = lev(&e1) + a % 3;
        let nl2 = lev(&e2) + b % 3;
        let (ol2, ol3) = (len(&e2), len(&e3));
        let left = SuspEnv::merge(SuspEnv::merge(e1.clone(), nl1, ol2, e2.clone()), nl2 + nl1.saturating_sub(ol2), ol3, e3.clone());
        let right = SuspEnv::merge(e1, nl1, ol2 + ol3.saturating_sub(nl2), SuspEnv::merge(e2, nl2, ol3, e3));
        let (l, r) = (SuspExpr::Env(left), SuspExpr::Env(right));
        prop_assert!(check_well_formed(&l).is_empty() && check_well_formed(&r).is_empty());
        let (nl, nr) = (rm_normal(&l).unwrap().unwrap(), rm_normal(&r).unwrap().unwrap());
        prop_assert_eq!(&nl, &nr);
        prop_assert!(is_simple(nl.as_env().unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..fixed(1_000) })]

    #[test]
    fn reading_suffices_for_simple_environments(seed: u64) {
        let x = gen(seed, GenMode::WellFormedSusp, false).susp_expr();
        let mut simple = true;
        x.as_ref().walk(&mut |_, n| {
            if let ExprRef::Env(e) = n {
                simple &= is_simple(e);
            }
        });
        prop_assume!(simple);
        let lo = Order::LeftmostOutermost;
        let r = normal_form(&x, RuleSet::r(), lo, 100_000).unwrap();
        let rm = normal_form(&x, RuleSet::rm(), lo, 100_000).unwrap();
        prop_assert_eq!(r.result, rm.result);
    }
}

fn measure() -> impl Strategy<Value = MeasureTerm> {
    Just(MeasureTerm::Star).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| MeasureTerm::Lam(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MeasureTerm::AppT(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MeasureTerm::ConsT(Box::new(a), Box::new(b))),
            (1..4usize, inner.clone(), inner).prop_map(|(i, a, b)| MeasureTerm::S(i, Box::new(a), Box::new(b))),
        ]
    })
}

/// Every one-hole context of depth one around `hole`, with `other` as sibling.
fn contexts(hole: &MeasureTerm, other: &MeasureTerm) -> Vec<MeasureTerm> {
    let (h, o) = (|| Box::new(hole.clone()), || Box::new(other.clone()));
    vec![
        MeasureTerm::Lam(h()),
        MeasureTerm::AppT(h(), o()),
        MeasureTerm::AppT(o(), h()),
        MeasureTerm::ConsT(h(), o()),
        MeasureTerm::ConsT(o(), h()),
        MeasureTerm::S(2, h(), o()),
        MeasureTerm::S(2, o(), h()),
    ]
}

proptest! {
    #![proptest_config(fixed(2_000))]

    #[test]
    fn rpo_is_irreflexive(a in measure()) {
        prop_assert!(!rpo_gt(&a, &a));
    }

    #[test]
    fn rpo_is_transitive(a in measure(), b in measure(), c in measure()) {
        if rpo_gt(&a, &b) && rpo_gt(&b, &c) {
            prop_assert!(rpo_gt(&a, &c));
        }
    }

    #[test]
    fn rpo_is_asymmetric(a in measure(), b in measure()) {
        prop_assert!(!(rpo_gt(&a, &b) && rpo_gt(&b, &a)));
    }

    #[test]
    fn rpo_is_monotonic(a in measure(), b in measure(), c in measure()) {
        if rpo_gt(&a, &b) {
            for (ca, cb) in contexts(&a, &c).into_iter().zip(contexts(&b, &c)) {
                prop_assert!(rpo_gt(&ca, &cb), "{} vs {}", ca, cb);
            }
        }
    }

    #[test]
    fn essence_decreases_on_steps_other_than_r6_over_nil(seed: u64) {
        let x = susp(seed);
        for (at, r) in redexes(&x, RuleSet::rm()) {
            if let Ok(ExprRef::Term(SuspTerm::Susp { env, .. })) = x.subexpr(&at) {
                if r == RuleId::R6 && **env == SuspEnv::Nil {
                    continue;
                }
            }
            let y = step_at(&x, &at, r).unwrap();
            prop_assert!(rpo_gt(&essence(x.as_ref()), &essence(y.as_ref())), "{} at {} from {}", r, at, x);
        }
    }
}
