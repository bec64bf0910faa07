//! Seeded generators for every calculus in the crate.

use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridges::ls::Ls;
use crate::bridges::lsig::Lsig;
use crate::bridges::lu::Lu;
use crate::env::{len, lev};
use crate::expr::{SuspEnv, SuspExpr, SuspTerm};
use crate::oracle::DbTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    WellFormedSusp,
    SnDeBruijn,
    LsigExpr,
    LuExpr,
    LsExpr,
}

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on node count.
    pub max_size: usize,
    /// Upper bound on embedding levels and environment indices.
    pub max_level: usize,
    pub allow_metavars: bool,
    pub allow_constants: bool,
    pub mode: GenMode,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_size: 40,
            max_level: 8,
            allow_metavars: false,
            allow_constants: true,
            mode: GenMode::WellFormedSusp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Susp(SuspExpr),
    Db(DbTerm),
    Lsig(Lsig),
    Lu(Lu),
    Ls(Ls),
}

/// One expression, determined entirely by the configuration.
pub fn generate(cfg: GenConfig) -> Generated {
    let mut g = Gen::new(cfg);
    match cfg.mode {
        GenMode::WellFormedSusp => Generated::Susp(g.susp_expr()),
        GenMode::SnDeBruijn => Generated::Db(g.sn_term()),
        GenMode::LsigExpr => Generated::Lsig(g.lsig_expr()),
        GenMode::LuExpr => Generated::Lu(g.lu_expr()),
        GenMode::LsExpr => Generated::Ls(g.ls_term()),
    }
}

/// Seed for case `i` of a suite seeded with `seed`.
pub fn case_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i).rotate_left(17) ^ i
}

const CONSTS: [&str; 3] = ["c", "d", "f"];
const METAS: [&str; 2] = ["X", "Y"];

pub struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl Gen {
    pub fn new(cfg: GenConfig) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(cfg.seed), cfg }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn size_target(&mut self) -> usize {
        self.rng.gen_range(1..=self.cfg.max_size.max(1))
    }

    /// Splits `n` into two positive parts.
    fn split(&mut self, n: usize) -> (usize, usize) {
        let a = self.rng.gen_range(1..n);
        (a, n - a)
    }

    pub fn susp_expr(&mut self) -> SuspExpr {
        let n = self.size_target();
        if n >= 2 && self.rng.gen_bool(0.25) {
            SuspExpr::Env(self.susp_env(n))
        } else {
            SuspExpr::Term(self.susp_term(n))
        }
    }

    fn susp_leaf(&mut self) -> SuspTerm {
        let roll = self.rng.gen_range(0..10);
        if self.cfg.allow_metavars && roll < 3 {
            return SuspTerm::meta(METAS.choose(&mut self.rng).unwrap());
        }
        if self.cfg.allow_constants && roll >= 7 {
            return SuspTerm::constant(CONSTS.choose(&mut self.rng).unwrap());
        }
        SuspTerm::Index(self.rng.gen_range(1..=3))
    }

    /// A well-formed term with at most `n` nodes.
    pub fn susp_term(&mut self, n: usize) -> SuspTerm {
        if n <= 1 {
            return self.susp_leaf();
        }
        match self.rng.gen_range(0..10) {
            0..=1 => SuspTerm::abs(self.susp_term(n - 1)),
            2..=3 if n >= 3 => {
                let (a, b) = self.split(n - 1);
                SuspTerm::app(self.susp_term(a), self.susp_term(b))
            }
            4..=5 if n >= 4 => {
                let (a, b) = self.split(n - 2);
                SuspTerm::app(SuspTerm::abs(self.susp_term(a)), self.susp_term(b))
            }
            _ if n >= 3 => {
                let (a, b) = self.split(n - 1);
                let e = self.susp_env(b);
                let lo = lev(&e);
                let nl = self.rng.gen_range(lo..=self.cfg.max_level.max(lo));
                SuspTerm::susp(self.susp_term(a), len(&e), nl, e)
            }
            _ => SuspTerm::abs(self.susp_term(n - 1)),
        }
    }

    /// A well-formed environment with at most `n` nodes and level within bounds.
    pub fn susp_env(&mut self, n: usize) -> SuspEnv {
        let max = self.cfg.max_level;
        if n < 3 {
            return SuspEnv::Nil;
        }
        if self.rng.gen_bool(0.65) {
            let (a, b) = self.split(n - 1);
            let rest = self.susp_env(b);
            let term = self.susp_term(a);
            let mut lo = lev(&rest);
            if let SuspTerm::Susp { nl, .. } = &term {
                if self.rng.gen_bool(0.5) && *nl <= max {
                    lo = lo.max(*nl);
                }
            }
            let l = self.rng.gen_range(lo..=max.max(lo));
            SuspEnv::cons(term, l, rest)
        } else {
            let (a, b) = self.split(n - 1);
            let e2 = self.susp_env(b);
            let e1 = self.susp_env(a);
            let ol2 = len(&e2);
            let lo = lev(&e1);
            let hi = ol2 + max.saturating_sub(lev(&e2));
            if lo > hi {
                return e2;
            }
            let nl1 = self.rng.gen_range(lo..=hi);
            SuspEnv::merge(e1, nl1, ol2, e2)
        }
    }

    /// A strongly normalizing de Bruijn term: simply typed or Church arithmetic.
    pub fn sn_term(&mut self) -> DbTerm {
        if self.rng.gen_bool(0.2) {
            let m = self.rng.gen_range(0..=3);
            let n = self.rng.gen_range(0..=3);
            let op = if self.rng.gen_bool(0.5) { church_add() } else { church_mul() };
            let t = DbTerm::apps(op, [church(m), church(n)]);
            return if self.rng.gen_bool(0.5) { t } else { DbTerm::apps(t, [DbTerm::Index(2), DbTerm::Index(1)]) };
        }
        let n = self.size_target();
        let ty = if self.rng.gen_bool(0.7) { Ty::o() } else { Ty::arrow(Ty::o(), Ty::o()) };
        self.typed(&ty, &[], n)
    }

    /// A term of type `ty` in `ctx` (innermost binder first); free indices past the
    /// context have the base type.
    fn typed(&mut self, ty: &Rc<Ty>, ctx: &[Rc<Ty>], n: usize) -> DbTerm {
        if let Ty::Arrow(a, b) = &**ty {
            if n <= 2 || self.rng.gen_bool(0.6) {
                let mut inner = vec![a.clone()];
                inner.extend_from_slice(ctx);
                return DbTerm::abs(self.typed(b, &inner, n.saturating_sub(1)));
            }
        }
        if n >= 3 && self.rng.gen_bool(0.55) {
            let arg_ty = if self.rng.gen_bool(0.7) { Ty::o() } else { Ty::arrow(Ty::o(), Ty::o()) };
            let (a, b) = self.split(n - 1);
            let f = self.typed(&Ty::arrow(arg_ty.clone(), ty.clone()), ctx, a.max(2));
            let x = self.typed(&arg_ty, ctx, b);
            return DbTerm::app(f, x);
        }
        let mut vars: Vec<usize> = (0..ctx.len()).filter(|&i| ctx[i] == *ty).map(|i| i + 1).collect();
        if **ty == Ty::O {
            vars.push(ctx.len() + self.rng.gen_range(1..=2));
            if self.cfg.allow_constants && self.rng.gen_bool(0.2) {
                return DbTerm::Const(CONSTS[0].into());
            }
        }
        match vars.choose(&mut self.rng) {
            Some(&i) => DbTerm::Index(i),
            None => {
                let Ty::Arrow(a, b) = &**ty else { unreachable!("base type always has a free index") };
                let mut inner = vec![a.clone()];
                inner.extend_from_slice(ctx);
                DbTerm::abs(self.typed(b, &inner, n.saturating_sub(1)))
            }
        }
    }

    pub fn lsig_expr(&mut self) -> Lsig {
        let n = self.size_target();
        if n >= 2 && self.rng.gen_bool(0.3) {
            self.lsig_subst(n)
        } else {
            self.lsig_term(n)
        }
    }

    pub fn lsig_term(&mut self, n: usize) -> Lsig {
        if n <= 1 {
            return if self.cfg.allow_constants && self.rng.gen_bool(0.3) {
                Lsig::constant(CONSTS.choose(&mut self.rng).unwrap())
            } else {
                Lsig::One
            };
        }
        match self.rng.gen_range(0..10) {
            0..=1 => Lsig::abs(self.lsig_term(n - 1)),
            2..=3 if n >= 3 => {
                let (a, b) = self.split(n - 1);
                Lsig::app(self.lsig_term(a), self.lsig_term(b))
            }
            4 if n >= 4 => {
                let (a, b) = self.split(n - 2);
                Lsig::app(Lsig::abs(self.lsig_term(a)), self.lsig_term(b))
            }
            _ if n >= 3 => {
                let (a, b) = self.split(n - 1);
                Lsig::clos(self.lsig_term(a), self.lsig_subst(b))
            }
            _ => Lsig::abs(self.lsig_term(n - 1)),
        }
    }

    pub fn lsig_subst(&mut self, n: usize) -> Lsig {
        if n < 3 {
            return if self.rng.gen_bool(0.5) { Lsig::Id } else { Lsig::Shift };
        }
        let (a, b) = self.split(n - 1);
        match self.rng.gen_range(0..10) {
            0..=4 => Lsig::cons(self.lsig_term(a), self.lsig_subst(b)),
            5..=8 => Lsig::comp(self.lsig_subst(a), self.lsig_subst(b)),
            _ => Lsig::shift_pow(self.rng.gen_range(2..=4).min(n / 2).max(1)),
        }
    }

    pub fn lu_expr(&mut self) -> Lu {
        let n = self.size_target();
        if n >= 2 && self.rng.gen_bool(0.25) {
            self.lu_subst(n)
        } else {
            self.lu_term(n)
        }
    }

    pub fn lu_term(&mut self, n: usize) -> Lu {
        if n <= 1 {
            return if self.cfg.allow_constants && self.rng.gen_bool(0.3) {
                Lu::constant(CONSTS.choose(&mut self.rng).unwrap())
            } else {
                Lu::Var(self.rng.gen_range(1..=3))
            };
        }
        match self.rng.gen_range(0..10) {
            0..=1 => Lu::abs(self.lu_term(n - 1)),
            2..=3 if n >= 3 => {
                let (a, b) = self.split(n - 1);
                Lu::app(self.lu_term(a), self.lu_term(b))
            }
            4 if n >= 4 => {
                let (a, b) = self.split(n - 2);
                Lu::app(Lu::abs(self.lu_term(a)), self.lu_term(b))
            }
            _ if n >= 3 => {
                let (a, b) = self.split(n - 1);
                Lu::clos(self.lu_term(a), self.lu_subst(b))
            }
            _ => Lu::abs(self.lu_term(n - 1)),
        }
    }

    pub fn lu_subst(&mut self, n: usize) -> Lu {
        if n < 2 {
            return Lu::Shift;
        }
        match self.rng.gen_range(0..3) {
            0 => Lu::slash(self.lu_term(n - 1)),
            1 => Lu::lift(self.lu_subst(n - 1)),
            _ => Lu::Shift,
        }
    }

    pub fn ls_term(&mut self) -> Ls {
        let n = self.size_target();
        self.ls_sized(n)
    }

    pub fn ls_sized(&mut self, n: usize) -> Ls {
        if n <= 1 {
            return if self.cfg.allow_constants && self.rng.gen_bool(0.3) {
                Ls::constant(CONSTS.choose(&mut self.rng).unwrap())
            } else {
                Ls::Var(self.rng.gen_range(1..=4))
            };
        }
        match self.rng.gen_range(0..10) {
            0..=1 => Ls::abs(self.ls_sized(n - 1)),
            2..=3 if n >= 3 => {
                let (a, b) = self.split(n - 1);
                Ls::app(self.ls_sized(a), self.ls_sized(b))
            }
            4 if n >= 4 => {
                let (a, b) = self.split(n - 2);
                Ls::app(Ls::abs(self.ls_sized(a)), self.ls_sized(b))
            }
            5..=7 if n >= 3 => {
                let (a, b) = self.split(n - 1);
                let i = self.rng.gen_range(1..=4);
                Ls::sigma(i, self.ls_sized(a), self.ls_sized(b))
            }
            _ => {
                let k = self.rng.gen_range(0..=3);
                let i = self.rng.gen_range(1..=3);
                Ls::phi(k, i, self.ls_sized(n - 1))
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Ty {
    O,
    Arrow(Rc<Ty>, Rc<Ty>),
}

impl Ty {
    fn o() -> Rc<Ty> {
        Rc::new(Ty::O)
    }
    fn arrow(a: Rc<Ty>, b: Rc<Ty>) -> Rc<Ty> {
        Rc::new(Ty::Arrow(a, b))
    }
}

/// `\f \x f (f ... (f x))` with `n` applications.
pub fn church(n: usize) -> DbTerm {
    let body = (0..n).fold(DbTerm::Index(1), |acc, _| DbTerm::app(DbTerm::Index(2), acc));
    DbTerm::abs(DbTerm::abs(body))
}

/// `\m \n \f \x m f (n f x)`
pub fn church_add() -> DbTerm {
    use DbTerm::Index as I;
    let nfx = DbTerm::apps(I(3), [I(2), I(1)]);
    DbTerm::abs(DbTerm::abs(DbTerm::abs(DbTerm::abs(DbTerm::apps(I(4), [I(2), nfx])))))
}

/// `\m \n \f m (n f)`
pub fn church_mul() -> DbTerm {
    use DbTerm::Index as I;
    DbTerm::abs(DbTerm::abs(DbTerm::abs(DbTerm::app(I(3), DbTerm::app(I(2), I(1))))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::is_well_formed;
    use crate::oracle::db_normalize;
    use crate::rewrite::Status;

    #[test]
    fn deterministic_in_seed() {
        let cfg = GenConfig { seed: 42, ..GenConfig::default() };
        assert_eq!(generate(cfg), generate(cfg));
    }

    #[test]
    fn smallest_case_is_a_leaf() {
        for seed in 0..50 {
            let cfg = GenConfig { seed, max_size: 1, ..GenConfig::default() };
            let Generated::Susp(SuspExpr::Term(t)) = generate(cfg) else { panic!("expected a term") };
            assert!(matches!(t, SuspTerm::Const(_) | SuspTerm::Index(_)), "{t}");
        }
    }

    #[test]
    fn suspension_output_is_well_formed() {
        for seed in 0..2000 {
            let cfg = GenConfig { seed, allow_metavars: seed % 2 == 0, ..GenConfig::default() };
            let Generated::Susp(x) = generate(cfg) else { unreachable!() };
            assert!(is_well_formed(&x), "{x}");
            assert!(x.size() <= 40);
        }
    }

    #[test]
    fn church_arithmetic() {
        let t = DbTerm::apps(church_add(), [church(2), church(3)]);
        assert_eq!(db_normalize(&t, 1000).result, church(5));
        let t = DbTerm::apps(church_mul(), [church(2), church(3)]);
        assert_eq!(db_normalize(&t, 1000).result, church(6));
    }

    #[test]
    fn sn_terms_normalize() {
        for seed in 0..500 {
            let cfg = GenConfig { seed, mode: GenMode::SnDeBruijn, ..GenConfig::default() };
            let Generated::Db(t) = generate(cfg) else { unreachable!() };
            assert_eq!(db_normalize(&t, 100_000).status, Status::NormalForm, "{t}");
        }
    }

    #[test]
    fn bridge_outputs_are_well_sorted() {
        for seed in 0..500 {
            let mut g = Gen::new(GenConfig { seed, ..GenConfig::default() });
            assert!(g.lsig_expr().well_sorted());
            assert!(g.ls_term().well_formed());
        }
    }
}
