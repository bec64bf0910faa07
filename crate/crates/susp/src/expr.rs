//! Suspension terms and environments.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuspTerm {
    Const(Name),
    Meta(Name),
    /// De Bruijn index `#i`, always at least 1.
    Index(usize),
    App(Box<SuspTerm>, Box<SuspTerm>),
    Abs(Box<SuspTerm>),
    Susp {
        term: Box<SuspTerm>,
        ol: usize,
        nl: usize,
        env: Box<SuspEnv>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnvItem {
    pub term: SuspTerm,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuspEnv {
    Nil,
    Cons(Box<EnvItem>, Box<SuspEnv>),
    Merge { e1: Box<SuspEnv>, nl1: usize, ol2: usize, e2: Box<SuspEnv> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuspExpr {
    Term(SuspTerm),
    Env(SuspEnv),
}

impl SuspTerm {
    pub fn constant(name: &str) -> Self {
        SuspTerm::Const(name.into())
    }

    pub fn meta(name: &str) -> Self {
        SuspTerm::Meta(name.into())
    }

    pub fn index(i: usize) -> Self {
        assert!(i >= 1, "de Bruijn indices start at 1");
        SuspTerm::Index(i)
    }

    pub fn app(f: SuspTerm, a: SuspTerm) -> Self {
        SuspTerm::App(Box::new(f), Box::new(a))
    }

    pub fn abs(body: SuspTerm) -> Self {
        SuspTerm::Abs(Box::new(body))
    }

    pub fn susp(term: SuspTerm, ol: usize, nl: usize, env: SuspEnv) -> Self {
        SuspTerm::Susp { term: Box::new(term), ol, nl, env: Box::new(env) }
    }

    /// Left-nested application of `head` to `args`.
    pub fn apps(head: SuspTerm, args: impl IntoIterator<Item = SuspTerm>) -> Self {
        args.into_iter().fold(head, SuspTerm::app)
    }

    pub fn size(&self) -> usize {
        match self {
            SuspTerm::Const(_) | SuspTerm::Meta(_) | SuspTerm::Index(_) => 1,
            SuspTerm::App(f, a) => 1 + f.size() + a.size(),
            SuspTerm::Abs(b) => 1 + b.size(),
            SuspTerm::Susp { term, env, .. } => 1 + term.size() + env.size(),
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            SuspTerm::Meta(_) => true,
            SuspTerm::Const(_) | SuspTerm::Index(_) => false,
            SuspTerm::App(f, a) => f.has_meta() || a.has_meta(),
            SuspTerm::Abs(b) => b.has_meta(),
            SuspTerm::Susp { term, env, .. } => term.has_meta() || env.has_meta(),
        }
    }
}

impl SuspEnv {
    pub fn cons(term: SuspTerm, index: usize, rest: SuspEnv) -> Self {
        SuspEnv::Cons(Box::new(EnvItem { term, index }), Box::new(rest))
    }

    pub fn merge(e1: SuspEnv, nl1: usize, ol2: usize, e2: SuspEnv) -> Self {
        SuspEnv::Merge { e1: Box::new(e1), nl1, ol2, e2: Box::new(e2) }
    }

    /// Builds a simple environment from its items, first item first.
    pub fn from_items(items: impl IntoIterator<Item = (SuspTerm, usize)>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        items.into_iter().rev().fold(SuspEnv::Nil, |rest, (t, l)| SuspEnv::cons(t, l, rest))
    }

    pub fn size(&self) -> usize {
        match self {
            SuspEnv::Nil => 1,
            SuspEnv::Cons(item, rest) => 1 + item.term.size() + rest.size(),
            SuspEnv::Merge { e1, e2, .. } => 1 + e1.size() + e2.size(),
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            SuspEnv::Nil => false,
            SuspEnv::Cons(item, rest) => item.term.has_meta() || rest.has_meta(),
            SuspEnv::Merge { e1, e2, .. } => e1.has_meta() || e2.has_meta(),
        }
    }
}

impl SuspExpr {
    pub fn as_ref(&self) -> ExprRef<'_> {
        match self {
            SuspExpr::Term(t) => ExprRef::Term(t),
            SuspExpr::Env(e) => ExprRef::Env(e),
        }
    }

    pub fn size(&self) -> usize {
        self.as_ref().size()
    }

    pub fn has_meta(&self) -> bool {
        match self {
            SuspExpr::Term(t) => t.has_meta(),
            SuspExpr::Env(e) => e.has_meta(),
        }
    }

    pub fn as_term(&self) -> Option<&SuspTerm> {
        match self {
            SuspExpr::Term(t) => Some(t),
            SuspExpr::Env(_) => None,
        }
    }

    pub fn as_env(&self) -> Option<&SuspEnv> {
        match self {
            SuspExpr::Env(e) => Some(e),
            SuspExpr::Term(_) => None,
        }
    }

    pub fn into_term(self) -> Option<SuspTerm> {
        match self {
            SuspExpr::Term(t) => Some(t),
            SuspExpr::Env(_) => None,
        }
    }

    pub fn into_env(self) -> Option<SuspEnv> {
        match self {
            SuspExpr::Env(e) => Some(e),
            SuspExpr::Term(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SuspExpr::Term(_) => "term",
            SuspExpr::Env(_) => "environment",
        }
    }

    pub fn subexpr(&self, path: &Path) -> Result<ExprRef<'_>> {
        let mut cur = self.as_ref();
        for &sel in &path.0 {
            cur = cur.child(sel).ok_or_else(|| Error::InvalidPath(path.clone()))?;
        }
        Ok(cur)
    }

    /// Replaces the subexpression at `path` by `new`, which must be of the same category.
    pub fn replace(self, path: &Path, new: SuspExpr) -> Result<SuspExpr> {
        replace_in(self, &path.0, new).map_err(|e| match e {
            Error::InvalidPath(_) => Error::InvalidPath(path.clone()),
            Error::Category { expected, .. } => Error::Category { path: path.clone(), expected },
            other => other,
        })
    }
}

fn replace_in(x: SuspExpr, path: &[usize], new: SuspExpr) -> Result<SuspExpr> {
    let Some((&sel, rest)) = path.split_first() else {
        if std::mem::discriminant(&x) != std::mem::discriminant(&new) {
            return Err(Error::Category { path: Path::root(), expected: x.kind() });
        }
        return Ok(new);
    };
    let bad = || Error::InvalidPath(Path::root());
    let as_term = |e: SuspExpr| e.into_term().ok_or(Error::Category { path: Path::root(), expected: "term" });
    let as_env = |e: SuspExpr| e.into_env().ok_or(Error::Category { path: Path::root(), expected: "environment" });
    Ok(match x {
        SuspExpr::Term(t) => SuspExpr::Term(match (t, sel) {
            (SuspTerm::App(f, a), 0) => {
                SuspTerm::App(Box::new(as_term(replace_in(SuspExpr::Term(*f), rest, new)?)?), a)
            }
            (SuspTerm::App(f, a), 1) => {
                SuspTerm::App(f, Box::new(as_term(replace_in(SuspExpr::Term(*a), rest, new)?)?))
            }
            (SuspTerm::Abs(b), 0) => SuspTerm::Abs(Box::new(as_term(replace_in(SuspExpr::Term(*b), rest, new)?)?)),
            (SuspTerm::Susp { term, ol, nl, env }, 0) => {
                SuspTerm::Susp { term: Box::new(as_term(replace_in(SuspExpr::Term(*term), rest, new)?)?), ol, nl, env }
            }
            (SuspTerm::Susp { term, ol, nl, env }, 1) => {
                SuspTerm::Susp { term, ol, nl, env: Box::new(as_env(replace_in(SuspExpr::Env(*env), rest, new)?)?) }
            }
            _ => return Err(bad()),
        }),
        SuspExpr::Env(e) => SuspExpr::Env(match (e, sel) {
            (SuspEnv::Cons(item, r), 0) => {
                let EnvItem { term, index } = *item;
                let term = as_term(replace_in(SuspExpr::Term(term), rest, new)?)?;
                SuspEnv::Cons(Box::new(EnvItem { term, index }), r)
            }
            (SuspEnv::Cons(item, r), 1) => {
                SuspEnv::Cons(item, Box::new(as_env(replace_in(SuspExpr::Env(*r), rest, new)?)?))
            }
            (SuspEnv::Merge { e1, nl1, ol2, e2 }, 0) => {
                SuspEnv::Merge { e1: Box::new(as_env(replace_in(SuspExpr::Env(*e1), rest, new)?)?), nl1, ol2, e2 }
            }
            (SuspEnv::Merge { e1, nl1, ol2, e2 }, 1) => {
                SuspEnv::Merge { e1, nl1, ol2, e2: Box::new(as_env(replace_in(SuspExpr::Env(*e2), rest, new)?)?) }
            }
            _ => return Err(bad()),
        }),
    })
}

impl From<SuspTerm> for SuspExpr {
    fn from(t: SuspTerm) -> Self {
        SuspExpr::Term(t)
    }
}

impl From<SuspEnv> for SuspExpr {
    fn from(e: SuspEnv) -> Self {
        SuspExpr::Env(e)
    }
}

/// Borrowed view of a term or environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprRef<'a> {
    Term(&'a SuspTerm),
    Env(&'a SuspEnv),
}

impl<'a> ExprRef<'a> {
    pub fn child(self, sel: usize) -> Option<ExprRef<'a>> {
        match (self, sel) {
            (ExprRef::Term(SuspTerm::App(f, _)), 0) => Some(ExprRef::Term(f)),
            (ExprRef::Term(SuspTerm::App(_, a)), 1) => Some(ExprRef::Term(a)),
            (ExprRef::Term(SuspTerm::Abs(b)), 0) => Some(ExprRef::Term(b)),
            (ExprRef::Term(SuspTerm::Susp { term, .. }), 0) => Some(ExprRef::Term(term)),
            (ExprRef::Term(SuspTerm::Susp { env, .. }), 1) => Some(ExprRef::Env(env)),
            (ExprRef::Env(SuspEnv::Cons(item, _)), 0) => Some(ExprRef::Term(&item.term)),
            (ExprRef::Env(SuspEnv::Cons(_, rest)), 1) => Some(ExprRef::Env(rest)),
            (ExprRef::Env(SuspEnv::Merge { e1, .. }), 0) => Some(ExprRef::Env(e1)),
            (ExprRef::Env(SuspEnv::Merge { e2, .. }), 1) => Some(ExprRef::Env(e2)),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            ExprRef::Term(SuspTerm::App(..)) | ExprRef::Term(SuspTerm::Susp { .. }) => 2,
            ExprRef::Term(SuspTerm::Abs(_)) => 1,
            ExprRef::Term(_) => 0,
            ExprRef::Env(SuspEnv::Nil) => 0,
            ExprRef::Env(_) => 2,
        }
    }

    pub fn to_owned(self) -> SuspExpr {
        match self {
            ExprRef::Term(t) => SuspExpr::Term(t.clone()),
            ExprRef::Env(e) => SuspExpr::Env(e.clone()),
        }
    }

    pub fn size(self) -> usize {
        match self {
            ExprRef::Term(t) => t.size(),
            ExprRef::Env(e) => e.size(),
        }
    }

    /// Visits every subexpression in preorder together with its path.
    pub fn walk(self, f: &mut impl FnMut(&Path, ExprRef<'a>)) {
        fn go<'a>(x: ExprRef<'a>, path: &mut Path, f: &mut impl FnMut(&Path, ExprRef<'a>)) {
            f(path, x);
            for sel in 0..x.arity() {
                path.0.push(sel);
                go(x.child(sel).unwrap(), path, f);
                path.0.pop();
            }
        }
        go(self, &mut Path::root(), f)
    }
}

/// Address of a subexpression as a sequence of child selectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, sel: usize) -> Path {
        let mut p = self.0.clone();
        p.push(sel);
        Path(p)
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// Accepts `[0,1]`, `0,1` or `0.1`; the root is `[]` or the empty string.
impl std::str::FromStr for Path {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        inner
            .split([',', '.'])
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| crate::error::Error::Config(format!("bad path component {p:?} in {s:?}"))))
            .collect::<crate::error::Result<Vec<usize>>>()
            .map(Path)
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}
