//! `#N` indices, lowercase constants, uppercase meta variables, `\ t`,
//! juxtaposition, `[t, ol, nl, e]`, `(t, n) :: e`, `nil`, `{e1, nl, ol, e2}`.

use std::fmt;

use super::lexer::{describe, Parser, Tok};
use crate::error::{Error, Result};
use crate::expr::{SuspEnv, SuspExpr, SuspTerm};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `@n` items, read as `(#1, n+1)`.
    pub legacy_dummies: bool,
}

pub fn parse_term(text: &str) -> Result<SuspTerm> {
    let mut p = Parser::new(text)?;
    let t = term(&mut p, ParseOptions::default())?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_env(text: &str) -> Result<SuspEnv> {
    let mut p = Parser::new(text)?;
    let e = env(&mut p, ParseOptions::default())?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_expr(text: &str) -> Result<SuspExpr> {
    parse_expr_with(text, ParseOptions::default())
}

/// Parses a term or, failing that, an environment.
pub fn parse_expr_with(text: &str, opts: ParseOptions) -> Result<SuspExpr> {
    let mut p = Parser::new(text)?;
    let as_term = term(&mut p, opts).and_then(|t| p.expect_eof().map(|_| t));
    let term_err = match as_term {
        Ok(t) => return Ok(SuspExpr::Term(t)),
        Err(e) => e,
    };
    let term_reach = p.offset();
    p.reset(0);
    let as_env = env(&mut p, opts).and_then(|e| p.expect_eof().map(|_| e));
    match as_env {
        Ok(e) => Ok(SuspExpr::Env(e)),
        Err(env_err) => Err(if p.offset() > term_reach { env_err } else { term_err }),
    }
}

fn term(p: &mut Parser, o: ParseOptions) -> Result<SuspTerm> {
    if p.eat_sym('\\') {
        return Ok(SuspTerm::abs(term(p, o)?));
    }
    let mut t = atom(p, o)?;
    while starts_atom(p) {
        t = SuspTerm::app(t, atom(p, o)?);
    }
    if p.is_sym('\\') {
        t = SuspTerm::app(t, term(p, o)?);
    }
    Ok(t)
}

fn starts_atom(p: &Parser) -> bool {
    match p.peek() {
        Tok::Sym(c) => matches!(c, '#' | '(' | '['),
        Tok::Ident(s) => s != "nil",
        _ => false,
    }
}

fn atom(p: &mut Parser, o: ParseOptions) -> Result<SuspTerm> {
    match p.peek().clone() {
        Tok::Sym('#') => {
            p.advance();
            let i = p.num()?;
            if i == 0 {
                return Err(p.error("de Bruijn indices start at #1"));
            }
            Ok(SuspTerm::Index(i))
        }
        Tok::Sym('(') => {
            p.advance();
            let t = term(p, o)?;
            p.expect_sym(')')?;
            Ok(t)
        }
        Tok::Sym('[') => {
            p.advance();
            let t = term(p, o)?;
            p.expect_sym(',')?;
            let ol = p.num()?;
            p.expect_sym(',')?;
            let nl = p.num()?;
            p.expect_sym(',')?;
            let e = env(p, o)?;
            p.expect_sym(']')?;
            Ok(SuspTerm::susp(t, ol, nl, e))
        }
        Tok::Ident(s) if s != "nil" => {
            p.advance();
            let first = s.chars().next().unwrap();
            Ok(if first.is_uppercase() {
                SuspTerm::Meta(s.as_str().into())
            } else {
                SuspTerm::Const(s.as_str().into())
            })
        }
        t => Err(p.error(format!("expected a term, found {}", describe(&t)))),
    }
}

fn env(p: &mut Parser, o: ParseOptions) -> Result<SuspEnv> {
    match p.peek().clone() {
        Tok::Ident(s) if s == "nil" => {
            p.advance();
            Ok(SuspEnv::Nil)
        }
        Tok::Sym('{') => {
            p.advance();
            let e1 = env(p, o)?;
            p.expect_sym(',')?;
            let nl1 = p.num()?;
            p.expect_sym(',')?;
            let ol2 = p.num()?;
            p.expect_sym(',')?;
            let e2 = env(p, o)?;
            p.expect_sym('}')?;
            Ok(SuspEnv::merge(e1, nl1, ol2, e2))
        }
        Tok::Sym('(') => {
            p.advance();
            let t = term(p, o)?;
            p.expect_sym(',')?;
            let l = p.num()?;
            p.expect_sym(')')?;
            p.expect_colons()?;
            Ok(SuspEnv::cons(t, l, env(p, o)?))
        }
        Tok::Sym('@') => {
            if !o.legacy_dummies {
                return Err(p.error("dummy items '@n' need legacy dummy mode"));
            }
            p.advance();
            let n = p.num()?;
            p.expect_colons()?;
            let l = n.checked_add(1).ok_or(Error::Overflow)?;
            Ok(SuspEnv::cons(SuspTerm::Index(1), l, env(p, o)?))
        }
        t => Err(p.error(format!("expected an environment, found {}", describe(&t)))),
    }
}

/// Context of a term being printed.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Fun,
    Arg,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &SuspTerm, prec: Prec) -> fmt::Result {
    match t {
        SuspTerm::Const(c) | SuspTerm::Meta(c) => write!(f, "{c}"),
        SuspTerm::Index(i) => write!(f, "#{i}"),
        SuspTerm::Abs(b) => {
            if prec > Prec::Top {
                write!(f, "(")?;
            }
            write!(f, "\\ ")?;
            write_term(f, b, Prec::Top)?;
            if prec > Prec::Top {
                write!(f, ")")?;
            }
            Ok(())
        }
        SuspTerm::App(g, a) => {
            if prec == Prec::Arg {
                write!(f, "(")?;
            }
            write_term(f, g, Prec::Fun)?;
            write!(f, " ")?;
            write_term(f, a, Prec::Arg)?;
            if prec == Prec::Arg {
                write!(f, ")")?;
            }
            Ok(())
        }
        SuspTerm::Susp { term, ol, nl, env } => {
            write!(f, "[")?;
            write_term(f, term, Prec::Top)?;
            write!(f, ", {ol}, {nl}, {env}]")
        }
    }
}

impl fmt::Display for SuspTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Prec::Top)
    }
}

impl fmt::Display for SuspEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuspEnv::Nil => write!(f, "nil"),
            SuspEnv::Cons(item, rest) => write!(f, "({}, {}) :: {rest}", item.term, item.index),
            SuspEnv::Merge { e1, nl1, ol2, e2 } => write!(f, "{{{e1}, {nl1}, {ol2}, {e2}}}"),
        }
    }
}

impl fmt::Display for SuspExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuspExpr::Term(t) => write!(f, "{t}"),
            SuspExpr::Env(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_suspension() {
        let t = parse_term("[#1, 1, 0, (c,0)::nil]").unwrap();
        assert_eq!(
            t,
            SuspTerm::susp(SuspTerm::Index(1), 1, 0, SuspEnv::cons(SuspTerm::constant("c"), 0, SuspEnv::Nil))
        );
        assert_eq!(t.to_string(), "[#1, 1, 0, (c, 0) :: nil]");
    }

    #[test]
    fn application_and_abstraction() {
        let t = parse_term("\\ #1 #2 #3").unwrap();
        assert_eq!(t.to_string(), "\\ #1 #2 #3");
        let u = parse_term("(\\ #1) (a b) X").unwrap();
        assert_eq!(u.to_string(), "(\\ #1) (a b) X");
        assert!(matches!(u, SuspTerm::App(_, ref x) if **x == SuspTerm::meta("X")));
        let v = parse_term("f \\ #1").unwrap();
        assert_eq!(v, SuspTerm::app(SuspTerm::constant("f"), SuspTerm::abs(SuspTerm::Index(1))));
        assert_eq!(v.to_string(), "f (\\ #1)");
    }

    #[test]
    fn environments() {
        let e = parse_expr("{(t, 0) :: nil, 0, 1, (s, 0) :: nil}").unwrap();
        assert!(matches!(e, SuspExpr::Env(SuspEnv::Merge { .. })));
        assert_eq!(e.to_string(), "{(t, 0) :: nil, 0, 1, (s, 0) :: nil}");
        assert_eq!(parse_expr("nil").unwrap(), SuspExpr::Env(SuspEnv::Nil));
    }

    #[test]
    fn legacy_dummies() {
        assert!(parse_expr("@3 :: nil").is_err());
        let e = parse_expr_with("@3 :: nil", ParseOptions { legacy_dummies: true }).unwrap();
        assert_eq!(e, SuspExpr::Env(SuspEnv::cons(SuspTerm::Index(1), 4, SuspEnv::Nil)));
    }

    #[test]
    fn errors_carry_location() {
        match parse_term("[#1, 1,\n  x, nil]") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_term("#0").is_err());
    }
}
