//! `N_` indices, constants, `\a`, juxtaposition, `a[s]`, `a/`, `lift(s)`, `shift`.

use std::fmt;

use super::lexer::{describe, Parser, Tok};
use crate::bridges::lu::Lu;
use crate::error::Result;

/// Parses a term or a substitution.
pub fn parse_lu(text: &str) -> Result<Lu> {
    let mut p = Parser::new(text)?;
    let x = if starts_subst(&p) {
        subst(&mut p)?
    } else {
        let t = term(&mut p)?;
        if p.eat_sym('/') {
            Lu::slash(t)
        } else {
            t
        }
    };
    p.expect_eof()?;
    Ok(x)
}

fn reserved(s: &str) -> bool {
    matches!(s, "lift" | "shift")
}

fn starts_subst(p: &Parser) -> bool {
    p.is_ident("shift") || p.is_ident("lift")
}

fn term(p: &mut Parser) -> Result<Lu> {
    if p.eat_sym('\\') {
        return Ok(Lu::abs(term(p)?));
    }
    let mut t = postfix(p)?;
    while starts_atom(p) {
        t = Lu::app(t, postfix(p)?);
    }
    if p.is_sym('\\') {
        t = Lu::app(t, term(p)?);
    }
    Ok(t)
}

fn starts_atom(p: &Parser) -> bool {
    match p.peek() {
        Tok::Num(_) | Tok::Sym('(') => true,
        Tok::Ident(s) => !reserved(s),
        _ => false,
    }
}

fn postfix(p: &mut Parser) -> Result<Lu> {
    let mut t = atom(p)?;
    while p.eat_sym('[') {
        let s = subst(p)?;
        p.expect_sym(']')?;
        t = Lu::clos(t, s);
    }
    Ok(t)
}

fn atom(p: &mut Parser) -> Result<Lu> {
    match p.peek().clone() {
        Tok::Num(n) => {
            p.advance();
            if n == 0 {
                return Err(p.error("indices start at 1_"));
            }
            p.expect_sym('_')?;
            Ok(Lu::Var(n))
        }
        Tok::Sym('(') => {
            p.advance();
            let t = term(p)?;
            p.expect_sym(')')?;
            Ok(t)
        }
        Tok::Ident(s) if !reserved(&s) => {
            p.advance();
            Ok(Lu::constant(&s))
        }
        t => Err(p.error(format!("expected a lambda-upsilon term, found {}", describe(&t)))),
    }
}

fn subst(p: &mut Parser) -> Result<Lu> {
    if p.is_ident("shift") {
        p.advance();
        return Ok(Lu::Shift);
    }
    if p.is_ident("lift") {
        p.advance();
        p.expect_sym('(')?;
        let s = subst(p)?;
        p.expect_sym(')')?;
        return Ok(Lu::lift(s));
    }
    let t = term(p)?;
    p.expect_sym('/')?;
    Ok(Lu::slash(t))
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Fun,
    Arg,
}

fn write(f: &mut fmt::Formatter<'_>, x: &Lu, prec: Prec) -> fmt::Result {
    match x {
        Lu::Var(n) => write!(f, "{n}_"),
        Lu::Const(c) => write!(f, "{c}"),
        Lu::Abs(b) => {
            if prec > Prec::Top {
                write!(f, "(\\")?;
                write(f, b, Prec::Top)?;
                write!(f, ")")
            } else {
                write!(f, "\\")?;
                write(f, b, Prec::Top)
            }
        }
        Lu::App(g, a) => {
            if prec == Prec::Arg {
                write!(f, "(")?;
            }
            write(f, g, Prec::Fun)?;
            write!(f, " ")?;
            write(f, a, Prec::Arg)?;
            if prec == Prec::Arg {
                write!(f, ")")?;
            }
            Ok(())
        }
        Lu::Clos(a, s) => {
            write(f, a, Prec::Arg)?;
            write!(f, "[")?;
            write(f, s, Prec::Top)?;
            write!(f, "]")
        }
        Lu::Slash(a) => {
            write(f, a, Prec::Top)?;
            write!(f, "/")
        }
        Lu::Lift(s) => {
            write!(f, "lift(")?;
            write(f, s, Prec::Top)?;
            write!(f, ")")
        }
        Lu::Shift => write!(f, "shift"),
    }
}

impl fmt::Display for Lu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(f, self, Prec::Top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["(\\1_[lift(shift)]) (c 2_)/", "1_[2_/][lift(lift(shift))]", "\\\\2_ (1_ c)", "lift(a b/)"] {
            let x = parse_lu(s).unwrap();
            assert_eq!(parse_lu(&x.to_string()).unwrap(), x, "{s}");
        }
        assert_eq!(parse_lu("f \\1_").unwrap().to_string(), "f (\\1_)");
    }
}
