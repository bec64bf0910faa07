//! Bare numerals as indices, constants, `\a`, juxtaposition, `sig(i, a, b)`, `phi(k, i, a)`.

use std::fmt;

use super::lexer::{describe, Parser, Tok};
use crate::bridges::ls::Ls;
use crate::error::Result;

pub fn parse_ls(text: &str) -> Result<Ls> {
    let mut p = Parser::new(text)?;
    let t = term(&mut p)?;
    p.expect_eof()?;
    Ok(t)
}

fn reserved(s: &str) -> bool {
    matches!(s, "sig" | "phi")
}

fn term(p: &mut Parser) -> Result<Ls> {
    if p.eat_sym('\\') {
        return Ok(Ls::abs(term(p)?));
    }
    let mut t = atom(p)?;
    while matches!(p.peek(), Tok::Num(_) | Tok::Sym('(') | Tok::Ident(_)) {
        t = Ls::app(t, atom(p)?);
    }
    if p.is_sym('\\') {
        t = Ls::app(t, term(p)?);
    }
    Ok(t)
}

fn atom(p: &mut Parser) -> Result<Ls> {
    match p.peek().clone() {
        Tok::Num(n) => {
            if n == 0 {
                return Err(p.error("indices start at 1"));
            }
            p.advance();
            Ok(Ls::Var(n))
        }
        Tok::Sym('(') => {
            p.advance();
            let t = term(p)?;
            p.expect_sym(')')?;
            Ok(t)
        }
        Tok::Ident(s) if reserved(&s) => {
            p.advance();
            p.expect_sym('(')?;
            let n1 = p.num()?;
            p.expect_sym(',')?;
            let x = if s == "sig" {
                if n1 == 0 {
                    return Err(p.error("sig needs a positive level"));
                }
                let a = term(p)?;
                p.expect_sym(',')?;
                let b = term(p)?;
                Ls::sigma(n1, a, b)
            } else {
                let i = p.num()?;
                if i == 0 {
                    return Err(p.error("phi needs a positive level"));
                }
                p.expect_sym(',')?;
                Ls::phi(n1, i, term(p)?)
            };
            p.expect_sym(')')?;
            Ok(x)
        }
        Tok::Ident(s) => {
            p.advance();
            Ok(Ls::constant(&s))
        }
        t => Err(p.error(format!("expected a lambda-s term, found {}", describe(&t)))),
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Fun,
    Arg,
}

fn write(f: &mut fmt::Formatter<'_>, x: &Ls, prec: Prec) -> fmt::Result {
    match x {
        Ls::Var(n) => write!(f, "{n}"),
        Ls::Const(c) => write!(f, "{c}"),
        Ls::Abs(b) => {
            if prec > Prec::Top {
                write!(f, "(")?;
            }
            write!(f, "\\")?;
            write(f, b, Prec::Top)?;
            if prec > Prec::Top {
                write!(f, ")")?;
            }
            Ok(())
        }
        Ls::App(g, a) => {
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
        Ls::Sigma(i, a, b) => write!(f, "sig({i}, {a}, {b})"),
        Ls::Phi(k, i, a) => write!(f, "phi({k}, {i}, {a})"),
    }
}

impl fmt::Display for Ls {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(f, self, Prec::Top)
    }
}
