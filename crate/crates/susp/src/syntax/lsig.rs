//! `1`, constants, `\a`, juxtaposition, `a[s]`, `id`, `^`, `^N`, `a . s`, `s o t`.

use std::fmt;

use super::lexer::{describe, Parser, Tok};
use crate::bridges::lsig::Lsig;
use crate::error::Result;

/// Parses a term or a substitution.
pub fn parse_lsig(text: &str) -> Result<Lsig> {
    let mut p = Parser::new(text)?;
    let first = term(&mut p).and_then(|t| p.expect_eof().map(|_| t));
    let err = match first {
        Ok(t) => return Ok(t),
        Err(e) => e,
    };
    let reach = p.offset();
    p.reset(0);
    match subst(&mut p).and_then(|s| p.expect_eof().map(|_| s)) {
        Ok(s) => Ok(s),
        Err(e2) => Err(if p.offset() > reach { e2 } else { err }),
    }
}

fn reserved(s: &str) -> bool {
    matches!(s, "id" | "o")
}

fn term(p: &mut Parser) -> Result<Lsig> {
    if p.eat_sym('\\') {
        return Ok(Lsig::abs(term(p)?));
    }
    let mut t = postfix(p)?;
    while starts_atom(p) {
        t = Lsig::app(t, postfix(p)?);
    }
    if p.is_sym('\\') {
        t = Lsig::app(t, term(p)?);
    }
    Ok(t)
}

fn starts_atom(p: &Parser) -> bool {
    match p.peek() {
        Tok::Num(1) => true,
        Tok::Sym('(') => true,
        Tok::Ident(s) => !reserved(s),
        _ => false,
    }
}

fn postfix(p: &mut Parser) -> Result<Lsig> {
    let mut t = atom(p)?;
    while p.eat_sym('[') {
        let s = subst(p)?;
        p.expect_sym(']')?;
        t = Lsig::clos(t, s);
    }
    Ok(t)
}

fn atom(p: &mut Parser) -> Result<Lsig> {
    match p.peek().clone() {
        Tok::Num(1) => {
            p.advance();
            Ok(Lsig::One)
        }
        Tok::Sym('(') => {
            p.advance();
            let t = term(p)?;
            p.expect_sym(')')?;
            Ok(t)
        }
        Tok::Ident(s) if !reserved(&s) => {
            p.advance();
            Ok(Lsig::constant(&s))
        }
        t => Err(p.error(format!("expected a lambda-sigma term, found {}", describe(&t)))),
    }
}

/// `a . s` is tried first; otherwise a chain of compositions, nesting to the right.
fn subst(p: &mut Parser) -> Result<Lsig> {
    let start = p.offset();
    if let Ok(a) = term(p) {
        if p.eat_sym('.') {
            return Ok(Lsig::cons(a, subst(p)?));
        }
    }
    p.reset(start);
    let s = satom(p)?;
    if p.is_ident("o") {
        p.advance();
        return Ok(Lsig::comp(s, subst_comp(p)?));
    }
    Ok(s)
}

fn subst_comp(p: &mut Parser) -> Result<Lsig> {
    let s = satom(p)?;
    if p.is_ident("o") {
        p.advance();
        return Ok(Lsig::comp(s, subst_comp(p)?));
    }
    Ok(s)
}

fn satom(p: &mut Parser) -> Result<Lsig> {
    match p.peek().clone() {
        Tok::Ident(s) if s == "id" => {
            p.advance();
            Ok(Lsig::Id)
        }
        Tok::Sym('^') => {
            p.advance();
            if let Tok::Num(n) = p.peek().clone() {
                p.advance();
                if n == 0 {
                    return Err(p.error("shift powers start at ^1"));
                }
                return Ok(Lsig::shift_pow(n));
            }
            Ok(Lsig::Shift)
        }
        Tok::Sym('(') => {
            p.advance();
            let s = subst(p)?;
            p.expect_sym(')')?;
            Ok(s)
        }
        t => Err(p.error(format!("expected a substitution, found {}", describe(&t)))),
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Fun,
    Arg,
    Closure,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Lsig, prec: Prec) -> fmt::Result {
    let paren = |f: &mut fmt::Formatter<'_>, on: bool, s: &str| if on { write!(f, "{s}") } else { Ok(()) };
    match t {
        Lsig::One => write!(f, "1"),
        Lsig::Const(c) => write!(f, "{c}"),
        Lsig::Abs(b) => {
            paren(f, prec > Prec::Top, "(")?;
            write!(f, "\\")?;
            write_term(f, b, Prec::Top)?;
            paren(f, prec > Prec::Top, ")")
        }
        Lsig::App(g, a) => {
            paren(f, prec >= Prec::Arg, "(")?;
            write_term(f, g, Prec::Fun)?;
            write!(f, " ")?;
            write_term(f, a, Prec::Arg)?;
            paren(f, prec >= Prec::Arg, ")")
        }
        Lsig::Clos(a, s) => {
            write_term(f, a, Prec::Closure)?;
            write!(f, "[")?;
            write_subst(f, s, false)?;
            write!(f, "]")
        }
        s => write_subst(f, s, prec > Prec::Top),
    }
}

/// `nested` marks a composition operand or a cons tail.
fn write_subst(f: &mut fmt::Formatter<'_>, s: &Lsig, nested: bool) -> fmt::Result {
    if let Some(n) = s.as_shift_pow() {
        return if n == 1 { write!(f, "^") } else { write!(f, "^{n}") };
    }
    match s {
        Lsig::Id => write!(f, "id"),
        Lsig::Cons(a, rest) => {
            if nested {
                write!(f, "(")?;
            }
            write_term(f, a, Prec::Arg)?;
            write!(f, " . ")?;
            write_subst(f, rest, matches!(**rest, Lsig::Comp(..)))?;
            if nested {
                write!(f, ")")?;
            }
            Ok(())
        }
        Lsig::Comp(a, b) => {
            if nested {
                write!(f, "(")?;
            }
            write_subst(f, a, true)?;
            write!(f, " o ")?;
            write_subst(f, b, true)?;
            if nested {
                write!(f, ")")?;
            }
            Ok(())
        }
        t => write_term(f, t, Prec::Top),
    }
}

impl fmt::Display for Lsig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Prec::Top)
    }
}
