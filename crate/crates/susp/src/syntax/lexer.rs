use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(usize),
    Ident(String),
    Sym(char),
    ColonColon,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        let mut bump = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if ch.is_whitespace() {
            bump(1, &mut i);
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| Error::Parse { line: l0, col: c0, msg: format!("number {s} too large") })?;
            out.push(Spanned { tok: Tok::Num(n), line: l0, col: c0 });
            continue;
        }
        if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                bump(1, &mut i);
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if ch == ':' && chars.get(i + 1) == Some(&':') {
            bump(2, &mut i);
            out.push(Spanned { tok: Tok::ColonColon, line: l0, col: c0 });
            continue;
        }
        if "\\#()[]{},.^/_@".contains(ch) || ch == 'λ' {
            bump(1, &mut i);
            let ch = if ch == 'λ' { '\\' } else { ch };
            out.push(Spanned { tok: Tok::Sym(ch), line: l0, col: c0 });
            continue;
        }
        return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character {ch:?}") });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Token cursor shared by the calculus parsers.
pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        let s = &self.toks[self.pos];
        Error::Parse { line: s.line, col: s.col, msg: msg.into() }
    }

    pub fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    pub fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}', found {}", describe(self.peek()))))
        }
    }

    pub fn expect_ident(&mut self, name: &str) -> Result<()> {
        if self.is_ident(name) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected '{name}', found {}", describe(self.peek()))))
        }
    }

    pub fn expect_colons(&mut self) -> Result<()> {
        if *self.peek() == Tok::ColonColon {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected '::', found {}", describe(self.peek()))))
        }
    }

    pub fn num(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(n)
            }
            t => Err(self.error(format!("expected a number, found {}", describe(&t)))),
        }
    }

    pub fn expect_eof(&self) -> Result<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {} after expression", describe(t)))),
        }
    }

    pub fn offset(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::ColonColon => "'::'".into(),
        Tok::Eof => "end of input".into(),
    }
}
