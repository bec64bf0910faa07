//! Concrete syntax for the suspension calculus and the bridge calculi.

mod lexer;
pub mod ls;
pub mod lsig;
pub mod lu;
pub mod susp;

pub use lexer::{Parser, Tok};
pub use susp::{parse_env, parse_expr, parse_expr_with, parse_term, ParseOptions};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four calculi with a concrete syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calc {
    #[default]
    Susp,
    Lsig,
    Lu,
    Ls,
}

impl Calc {
    pub const ALL: [Calc; 4] = [Calc::Susp, Calc::Lsig, Calc::Lu, Calc::Ls];

    pub fn name(self) -> &'static str {
        match self {
            Calc::Susp => "susp",
            Calc::Lsig => "lsig",
            Calc::Lu => "lu",
            Calc::Ls => "ls",
        }
    }

    /// Parses `text` and prints it back canonically.
    pub fn canonical(self, text: &str) -> Result<String> {
        Ok(match self {
            Calc::Susp => parse_expr(text)?.to_string(),
            Calc::Lsig => lsig::parse_lsig(text)?.to_string(),
            Calc::Lu => lu::parse_lu(text)?.to_string(),
            Calc::Ls => ls::parse_ls(text)?.to_string(),
        })
    }
}

impl fmt::Display for Calc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Calc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Calc::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown calculus {s}; expected susp, lsig, lu or ls")))
    }
}
