//! Textual ket expressions such as `(|+-> - |-+>)/sqrt(2)`.
//!
//! # Grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' factor) | ('/' factor) | factor)*
//! factor := decimal | 'i' | 'sqrt(' decimal ')' | ket | '(' expr ')' | '-' factor
//! ket    := '|' label '>'          label := [0-9+-]+
//! ```
//!
//! Juxtaposition multiplies (`0.8i|10>`). Two kets may not be multiplied and
//! divisors must be scalars. Each label character names one subsystem: digits
//! index themselves, `+` is index 0 and `-` is index 1. A subsystem's dimension
//! is one more than the largest digit used at that position (at least 2), or 2
//! for the `+`/`-` alphabet. `−` (U+2212) and `⟩` are accepted for `-` and `>`.

mod eval;
mod format;
mod parse;

use std::fmt;

use thiserror::Error;

pub use eval::evaluate;
pub use format::format_state;
pub use parse::parse;

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Real(f64),
    /// The imaginary unit.
    Imag,
    Sqrt(f64),
    /// Label normalized to ASCII (`+`, `-`, digits).
    Ket(String),
    Neg(Box<Node>),
    Sum(Box<Node>, Box<Node>),
    Diff(Box<Node>, Box<Node>),
    Product(Box<Node>, Box<Node>),
    Quotient(Box<Node>, Box<Node>),
    Group(Box<Node>),
}

/// A parsed, label-checked ket expression.
#[derive(Clone, Debug, PartialEq)]
pub struct KetExpr {
    pub root: Node,
    /// Subsystem dimensions inferred from the labels.
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    MixedLabelLength { expected: usize, found: usize },
    MixedAlphabet { position: usize },
}

/// A parse failure at a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at byte {}: {msg}", self.offset),
            ParseErrorKind::MixedLabelLength { expected, found } => write!(
                f,
                "ket label at byte {} has {found} subsystems, expected {expected}",
                self.offset
            ),
            ParseErrorKind::MixedAlphabet { position } => write!(
                f,
                "label position {position} mixes digits and +/- (at byte {})",
                self.offset
            ),
        }
    }
}

impl ParseError {
    fn syntax(offset: usize, msg: impl Into<String>) -> Self {
        Self {
            kind: ParseErrorKind::Syntax(msg.into()),
            offset,
        }
    }
}
