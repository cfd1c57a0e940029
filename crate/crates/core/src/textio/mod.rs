//! Text formats: S-expression signatures and formulas, JSON interpretations
//! and verdicts. The grammar is documented in `docs/format.md`.

mod arrangement;
mod formula;
mod json;
mod sexpr;
mod signature;

pub use arrangement::parse_arrangement;
pub use formula::{parse_formula, parse_formula_bytes, print_formula};
pub use json::{
    interpretation_from_json, interpretation_to_json, mm_to_json, vector_to_json, verdict_to_json, InterpretationDoc,
};
pub use signature::{parse_signature, print_signature};

use thiserror::Error;

/// What went wrong; each kind has a stable code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex,
    UnexpectedEof,
    Syntax,
    UnknownSymbol,
    Arity,
    Sort,
    InvalidUtf8,
    Json,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::Lex => "E01",
            ParseErrorKind::UnexpectedEof => "E02",
            ParseErrorKind::Syntax => "E03",
            ParseErrorKind::UnknownSymbol => "E04",
            ParseErrorKind::Arity => "E05",
            ParseErrorKind::Sort => "E06",
            ParseErrorKind::InvalidUtf8 => "E07",
            ParseErrorKind::Json => "E08",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{}:{}: error[{}]: {}", .line, .col, .kind.code(), .message)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}
