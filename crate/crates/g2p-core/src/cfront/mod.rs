//! Front end for restricted C: comment stripping, tokenization, outermost
//! for-loop extraction with pragma attachment, and task labeling.
//!
//! The subset is deliberately small: the reserved words below, no
//! preprocessor expansion beyond pragma recognition, and macros in loop
//! bodies treated as plain identifiers or calls. Loop-level analysis only
//! needs statement and expression grammar.

mod comment;
mod extract;
mod label;
mod pragma;
mod token;

pub use comment::strip_comments;
pub use extract::{extract_loops, Extraction, LoopDiagnostic, LoopRecord, SourceLoop};
pub use label::{label_loop, LabelSet};
pub use pragma::{parse_pragma, Clause, ClauseArg, Directive, Pragma};
pub use token::{tokenize, Token, TokenKind, KEYWORDS, TYPE_KEYWORDS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CfrontError {
    #[error("unterminated block comment opened at line {line}")]
    UnterminatedComment { line: u32 },
    #[error("unterminated string literal starting at line {line}, column {col}")]
    UnterminatedString { line: u32, col: u32 },
    #[error("unrecognized character {ch:?} at line {line}, column {col}")]
    UnrecognizedByte { ch: char, line: u32, col: u32 },
    #[error("not an OpenMP pragma: {raw:?}")]
    NotOmpPragma { raw: String },
    #[error("malformed reduction clause: {detail}")]
    BadReductionClause { detail: String },
}
