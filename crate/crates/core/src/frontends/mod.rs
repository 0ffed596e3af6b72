//! Text formats: `.qnet` network descriptions, formulas, and `.qf` formula
//! files with node selectors.
//!
//! ```text
//! network SC {
//!   qubits 2;
//!   resource ebit(1, 2);
//!   agent A owns 1 {
//!     input x1: bit;
//!     program { condZ(1, x1); qsend 1 -> B; }
//!   }
//!   ...
//! }
//! ```
//!
//! Every parser returns a [`ParseError`] carrying a [`SourceSpan`] instead of
//! panicking, whatever the input.

mod formula;
mod lexer;
mod network;
mod print;
mod selector;

use std::fmt;

pub use formula::{parse_formula, parse_formula_file, FormulaEntry, FormulaFile};
pub use network::{parse_network, parse_network_file};
pub use print::{print_formula_file, print_network};
pub use selector::{parse_selector, Filter, Selector, SelectorError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>, expected: Vec<String>) -> Self {
        Self {
            span,
            message: message.into(),
            expected,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}
