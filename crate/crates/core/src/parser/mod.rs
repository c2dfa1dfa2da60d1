//! Concrete `.why` syntax: parsing, rendering, and TPTP export.
//!
//! ```text
//! theory T {
//!   sorts Q, B;
//!   func add: Q x Q -> Q;
//!   const c: B;
//!   pred P: B;
//!   pred K;                       // 0-ary, for propositional fragments
//!   axiom a1: forall x:B. P(x) -> K;
//! }
//! ```
//!
//! Connectives by decreasing binding strength: `~`, `&`, `|`, `->` (right
//! associative), `<->`. Terms may use the infix operators `+`, `*` and the
//! infix relation `<`, which stand for the symbols `add`, `mul` and `lt`.

use std::fmt;

mod grammar;
mod lexer;
mod render;
pub mod tptp;

pub use grammar::{parse_formula, parse_inline, parse_theory, parse_theory_in, DEFAULT_SORT};
pub use render::{render, render_signature, render_term, render_theory};

/// Symbol written as infix `+`.
pub const ADD: &str = "add";
/// Symbol written as infix `*`.
pub const MUL: &str = "mul";
/// Relation written as infix `<`.
pub const LT: &str = "lt";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub start: Pos,
    pub end: Pos,
}

impl SourceSpan {
    pub fn new(file: &str, start: Pos, end: Pos) -> Self {
        SourceSpan { file: file.to_string(), start, end }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub severity: Severity,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn error(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic { span, severity: Severity::Error, message: message.into() }
    }

    pub fn warning(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic { span, severity: Severity::Warning, message: message.into() }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}:{}: {sev}: {}", self.span.file, self.span.start.line, self.span.start.column, self.message)
    }
}

/// One or more error diagnostics; any of them prevents construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<ParseDiagnostic>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}
