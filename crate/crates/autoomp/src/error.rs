//! Error types shared across the analysis pipeline.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unterminated character literal starting at line {line}, column {column}")]
    UnterminatedString { line: u32, column: u32 },

    #[error("illegal character {ch:?} at line {line}, column {column}")]
    IllegalCharacter { ch: char, line: u32, column: u32 },

    #[error("fragment does not begin with a DO statement (line {line})")]
    NotALoop { line: u32 },

    #[error("unbalanced loop: {open} DO statement(s) left unclosed at end of input")]
    UnbalancedLoop { open: u32 },

    #[error("{0:?} is not a legal Fortran name")]
    InvalidName(String),

    #[error("declaration file contains no variable names")]
    EmptyDeclarationFile,

    #[error("malformed declaration at line {line}: {detail}")]
    MalformedDeclaration { line: u32, detail: String },

    #[error("invalid cache geometry: cache line and element size must be nonzero")]
    InvalidGeometry,

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
