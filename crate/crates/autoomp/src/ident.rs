//! Canonical variable names.
//!
//! Fortran is case-insensitive, so every spelling is folded to upper case
//! before any set arithmetic happens. Ordering is plain ASCII-lexicographic
//! on the canonical spelling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper-cased canonical spelling of a Fortran name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Identifier(String);

impl Identifier {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Fold a raw spelling to its canonical upper-case form.
pub fn canonicalize(raw: &str) -> Result<Identifier> {
    let mut chars = raw.chars();
    let valid = match chars.next() {
        Some(c) if is_name_start(c) => chars.all(is_name_char),
        _ => false,
    };
    if !valid {
        return Err(Error::InvalidName(raw.to_string()));
    }
    Ok(Identifier(raw.to_ascii_uppercase()))
}
