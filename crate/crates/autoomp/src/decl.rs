//! Declaration-file reader.
//!
//! The second CLI argument lists the subroutine's local variables. Two
//! layouts are accepted, freely mixed: Fortran declaration statements
//! (`REAL(8) :: A, B(10), C = 0`) and bare comma/newline-separated name
//! lists. Array specs, kind specs and initializers are stripped; only the
//! names matter.

use crate::error::{Error, Result};
use crate::ident::{canonicalize, Identifier};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclarationSet {
    /// Strictly ascending, duplicate-free canonical names.
    pub names: Vec<Identifier>,
}

impl DeclarationSet {
    pub fn contains(&self, id: &Identifier) -> bool {
        self.names.binary_search(id).is_ok()
    }

    /// Comma-separated name list; parsing it back yields the same set.
    pub fn render_names(&self) -> String {
        self.names
            .iter()
            .map(|n| n.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Strip a trailing `!` comment, respecting character literals.
fn strip_comment(line: &str) -> &str {
    let mut quote: Option<char> = None;
    for (i, c) in line.char_indices() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => {}
            None => match c {
                '\'' | '"' => quote = Some(c),
                '!' => return &line[..i],
                _ => {}
            },
        }
    }
    line
}

/// Join `&` continuation lines into logical lines, keeping the first
/// physical line number of each.
fn logical_lines(text: &str) -> Vec<(u32, String)> {
    let mut out: Vec<(u32, String)> = Vec::new();
    let mut joining = false;
    for (i, raw) in text.lines().enumerate() {
        let mut line = strip_comment(raw).trim().to_string();
        let lead_continues = line.starts_with('&');
        if lead_continues {
            line = line[1..].trim_start().to_string();
        }
        let continues = line.ends_with('&');
        if continues {
            line = line[..line.len() - 1].trim_end().to_string();
        }
        if joining || lead_continues {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(&line);
            }
        } else if !line.is_empty() {
            out.push((i as u32 + 1, line));
        }
        joining = continues;
    }
    out
}

/// Split at top-level commas (outside parentheses).
fn split_commas(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Leading identifier of a declaration item, with array specs and
/// initializers stripped.
fn item_name(item: &str) -> Option<&str> {
    let item = item.trim();
    let end = item
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
        .map_or(item.len(), |(i, _)| i);
    if end == 0 {
        return None;
    }
    let name = &item[..end];
    let rest = item[end..].trim_start();
    // allowed trailers: (dims), = init, nothing
    if !(rest.is_empty() || rest.starts_with('(') || rest.starts_with('=')) {
        return None;
    }
    Some(name)
}

/// Parse the declaration file into the ordered candidate universe.
pub fn parse_declarations(decl_text: &str) -> Result<DeclarationSet> {
    let mut names: Vec<Identifier> = Vec::new();
    for (line_no, line) in logical_lines(decl_text) {
        let items: Vec<&str> = if let Some(pos) = line.find("::") {
            split_commas(line[pos + 2..].trim()).into_iter().collect()
        } else {
            // bare list: commas and/or whitespace separate names
            line.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect()
        };
        for item in items {
            if item.trim().is_empty() {
                continue;
            }
            let name = item_name(item).ok_or_else(|| Error::MalformedDeclaration {
                line: line_no,
                detail: format!("cannot read a variable name from {:?}", item.trim()),
            })?;
            let id = canonicalize(name).map_err(|_| Error::MalformedDeclaration {
                line: line_no,
                detail: format!("{name:?} is not a legal name"),
            })?;
            if let Err(pos) = names.binary_search(&id) {
                names.insert(pos, id);
            }
        }
    }
    if names.is_empty() {
        return Err(Error::EmptyDeclarationFile);
    }
    Ok(DeclarationSet { names })
}
