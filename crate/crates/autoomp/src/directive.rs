//! OpenMP directive assembly and rendering.
//!
//! The rendered text is one logical `!$omp parallel do` directive wrapped
//! with `&` continuations, followed by the matching end line. Reduction
//! clauses are grouped per operator in `+`, `-`, `*` order so each operator
//! appears at most once.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ident::{canonicalize, Identifier};
use crate::reduction::{ReductionOp, ReductionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedulePolicy {
    Dynamic,
    Static,
}

impl fmt::Display for SchedulePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulePolicy::Dynamic => f.write_str("dynamic"),
            SchedulePolicy::Static => f.write_str("static"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleSpec {
    pub policy: SchedulePolicy,
    /// Iterations per scheduling unit; always >= 1.
    pub chunk: u32,
}

/// One variable/operator pair; grouping happens at render time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTerm {
    pub variable: Identifier,
    pub op: ReductionOp,
}

impl From<&ReductionSpec> for ReductionTerm {
    fn from(spec: &ReductionSpec) -> Self {
        ReductionTerm {
            variable: spec.variable.clone(),
            op: spec.op,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    /// Alphabetically sorted, duplicate-free.
    pub private: Vec<Identifier>,
    pub reductions: Vec<ReductionTerm>,
    pub schedule: ScheduleSpec,
}

impl Directive {
    /// Reorder reduction terms into the per-operator groups the renderer
    /// emits, keeping relative order inside each group. parse(render(d))
    /// equals d.normalized().
    pub fn normalized(&self) -> Directive {
        let mut out = self.clone();
        out.reductions = grouped(&self.reductions)
            .into_iter()
            .flat_map(|(op, vars)| {
                vars.into_iter().map(move |variable| ReductionTerm { variable, op })
            })
            .collect();
        out
    }
}

/// Iterations per cache line: floor(cache_line_bytes / element_bytes),
/// never below one. A chunk this size keeps threads off each other's
/// cache lines.
pub fn compute_chunk(cache_line_bytes: u32, element_bytes: u32) -> Result<u32> {
    if cache_line_bytes == 0 || element_bytes == 0 {
        return Err(Error::InvalidGeometry);
    }
    Ok((cache_line_bytes / element_bytes).max(1))
}

fn grouped(terms: &[ReductionTerm]) -> Vec<(ReductionOp, Vec<Identifier>)> {
    [ReductionOp::Add, ReductionOp::Subtract, ReductionOp::Multiply]
        .into_iter()
        .filter_map(|op| {
            let vars: Vec<Identifier> = terms
                .iter()
                .filter(|t| t.op == op)
                .map(|t| t.variable.clone())
                .collect();
            if vars.is_empty() {
                None
            } else {
                Some((op, vars))
            }
        })
        .collect()
}

fn spell(id: &Identifier, spellings: Option<&BTreeMap<Identifier, String>>) -> String {
    spellings
        .and_then(|m| m.get(id).cloned())
        .unwrap_or_else(|| id.as_str().to_string())
}

fn clauses(d: &Directive, spellings: Option<&BTreeMap<Identifier, String>>) -> Vec<String> {
    let mut out = Vec::new();
    if !d.private.is_empty() {
        let list: Vec<String> = d.private.iter().map(|i| spell(i, spellings)).collect();
        out.push(format!("private({})", list.join(",")));
    }
    out.push(format!(
        "schedule({}, {})",
        d.schedule.policy, d.schedule.chunk
    ));
    for (op, vars) in grouped(&d.reductions) {
        let list: Vec<String> = vars.iter().map(|i| spell(i, spellings)).collect();
        out.push(format!("reduction({}:{})", op.symbol(), list.join(",")));
    }
    out
}

const SENTINEL: &str = "!$omp ";

/// Split an over-long clause at top-level commas into line-sized units.
fn split_clause(clause: &str, line_width: usize) -> Vec<String> {
    let limit = line_width.saturating_sub(SENTINEL.len() + 2);
    if clause.len() <= limit {
        return vec![clause.to_string()];
    }
    // atoms end after each top-level comma
    let mut atoms: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut depth = 0i32;
    for c in clause.chars() {
        current.push(c);
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 1 => atoms.push(std::mem::take(&mut current)),
            _ => {}
        }
    }
    if !current.is_empty() {
        atoms.push(current);
    }
    let mut units: Vec<String> = Vec::new();
    for atom in atoms {
        match units.last_mut() {
            Some(last) if last.len() + atom.len() <= limit => last.push_str(&atom),
            _ => units.push(atom),
        }
    }
    units
}

fn render_with(
    d: &Directive,
    line_width: usize,
    spellings: Option<&BTreeMap<Identifier, String>>,
) -> String {
    let mut units: Vec<String> = vec!["parallel do".to_string()];
    for clause in clauses(d, spellings) {
        units.extend(split_clause(&clause, line_width));
    }

    let mut lines: Vec<String> = Vec::new();
    let mut current = SENTINEL.trim_end().to_string();
    for unit in units {
        // keep room for the ' &' that lands on every non-final line
        let fits = current.len() + 1 + unit.len() + 2 <= line_width;
        if fits || current == SENTINEL.trim_end() {
            current.push(' ');
            current.push_str(&unit);
        } else {
            current.push_str(" &");
            lines.push(std::mem::take(&mut current));
            current = format!("{SENTINEL}{unit}");
        }
    }
    lines.push(current);
    lines.push("!$omp end parallel do".to_string());
    lines.join("\n")
}

/// Render the directive as compilable text, wrapping so no physical line
/// exceeds `line_width`.
pub fn render_directive(d: &Directive, line_width: usize) -> String {
    render_with(d, line_width, None)
}

/// Same, but re-emitting each name with its original source spelling.
pub fn render_directive_preserving_case(
    d: &Directive,
    line_width: usize,
    spellings: &BTreeMap<Identifier, String>,
) -> String {
    render_with(d, line_width, Some(spellings))
}

/// Legacy report style: the private clause wrapped with `&`, one
/// free-standing `!$omp reduction(...)` line per variable. Not valid
/// OpenMP continuation syntax; for human review only.
pub fn render_paper_style(d: &Directive) -> String {
    let mut lines = vec!["!$omp parallel do private &".to_string()];
    let list: Vec<&str> = d.private.iter().map(|i| i.as_str()).collect();
    lines.push(format!("({}) &", list.join(", ")));
    lines.push(format!(
        "schedule({}, {})",
        d.schedule.policy, d.schedule.chunk
    ));
    for t in &d.reductions {
        lines.push(format!("!$omp reduction({}:{})", t.op.symbol(), t.variable));
    }
    lines.join("\n")
}

/// Minimal clause grammar used to check the render round-trip.
pub fn parse_directive(text: &str) -> std::result::Result<Directive, String> {
    let mut logical = String::new();
    let mut end_seen = false;
    for raw in text.lines() {
        let line = raw.trim();
        if line.eq_ignore_ascii_case("!$omp end parallel do") {
            end_seen = true;
            continue;
        }
        let body = line
            .strip_prefix("!$omp")
            .ok_or_else(|| format!("line without sentinel: {line:?}"))?
            .trim();
        let body = body.strip_suffix('&').unwrap_or(body).trim_end();
        logical.push(' ');
        logical.push_str(body);
    }
    if !end_seen {
        return Err("missing end parallel do".into());
    }
    let logical = logical.trim();
    let rest = logical
        .strip_prefix("parallel do")
        .ok_or_else(|| format!("not a parallel do directive: {logical:?}"))?;

    let mut private = Vec::new();
    let mut reductions = Vec::new();
    let mut schedule: Option<ScheduleSpec> = None;

    let mut s = rest.trim_start();
    while !s.is_empty() {
        let open = s.find('(').ok_or_else(|| format!("expected clause: {s:?}"))?;
        let name = s[..open].trim().to_ascii_lowercase();
        let mut depth = 0i32;
        let mut close = None;
        for (i, c) in s.char_indices().skip(open) {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or_else(|| format!("unbalanced clause: {s:?}"))?;
        let inner = &s[open + 1..close];
        match name.as_str() {
            "private" => {
                for item in inner.split(',') {
                    let id = canonicalize(item.trim()).map_err(|e| e.to_string())?;
                    private.push(id);
                }
            }
            "schedule" => {
                let (policy, chunk) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("bad schedule clause: {inner:?}"))?;
                let policy = match policy.trim().to_ascii_lowercase().as_str() {
                    "dynamic" => SchedulePolicy::Dynamic,
                    "static" => SchedulePolicy::Static,
                    other => return Err(format!("unknown schedule policy {other:?}")),
                };
                let chunk: u32 = chunk
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad chunk in {inner:?}"))?;
                schedule = Some(ScheduleSpec { policy, chunk });
            }
            "reduction" => {
                let (op, vars) = inner
                    .split_once(':')
                    .ok_or_else(|| format!("bad reduction clause: {inner:?}"))?;
                let op = ReductionOp::from_symbol(op.trim())
                    .ok_or_else(|| format!("unknown reduction operator {op:?}"))?;
                for item in vars.split(',') {
                    let variable = canonicalize(item.trim()).map_err(|e| e.to_string())?;
                    reductions.push(ReductionTerm { variable, op });
                }
            }
            other => return Err(format!("unknown clause {other:?}")),
        }
        s = s[close + 1..].trim_start();
    }

    Ok(Directive {
        private,
        reductions,
        schedule: schedule.ok_or("missing schedule clause")?,
    })
}
