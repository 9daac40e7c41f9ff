//! Reduction detection.
//!
//! A privatization candidate is a reduction variable when every direct
//! assignment to it is an associative self-update under one operator:
//! `V = V + e`, `V = e + V`, `V = V - e`, `V = V * e` or `V = e * V`, with
//! `V` absent from `e`. Self-referencing updates that fit no pattern
//! (max-with-index guards, `V = e - V`, array-element accumulation, mixed
//! operators) cannot be expressed with a reduction clause and are flagged
//! for manual synchronization instead.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diag::{Code, Diagnostic, Severity};
use crate::ident::{canonicalize, Identifier};
use crate::lexer::{Token, TokenKind};
use crate::parser::{LoopNest, StatementKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReductionOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Subtract,
    #[serde(rename = "*")]
    Multiply,
}

impl ReductionOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            ReductionOp::Add => "+",
            ReductionOp::Subtract => "-",
            ReductionOp::Multiply => "*",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(ReductionOp::Add),
            "-" => Some(ReductionOp::Subtract),
            "*" => Some(ReductionOp::Multiply),
            _ => None,
        }
    }
}

impl fmt::Display for ReductionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSpec {
    pub variable: Identifier,
    pub op: ReductionOp,
    /// Source lines of the updates, in order.
    pub lines: Vec<u32>,
}

/// Everything the detector found: clean reductions in first-update order,
/// plus the variables that need hand-written synchronization.
#[derive(Debug, Clone, Default)]
pub struct ReductionAnalysis {
    pub reductions: Vec<ReductionSpec>,
    pub manual_sync: Vec<Identifier>,
    pub diagnostics: Vec<Diagnostic>,
}

fn contains_ident(tokens: &[Token], id: &Identifier) -> bool {
    tokens.iter().any(|t| {
        t.kind == TokenKind::Identifier
            && canonicalize(&t.text).is_ok_and(|c| &c == id)
    })
}

fn op_of(token: &Token) -> Option<ReductionOp> {
    if token.kind == TokenKind::Operator {
        ReductionOp::from_symbol(&token.text)
    } else {
        None
    }
}

fn is_ident(token: &Token, id: &Identifier) -> bool {
    token.kind == TokenKind::Identifier
        && canonicalize(&token.text).is_ok_and(|c| &c == id)
}

/// Match `V op expr` / `expr op V` at the top level of the RHS.
/// `expr - V` is excluded: partial sums cannot be composed under it.
fn match_update(rhs: &[Token], variable: &Identifier) -> Option<ReductionOp> {
    if rhs.len() < 3 {
        return None;
    }
    // V op expr
    if is_ident(&rhs[0], variable) {
        if let Some(op) = op_of(&rhs[1]) {
            let tail = &rhs[2..];
            if !tail.is_empty() && !contains_ident(tail, variable) {
                return Some(op);
            }
        }
    }
    // expr op V, commutative operators only
    let last = rhs.len() - 1;
    if is_ident(&rhs[last], variable) {
        let before = &rhs[last - 1];
        if let Some(op @ (ReductionOp::Add | ReductionOp::Multiply)) = op_of(before) {
            let mut depth = 0i32;
            for t in &rhs[..last - 1] {
                if t.is_punct("(") {
                    depth += 1;
                } else if t.is_punct(")") {
                    depth -= 1;
                }
            }
            let head = &rhs[..last - 1];
            if depth == 0 && !head.is_empty() && !contains_ident(head, variable) {
                return Some(op);
            }
        }
    }
    None
}

struct DirectWrite<'a> {
    line: u32,
    scalar: bool,
    rhs: &'a [Token],
    guarded_by_self: bool,
}

/// Scan the loop for reduction updates among the candidate set.
pub fn detect_reductions(loop_nest: &LoopNest, candidates: &BTreeSet<Identifier>) -> ReductionAnalysis {
    let mut analysis = ReductionAnalysis::default();
    // first-update source order over candidates
    let mut order: Vec<Identifier> = Vec::new();
    for body in &loop_nest.body {
        if let StatementKind::Assignment { target, .. } = &body.statement.kind {
            if candidates.contains(target) && !order.contains(target) {
                order.push(target.clone());
            }
        }
    }

    for variable in order {
        let writes: Vec<DirectWrite> = loop_nest
            .body
            .iter()
            .filter_map(|body| match &body.statement.kind {
                StatementKind::Assignment {
                    target,
                    subscripts,
                    rhs,
                } if *target == variable => Some(DirectWrite {
                    line: body.statement.line,
                    scalar: subscripts.is_empty(),
                    rhs,
                    guarded_by_self: body.guard_idents.contains(&variable),
                }),
                _ => None,
            })
            .collect();

        let mut ops: Vec<(ReductionOp, u32)> = Vec::new();
        let mut unmatched_self_refs: Vec<u32> = Vec::new();
        let mut plain = false;

        for w in &writes {
            let self_in_rhs = contains_ident(w.rhs, &variable);
            if w.guarded_by_self {
                // conditional update testing the variable itself, e.g.
                // if (m < a(i)) m = a(i) - reduction cannot express it
                unmatched_self_refs.push(w.line);
            } else if self_in_rhs {
                match if w.scalar { match_update(w.rhs, &variable) } else { None } {
                    Some(op) => ops.push((op, w.line)),
                    None => unmatched_self_refs.push(w.line),
                }
            } else {
                plain = true;
            }
        }

        if !unmatched_self_refs.is_empty() {
            manual_sync(&mut analysis, &variable, &unmatched_self_refs, "a self-referencing update that no reduction clause expresses");
            continue;
        }
        if ops.is_empty() || plain {
            // plain recomputation (or a reset mixed in): stays private
            continue;
        }
        let first_op = ops[0].0;
        if ops.iter().any(|(op, _)| *op != first_op) {
            let lines: Vec<u32> = ops.iter().map(|(_, l)| *l).collect();
            manual_sync(&mut analysis, &variable, &lines, "updates under two different operators");
            continue;
        }
        analysis.reductions.push(ReductionSpec {
            variable,
            op: first_op,
            lines: ops.into_iter().map(|(_, l)| l).collect(),
        });
    }
    analysis
}

fn manual_sync(analysis: &mut ReductionAnalysis, variable: &Identifier, lines: &[u32], why: &str) {
    let listed = lines
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    analysis.manual_sync.push(variable.clone());
    analysis.diagnostics.push(Diagnostic::new(
        Severity::Error,
        Code::ManualSynchronizationRequired,
        format!("{variable} has {why} (line {listed}); synchronize it by hand (e.g. a critical section)"),
        lines.first().copied(),
    ));
}

/// Remove reduction and manual-sync variables from the private list.
pub fn split_private_and_reduction(
    candidates: &BTreeSet<Identifier>,
    analysis: &ReductionAnalysis,
) -> (Vec<Identifier>, Vec<ReductionSpec>) {
    let private: Vec<Identifier> = candidates
        .iter()
        .filter(|c| {
            !analysis.reductions.iter().any(|r| &r.variable == *c)
                && !analysis.manual_sync.contains(c)
        })
        .cloned()
        .collect();
    (private, analysis.reductions.clone())
}
