//! Staged analysis reports.
//!
//! The text report reproduces the five staged outputs with their
//! historical headers, then the directive and the diagnostics. Note the
//! first header says "Private Arguments" although it lists every declared
//! variable; the wording is kept verbatim for compatibility with existing
//! tooling. The JSON form carries the same data with stable key order.

use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::ident::Identifier;
use crate::reduction::ReductionOp;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionEntry {
    pub var: Identifier,
    pub op: ReductionOp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Every name from the declaration file, sorted.
    pub declared: Vec<Identifier>,
    /// Every name written in the loop, sorted.
    pub scope: Vec<Identifier>,
    /// Privatization candidates present in both, sorted.
    pub intersection: Vec<Identifier>,
    /// Detected reductions in first-update source order.
    pub reductions: Vec<ReductionEntry>,
    pub directive_text: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl AnalysisReport {
    pub fn reduction_vars(&self) -> Vec<&Identifier> {
        self.reductions.iter().map(|r| &r.var).collect()
    }

    pub fn reduction_ops(&self) -> Vec<ReductionOp> {
        self.reductions.iter().map(|r| r.op).collect()
    }
}

pub const HEADER_DECLARED: &str = "All Private Arguments in the Declaration";
pub const HEADER_SCOPE: &str = "All Arguments in the Scope";
pub const HEADER_INTERSECTION: &str = "Intersection Between Declaration and Scope Arguments";
pub const HEADER_REDUCTION_ARGS: &str = "Reduction Clauses Args";
pub const HEADER_REDUCTION_OPS: &str = "Reduction Clauses Operators";
pub const HEADER_DIRECTIVE: &str = "Ready to OpenMP Parallel Code";

fn bracketed<I: AsRef<str>>(items: impl IntoIterator<Item = I>) -> String {
    let quoted: Vec<String> = items
        .into_iter()
        .map(|i| format!("'{}'", i.as_ref()))
        .collect();
    format!("[{}]", quoted.join(", "))
}

pub fn render_text_report(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut section = |header: &str, body: String| {
        out.push_str(header);
        out.push_str(":\n");
        out.push_str(&body);
        out.push_str("\n\n");
    };
    section(HEADER_DECLARED, bracketed(r.declared.iter().map(|i| i.as_str())));
    section(HEADER_SCOPE, bracketed(r.scope.iter().map(|i| i.as_str())));
    section(
        HEADER_INTERSECTION,
        bracketed(r.intersection.iter().map(|i| i.as_str())),
    );
    section(
        HEADER_REDUCTION_ARGS,
        bracketed(r.reductions.iter().map(|e| e.var.as_str())),
    );
    section(
        HEADER_REDUCTION_OPS,
        bracketed(r.reductions.iter().map(|e| e.op.symbol())),
    );
    section(HEADER_DIRECTIVE, r.directive_text.clone());
    out.push_str("Diagnostics:\n");
    if r.diagnostics.is_empty() {
        out.push_str("(none)\n");
    } else {
        for d in &r.diagnostics {
            out.push_str(&format!("{d}\n"));
        }
    }
    out
}

pub fn render_json_report(r: &AnalysisReport) -> String {
    // struct serialization cannot fail
    serde_json::to_string_pretty(r).expect("report serialization")
}
