//! Scope analysis: which variables does the loop write, and how.
//!
//! A variable counts as written when it is the target of an assignment, a
//! nested DO index, or an actual argument of a CALL (bare name or array
//! element). Array writes whose every subscript mentions the parallel index
//! are safe to share; everything else must be privatized.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{Code, Diagnostic, Severity};
use crate::decl::DeclarationSet;
use crate::ident::Identifier;
use crate::parser::{identifiers_in, LoopNest, StatementKind};
use crate::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentKind {
    Direct,
    SubLoopIndex,
    CallArgument,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRecord {
    pub target: Identifier,
    pub kind: AssignmentKind,
    /// Identifiers lexically occurring in the target's subscripts; empty
    /// for scalars.
    pub subscript_identifiers: BTreeSet<Identifier>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScopeSet {
    pub records: Vec<AssignmentRecord>,
    /// Sorted unique union of record targets.
    pub all_targets: Vec<Identifier>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreClassification {
    pub shared_by_index_rule: BTreeSet<Identifier>,
    pub privatization_candidates: BTreeSet<Identifier>,
    pub loop_indices: BTreeSet<Identifier>,
}

/// True when the argument token list is a bare variable or an array
/// element; returns its base name and subscript identifiers.
fn call_argument_target(arg: &[Token]) -> Option<(Identifier, BTreeSet<Identifier>)> {
    match arg {
        [only] if only.kind == TokenKind::Identifier => {
            let id = crate::ident::canonicalize(&only.text).ok()?;
            Some((id, BTreeSet::new()))
        }
        [head, open, .., close]
            if head.kind == TokenKind::Identifier && open.is_punct("(") && close.is_punct(")") =>
        {
            // require the parens to wrap the full remainder: F(I) yes, F(I)+1 no
            let mut depth = 0i32;
            for (i, t) in arg.iter().enumerate().skip(1) {
                if t.is_punct("(") {
                    depth += 1;
                } else if t.is_punct(")") {
                    depth -= 1;
                    if depth == 0 && i != arg.len() - 1 {
                        return None;
                    }
                }
            }
            let id = crate::ident::canonicalize(&head.text).ok()?;
            Some((id, identifiers_in(&arg[2..arg.len() - 1])))
        }
        _ => None,
    }
}

/// One pass over the loop body collecting every observed write.
pub fn collect_assignments(loop_nest: &LoopNest) -> ScopeSet {
    let mut records = Vec::new();
    for body in &loop_nest.body {
        let line = body.statement.line;
        match &body.statement.kind {
            StatementKind::Assignment {
                target, subscripts, ..
            } => {
                let mut subscript_identifiers = BTreeSet::new();
                for s in subscripts {
                    subscript_identifiers.extend(identifiers_in(s));
                }
                records.push(AssignmentRecord {
                    target: target.clone(),
                    kind: AssignmentKind::Direct,
                    subscript_identifiers,
                    line,
                });
            }
            StatementKind::DoHeader { index, .. } => {
                records.push(AssignmentRecord {
                    target: index.clone(),
                    kind: AssignmentKind::SubLoopIndex,
                    subscript_identifiers: BTreeSet::new(),
                    line,
                });
            }
            StatementKind::CallStmt { args, .. } => {
                for arg in args {
                    if let Some((target, subscript_identifiers)) = call_argument_target(arg) {
                        records.push(AssignmentRecord {
                            target,
                            kind: AssignmentKind::CallArgument,
                            subscript_identifiers,
                            line,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    let all_targets: Vec<Identifier> = records
        .iter()
        .map(|r| r.target.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ScopeSet {
        records,
        all_targets,
    }
}

/// Apply the index-dependence rule: an array written with the parallel
/// index in every subscript stays shared; everything else written in the
/// loop must be privatized.
pub fn pre_classify(scope: &ScopeSet, loop_nest: &LoopNest) -> (PreClassification, Vec<Diagnostic>) {
    let mut loop_indices: BTreeSet<Identifier> = BTreeSet::new();
    loop_indices.insert(loop_nest.parallel_index.clone());
    loop_indices.extend(loop_nest.inner_indices.iter().cloned());

    let mut by_target: BTreeMap<&Identifier, Vec<&AssignmentRecord>> = BTreeMap::new();
    for r in &scope.records {
        by_target.entry(&r.target).or_default().push(r);
    }

    let mut pre = PreClassification {
        loop_indices: loop_indices.clone(),
        ..Default::default()
    };
    let mut diagnostics = Vec::new();

    for (target, records) in &by_target {
        if loop_indices.contains(target) {
            if records.iter().any(|r| r.kind == AssignmentKind::Direct) {
                diagnostics.push(Diagnostic::new(
                    Severity::Info,
                    Code::IndexAlsoAssigned,
                    format!("loop index {target} is also assigned directly; it stays a loop index"),
                    records
                        .iter()
                        .find(|r| r.kind == AssignmentKind::Direct)
                        .map(|r| r.line),
                ));
            }
            continue;
        }
        let all_subscripted = records.iter().all(|r| !r.subscript_identifiers.is_empty());
        let any_subscripted = records.iter().any(|r| !r.subscript_identifiers.is_empty());
        if all_subscripted
            && records
                .iter()
                .all(|r| r.subscript_identifiers.contains(&loop_nest.parallel_index))
        {
            pre.shared_by_index_rule.insert((*target).clone());
        } else {
            if any_subscripted && !all_subscripted {
                diagnostics.push(Diagnostic::new(
                    Severity::Warning,
                    Code::MixedUsage,
                    format!("{target} is written both as a scalar and as an array element; privatizing"),
                    records.first().map(|r| r.line),
                ));
            }
            pre.privatization_candidates.insert((*target).clone());
        }
    }
    (pre, diagnostics)
}

/// Restrict privatization candidates to names the declaration file knows.
/// Unknown candidates are reported, never silently dropped.
pub fn intersect_with_declarations(
    pre: &PreClassification,
    decls: &DeclarationSet,
) -> (Vec<Identifier>, Vec<Diagnostic>) {
    let mut intersection = Vec::new();
    let mut diagnostics = Vec::new();
    for candidate in &pre.privatization_candidates {
        if decls.contains(candidate) {
            intersection.push(candidate.clone());
        } else {
            diagnostics.push(Diagnostic::new(
                Severity::Warning,
                Code::NotDeclared,
                format!(
                    "{candidate} is written in the loop but absent from the declaration file; \
                     likely a global or dummy argument - review manually"
                ),
                None,
            ));
        }
    }
    (intersection, diagnostics)
}
