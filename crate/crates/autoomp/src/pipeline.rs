//! End-to-end analysis: loop text + declaration text in, report out.

use std::collections::{BTreeMap, BTreeSet};

use crate::decl::{parse_declarations, DeclarationSet};
use crate::diag::{Code, Diagnostic, Severity};
use crate::directive::{
    compute_chunk, render_directive, render_directive_preserving_case, render_paper_style,
    Directive, ReductionTerm, SchedulePolicy, ScheduleSpec,
};
use crate::error::Result;
use crate::ident::{canonicalize, Identifier};
use crate::lexer::{tokenize, TokenKind};
use crate::parser::{parse_loop, LoopNest};
use crate::reduction::{detect_reductions, split_private_and_reduction, ReductionAnalysis};
use crate::report::{AnalysisReport, ReductionEntry};
use crate::scope::{collect_assignments, intersect_with_declarations, pre_classify, PreClassification, ScopeSet};

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub cache_line_bytes: u32,
    pub element_bytes: u32,
    pub schedule_policy: SchedulePolicy,
    pub line_width: usize,
    pub preserve_case: bool,
    pub paper_style_report: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        // defaults reproduce schedule(dynamic, 8) on 64-byte cache lines
        // holding REAL(8) elements
        AnalysisOptions {
            cache_line_bytes: 64,
            element_bytes: 8,
            schedule_policy: SchedulePolicy::Dynamic,
            line_width: 72,
            preserve_case: false,
            paper_style_report: false,
        }
    }
}

/// Full result of one pipeline run, intermediate stages included.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub loop_nest: LoopNest,
    pub declarations: DeclarationSet,
    pub scope: ScopeSet,
    pub pre: PreClassification,
    pub intersection: Vec<Identifier>,
    pub reduction: ReductionAnalysis,
    /// Final private list: intersection minus reductions and manual-sync
    /// variables, plus the inner loop indices.
    pub private: Vec<Identifier>,
    pub directive: Directive,
    pub report: AnalysisReport,
}

impl Analysis {
    /// True when a variable needs hand-written synchronization, i.e. the
    /// emitted directive alone does not parallelize the loop safely.
    pub fn needs_manual_sync(&self) -> bool {
        !self.reduction.manual_sync.is_empty()
    }
}

/// First-seen source spelling of every identifier, for `--preserve-case`.
pub fn spellings_of(loop_text: &str) -> BTreeMap<Identifier, String> {
    let mut map = BTreeMap::new();
    if let Ok(tokens) = tokenize(loop_text) {
        for t in tokens {
            if t.kind == TokenKind::Identifier {
                if let Ok(id) = canonicalize(&t.text) {
                    map.entry(id).or_insert(t.text);
                }
            }
        }
    }
    map
}

pub fn analyze(loop_text: &str, decl_text: &str, opts: &AnalysisOptions) -> Result<Analysis> {
    let tokens = tokenize(loop_text)?;
    let loop_nest = parse_loop(&tokens)?;
    let declarations = parse_declarations(decl_text)?;

    let scope = collect_assignments(&loop_nest);
    let (pre, mut diagnostics) = pre_classify(&scope, &loop_nest);
    let (intersection, decl_diags) = intersect_with_declarations(&pre, &declarations);
    diagnostics.extend(decl_diags);

    let candidate_set: BTreeSet<Identifier> = intersection.iter().cloned().collect();
    let reduction = detect_reductions(&loop_nest, &candidate_set);
    diagnostics.extend(reduction.diagnostics.clone());

    let (mut private, reductions) = split_private_and_reduction(&candidate_set, &reduction);
    for index in &loop_nest.inner_indices {
        if !private.contains(index) {
            private.push(index.clone());
        }
    }
    private.sort();

    if !loop_nest.trailing_loop_lines.is_empty() {
        let lines = loop_nest
            .trailing_loop_lines
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        diagnostics.push(Diagnostic::new(
            Severity::Info,
            Code::MultipleLoops,
            format!("further top-level loop(s) at line {lines} were not analyzed; run the tool once per loop"),
            loop_nest.trailing_loop_lines.first().copied(),
        ));
    }

    let chunk = compute_chunk(opts.cache_line_bytes, opts.element_bytes)?;
    let directive = Directive {
        private: private.clone(),
        reductions: reductions.iter().map(ReductionTerm::from).collect(),
        schedule: ScheduleSpec {
            policy: opts.schedule_policy,
            chunk,
        },
    };

    let directive_text = if opts.paper_style_report {
        render_paper_style(&directive)
    } else if opts.preserve_case {
        render_directive_preserving_case(&directive, opts.line_width, &spellings_of(loop_text))
    } else {
        render_directive(&directive, opts.line_width)
    };

    let report = AnalysisReport {
        declared: declarations.names.clone(),
        scope: scope.all_targets.clone(),
        intersection: intersection.clone(),
        reductions: reductions
            .iter()
            .map(|r| ReductionEntry {
                var: r.variable.clone(),
                op: r.op,
            })
            .collect(),
        directive_text,
        diagnostics,
    };

    Ok(Analysis {
        loop_nest,
        declarations,
        scope,
        pre,
        intersection,
        reduction,
        private,
        directive,
        report,
    })
}
