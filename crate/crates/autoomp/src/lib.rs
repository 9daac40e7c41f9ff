//! Generate ready-to-paste OpenMP `parallel do` directives for Fortran
//! do-loops.
//!
//! Given a free-form loop fragment and the list of variables declared in
//! the enclosing subroutine, the analysis classifies every variable the
//! loop writes:
//!
//! - array elements subscripted by the parallel loop index stay **shared**,
//! - scalars and everything else written per iteration become **private**,
//! - associative self-updates (`sum = sum + ...`) become **reduction**
//!   clauses with their operator,
//! - updates a reduction clause cannot express (max-with-index guards,
//!   mixed operators, array accumulation) are flagged for manual
//!   synchronization.
//!
//! The emitted directive carries a cache-line-aware `schedule` clause:
//! with 64-byte cache lines and 8-byte reals the chunk is 8 iterations,
//! which keeps threads from sharing cache lines on the partitioned index.
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, or use the `autoomp` binary:
//!
//! ```text
//! autoomp loop.f90 decls.f90
//! ```

pub mod cli;
pub mod decl;
pub mod diag;
pub mod directive;
pub mod error;
pub mod ident;
pub mod lexer;
pub mod parser;
pub mod pipeline;
pub mod reduction;
pub mod report;
pub mod scope;

pub use decl::{parse_declarations, DeclarationSet};
pub use diag::{Code, Diagnostic, Severity};
pub use directive::{
    compute_chunk, parse_directive, render_directive, Directive, ReductionTerm, SchedulePolicy,
    ScheduleSpec,
};
pub use error::{Error, Result};
pub use ident::{canonicalize, Identifier};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_loop, LoopNest, Statement, StatementKind};
pub use pipeline::{analyze, Analysis, AnalysisOptions};
pub use reduction::{
    detect_reductions, split_private_and_reduction, ReductionAnalysis, ReductionOp, ReductionSpec,
};
pub use report::{render_json_report, render_text_report, AnalysisReport, ReductionEntry};
pub use scope::{
    collect_assignments, intersect_with_declarations, pre_classify, AssignmentKind,
    AssignmentRecord, PreClassification, ScopeSet,
};
