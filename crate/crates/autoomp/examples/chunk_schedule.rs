//! Derive the schedule chunk from cache-line geometry and render a
//! directive at different line widths.
//!
//! Run with: cargo run --example chunk_schedule

use autoomp::{
    compute_chunk, render_directive, Directive, ReductionOp, ReductionTerm, SchedulePolicy,
    ScheduleSpec,
};

fn main() {
    // A chunk the size of one cache line keeps neighbouring iterations of
    // different threads off the same line, avoiding false sharing.
    for (cache, elem) in [(64, 8), (128, 8), (64, 4), (32, 8), (4, 8)] {
        println!(
            "{cache:>3}-byte line / {elem}-byte elements -> chunk {}",
            compute_chunk(cache, elem).unwrap()
        );
    }

    let directive = Directive {
        private: ["I", "X", "PHI", "RHO"]
            .iter()
            .map(|n| autoomp::canonicalize(n).unwrap())
            .collect(),
        reductions: vec![ReductionTerm {
            variable: autoomp::canonicalize("SUM").unwrap(),
            op: ReductionOp::Add,
        }],
        schedule: ScheduleSpec {
            policy: SchedulePolicy::Dynamic,
            chunk: compute_chunk(64, 8).unwrap(),
        },
    };

    println!("\n-- width 72 --\n{}", render_directive(&directive, 72));
    println!("\n-- width 40 --\n{}", render_directive(&directive, 40));
}
