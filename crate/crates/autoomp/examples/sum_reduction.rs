//! Classify a nested array-summing loop and print its full report.
//!
//! Run with: cargo run --example sum_reduction

use autoomp::{analyze, render_text_report, AnalysisOptions};

fn main() {
    let loop_text = "\
do j = 1,NY
  do i = 1,NX
    x = f(i,j)
    a(i,j) = g(x)
    sum = sum + a(i,j)
  end do
end do
";
    let decls = "REAL(8) :: A(NX,NY), X, SUM\nINTEGER :: I, NX, NY";

    let analysis = analyze(loop_text, decls, &AnalysisOptions::default()).unwrap();

    // X is written directly, I drives the inner loop: both become private.
    // A is only ever written at a subscript containing the parallel index J,
    // so each thread touches its own slice and A stays shared. SUM is a
    // self-accumulation, so it is lifted into a reduction clause instead.
    println!("{}", render_text_report(&analysis.report));
}
