//! Emit the analysis report as JSON for downstream tooling.
//!
//! Run with: cargo run --example json_report

use autoomp::{analyze, render_json_report, AnalysisOptions};

fn main() {
    let loop_text = "\
do k = 1, N
  t = b(k) * 2
  c(k) = t
  acc = acc + t
end do
";
    let decls = "REAL(8) :: B(N), C(N), T, ACC\nINTEGER :: N";

    let analysis = analyze(loop_text, decls, &AnalysisOptions::default()).unwrap();
    println!("{}", render_json_report(&analysis.report));
}
