//! A guarded maximum update cannot be expressed as a reduction clause;
//! the analysis flags it for manual synchronization instead.
//!
//! Run with: cargo run --example max_pattern

use autoomp::{analyze, AnalysisOptions};

fn main() {
    let loop_text = "\
do i = 1,NX
  if(priv_max.lt.a(i)) then
    priv_max = a(i)
    priv_maxi = i
  end if
end do
";
    let decls = "REAL(8) :: A(NX), PRIV_MAX\nINTEGER :: PRIV_MAXI, NX";

    let analysis = analyze(loop_text, decls, &AnalysisOptions::default()).unwrap();

    // PRIV_MAX is only assigned when the condition reads its current
    // value, so the update depends on cross-iteration state. No private
    // copy or reduction clause is sound; a critical section is needed.
    assert!(analysis.needs_manual_sync());
    println!("manual sync required for: {:?}", analysis.reduction.manual_sync);
    for d in &analysis.report.diagnostics {
        println!("{d}");
    }
}
