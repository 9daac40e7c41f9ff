//! Show all three supported reduction operators and the one shape that
//! looks like a reduction but is not.
//!
//! Run with: cargo run --example reduction_operators

use autoomp::{analyze, AnalysisOptions};

fn main() {
    let loop_text = "\
do j = 1, NCELLS
  do ii = 1, NP
    volph = volph + volm(ii)
    totm = totm - dm(ii,j)
    totsie = totsie * sie(ii)
    resid = tol - resid
  end do
end do
";
    let decls = "REAL(8) :: VOLPH, TOTM, TOTSIE, RESID, TOL\nREAL(8) :: VOLM(NP), DM(NP,NCELLS), SIE(NP)\nINTEGER :: II, NP, NCELLS";

    let analysis = analyze(loop_text, decls, &AnalysisOptions::default()).unwrap();

    for r in &analysis.reduction.reductions {
        println!("reduction({}:{})", r.op.symbol(), r.variable);
    }

    // RESID = TOL - RESID subtracts the accumulator from the expression.
    // That order does not compose across partial results, so it cannot be
    // a `-` reduction; RESID is flagged for manual synchronization.
    assert!(analysis
        .reduction
        .manual_sync
        .iter()
        .any(|v| v.as_str() == "RESID"));
    println!("needs manual sync: {:?}", analysis.reduction.manual_sync);
}
