//! Wrap a loop in its generated directive, the way `autoomp --in-place`
//! rewrites the source file.
//!
//! Run with: cargo run --example in_place_rewrite

use autoomp::{analyze, render_directive, AnalysisOptions};

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

    // the last rendered line is the end sentinel; everything before it
    // goes above the loop header, the sentinel goes after `end do`
    let rendered = render_directive(&analysis.directive, 72);
    let (head, tail) = rendered.rsplit_once('\n').unwrap();

    println!("{head}");
    print!("{loop_text}");
    println!("{tail}");
}
