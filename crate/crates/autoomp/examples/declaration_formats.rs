//! The declaration reader accepts both typed declaration statements and
//! bare name lists, with continuations and comments.
//!
//! Run with: cargo run --example declaration_formats

use autoomp::parse_declarations;

fn main() {
    let typed = "\
! geometry
REAL(8) :: A(NX,NY), X = 0.0, SUM
INTEGER :: I, NX, &
           NY
";
    let bare = "a, x, sum\ni\nnx, ny";

    let from_typed = parse_declarations(typed).unwrap();
    let from_bare = parse_declarations(bare).unwrap();

    // array specs, initializers, comments and case all wash out
    assert_eq!(from_typed, from_bare);
    println!("declared names: {}", from_typed.render_names());
}
