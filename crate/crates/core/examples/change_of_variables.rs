//! Sum-and-product systems and rational roots.
//!
//! x^2 - xy + y^2 = 4, x^2y + xy^2 = 16 becomes u^2 - 3v = 4, uv = 16 with
//! u = x + y, v = xy, hence u^3 - 4u - 48 = 0.
//!
//! `cargo run --example change_of_variables`

use susa::equations::{eval_polynomial, rational_roots, solve_symmetric, solve_symmetric_traced};
use susa::numeral::{sexagesimal, ExactNumber};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cubic: Vec<ExactNumber> = [1, 0, -4, -48].map(ExactNumber::from).to_vec();
    let roots = rational_roots(&cubic)?;
    println!("rational roots of u^3 - 4u - 48: {roots:?}");
    let u = &roots[0];
    assert!(eval_polynomial(&cubic, u).is_zero());
    let v = ExactNumber::from(16).div(u)?;
    let (x, y) = solve_symmetric(u, &v)?;
    println!("u = {u}, v = {v} -> x = {x}, y = {y}");

    // SMT 17 by the usual method: x + y = 1, xy = 0;13,20
    let sol = solve_symmetric_traced(&ExactNumber::one(), &sexagesimal("0;13,20", 0)?)?;
    for e in &sol.trace.entries {
        println!("  {e}");
    }
    println!("x = {}, y = {}", sol.larger, sol.smaller);
    Ok(())
}
