//! Trial-division factorization and exact square roots.
//!
//! `cargo run --example factor_and_roots`

use susa::numeral;
use susa::numtheory::{factor, sqrt_exact, NumberTheoryError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = numeral::sexagesimal("3,50,35,23,27,24,26,40", 0)?;
    let f = factor(n.to_integer().expect("integer"))?;
    println!("{} = {} = {f}", numeral::format(&n)?, f.value());
    println!("perfect square? {}  root = {:?}", f.is_perfect_square(), f.sqrt());
    println!("sqrt = {}", sqrt_exact(&n)?);

    let frac = numeral::sexagesimal("0;12,36,15", 0)?;
    println!("sqrt(0;12,36,15) = {}", sqrt_exact(&frac)?);

    match sqrt_exact(&numeral::sexagesimal("2", 0)?) {
        Err(NumberTheoryError::NotPerfectSquare(v)) => println!("{v} has no exact root"),
        other => unreachable!("{other:?}"),
    }
    Ok(())
}
