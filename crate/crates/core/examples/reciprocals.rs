//! Regular numbers and their reciprocals, as in the scribes' igi tables.
//!
//! `cargo run --example reciprocals`

use susa::numeral::{self, ExactNumber};
use susa::numtheory::{is_regular, reciprocal, reciprocal_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, r) in reciprocal_table(81)? {
        println!("igi {:>4}  {}", numeral::format(&ExactNumber::from(n as i64))?, r);
    }

    // 28 is not regular: its reciprocal never terminates
    println!("28 regular? {}", is_regular(28)?);
    let r = reciprocal(&ExactNumber::from(28))?;
    println!("1/28 = {} (terminating: {})", r, r.is_terminating());

    let big = numeral::sexagesimal("26,40", 0)?;
    println!("igi 26,40 = {}", reciprocal(&big)?);
    Ok(())
}
