//! Writing a tablet computation as a procedure and tracing it.
//!
//! The first problem of SMT 8 solves (28z)^2 - 20(28z) = 4,40,0 by
//! completing the square, then divides by the irregular 28.
//!
//! `cargo run --example scribal_procedure`

use susa::numeral::{sexagesimal, ExactNumber};
use susa::scribal::{at, compare_trace, execute, lit, ProcedureBuilder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut b = ProcedureBuilder::new("smt8.1-core");
    let area = b.input("area");
    let pa = b.multiply(&lit(7), &lit(4), at("L4").label("provisional-area"));
    let scaled = b.multiply(&pa, &area, at("L5").label("scaled-area"));
    let half = b.halve(&lit(20), at("L6").label("half"));
    let sq = b.square(&half, at("L6"));
    let sum = b.add(&sq, &scaled, at("L7").label("completed-square"));
    let root = b.square_root(&sum, at("L7").label("root"));
    let w = b.add(&half, &root, at("L8"));
    let z = b.divide(&w, &pa, at("L8").label("z").note("28 is irregular"));
    let proc = b.finish(vec![("z", z)])?;

    let trace = execute(&proc, &[("area", sexagesimal("10,0", 0)?)])?;
    for entry in &trace.entries {
        println!("{entry}");
    }

    let expected = vec![
        ("completed-square".to_string(), sexagesimal("4,41,40", 0)?),
        ("root".to_string(), sexagesimal("2,10", 0)?),
        ("z".to_string(), ExactNumber::from(5)),
    ];
    let cmp = compare_trace(&trace, &expected)?;
    println!("{cmp}");
    assert!(cmp.passed());
    Ok(())
}
