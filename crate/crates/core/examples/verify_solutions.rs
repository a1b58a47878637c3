//! Substituting answers back into the statements, and the tablet's slips.
//!
//! `cargo run --example verify_solutions`

use susa::corpus::{corpus, run_problem, verify_solution};
use susa::equations::Mode;
use susa::numeral::sexagesimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // SMT 11.2 as written ends with width 0;20
    let printed = vec![
        ("x".to_string(), sexagesimal("0;30", 0)?),
        ("y".to_string(), sexagesimal("0;20", 0)?),
    ];
    println!("{}\n", verify_solution("smt11.2", &printed)?);

    let spec = corpus().get("smt11.2")?;
    println!("{}\n", verify_solution("smt11.2", &spec.expected)?);

    // the corrected values are what the trace carries; the slips are notes
    for id in ["smt11.2", "smt19"] {
        let run = run_problem(id, Mode::Scribal)?;
        for t in &corpus().get(id)?.text_errors {
            let step = run.trace.by_label(&t.quantity).expect("labelled");
            println!("{id} {}: tablet has {}, trace has {}", t.line, t.printed, step.result);
        }
    }
    Ok(())
}
