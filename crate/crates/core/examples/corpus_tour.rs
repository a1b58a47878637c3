//! Every corpus problem, solved by each route it has.
//!
//! `cargo run --example corpus_tour`

use susa::corpus::{corpus, cross_check, run_problem};
use susa::equations::Mode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in corpus().problems() {
        println!("{} - {}", spec.id, spec.title);
        for (mode, present) in [(Mode::Scribal, spec.procedure.is_some()), (Mode::Modern, spec.modern_route.is_some())] {
            if !present {
                continue;
            }
            let run = run_problem(&spec.id, mode)?;
            let shown: Vec<String> = run
                .bindings
                .iter()
                .map(|(n, v)| format!("{} = {v}", spec.role(n)))
                .collect();
            println!("  {mode:<8} {} ({} steps)", shown.join(", "), run.trace.entries.len());
            for d in &run.diagnostics {
                println!("           {d}");
            }
        }
        if spec.procedure.is_some() && spec.modern_route.is_some() {
            let check = cross_check(&spec.id)?;
            println!("  routes agree: {}", check.agree());
        }
    }
    Ok(())
}
