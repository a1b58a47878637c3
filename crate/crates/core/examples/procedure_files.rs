//! Loading a procedure from JSON and writing its trace document.
//!
//! `cargo run --example procedure_files`

use susa::document::{trace_to_json, ProcedureDoc};
use susa::numeral::sexagesimal;
use susa::scribal::{execute, Procedure};

const SMT11_1: &str = r#"{
  "name": "smt11.1",
  "inputs": ["subtracted"],
  "steps": [
    {"opcode": "put", "operands": [{"literal": "20"}], "target": "x", "line": "L3"},
    {"opcode": "reciprocal", "operands": [{"name": "x"}], "line": "L4"},
    {"opcode": "multiply", "operands": [{"step": 1}, {"name": "subtracted"}], "line": "L5"},
    {"opcode": "add", "operands": [{"step": 2}, {"name": "x"}], "line": "L6", "label": "sum"},
    {"opcode": "subtract", "operands": [{"step": 3}, {"name": "x"}], "line": "L7",
     "label": "y", "reconstructed": true}
  ],
  "outputs": {"sum": {"step": 3}, "y": {"step": 4}}
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc: ProcedureDoc = serde_json::from_str(SMT11_1)?;
    let proc = Procedure::try_from(doc)?;
    let trace = execute(&proc, &[("subtracted", sexagesimal("2,0", 0)?)])?;
    print!("{}", trace_to_json(&trace));

    // unknown opcodes are refused at load time
    let bad = SMT11_1.replace("\"reciprocal\"", "\"cube-root\"");
    assert!(serde_json::from_str::<ProcedureDoc>(&bad).is_err());
    Ok(())
}
