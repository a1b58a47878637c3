//! JSON documents for procedures and traces.
//!
//! Numbers are always written as `{"sexagesimal": "0;30", "rational": "1/2"}`
//! (`sexagesimal` is `null` when the expansion does not terminate). Object
//! keys come out in a fixed order and no floating point is involved, so
//! serializing the same trace twice gives the same bytes.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::numeral::ExactNumber;
use crate::scribal::{Annotation, Opcode, Operand, Procedure, ProcedureError, Step, Trace};

/// On-disk form of a [`Step`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub opcode: Opcode,
    #[serde(default)]
    pub operands: Vec<Operand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sic: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reconstructed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// On-disk form of a [`Procedure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcedureDoc {
    pub name: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    pub steps: Vec<StepDoc>,
    pub outputs: IndexMap<String, Operand>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&Step> for StepDoc {
    fn from(step: &Step) -> Self {
        let a = &step.annotation;
        Self {
            opcode: step.opcode,
            operands: step.operands.clone(),
            target: step.target.clone(),
            line: a.line.clone(),
            label: a.label.clone(),
            sic: a.sic.clone(),
            reconstructed: a.reconstructed,
            note: a.note.clone(),
        }
    }
}

impl From<StepDoc> for Step {
    fn from(doc: StepDoc) -> Self {
        Step {
            opcode: doc.opcode,
            operands: doc.operands,
            target: doc.target,
            annotation: Annotation {
                line: doc.line,
                label: doc.label,
                sic: doc.sic,
                reconstructed: doc.reconstructed,
                note: doc.note,
            },
        }
    }
}

impl From<&Procedure> for ProcedureDoc {
    fn from(proc: &Procedure) -> Self {
        Self {
            name: proc.name().to_string(),
            inputs: proc.inputs().to_vec(),
            steps: proc.steps().iter().map(StepDoc::from).collect(),
            outputs: proc.outputs().iter().cloned().collect(),
            notes: proc.notes().to_vec(),
        }
    }
}

impl TryFrom<ProcedureDoc> for Procedure {
    type Error = ProcedureError;

    fn try_from(doc: ProcedureDoc) -> Result<Self, Self::Error> {
        Procedure::new(
            doc.name,
            doc.inputs,
            doc.steps.into_iter().map(Step::from).collect(),
            doc.outputs.into_iter().collect(),
            doc.notes,
        )
    }
}

pub fn numeral_value(v: &ExactNumber) -> Value {
    serde_json::to_value(v).expect("numbers always serialize")
}

/// Ordered object of named numbers.
pub fn bindings_value(bindings: &[(String, ExactNumber)]) -> Value {
    let mut map = Map::new();
    for (name, v) in bindings {
        map.insert(name.clone(), numeral_value(v));
    }
    Value::Object(map)
}

/// The trace document: `procedure`, `inputs`, `steps[]`, `outputs`.
pub fn trace_value(trace: &Trace) -> Value {
    let steps: Vec<Value> = trace
        .entries
        .iter()
        .map(|e| {
            let mut step = Map::new();
            step.insert("index".into(), json!(e.index));
            step.insert("opcode".into(), json!(e.step.opcode));
            let operands: Vec<Value> = e
                .step
                .operands
                .iter()
                .zip(&e.operands)
                .map(|(r, v)| json!({ "ref": r, "value": numeral_value(v) }))
                .collect();
            step.insert("operands".into(), Value::Array(operands));
            if let Some(target) = &e.step.target {
                step.insert("target".into(), json!(target));
            }
            step.insert("result".into(), numeral_value(&e.result));
            let a = &e.step.annotation;
            if let Some(line) = &a.line {
                step.insert("line".into(), json!(line));
            }
            if let Some(label) = &a.label {
                step.insert("label".into(), json!(label));
            }
            if let Some(sic) = &a.sic {
                step.insert("sic".into(), json!(sic));
            }
            if a.reconstructed {
                step.insert("reconstructed".into(), json!(true));
            }
            if let Some(note) = &a.note {
                step.insert("note".into(), json!(note));
            }
            Value::Object(step)
        })
        .collect();

    let mut doc = Map::new();
    doc.insert("procedure".into(), json!(trace.procedure));
    doc.insert("inputs".into(), bindings_value(&trace.inputs));
    doc.insert("steps".into(), Value::Array(steps));
    doc.insert("outputs".into(), bindings_value(&trace.outputs));
    Value::Object(doc)
}

/// Pretty-printed trace document with a trailing newline.
pub fn trace_to_json(trace: &Trace) -> String {
    to_pretty(&trace_value(trace))
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scribal::{at, execute, lit, ProcedureBuilder, HEAD};

    fn sample() -> Procedure {
        let mut b = ProcedureBuilder::new("sample");
        let area = b.input("area");
        let sq = b.square(&area, at("L3").label("square"));
        b.hold(HEAD, &sq, at("L3"));
        let back = b.recall(HEAD, at("L5"));
        let r = b.divide(&back, &lit(7), at("L6").sic("9").reconstructed().note("irregular"));
        b.finish(vec![("r", r)]).unwrap()
    }

    #[test]
    fn procedure_round_trips_through_json() {
        let proc = sample();
        let text = serde_json::to_string_pretty(&ProcedureDoc::from(&proc)).unwrap();
        let doc: ProcedureDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Procedure::try_from(doc).unwrap(), proc);
    }

    #[test]
    fn trace_document_shape() {
        let trace = execute(&sample(), &[("area", ExactNumber::from(1200))]).unwrap();
        let v = trace_value(&trace);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["procedure", "inputs", "steps", "outputs"]);
        assert_eq!(v["inputs"]["area"]["sexagesimal"], "20,0");
        assert_eq!(v["steps"][0]["result"]["sexagesimal"], "6,40,0,0");
        assert_eq!(v["steps"][0]["operands"][0]["ref"]["name"], "area");
        assert_eq!(v["steps"][1]["target"], "head");
        // 1440000/7 does not terminate in base 60
        assert_eq!(v["outputs"]["r"]["sexagesimal"], Value::Null);
        assert_eq!(v["outputs"]["r"]["rational"], "1440000/7");
        assert_eq!(v["steps"][3]["sic"], "9");
        assert_eq!(v["steps"][3]["reconstructed"], true);
        assert_eq!(trace_to_json(&trace), trace_to_json(&trace.clone()));
    }

    #[test]
    fn loader_rejects_unknown_fields_and_opcodes() {
        let bad_opcode = r#"{"name":"p","steps":[{"opcode":"divine","operands":[]}],"outputs":{"o":{"step":0}}}"#;
        assert!(serde_json::from_str::<ProcedureDoc>(bad_opcode).is_err());
        let bad_field = r#"{"name":"p","steps":[],"outputs":{},"extra":1}"#;
        assert!(serde_json::from_str::<ProcedureDoc>(bad_field).is_err());
        let bad_numeral = r#"{"name":"p","steps":[{"opcode":"halve","operands":[{"literal":{"sexagesimal":"0;30","rational":"1/3"}}]}],"outputs":{"o":{"step":0}}}"#;
        assert!(serde_json::from_str::<ProcedureDoc>(bad_numeral).is_err());
        let good = r#"{"name":"p","steps":[{"opcode":"halve","operands":[{"literal":"0;30"}]}],"outputs":{"o":{"step":0}}}"#;
        let proc = Procedure::try_from(serde_json::from_str::<ProcedureDoc>(good).unwrap()).unwrap();
        assert_eq!(
            execute(&proc, &[]).unwrap().output("o"),
            Some(&ExactNumber::ratio(1, 4))
        );
    }
}
