//! A straight-line interpreter whose instructions are the operations a scribe
//! performs on a tablet: multiply, make the reciprocal, halve, square, take
//! the square root, add, subtract, "let it hold your head" and so on.
//!
//! A [`Procedure`] has no branches or loops. Executing one yields a
//! [`Trace`] with the resolved operands and the result of every step, tagged
//! with the tablet line it came from.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeral::{ArithmeticError, ExactNumber};
use crate::numtheory::{self, NumberTheoryError};

/// Register used by "let it hold your head" when no other name is given.
pub const HEAD: &str = "head";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Opcode {
    /// Binds a value to a name ("put down 4 as the width"). No arithmetic.
    Put,
    Multiply,
    /// "What should I put to `b` which will give me `a`?" Exact even for an
    /// irregular divisor.
    Divide,
    Reciprocal,
    Halve,
    Square,
    SquareRoot,
    Add,
    Subtract,
    /// Stores its operand in a register and yields it.
    Hold,
    /// Reads a register.
    Recall,
}

impl Opcode {
    pub fn arity(self) -> usize {
        match self {
            Opcode::Multiply | Opcode::Divide | Opcode::Add | Opcode::Subtract => 2,
            Opcode::Put
            | Opcode::Reciprocal
            | Opcode::Halve
            | Opcode::Square
            | Opcode::SquareRoot
            | Opcode::Hold => 1,
            Opcode::Recall => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Opcode::Put => "put",
            Opcode::Multiply => "multiply",
            Opcode::Divide => "divide",
            Opcode::Reciprocal => "reciprocal",
            Opcode::Halve => "halve",
            Opcode::Square => "square",
            Opcode::SquareRoot => "square-root",
            Opcode::Add => "add",
            Opcode::Subtract => "subtract",
            Opcode::Hold => "hold",
            Opcode::Recall => "recall",
        }
    }

    fn needs_target(self) -> bool {
        matches!(self, Opcode::Put | Opcode::Hold | Opcode::Recall)
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a step takes a value from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operand {
    Literal(ExactNumber),
    /// Result of an earlier step.
    Step(usize),
    /// A declared input or a name bound by `Put`.
    Name(String),
    /// Current content of a register.
    Register(String),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Literal(v) => write!(f, "{v}"),
            Operand::Step(i) => write!(f, "#{i}"),
            Operand::Name(n) => f.write_str(n),
            Operand::Register(r) => write!(f, "[{r}]"),
        }
    }
}

pub fn lit(value: impl Into<ExactNumber>) -> Operand {
    Operand::Literal(value.into())
}

/// Tablet provenance of a step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Annotation {
    /// Tablet line, e.g. `L7` or `rev.L5`.
    pub line: Option<String>,
    /// Name used when comparing against expected values.
    pub label: Option<String>,
    /// What the tablet actually has where it differs from the computed value.
    pub sic: Option<String>,
    /// The step is not on the tablet; it completes the computation.
    pub reconstructed: bool,
    pub note: Option<String>,
}

/// Starts an annotation for tablet line `line`.
pub fn at(line: &str) -> Annotation {
    Annotation {
        line: Some(line.to_string()),
        ..Annotation::default()
    }
}

impl Annotation {
    pub fn label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn sic(mut self, printed: &str) -> Self {
        self.sic = Some(printed.to_string());
        self
    }

    pub fn reconstructed(mut self) -> Self {
        self.reconstructed = true;
        self
    }

    pub fn note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub opcode: Opcode,
    pub operands: Vec<Operand>,
    /// Register for `Hold`/`Recall`, bound name for `Put`.
    pub target: Option<String>,
    pub annotation: Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcedureError {
    #[error("step {step}: {opcode} takes {expected} operand(s), got {found}")]
    Arity {
        step: usize,
        opcode: Opcode,
        expected: usize,
        found: usize,
    },
    #[error("step {step} refers to step {target}, which does not precede it")]
    ForwardReference { step: usize, target: usize },
    #[error("step {step}: {opcode} needs a target name")]
    MissingTarget { step: usize, opcode: Opcode },
    #[error("step {step}: {opcode} takes no target name")]
    UnexpectedTarget { step: usize, opcode: Opcode },
    #[error("label {0:?} is used twice")]
    DuplicateLabel(String),
    #[error("procedure has no outputs")]
    NoOutputs,
    #[error("output {0:?} refers to a step that does not exist")]
    DanglingOutput(String),
}

/// A straight-line scribal program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Procedure {
    name: String,
    inputs: Vec<String>,
    steps: Vec<Step>,
    outputs: Vec<(String, Operand)>,
    notes: Vec<String>,
}

impl Procedure {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        steps: Vec<Step>,
        outputs: Vec<(String, Operand)>,
        notes: Vec<String>,
    ) -> Result<Self, ProcedureError> {
        let proc = Self {
            name: name.into(),
            inputs,
            steps,
            outputs,
            notes,
        };
        proc.validate()?;
        Ok(proc)
    }

    fn validate(&self) -> Result<(), ProcedureError> {
        let mut labels = HashSet::new();
        for (i, step) in self.steps.iter().enumerate() {
            let expected = step.opcode.arity();
            if step.operands.len() != expected {
                return Err(ProcedureError::Arity {
                    step: i,
                    opcode: step.opcode,
                    expected,
                    found: step.operands.len(),
                });
            }
            match (step.opcode.needs_target(), &step.target) {
                (true, None) => {
                    return Err(ProcedureError::MissingTarget {
                        step: i,
                        opcode: step.opcode,
                    })
                }
                (false, Some(_)) => {
                    return Err(ProcedureError::UnexpectedTarget {
                        step: i,
                        opcode: step.opcode,
                    })
                }
                _ => {}
            }
            for op in &step.operands {
                if let Operand::Step(target) = op {
                    if *target >= i {
                        return Err(ProcedureError::ForwardReference {
                            step: i,
                            target: *target,
                        });
                    }
                }
            }
            if let Some(label) = &step.annotation.label {
                if !labels.insert(label.clone()) {
                    return Err(ProcedureError::DuplicateLabel(label.clone()));
                }
            }
        }
        if self.outputs.is_empty() {
            return Err(ProcedureError::NoOutputs);
        }
        for (name, op) in &self.outputs {
            if let Operand::Step(target) = op {
                if *target >= self.steps.len() {
                    return Err(ProcedureError::DanglingOutput(name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn outputs(&self) -> &[(String, Operand)] {
        &self.outputs
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// Incremental construction of a [`Procedure`]; each pushed step returns an
/// operand referring to its result.
#[derive(Debug, Clone)]
pub struct ProcedureBuilder {
    name: String,
    inputs: Vec<String>,
    steps: Vec<Step>,
    notes: Vec<String>,
}

impl ProcedureBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            inputs: Vec::new(),
            steps: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str) -> Operand {
        self.inputs.push(name.to_string());
        Operand::Name(name.to_string())
    }

    pub fn note(&mut self, note: &str) -> &mut Self {
        self.notes.push(note.to_string());
        self
    }

    pub fn push(
        &mut self,
        opcode: Opcode,
        operands: Vec<Operand>,
        target: Option<&str>,
        annotation: Annotation,
    ) -> Operand {
        self.steps.push(Step {
            opcode,
            operands,
            target: target.map(str::to_string),
            annotation,
        });
        Operand::Step(self.steps.len() - 1)
    }

    pub fn put(&mut self, name: &str, value: Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Put, vec![value], Some(name), ann);
        Operand::Name(name.to_string())
    }

    pub fn multiply(&mut self, a: &Operand, b: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Multiply, vec![a.clone(), b.clone()], None, ann)
    }

    /// `dividend / divisor`.
    pub fn divide(&mut self, dividend: &Operand, divisor: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Divide, vec![dividend.clone(), divisor.clone()], None, ann)
    }

    pub fn reciprocal(&mut self, a: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Reciprocal, vec![a.clone()], None, ann)
    }

    pub fn halve(&mut self, a: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Halve, vec![a.clone()], None, ann)
    }

    pub fn square(&mut self, a: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Square, vec![a.clone()], None, ann)
    }

    pub fn square_root(&mut self, a: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::SquareRoot, vec![a.clone()], None, ann)
    }

    pub fn add(&mut self, a: &Operand, b: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Add, vec![a.clone(), b.clone()], None, ann)
    }

    /// `minuend - subtrahend`.
    pub fn subtract(&mut self, minuend: &Operand, subtrahend: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Subtract, vec![minuend.clone(), subtrahend.clone()], None, ann)
    }

    pub fn hold(&mut self, register: &str, a: &Operand, ann: Annotation) -> Operand {
        self.push(Opcode::Hold, vec![a.clone()], Some(register), ann)
    }

    pub fn recall(&mut self, register: &str, ann: Annotation) -> Operand {
        self.push(Opcode::Recall, Vec::new(), Some(register), ann)
    }

    pub fn finish(self, outputs: Vec<(&str, Operand)>) -> Result<Procedure, ProcedureError> {
        Procedure::new(
            self.name,
            self.inputs,
            self.steps,
            outputs
                .into_iter()
                .map(|(n, op)| (n.to_string(), op))
                .collect(),
            self.notes,
        )
    }
}

/// How `Subtract` treats a greater subtrahend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Only smaller-from-greater; anything else is [`ArithmeticError::NegativeResult`].
    #[default]
    Scribal,
    /// Signed rational arithmetic, for modern solution routes.
    Signed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecErrorKind {
    #[error("input {0:?} is not bound")]
    MissingInput(String),
    #[error("unbound reference {0}")]
    UnboundReference(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
}

/// An execution failure, located at a step and its tablet line when known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ExecError {
    pub step: Option<usize>,
    pub line: Option<String>,
    pub kind: ExecErrorKind,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.step, &self.line) {
            (Some(s), Some(l)) => write!(f, "step {s} ({l}): {}", self.kind),
            (Some(s), None) => write!(f, "step {s}: {}", self.kind),
            _ => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub index: usize,
    pub step: Step,
    /// Operand values as read. For `Recall`, the register content.
    pub operands: Vec<ExactNumber>,
    pub result: ExactNumber,
}

impl TraceEntry {
    /// Re-applies the opcode to the recorded operands.
    pub fn replay(&self) -> Result<ExactNumber, ExecErrorKind> {
        let op = self.step.opcode;
        if op == Opcode::Recall {
            return Ok(self.operands[0].clone());
        }
        apply(op, &self.operands, Arithmetic::Signed)
    }

    /// `L7  add(1,40, 4,40,0) → 4,41,40`, numbers rendered by `show`.
    pub fn render_with(&self, show: &dyn Fn(&ExactNumber) -> String) -> String {
        let line = self.step.annotation.line.as_deref().unwrap_or("-");
        let args: Vec<String> = self.operands.iter().map(show).collect();
        let mut out = format!(
            "{line:<7} {}({}) \u{2192} {}",
            self.step.opcode,
            args.join(", "),
            show(&self.result)
        );
        if let Some(target) = &self.step.target {
            out.push_str(&format!("  [{target}]"));
        }
        if let Some(label) = &self.step.annotation.label {
            out.push_str(&format!("  {label}"));
        }
        if let Some(sic) = &self.step.annotation.sic {
            out.push_str(&format!("  (sic: tablet has {sic})"));
        }
        if self.step.annotation.reconstructed {
            out.push_str("  (reconstructed)");
        }
        out
    }
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|v| v.to_string()))
    }
}

/// The executed step log of a procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub procedure: String,
    pub inputs: Vec<(String, ExactNumber)>,
    pub entries: Vec<TraceEntry>,
    pub outputs: Vec<(String, ExactNumber)>,
}

impl Trace {
    pub fn output(&self, name: &str) -> Option<&ExactNumber> {
        self.outputs.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn by_label(&self, label: &str) -> Option<&TraceEntry> {
        self.entries
            .iter()
            .find(|e| e.step.annotation.label.as_deref() == Some(label))
    }

    pub fn results(&self) -> impl Iterator<Item = &ExactNumber> {
        self.entries.iter().map(|e| &e.result)
    }

    /// Appends another trace's entries, renumbering its step indices.
    pub fn extend_from(&mut self, other: &Trace) {
        let offset = self.entries.len();
        for e in &other.entries {
            let mut e = e.clone();
            e.index += offset;
            for op in &mut e.step.operands {
                if let Operand::Step(i) = op {
                    *i += offset;
                }
            }
            self.entries.push(e);
        }
    }
}

pub fn execute(
    proc: &Procedure,
    inputs: &[(&str, ExactNumber)],
) -> Result<Trace, ExecError> {
    execute_with(proc, inputs, Arithmetic::Scribal)
}

/// Runs `proc` step by step.
pub fn execute_with(
    proc: &Procedure,
    inputs: &[(&str, ExactNumber)],
    arithmetic: Arithmetic,
) -> Result<Trace, ExecError> {
    let mut names: HashMap<String, ExactNumber> = HashMap::new();
    let mut bound_inputs = Vec::with_capacity(proc.inputs.len());
    for name in &proc.inputs {
        let value = inputs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| ExecError {
                step: None,
                line: None,
                kind: ExecErrorKind::MissingInput(name.clone()),
            })?;
        names.insert(name.clone(), value.clone());
        bound_inputs.push((name.clone(), value));
    }

    let mut registers: HashMap<String, ExactNumber> = HashMap::new();
    let mut entries: Vec<TraceEntry> = Vec::with_capacity(proc.steps.len());

    for (index, step) in proc.steps.iter().enumerate() {
        let fail = |kind: ExecErrorKind| ExecError {
            step: Some(index),
            line: step.annotation.line.clone(),
            kind,
        };
        let mut operands = Vec::with_capacity(step.operands.len());
        for op in &step.operands {
            operands.push(resolve(op, &entries, &names, &registers).map_err(fail)?);
        }
        let result = match step.opcode {
            Opcode::Put => {
                let target = step.target.clone().expect("validated");
                names.insert(target, operands[0].clone());
                operands[0].clone()
            }
            Opcode::Hold => {
                let target = step.target.clone().expect("validated");
                registers.insert(target, operands[0].clone());
                operands[0].clone()
            }
            Opcode::Recall => {
                let target = step.target.as_deref().expect("validated");
                let value = registers.get(target).cloned().ok_or_else(|| {
                    fail(ExecErrorKind::UnboundReference(format!("register {target:?}")))
                })?;
                operands.push(value.clone());
                value
            }
            op => apply(op, &operands, arithmetic).map_err(fail)?,
        };
        entries.push(TraceEntry {
            index,
            step: step.clone(),
            operands,
            result,
        });
    }

    let mut outputs = Vec::with_capacity(proc.outputs.len());
    for (name, op) in &proc.outputs {
        let value = resolve(op, &entries, &names, &registers).map_err(|kind| ExecError {
            step: None,
            line: None,
            kind,
        })?;
        outputs.push((name.clone(), value));
    }

    Ok(Trace {
        procedure: proc.name.clone(),
        inputs: bound_inputs,
        entries,
        outputs,
    })
}

fn resolve(
    op: &Operand,
    entries: &[TraceEntry],
    names: &HashMap<String, ExactNumber>,
    registers: &HashMap<String, ExactNumber>,
) -> Result<ExactNumber, ExecErrorKind> {
    match op {
        Operand::Literal(v) => Ok(v.clone()),
        Operand::Step(i) => entries
            .get(*i)
            .map(|e| e.result.clone())
            .ok_or_else(|| ExecErrorKind::UnboundReference(format!("step {i}"))),
        Operand::Name(n) => names
            .get(n)
            .cloned()
            .ok_or_else(|| ExecErrorKind::UnboundReference(format!("name {n:?}"))),
        Operand::Register(r) => registers
            .get(r)
            .cloned()
            .ok_or_else(|| ExecErrorKind::UnboundReference(format!("register {r:?}"))),
    }
}

fn apply(op: Opcode, args: &[ExactNumber], arithmetic: Arithmetic) -> Result<ExactNumber, ExecErrorKind> {
    Ok(match op {
        Opcode::Put | Opcode::Hold => args[0].clone(),
        Opcode::Recall => unreachable!("recall reads a register"),
        Opcode::Multiply => args[0].mul(&args[1]),
        Opcode::Divide => args[0].div(&args[1])?,
        Opcode::Reciprocal => numtheory::reciprocal(&args[0])?,
        Opcode::Halve => args[0].halve(),
        Opcode::Square => args[0].square(),
        Opcode::SquareRoot => numtheory::sqrt_exact(&args[0])?,
        Opcode::Add => args[0].add(&args[1]),
        Opcode::Subtract => match arithmetic {
            Arithmetic::Scribal => args[0].checked_sub(&args[1])?,
            Arithmetic::Signed => args[0].sub(&args[1]),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("no trace step is labelled {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatch {
    pub label: String,
    pub expected: ExactNumber,
    pub actual: ExactNumber,
}

impl LabelMatch {
    pub fn matched(&self) -> bool {
        self.expected == self.actual
    }
}

/// Per-label outcome of [`compare_trace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub rows: Vec<LabelMatch>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(LabelMatch::matched)
    }

    pub fn matched_count(&self) -> usize {
        self.rows.iter().filter(|r| r.matched()).count()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &LabelMatch> {
        self.rows.iter().filter(|r| !r.matched())
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} matched",
            if self.passed() { "pass" } else { "fail" },
            self.matched_count(),
            self.rows.len()
        )?;
        for m in self.mismatches() {
            write!(f, "\n  {}: expected {}, got {}", m.label, m.expected, m.actual)?;
        }
        Ok(())
    }
}

/// Checks labelled trace results against expected values, exactly.
pub fn compare_trace(
    actual: &Trace,
    expected: &[(String, ExactNumber)],
) -> Result<Comparison, CompareError> {
    let by_label: BTreeMap<&str, &ExactNumber> = actual
        .entries
        .iter()
        .filter_map(|e| e.step.annotation.label.as_deref().map(|l| (l, &e.result)))
        .collect();
    let rows = expected
        .iter()
        .map(|(label, value)| {
            by_label
                .get(label.as_str())
                .map(|actual| LabelMatch {
                    label: label.clone(),
                    expected: value.clone(),
                    actual: (*actual).clone(),
                })
                .ok_or_else(|| CompareError::UnknownLabel(label.clone()))
        })
        .collect::<Result<_, _>>()?;
    Ok(Comparison { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> ExactNumber {
        ExactNumber::from(v)
    }

    #[test]
    fn square_then_halve() {
        let mut b = ProcedureBuilder::new("demo");
        let input = b.input("n");
        let sq = b.square(&input, Annotation::default());
        let half = b.halve(&sq, Annotation::default());
        let proc = b.finish(vec![("half", half)]).unwrap();
        let trace = execute(&proc, &[("n", n(4))]).unwrap();
        let results: Vec<_> = trace.results().cloned().collect();
        assert_eq!(results, vec![n(16), n(8)]);
        assert_eq!(trace.output("half"), Some(&n(8)));
    }

    #[test]
    fn subtract_greater_fails_with_location() {
        let mut b = ProcedureBuilder::new("bad");
        let d = b.subtract(&lit(5), &lit(7), at("L9"));
        let proc = b.finish(vec![("d", d)]).unwrap();
        let err = execute(&proc, &[]).unwrap_err();
        assert_eq!(err.step, Some(0));
        assert_eq!(err.line.as_deref(), Some("L9"));
        assert!(matches!(
            err.kind,
            ExecErrorKind::Arithmetic(ArithmeticError::NegativeResult { .. })
        ));
        // signed arithmetic allows it
        let trace = execute_with(&proc, &[], Arithmetic::Signed).unwrap();
        assert_eq!(trace.output("d"), Some(&n(-2)));
    }

    #[test]
    fn hold_and_recall() {
        let mut b = ProcedureBuilder::new("memo");
        let x = b.input("x");
        b.hold(HEAD, &x, at("L3"));
        let back = b.recall(HEAD, at("L5"));
        let proc = b.finish(vec![("back", back)]).unwrap();
        let trace = execute(&proc, &[("x", ExactNumber::ratio(7, 3))]).unwrap();
        assert_eq!(trace.output("back"), Some(&ExactNumber::ratio(7, 3)));

        let mut b = ProcedureBuilder::new("early");
        let back = b.recall(HEAD, at("L1"));
        let proc = b.finish(vec![("back", back)]).unwrap();
        let err = execute(&proc, &[]).unwrap_err();
        assert!(matches!(err.kind, ExecErrorKind::UnboundReference(_)));
    }

    #[test]
    fn put_binds_names() {
        let mut b = ProcedureBuilder::new("put");
        let w = b.put("width", lit(4), at("L2"));
        let p = b.multiply(&w, &lit(3), at("L3"));
        let proc = b.finish(vec![("p", p)]).unwrap();
        assert_eq!(execute(&proc, &[]).unwrap().output("p"), Some(&n(12)));
    }

    #[test]
    fn errors_carry_kind() {
        let mut b = ProcedureBuilder::new("errs");
        let r = b.square_root(&lit(2), at("L1"));
        let proc = b.finish(vec![("r", r)]).unwrap();
        let err = execute(&proc, &[]).unwrap_err();
        assert!(matches!(
            err.kind,
            ExecErrorKind::NumberTheory(NumberTheoryError::NotPerfectSquare(_))
        ));

        let mut b = ProcedureBuilder::new("errs");
        let r = b.reciprocal(&lit(0), at("L1"));
        let proc = b.finish(vec![("r", r)]).unwrap();
        assert!(execute(&proc, &[]).is_err());

        let mut b = ProcedureBuilder::new("errs");
        let x = b.input("x");
        let proc = b.finish(vec![("x", x)]).unwrap();
        assert_eq!(
            execute(&proc, &[]).unwrap_err().kind,
            ExecErrorKind::MissingInput("x".into())
        );
    }

    #[test]
    fn validation() {
        let step = |opcode, operands: Vec<Operand>, target: Option<&str>| Step {
            opcode,
            operands,
            target: target.map(str::to_string),
            annotation: Annotation::default(),
        };
        let arity = Procedure::new(
            "p",
            vec![],
            vec![step(Opcode::Add, vec![lit(1)], None)],
            vec![("o".into(), Operand::Step(0))],
            vec![],
        );
        assert!(matches!(arity, Err(ProcedureError::Arity { .. })));
        let forward = Procedure::new(
            "p",
            vec![],
            vec![step(Opcode::Square, vec![Operand::Step(0)], None)],
            vec![("o".into(), Operand::Step(0))],
            vec![],
        );
        assert!(matches!(forward, Err(ProcedureError::ForwardReference { .. })));
        let no_target = Procedure::new(
            "p",
            vec![],
            vec![step(Opcode::Hold, vec![lit(1)], None)],
            vec![("o".into(), Operand::Step(0))],
            vec![],
        );
        assert!(matches!(no_target, Err(ProcedureError::MissingTarget { .. })));
        let no_outputs = Procedure::new("p", vec![], vec![], vec![], vec![]);
        assert_eq!(no_outputs, Err(ProcedureError::NoOutputs));
        let dangling = Procedure::new("p", vec![], vec![], vec![("o".into(), Operand::Step(3))], vec![]);
        assert!(matches!(dangling, Err(ProcedureError::DanglingOutput(_))));

        let mut b = ProcedureBuilder::new("dup");
        let a = b.square(&lit(2), at("L1").label("x"));
        b.square(&a, at("L2").label("x"));
        assert!(matches!(b.finish(vec![("a", a)]), Err(ProcedureError::DuplicateLabel(_))));
    }

    #[test]
    fn comparison() {
        let mut b = ProcedureBuilder::new("cmp");
        let a = b.square(&lit(10), at("L6").label("square"));
        let s = b.add(&a, &lit(16800), at("L7").label("sum"));
        let proc = b.finish(vec![("s", s)]).unwrap();
        let trace = execute(&proc, &[]).unwrap();

        let good = vec![("square".to_string(), n(100)), ("sum".to_string(), n(16900))];
        let report = compare_trace(&trace, &good).unwrap();
        assert!(report.passed());
        assert_eq!(report.matched_count(), 2);

        let bad = vec![("square".to_string(), n(100)), ("sum".to_string(), n(16901))];
        let report = compare_trace(&trace, &bad).unwrap();
        assert!(!report.passed());
        assert_eq!(report.mismatches().map(|m| m.label.as_str()).collect::<Vec<_>>(), vec!["sum"]);

        assert!(compare_trace(&trace, &[]).unwrap().passed());
        assert_eq!(
            compare_trace(&trace, &[("nope".to_string(), n(1))]),
            Err(CompareError::UnknownLabel("nope".into()))
        );
    }

    #[test]
    fn render_line() {
        let mut b = ProcedureBuilder::new("r");
        let s = b.add(&lit(100), &lit(16800), at("L7").label("sum"));
        let proc = b.finish(vec![("s", s)]).unwrap();
        let trace = execute(&proc, &[]).unwrap();
        assert_eq!(
            trace.entries[0].to_string(),
            "L7      add(1,40, 4,40,0) \u{2192} 4,41,40  sum"
        );
    }
}
