//! Problem files: statement, procedure, modern route, expected values.

use std::fmt;

use indexmap::IndexMap;
use serde::Deserialize;
use thiserror::Error;

use super::expr::{EvalError, Expr};
use super::route::ModernRoute;
use crate::document::ProcedureDoc;
use crate::numeral::ExactNumber;
use crate::scribal::Procedure;

pub const FORMAT: &str = "susa-problem/1";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("problem {id}: {reason}")]
    Invalid { id: String, reason: String },
}

/// A named quantity and what the tablet calls it.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub name: String,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Equation {
    pub line: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A numeral the tablet gets wrong. The trace carries the corrected value
/// in the step labelled `quantity`; the printed text is only an annotation.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TextError {
    pub line: String,
    pub quantity: String,
    pub printed: String,
    pub corrected: ExactNumber,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedStep {
    label: String,
    value: ExactNumber,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    format: String,
    id: String,
    title: String,
    unknowns: Vec<Quantity>,
    #[serde(default)]
    derived: Vec<Quantity>,
    nonnegative: bool,
    statement: Vec<Equation>,
    #[serde(default)]
    inputs: IndexMap<String, ExactNumber>,
    procedure: Option<ProcedureDoc>,
    modern_route: Option<ModernRoute>,
    expected: IndexMap<String, ExactNumber>,
    #[serde(default)]
    expected_trace: Vec<ExpectedStep>,
    #[serde(default)]
    text_errors: Vec<TextError>,
    #[serde(default)]
    notes: Vec<String>,
}

/// A corpus problem. Construction checks that the expected bindings satisfy
/// the statement and that the procedure covers every unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub id: String,
    pub title: String,
    pub unknowns: Vec<Quantity>,
    pub derived: Vec<Quantity>,
    /// Negative bindings make a candidate inadmissible.
    pub nonnegative: bool,
    pub statement: Vec<Equation>,
    pub inputs: Vec<(String, ExactNumber)>,
    pub procedure: Option<Procedure>,
    pub modern_route: Option<ModernRoute>,
    pub expected: Vec<(String, ExactNumber)>,
    pub expected_trace: Vec<(String, ExactNumber)>,
    pub text_errors: Vec<TextError>,
    pub notes: Vec<String>,
}

/// Outcome of substituting bindings into one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationCheck {
    pub line: String,
    pub equation: String,
    pub lhs: Result<ExactNumber, EvalError>,
    pub rhs: Result<ExactNumber, EvalError>,
}

impl EquationCheck {
    pub fn satisfied(&self) -> bool {
        matches!((&self.lhs, &self.rhs), (Ok(l), Ok(r)) if l == r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<EquationCheck>,
}

impl Verification {
    pub fn satisfied_count(&self) -> usize {
        self.checks.iter().filter(|c| c.satisfied()).count()
    }

    pub fn all_satisfied(&self) -> bool {
        self.satisfied_count() == self.checks.len()
    }

    /// Per-equation lines, values rendered by `show`, then the summary.
    pub fn render_with(&self, show: &dyn Fn(&ExactNumber) -> String) -> String {
        let side = |s: &Result<ExactNumber, EvalError>| match s {
            Ok(v) => show(v),
            Err(e) => format!("<{e}>"),
        };
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.satisfied() { "satisfied" } else { "violated" };
            out.push_str(&format!(
                "{:<8}{}: {} vs {}  {status}\n",
                c.line,
                c.equation,
                side(&c.lhs),
                side(&c.rhs)
            ));
        }
        out.push_str(&format!(
            "{}/{} equations satisfied",
            self.satisfied_count(),
            self.checks.len()
        ));
        out
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|v| v.to_string()))
    }
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: ProblemFile = serde_json::from_str(text)?;
        let invalid = |reason: String| LoadError::Invalid {
            id: file.id.clone(),
            reason,
        };
        if file.format != FORMAT {
            return Err(invalid(format!("unsupported format {:?}", file.format)));
        }
        let procedure = file
            .procedure
            .clone()
            .map(Procedure::try_from)
            .transpose()
            .map_err(|e| invalid(e.to_string()))?;
        if procedure.is_none() && file.modern_route.is_none() {
            return Err(invalid("neither a procedure nor a modern route".into()));
        }
        let spec = ProblemSpec {
            id: file.id.clone(),
            title: file.title.clone(),
            unknowns: file.unknowns.clone(),
            derived: file.derived.clone(),
            nonnegative: file.nonnegative,
            statement: file.statement.clone(),
            inputs: file.inputs.clone().into_iter().collect(),
            procedure,
            modern_route: file.modern_route.clone(),
            expected: file.expected.clone().into_iter().collect(),
            expected_trace: file.expected_trace.iter().map(|s| (s.label.clone(), s.value.clone())).collect(),
            text_errors: file.text_errors.clone(),
            notes: file.notes.clone(),
        };
        spec.validate().map_err(invalid)?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), String> {
        let report = self
            .verify(&self.expected)
            .map_err(|name| format!("expected bindings lack {name}"))?;
        if !report.all_satisfied() {
            return Err(format!("expected bindings do not satisfy the statement:\n{report}"));
        }
        if let Some(proc) = &self.procedure {
            for input in proc.inputs() {
                if !self.inputs.iter().any(|(n, _)| n == input) {
                    return Err(format!("procedure input {input:?} has no value"));
                }
            }
            for q in &self.unknowns {
                if !proc.outputs().iter().any(|(n, _)| *n == q.name) {
                    return Err(format!("procedure does not output unknown {:?}", q.name));
                }
            }
            let labelled = |label: &str| {
                proc.steps()
                    .iter()
                    .any(|s| s.annotation.label.as_deref() == Some(label))
            };
            for (label, _) in &self.expected_trace {
                if !labelled(label) {
                    return Err(format!("expected trace names unknown label {label:?}"));
                }
            }
            for t in &self.text_errors {
                if !labelled(&t.quantity) {
                    return Err(format!("text error names unknown label {:?}", t.quantity));
                }
            }
        }
        Ok(())
    }

    pub fn is_unknown(&self, name: &str) -> bool {
        self.unknowns.iter().any(|q| q.name == name)
    }

    /// What the tablet calls `name`, or the name itself.
    pub fn role<'a>(&'a self, name: &'a str) -> &'a str {
        self.unknowns
            .iter()
            .chain(&self.derived)
            .find(|q| q.name == name)
            .map_or(name, |q| q.role.as_str())
    }

    /// Substitutes `bindings` into every equation. `Err` names the first
    /// unknown with no binding.
    pub fn verify(&self, bindings: &[(String, ExactNumber)]) -> Result<Verification, String> {
        for q in &self.unknowns {
            if !bindings.iter().any(|(n, _)| *n == q.name) {
                return Err(q.name.clone());
            }
        }
        let checks = self
            .statement
            .iter()
            .map(|eq| EquationCheck {
                line: eq.line.clone(),
                equation: eq.to_string(),
                lhs: eq.lhs.eval_in(bindings),
                rhs: eq.rhs.eval_in(bindings),
            })
            .collect();
        Ok(Verification { checks })
    }

    /// `bindings` restricted to the unknowns, in declaration order.
    pub fn project(&self, bindings: &[(String, ExactNumber)]) -> Vec<(String, ExactNumber)> {
        self.unknowns
            .iter()
            .filter_map(|q| {
                bindings
                    .iter()
                    .find(|(n, _)| *n == q.name)
                    .cloned()
            })
            .collect()
    }
}
