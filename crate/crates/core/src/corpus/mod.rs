//! The problem corpus: six tablet problems and five modern examples, each
//! with its statement, expected answers and one or two solution routes.
//!
//! Problem files live in `data/` and are compiled into the library.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::equations::Mode;
use crate::numeral::ExactNumber;
use crate::scribal::{execute, ExecError, Trace};

mod expr;
mod problem;
mod route;

pub use expr::{EvalError, Expr};
pub use problem::{EquationCheck, Equation, LoadError, ProblemSpec, Quantity, TextError, Verification, FORMAT};
pub use route::{Candidate, ModernRoute, RouteKind, RouteOutcome, Stage};

const FILES: [&str; 11] = [
    include_str!("../../data/smt8.1.json"),
    include_str!("../../data/smt8.2.json"),
    include_str!("../../data/smt11.1.json"),
    include_str!("../../data/smt11.2.json"),
    include_str!("../../data/smt17.json"),
    include_str!("../../data/smt19.json"),
    include_str!("../../data/modern.1.json"),
    include_str!("../../data/modern.2.json"),
    include_str!("../../data/modern.3.json"),
    include_str!("../../data/modern.4.json"),
    include_str!("../../data/modern.5.json"),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown problem {0:?}")]
    UnknownProblem(String),
    #[error("problem {id} has no {mode} route")]
    UnsupportedMode { id: String, mode: Mode },
    #[error("no binding for {name:?} in problem {id}")]
    MissingBinding { id: String, name: String },
    #[error("problem {id}: {source}")]
    Exec { id: String, source: ExecError },
    #[error("problem {id}: no admissible solution ({})", .diagnostics.join("; "))]
    NoAdmissibleSolution { id: String, diagnostics: Vec<String> },
    #[error("problem {id}: {mode} bindings do not satisfy the statement")]
    Unsatisfied { id: String, mode: Mode },
}

/// The loaded problem set, in presentation order.
#[derive(Debug)]
pub struct Corpus {
    problems: Vec<ProblemSpec>,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Result<&ProblemSpec, CorpusError> {
        self.problems
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| CorpusError::UnknownProblem(id.to_string()))
    }

    pub fn problems(&self) -> &[ProblemSpec] {
        &self.problems
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.problems.iter().map(|p| p.id.as_str())
    }
}

/// The built-in corpus, parsed on first use.
pub fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| Corpus {
        problems: FILES
            .iter()
            .map(|text| ProblemSpec::from_json(text).unwrap_or_else(|e| panic!("built-in corpus: {e}")))
            .collect(),
    })
}

/// Result of running one route of a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub id: String,
    pub mode: Mode,
    pub bindings: Vec<(String, ExactNumber)>,
    pub trace: Trace,
    /// Complete candidates the admissibility rule threw out.
    pub rejected: Vec<Candidate>,
    pub diagnostics: Vec<String>,
}

impl Run {
    pub fn get(&self, name: &str) -> Option<&ExactNumber> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

pub fn run_problem(id: &str, mode: Mode) -> Result<Run, CorpusError> {
    let spec = corpus().get(id)?;
    let run = match mode {
        Mode::Scribal => run_scribal(spec)?,
        Mode::Modern => run_modern(spec)?,
    };
    let report = spec.verify(&run.bindings).map_err(|name| CorpusError::MissingBinding {
        id: id.to_string(),
        name,
    })?;
    if !report.all_satisfied() {
        return Err(CorpusError::Unsatisfied {
            id: id.to_string(),
            mode,
        });
    }
    Ok(run)
}

fn run_scribal(spec: &ProblemSpec) -> Result<Run, CorpusError> {
    let proc = spec.procedure.as_ref().ok_or_else(|| CorpusError::UnsupportedMode {
        id: spec.id.clone(),
        mode: Mode::Scribal,
    })?;
    let inputs: Vec<(&str, ExactNumber)> = spec.inputs.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    let trace = execute(proc, &inputs).map_err(|source| CorpusError::Exec {
        id: spec.id.clone(),
        source,
    })?;
    Ok(Run {
        id: spec.id.clone(),
        mode: Mode::Scribal,
        bindings: trace.outputs.clone(),
        trace,
        rejected: Vec::new(),
        diagnostics: Vec::new(),
    })
}

fn run_modern(spec: &ProblemSpec) -> Result<Run, CorpusError> {
    let route = spec.modern_route.as_ref().ok_or_else(|| CorpusError::UnsupportedMode {
        id: spec.id.clone(),
        mode: Mode::Modern,
    })?;
    let outcome = route.run(&format!("{}/modern", spec.id), spec.nonnegative);
    let mut diagnostics = outcome.pruned;
    let (admissible, rejected): (Vec<Candidate>, Vec<Candidate>) =
        outcome.candidates.into_iter().partition(Candidate::is_admissible);
    for c in &rejected {
        let shown: Vec<String> = c
            .bindings
            .iter()
            .map(|(n, v)| format!("{n} = {}", v.to_ratio_string()))
            .collect();
        diagnostics.push(format!(
            "rejected {}: {} negative",
            shown.join(", "),
            c.negative.join(", ")
        ));
    }
    let mut admissible = admissible.into_iter();
    let Some(chosen) = admissible.next() else {
        return Err(CorpusError::NoAdmissibleSolution {
            id: spec.id.clone(),
            diagnostics,
        });
    };
    let extra = admissible.count();
    if extra > 0 {
        diagnostics.push(format!("{extra} further admissible solution(s) not reported"));
    }
    Ok(Run {
        id: spec.id.clone(),
        mode: Mode::Modern,
        bindings: chosen.bindings,
        trace: chosen.trace,
        rejected,
        diagnostics,
    })
}

/// Substitutes `bindings` into the statement of problem `id`.
pub fn verify_solution(id: &str, bindings: &[(String, ExactNumber)]) -> Result<Verification, CorpusError> {
    let spec = corpus().get(id)?;
    spec.verify(bindings).map_err(|name| CorpusError::MissingBinding {
        id: id.to_string(),
        name,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub id: String,
    /// Scribal solution restricted to the unknowns.
    pub scribal: Vec<(String, ExactNumber)>,
    pub modern: Vec<(String, ExactNumber)>,
    pub rejected: Vec<Candidate>,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.scribal == self.modern
    }
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &[(String, ExactNumber)]| {
            b.iter().map(|(n, v)| format!("{n} = {v}")).collect::<Vec<_>>().join(", ")
        };
        writeln!(f, "scribal: {}", show(&self.scribal))?;
        writeln!(f, "modern:  {}", show(&self.modern))?;
        for c in &self.rejected {
            writeln!(f, "rejected: {} ({} negative)", show(&c.bindings), c.negative.join(", "))?;
        }
        f.write_str(if self.agree() { "agree" } else { "DISAGREE" })
    }
}

/// Runs both routes and compares their solutions on the unknowns.
pub fn cross_check(id: &str) -> Result<CrossCheck, CorpusError> {
    let spec = corpus().get(id)?;
    let scribal = run_problem(id, Mode::Scribal)?;
    let modern = run_problem(id, Mode::Modern)?;
    Ok(CrossCheck {
        id: id.to_string(),
        scribal: spec.project(&scribal.bindings),
        modern: spec.project(&modern.bindings),
        rejected: modern.rejected,
    })
}

/// Algebraic identities the tablets rely on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `(x+y)² − [xy + (x−y)²] = 3xy`
    Smt17,
    /// `(x⁴ + x²y²/2)² = x⁶(x²+y²) + x⁴y⁴/4`
    Smt19,
    /// `(x+y)² − (x−y)² = 4xy`
    SquareDifference,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::Smt17, Identity::Smt19, Identity::SquareDifference];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Smt17 => "smt17-identity",
            Identity::Smt19 => "smt19-identity",
            Identity::SquareDifference => "square-difference",
        }
    }

    /// Both sides, evaluated exactly.
    pub fn sides(self, x: &ExactNumber, y: &ExactNumber) -> (ExactNumber, ExactNumber) {
        let sum_sq = x.add(y).square();
        let diff_sq = x.sub(y).square();
        let xy = x.mul(y);
        match self {
            Identity::Smt17 => (sum_sq.sub(&xy.add(&diff_sq)), xy.mul(&ExactNumber::from(3))),
            Identity::Smt19 => {
                let (x2, y2) = (x.square(), y.square());
                let x4 = x2.square();
                let lhs = x4.add(&x2.mul(&y2).halve()).square();
                let x6 = x4.mul(&x2);
                let quarter = x4.mul(&y2.square()).halve().halve();
                (lhs, x6.mul(&x2.add(&y2)).add(&quarter))
            }
            Identity::SquareDifference => (sum_sq.sub(&diff_sq), xy.mul(&ExactNumber::from(4))),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown identity {s:?}"))
    }
}

pub fn identity_check(identity: Identity, x: &ExactNumber, y: &ExactNumber) -> bool {
    let (l, r) = identity.sides(x, y);
    l == r
}
