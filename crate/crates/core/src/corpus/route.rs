//! Modern solution routes: a list of stages, each of which may branch.

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use crate::equations::{
    complete_square, gaussian_eliminate, rational_roots, solve_symmetric_traced, LinearSystem, Mode,
    Quadratic, RootBranch, SolutionSet,
};
use crate::numeral::ExactNumber;
use crate::scribal::{execute_with, Annotation, Arithmetic, Opcode, Operand, ProcedureBuilder, Step, Trace, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteKind {
    Substitution,
    Symmetric,
    OcticReduction,
    Gaussian,
    Elimination,
    RationalRoots,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Stage {
    /// Binds `name` to the value of `expr`.
    Assign { name: String, expr: Expr },
    /// Completes the square on `a·t² + b·t = c`; one branch per root.
    Quadratic { name: String, a: Expr, b: Expr, c: Expr },
    /// One branch per rational root; coefficients from the highest degree.
    RationalRoots { name: String, coefficients: Vec<Expr> },
    /// Two numbers from their sum and product.
    Symmetric { sum: Expr, product: Expr, larger: String, smaller: String },
    Linear {
        unknowns: Vec<String>,
        coefficients: Vec<Vec<Expr>>,
        rhs: Vec<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModernRoute {
    pub kind: RouteKind,
    pub stages: Vec<Stage>,
}

/// One complete assignment produced by a route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub bindings: Vec<(String, ExactNumber)>,
    pub trace: Trace,
    /// Names bound to negative values, when negatives are inadmissible.
    pub negative: Vec<String>,
}

impl Candidate {
    pub fn is_admissible(&self) -> bool {
        self.negative.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ExactNumber> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteOutcome {
    pub candidates: Vec<Candidate>,
    /// Why branches died before producing a candidate.
    pub pruned: Vec<String>,
}

#[derive(Clone)]
struct Branch {
    bindings: Vec<(String, ExactNumber)>,
    trace: Trace,
}

impl Branch {
    fn bind(&mut self, name: &str, value: ExactNumber, note: Option<String>) {
        record(&mut self.trace, name, value.clone(), note);
        self.bindings.retain(|(n, _)| n != name);
        self.bindings.push((name.to_string(), value));
    }

    fn eval(&self, e: &Expr) -> Result<ExactNumber, String> {
        e.eval_in(&self.bindings).map_err(|err| format!("{e}: {err}"))
    }

    fn describe(&self) -> String {
        if self.bindings.is_empty() {
            return String::new();
        }
        let parts: Vec<String> = self
            .bindings
            .iter()
            .map(|(n, v)| format!("{n} = {}", v.to_ratio_string()))
            .collect();
        format!(" (with {})", parts.join(", "))
    }
}

/// Appends a `put` entry binding `name`.
fn record(trace: &mut Trace, name: &str, value: ExactNumber, note: Option<String>) {
    trace.entries.push(TraceEntry {
        index: trace.entries.len(),
        step: Step {
            opcode: Opcode::Put,
            operands: vec![Operand::Literal(value.clone())],
            target: Some(name.to_string()),
            annotation: Annotation {
                label: Some(name.to_string()),
                note,
                ..Annotation::default()
            },
        },
        operands: vec![value.clone()],
        result: value,
    });
}

impl ModernRoute {
    /// Runs every stage over every live branch. `nonnegative` marks
    /// candidates with negative bindings as inadmissible.
    pub fn run(&self, procedure: &str, nonnegative: bool) -> RouteOutcome {
        let start = Branch {
            bindings: Vec::new(),
            trace: Trace {
                procedure: procedure.to_string(),
                inputs: Vec::new(),
                entries: Vec::new(),
                outputs: Vec::new(),
            },
        };
        let mut live = vec![start];
        let mut pruned = Vec::new();
        for stage in &self.stages {
            let mut next = Vec::new();
            for branch in live {
                let context = branch.describe();
                match stage.apply(branch) {
                    Ok(children) => next.extend(children),
                    Err(why) => pruned.push(format!("{why}{context}")),
                }
            }
            live = next;
        }
        let candidates = live
            .into_iter()
            .map(|mut b| {
                b.trace.outputs = b.bindings.clone();
                let negative = if nonnegative {
                    b.bindings
                        .iter()
                        .filter(|(_, v)| v.is_negative())
                        .map(|(n, _)| n.clone())
                        .collect()
                } else {
                    Vec::new()
                };
                Candidate {
                    bindings: b.bindings,
                    trace: b.trace,
                    negative,
                }
            })
            .collect();
        RouteOutcome { candidates, pruned }
    }
}

impl Stage {
    fn apply(&self, mut branch: Branch) -> Result<Vec<Branch>, String> {
        match self {
            Stage::Assign { name, expr } => {
                let value = assign_traced(&mut branch, name, expr)?;
                branch.bind(name, value, Some(format!("{name} = {expr}")));
                Ok(vec![branch])
            }
            Stage::Quadratic { name, a, b, c } => {
                let (a, b, c) = (branch.eval(a)?, branch.eval(b)?, branch.eval(c)?);
                let q = Quadratic::new(a, b, c).map_err(|e| format!("{name}: {e}"))?;
                let sol = complete_square(&q, Mode::Modern).map_err(|e| format!("{name}: {q}: {e}"))?;
                if sol.roots.is_empty() {
                    return Err(format!("{name}: {q} has no real root"));
                }
                branch.trace.extend_from(&sol.trace);
                Ok(sol
                    .roots
                    .iter()
                    .map(|root| {
                        let mut child = branch.clone();
                        let sign = match root.branch {
                            RootBranch::Additive => "+",
                            RootBranch::Subtractive => "-",
                        };
                        child.bind(name, root.value.clone(), Some(format!("root of {q} taking {sign}sqrt")));
                        child
                    })
                    .collect())
            }
            Stage::RationalRoots { name, coefficients } => {
                let coeffs = coefficients
                    .iter()
                    .map(|e| branch.eval(e))
                    .collect::<Result<Vec<_>, _>>()?;
                let shown: Vec<String> = coeffs.iter().map(ExactNumber::to_ratio_string).collect();
                let roots = rational_roots(&coeffs).map_err(|e| format!("{name}: {e}"))?;
                if roots.is_empty() {
                    return Err(format!(
                        "{name}: polynomial [{}] has no rational root",
                        shown.join(", ")
                    ));
                }
                Ok(roots
                    .into_iter()
                    .map(|r| {
                        let mut child = branch.clone();
                        child.bind(name, r, Some(format!("rational root of [{}]", shown.join(", "))));
                        child
                    })
                    .collect())
            }
            Stage::Symmetric {
                sum,
                product,
                larger,
                smaller,
            } => {
                let (u, v) = (branch.eval(sum)?, branch.eval(product)?);
                let sol = solve_symmetric_traced(&u, &v).map_err(|e| format!("{larger}, {smaller}: {e}"))?;
                branch.trace.extend_from(&sol.trace);
                branch.bind(larger, sol.larger, Some("larger of the pair".into()));
                branch.bind(smaller, sol.smaller, Some("smaller of the pair".into()));
                Ok(vec![branch])
            }
            Stage::Linear {
                unknowns,
                coefficients,
                rhs,
            } => {
                let rows = coefficients
                    .iter()
                    .map(|row| row.iter().map(|e| branch.eval(e)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let rhs = rhs.iter().map(|e| branch.eval(e)).collect::<Result<Vec<_>, _>>()?;
                let sys = LinearSystem::new(rows, rhs).map_err(|e| e.to_string())?;
                if sys.columns() != unknowns.len() {
                    return Err(format!(
                        "linear system has {} columns for {} unknowns",
                        sys.columns(),
                        unknowns.len()
                    ));
                }
                match gaussian_eliminate(&sys) {
                    SolutionSet::Unique(xs) => {
                        for (n, v) in unknowns.iter().zip(xs) {
                            branch.bind(n, v, Some("row reduction".into()));
                        }
                        Ok(vec![branch])
                    }
                    SolutionSet::Parametric { particular, basis } => {
                        let dirs: Vec<String> = basis
                            .iter()
                            .map(|d| {
                                let parts: Vec<String> = d.iter().map(ExactNumber::to_ratio_string).collect();
                                format!("({})", parts.join(", "))
                            })
                            .collect();
                        let note = format!("particular solution; free directions {}", dirs.join(", "));
                        for (n, v) in unknowns.iter().zip(particular) {
                            branch.bind(n, v, Some(note.clone()));
                        }
                        Ok(vec![branch])
                    }
                    SolutionSet::Inconsistent => Err("linear system is inconsistent".into()),
                }
            }
        }
    }
}

/// Evaluates `expr` as executed scribal steps and appends them to the trace.
fn assign_traced(branch: &mut Branch, name: &str, expr: &Expr) -> Result<ExactNumber, String> {
    let vars = expr.vars();
    let mut b = ProcedureBuilder::new(name);
    for v in &vars {
        b.input(v);
    }
    let out = expr.compile(&mut b);
    let proc = b.finish(vec![(name, out)]).map_err(|e| e.to_string())?;
    let mut inputs = Vec::new();
    for v in &vars {
        let value = branch
            .bindings
            .iter()
            .find(|(n, _)| n == v)
            .map(|(_, x)| x.clone())
            .ok_or_else(|| format!("{name} = {expr}: {v} is not bound"))?;
        inputs.push((v.as_str(), value));
    }
    let trace = execute_with(&proc, &inputs, Arithmetic::Signed).map_err(|e| format!("{name} = {expr}: {e}"))?;
    let value = trace.output(name).expect("declared").clone();
    branch.trace.extend_from(&trace);
    Ok(value)
}
