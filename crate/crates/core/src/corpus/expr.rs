//! Expression trees for problem statements and modern routes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeral::ExactNumber;
use crate::numtheory::{self, NumberTheoryError};
use crate::scribal::{lit, Annotation, Operand, ProcedureBuilder};

/// A polynomial-with-square-roots expression over named unknowns.
///
/// On disk: `{"const": "3/4"}`, `{"var": "x"}`, `{"add": [..]}`,
/// `{"sub": [a, b]}`, `{"mul": [..]}`, `{"pow": {"base": e, "exp": 3}}`,
/// `{"sqrt": e}`. A negative exponent divides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Expr {
    Const(#[serde(serialize_with = "ratio_text")] ExactNumber),
    Var(String),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Pow { base: Box<Expr>, exp: i32 },
    Sqrt(Box<Expr>),
}

fn ratio_text<S: serde::Serializer>(v: &ExactNumber, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_ratio_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{0} is not bound")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root: {0}")]
    Root(NumberTheoryError),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn constant(v: impl Into<ExactNumber>) -> Self {
        Expr::Const(v.into())
    }

    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<ExactNumber>) -> Result<ExactNumber, EvalError> {
        Ok(match self {
            Expr::Const(v) => v.clone(),
            Expr::Var(n) => lookup(n).ok_or_else(|| EvalError::Unbound(n.clone()))?,
            Expr::Add(terms) => {
                let mut acc = ExactNumber::zero();
                for t in terms {
                    acc = acc.add(&t.eval(lookup)?);
                }
                acc
            }
            Expr::Sub(a, b) => a.eval(lookup)?.sub(&b.eval(lookup)?),
            Expr::Mul(factors) => {
                let mut acc = ExactNumber::one();
                for f in factors {
                    acc = acc.mul(&f.eval(lookup)?);
                }
                acc
            }
            Expr::Pow { base, exp } => base
                .eval(lookup)?
                .pow(*exp)
                .map_err(|_| EvalError::DivisionByZero)?,
            Expr::Sqrt(e) => numtheory::sqrt_exact(&e.eval(lookup)?).map_err(EvalError::Root)?,
        })
    }

    /// Evaluates with values from an ordered binding list.
    pub fn eval_in(&self, bindings: &[(String, ExactNumber)]) -> Result<ExactNumber, EvalError> {
        self.eval(&|name| lookup(bindings, name))
    }

    /// Names of every variable that occurs.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(n) => {
                out.insert(n.clone());
            }
            Expr::Add(es) | Expr::Mul(es) => es.iter().for_each(|e| e.collect_vars(out)),
            Expr::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Pow { base, .. } => base.collect_vars(out),
            Expr::Sqrt(e) => e.collect_vars(out),
        }
    }

    /// Emits scribal steps computing the expression; variables become
    /// `Name` operands, so the procedure must declare them as inputs.
    pub fn compile(&self, b: &mut ProcedureBuilder) -> Operand {
        let none = Annotation::default;
        match self {
            Expr::Const(v) => lit(v.clone()),
            Expr::Var(n) => Operand::Name(n.clone()),
            Expr::Add(terms) => fold(b, terms, ExactNumber::zero(), |b, x, y| b.add(x, y, none())),
            Expr::Mul(factors) => fold(b, factors, ExactNumber::one(), |b, x, y| b.multiply(x, y, none())),
            Expr::Sub(x, y) => {
                let x = x.compile(b);
                let y = y.compile(b);
                b.subtract(&x, &y, none())
            }
            Expr::Pow { base, exp } => {
                let x = base.compile(b);
                let positive = match exp.unsigned_abs() {
                    0 => return lit(1),
                    1 => x,
                    2 => b.square(&x, none()),
                    n => {
                        let mut acc = b.multiply(&x, &x, none());
                        for _ in 2..n {
                            acc = b.multiply(&acc, &x, none());
                        }
                        acc
                    }
                };
                if *exp < 0 {
                    b.reciprocal(&positive, none())
                } else {
                    positive
                }
            }
            Expr::Sqrt(e) => {
                let x = e.compile(b);
                b.square_root(&x, none())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(_) | Expr::Sub(..) => 1,
            Expr::Mul(_) => 2,
            Expr::Const(v) if v.is_negative() || !v.is_integer() => 2,
            Expr::Pow { .. } => 3,
            _ => 4,
        }
    }
}

fn lookup(bindings: &[(String, ExactNumber)], name: &str) -> Option<ExactNumber> {
    bindings.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
}

fn fold(
    b: &mut ProcedureBuilder,
    items: &[Expr],
    empty: ExactNumber,
    op: impl Fn(&mut ProcedureBuilder, &Operand, &Operand) -> Operand,
) -> Operand {
    let mut iter = items.iter();
    let Some(first) = iter.next() else {
        return lit(empty);
    };
    let mut acc = first.compile(b);
    for e in iter {
        let next = e.compile(b);
        acc = op(b, &acc, &next);
    }
    acc
}

/// Infix rendering: `x^3*sqrt(x^2 + y^2)`, constants as `p/q`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Const(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Expr::Const(v) => f.write_str(&v.to_ratio_string()),
            Expr::Var(n) => f.write_str(n),
            Expr::Add(terms) if terms.is_empty() => f.write_str("0"),
            Expr::Mul(factors) if factors.is_empty() => f.write_str("1"),
            Expr::Add(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    child(f, t, 1)?;
                }
                Ok(())
            }
            Expr::Sub(a, b) => {
                child(f, a, 1)?;
                f.write_str(" - ")?;
                child(f, b, 2)
            }
            Expr::Mul(factors) => {
                for (i, t) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    child(f, t, 3)?;
                }
                Ok(())
            }
            Expr::Pow { base, exp } => {
                child(f, base, 4)?;
                write!(f, "^{exp}")
            }
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
        }
    }
}
