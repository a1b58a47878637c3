//! Modern exact solvers: completing the square, row reduction, the sum and
//! product reduction for symmetric systems, and rational-root search.
//!
//! Quadratics are kept in the form the scribes worked with, `a·t² + b·t = c`.
//! [`complete_square`] multiplies through by `a` so the unknown becomes
//! `w = a·t`, completes the square on `w² + b·w = a·c`, then divides back.
//! The steps run on the [`scribal`](crate::scribal) interpreter, so every
//! solve comes with a trace.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeral::{ArithmeticError, ExactNumber};
use crate::numtheory::{self, NumberTheoryError};
use crate::scribal::{
    at, execute_with, lit, Annotation, Arithmetic, ExecError, ExecErrorKind, ProcedureBuilder,
    Trace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("{0} is not a perfect square")]
    NotPerfectSquare(ExactNumber),
    #[error("cannot subtract {subtrahend} from the smaller number {minuend}")]
    NegativeResult {
        minuend: ExactNumber,
        subtrahend: ExactNumber,
    },
    #[error("discriminant {discriminant} is not a rational square; no rational root")]
    NoRationalRoot { discriminant: ExactNumber },
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(ExactNumber),
    #[error("linear system is not rectangular")]
    Ragged,
    #[error(transparent)]
    NumberTheory(NumberTheoryError),
    #[error(transparent)]
    Exec(ExecError),
}

impl From<ExecError> for SolveError {
    fn from(e: ExecError) -> Self {
        match e.kind {
            ExecErrorKind::NumberTheory(NumberTheoryError::NotPerfectSquare(v)) => {
                SolveError::NotPerfectSquare(v)
            }
            ExecErrorKind::Arithmetic(ArithmeticError::NegativeResult {
                minuend,
                subtrahend,
            }) => SolveError::NegativeResult {
                minuend,
                subtrahend,
            },
            _ => SolveError::Exec(e),
        }
    }
}

/// `a·t² + b·t = c` with `a ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    a: ExactNumber,
    b: ExactNumber,
    c: ExactNumber,
}

impl Quadratic {
    pub fn new(a: ExactNumber, b: ExactNumber, c: ExactNumber) -> Result<Self, SolveError> {
        if a.is_zero() {
            return Err(SolveError::ZeroLeadingCoefficient);
        }
        Ok(Self { a, b, c })
    }

    /// From `a·t² + b·t + k = 0`.
    pub fn from_zero_form(a: ExactNumber, b: ExactNumber, k: ExactNumber) -> Result<Self, SolveError> {
        Self::new(a, b, k.neg())
    }

    pub fn a(&self) -> &ExactNumber {
        &self.a
    }

    pub fn b(&self) -> &ExactNumber {
        &self.b
    }

    pub fn c(&self) -> &ExactNumber {
        &self.c
    }

    /// `a·t² + b·t − c`; zero exactly at a root.
    pub fn residual(&self, t: &ExactNumber) -> ExactNumber {
        self.a.mul(&t.square()).add(&self.b.mul(t)).sub(&self.c)
    }

    pub fn scaled(&self, factor: &ExactNumber) -> Self {
        Self {
            a: self.a.mul(factor),
            b: self.b.mul(factor),
            c: self.c.mul(factor),
        }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})t^2 + ({})t = {}", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Nonnegative quantities only; subtraction is always smaller from greater.
    Scribal,
    /// Signed rationals; all rational roots.
    Modern,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Scribal => "scribal",
            Mode::Modern => "modern",
        })
    }
}

/// Which sign the square root takes in `w = −b/2 ± √D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootBranch {
    /// `−b/2 + √D`.
    Additive,
    /// `−b/2 − √D`.
    Subtractive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRoot {
    pub value: ExactNumber,
    pub branch: RootBranch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSolution {
    pub roots: Vec<QuadraticRoot>,
    pub trace: Trace,
}

impl QuadraticSolution {
    pub fn values(&self) -> Vec<ExactNumber> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }
}

/// Solves `q` by completing the square on the scaled unknown `w = a·t`.
///
/// Scribal mode returns only positive roots and fails with
/// [`SolveError::NegativeResult`] where a scribe would have to subtract a
/// greater number from a smaller one. Modern mode returns every rational
/// root; a negative discriminant yields no roots, an irrational one yields
/// [`SolveError::NoRationalRoot`].
pub fn complete_square(q: &Quadratic, mode: Mode) -> Result<QuadraticSolution, SolveError> {
    match mode {
        Mode::Scribal => complete_square_scribal(q),
        Mode::Modern => complete_square_modern(q),
    }
}

fn complete_square_scribal(q: &Quadratic) -> Result<QuadraticSolution, SolveError> {
    // multiplying through by -1 leaves the roots alone
    let q = if q.a.is_negative() {
        q.scaled(&ExactNumber::from(-1))
    } else {
        q.clone()
    };
    let mut p = ProcedureBuilder::new("complete-square");
    let a = lit(q.a.clone());
    let coef = lit(q.b.abs());
    let rhs = lit(q.c.abs());
    let scaled = p.multiply(&a, &rhs, at("scale").label("scaled-constant"));
    let half = p.halve(&coef, at("halve").label("half"));
    let sq = p.square(&half, at("square").label("square"));

    let mut roots = Vec::new();
    if !q.c.is_negative() {
        // w² ∓ B·w = C
        let disc = p.add(&sq, &scaled, at("complete").label("discriminant"));
        let root = p.square_root(&disc, at("root").label("root"));
        let w = if q.b.is_positive() {
            p.subtract(&root, &half, at("unscale").label("scaled-unknown"))
        } else {
            p.add(&root, &half, at("unscale").label("scaled-unknown"))
        };
        let t = p.divide(&w, &a, at("divide").label("unknown"));
        roots.push((t, RootBranch::Additive));
    } else {
        // w² + C = B·w, or for positive b, no positive root at all
        let disc = p.subtract(&sq, &scaled, at("complete").label("discriminant"));
        let root = p.square_root(&disc, at("root").label("root"));
        if q.b.is_negative() {
            let w = p.subtract(&half, &root, at("unscale").label("scaled-unknown"));
            let t = p.divide(&w, &a, at("divide").label("unknown"));
            roots.push((t, RootBranch::Subtractive));
            let w2 = p.add(&half, &root, at("unscale").label("scaled-unknown-additive"));
            let t2 = p.divide(&w2, &a, at("divide").label("unknown-additive"));
            roots.push((t2, RootBranch::Additive));
        } else {
            let w = p.subtract(&root, &half, at("unscale").label("scaled-unknown"));
            let t = p.divide(&w, &a, at("divide").label("unknown"));
            roots.push((t, RootBranch::Additive));
        }
    }
    finish(p, roots, Arithmetic::Scribal)
}

fn complete_square_modern(q: &Quadratic) -> Result<QuadraticSolution, SolveError> {
    let mut p = ProcedureBuilder::new("complete-square");
    let a = lit(q.a.clone());
    let scaled = p.multiply(&a, &lit(q.c.clone()), at("scale").label("scaled-constant"));
    let half = p.halve(&lit(q.b.clone()), at("halve").label("half"));
    let sq = p.square(&half, at("square").label("square"));
    p.add(&sq, &scaled, at("complete").label("discriminant"));

    // evaluate up to the discriminant to decide how many roots exist
    let partial = p
        .clone()
        .finish(vec![("discriminant", crate::scribal::Operand::Step(3))])
        .expect("well-formed");
    let probe = execute_with(&partial, &[], Arithmetic::Signed)?;
    let d = probe.output("discriminant").expect("declared").clone();
    if d.is_negative() {
        return Ok(QuadraticSolution {
            roots: Vec::new(),
            trace: probe,
        });
    }
    let r = numtheory::sqrt_exact(&d).map_err(|e| match e {
        NumberTheoryError::NotPerfectSquare(_) => SolveError::NoRationalRoot {
            discriminant: d.clone(),
        },
        other => SolveError::NumberTheory(other),
    })?;

    let disc = crate::scribal::Operand::Step(3);
    let root = p.square_root(&disc, at("root").label("root"));
    let w = p.subtract(&root, &half, at("unscale").label("scaled-unknown"));
    let t = p.divide(&w, &a, at("divide").label("unknown"));
    let mut roots = vec![(t, RootBranch::Additive)];
    if !r.is_zero() {
        let s = p.add(&half, &root, Annotation::default());
        let w2 = p.subtract(&lit(0), &s, at("unscale").label("scaled-unknown-subtractive"));
        let t2 = p.divide(&w2, &a, at("divide").label("unknown-subtractive"));
        roots.push((t2, RootBranch::Subtractive));
    }
    finish(p, roots, Arithmetic::Signed)
}

fn finish(
    p: ProcedureBuilder,
    roots: Vec<(crate::scribal::Operand, RootBranch)>,
    arithmetic: Arithmetic,
) -> Result<QuadraticSolution, SolveError> {
    let names = ["root-1", "root-2"];
    let outputs = roots
        .iter()
        .zip(names)
        .map(|((op, _), n)| (n, op.clone()))
        .collect();
    let proc = p.finish(outputs).expect("well-formed");
    let trace = execute_with(&proc, &[], arithmetic)?;
    let roots = roots
        .iter()
        .zip(&trace.outputs)
        .map(|((_, branch), (_, value))| QuadraticRoot {
            value: value.clone(),
            branch: *branch,
        })
        .collect();
    Ok(QuadraticSolution { roots, trace })
}

/// Coefficient matrix and right-hand side of `A·x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    coefficients: Vec<Vec<ExactNumber>>,
    rhs: Vec<ExactNumber>,
}

impl LinearSystem {
    pub fn new(coefficients: Vec<Vec<ExactNumber>>, rhs: Vec<ExactNumber>) -> Result<Self, SolveError> {
        let n = coefficients.first().map_or(0, Vec::len);
        if coefficients.is_empty()
            || n == 0
            || coefficients.iter().any(|row| row.len() != n)
            || rhs.len() != coefficients.len()
        {
            return Err(SolveError::Ragged);
        }
        Ok(Self { coefficients, rhs })
    }

    /// Builds from small integer rows; convenience for tests and examples.
    pub fn from_integers(rows: &[&[i64]], rhs: &[i64]) -> Result<Self, SolveError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| ExactNumber::from(v)).collect())
                .collect(),
            rhs.iter().map(|&v| ExactNumber::from(v)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.coefficients.len()
    }

    pub fn columns(&self) -> usize {
        self.coefficients[0].len()
    }

    pub fn coefficients(&self) -> &[Vec<ExactNumber>] {
        &self.coefficients
    }

    pub fn rhs(&self) -> &[ExactNumber] {
        &self.rhs
    }

    /// `A·x − b`, row by row.
    pub fn residuals(&self, x: &[ExactNumber]) -> Vec<ExactNumber> {
        self.coefficients
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                row.iter()
                    .zip(x)
                    .fold(ExactNumber::zero(), |acc, (a, v)| acc.add(&a.mul(v)))
                    .sub(b)
            })
            .collect()
    }

    pub fn is_satisfied_by(&self, x: &[ExactNumber]) -> bool {
        self.residuals(x).iter().all(ExactNumber::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet {
    Unique(Vec<ExactNumber>),
    /// `particular + Σ tᵢ·basis[i]`; free variables are the non-pivot columns
    /// in ascending order, one basis vector each.
    Parametric {
        particular: Vec<ExactNumber>,
        basis: Vec<Vec<ExactNumber>>,
    },
    Inconsistent,
}

/// Exact row reduction to reduced row echelon form.
///
/// The pivot for each column is the first remaining row with a nonzero entry.
pub fn gaussian_eliminate(sys: &LinearSystem) -> SolutionSet {
    let (m, n) = (sys.rows(), sys.columns());
    let mut rows: Vec<Vec<ExactNumber>> = sys
        .coefficients
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row[col..=n].iter_mut().zip(&pivot[col..=n]) {
                    *v = v.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }

    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return SolutionSet::Inconsistent;
    }

    let mut particular = vec![ExactNumber::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        particular[col] = rows[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return SolutionSet::Unique(particular);
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![ExactNumber::zero(); n];
            v[f] = ExactNumber::one();
            for (i, &col) in pivots.iter().enumerate() {
                v[col] = rows[i][f].neg();
            }
            v
        })
        .collect();
    SolutionSet::Parametric { particular, basis }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricSolution {
    pub larger: ExactNumber,
    pub smaller: ExactNumber,
    pub trace: Trace,
}

/// Two numbers from their sum `u` and product `v`, larger first:
/// `u/2 ± √((u/2)² − v)`.
pub fn solve_symmetric(u: &ExactNumber, v: &ExactNumber) -> Result<(ExactNumber, ExactNumber), SolveError> {
    solve_symmetric_traced(u, v).map(|s| (s.larger, s.smaller))
}

pub fn solve_symmetric_traced(u: &ExactNumber, v: &ExactNumber) -> Result<SymmetricSolution, SolveError> {
    let half = u.halve();
    let disc = half.square().sub(v);
    if disc.is_negative() {
        return Err(SolveError::NegativeDiscriminant(disc));
    }
    let mut p = ProcedureBuilder::new("sum-and-product");
    let sum = p.input("sum");
    let product = p.input("product");
    let h = p.halve(&sum, at("halve").label("half-sum"));
    let sq = p.square(&h, at("square").label("half-sum-squared"));
    let d = p.subtract(&sq, &product, at("difference").label("discriminant"));
    let r = p.square_root(&d, at("root").label("half-difference"));
    let larger = p.add(&h, &r, at("sum").label("larger"));
    let smaller = p.subtract(&h, &r, at("difference").label("smaller"));
    let proc = p
        .finish(vec![("larger", larger), ("smaller", smaller)])
        .expect("well-formed");
    let trace = execute_with(
        &proc,
        &[("sum", u.clone()), ("product", v.clone())],
        Arithmetic::Signed,
    )?;
    Ok(SymmetricSolution {
        larger: trace.output("larger").expect("declared").clone(),
        smaller: trace.output("smaller").expect("declared").clone(),
        trace,
    })
}

/// Horner evaluation; coefficients from the highest degree down.
pub fn eval_polynomial(coeffs: &[ExactNumber], t: &ExactNumber) -> ExactNumber {
    coeffs
        .iter()
        .fold(ExactNumber::zero(), |acc, c| acc.mul(t).add(c))
}

/// Every distinct rational root of the polynomial, ascending. Coefficients
/// run from the highest degree down.
pub fn rational_roots(coeffs: &[ExactNumber]) -> Result<Vec<ExactNumber>, SolveError> {
    if coeffs.len() < 2 {
        return Err(SolveError::ConstantPolynomial);
    }
    if coeffs[0].is_zero() {
        return Err(SolveError::ZeroLeadingCoefficient);
    }
    // clear denominators
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c.numer() * &lcm) / c.denom())
        .collect();

    let mut roots = Vec::new();
    if ints.last().is_some_and(Zero::is_zero) {
        roots.push(ExactNumber::zero());
        while ints.last().is_some_and(Zero::is_zero) {
            ints.pop();
        }
    }
    if ints.len() >= 2 {
        let lead = ints[0].abs();
        let constant = ints.last().expect("nonempty").abs();
        let ps = divisors(&constant)?;
        let qs = divisors(&lead)?;
        let poly: Vec<ExactNumber> = ints.iter().cloned().map(ExactNumber::from).collect();
        for p in &ps {
            for q in &qs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let cand = ExactNumber::new(p * sign, q.clone()).expect("q > 0");
                    if eval_polynomial(&poly, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, SolveError> {
    let f = numtheory::factor(n.clone()).map_err(SolveError::NumberTheory)?;
    let mut out = vec![BigInt::one()];
    for &(p, e) in f.factors() {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    Ok(out)
}
