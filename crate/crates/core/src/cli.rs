//! The `susa` command line: arithmetic, number theory and corpus runs.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 1 when a computation fails and 2 for usage errors, malformed
//! input and unknown problems.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::corpus::{self, CorpusError, Expr};
use crate::document::{bindings_value, to_pretty, trace_value};
use crate::equations::Mode;
use crate::numeral::{self, ExactNumber, Numeral};
use crate::numtheory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// Canonical sexagesimal, e.g. `0;30`.
    #[default]
    Sex,
    /// `p/q`.
    Rat,
    /// Both, e.g. `0;30 (1/2)`.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Scribal,
    Modern,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Scribal => Mode::Scribal,
            ModeArg::Modern => Mode::Modern,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "susa", version, about = "Exact sexagesimal arithmetic and the Susa problem corpus")]
pub struct Cli {
    /// How numbers are printed.
    #[arg(long, value_enum, default_value_t = Format::Sex, global = true)]
    pub format: Format,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print every executed step.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Exponent of the last digit of floating numerals (0 = units).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub anchor: Option<i32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression with + - * / ^ sqrt() and parentheses.
    Eval { expression: String },
    /// Prime factorization of a positive integer (floating numerals default to anchor 0).
    Factor { n: String },
    /// Reciprocal of a number.
    Recip { n: String },
    /// Reciprocals of every regular number up to LIMIT.
    Table { limit: String },
    /// The problem corpus.
    Problem {
        #[command(subcommand)]
        action: ProblemAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProblemAction {
    /// List problem ids.
    List,
    /// Run a problem and print its solution.
    Run {
        id: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Scribal)]
        mode: ModeArg,
    },
    /// Substitute bindings into the statement (default: the expected answer).
    Verify {
        id: String,
        /// A binding such as `y=0;20`; may be repeated.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Run both routes and compare their solutions.
    Check { id: String },
}

/// A failure, sorted by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Computation(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::UnknownProblem(id) => CliError::Usage(format!("unknown problem {id:?}")),
            CorpusError::UnsupportedMode { .. } | CorpusError::MissingBinding { .. } => usage(e),
            other => computation(other),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Context { cli: &cli, out, err };
    match ctx.dispatch() {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Context<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn dispatch(&mut self) -> Result<(), CliError> {
        match &self.cli.command {
            Command::Eval { expression } => self.eval(expression),
            Command::Factor { n } => self.factor(n),
            Command::Recip { n } => self.recip(n),
            Command::Table { limit } => self.table(limit),
            Command::Problem { action } => match action {
                ProblemAction::List => self.list(),
                ProblemAction::Run { id, mode } => self.run_problem(id, (*mode).into()),
                ProblemAction::Verify { id, set } => self.verify(id, set),
                ProblemAction::Check { id } => self.check(id),
            },
        }
    }

    fn emit(&mut self, text: &str) -> Result<(), CliError> {
        self.out.write_all(text.as_bytes()).map_err(computation)
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        self.emit(&format!("{text}\n"))
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.err, "warning: {text}");
    }

    fn json(&mut self, v: &Value) -> Result<(), CliError> {
        self.emit(&to_pretty(v))
    }

    /// Text for `v` in the requested format; non-terminating values fall
    /// back to `p/q` with a warning.
    fn show(&mut self, v: &ExactNumber) -> String {
        let (text, fell_back) = render(v, self.cli.format);
        if fell_back {
            self.warn(&format!("{} has no finite sexagesimal expansion", v.to_ratio_string()));
        }
        text
    }

    /// JSON for `v` in the requested format; non-terminating values are an
    /// error unless only the rational form was asked for.
    fn value_json(&self, v: &ExactNumber) -> Result<Value, CliError> {
        let mut m = Map::new();
        if self.cli.format != Format::Rat {
            let s = numeral::format(v).map_err(computation)?;
            m.insert("sexagesimal".into(), json!(s));
        }
        if self.cli.format != Format::Sex {
            m.insert("rational".into(), json!(v.to_ratio_string()));
        }
        Ok(Value::Object(m))
    }

    fn number(&self, text: &str, default_anchor: Option<i32>) -> Result<ExactNumber, CliError> {
        parse_number(text, self.cli.anchor.or(default_anchor)).map_err(usage)
    }

    fn eval(&mut self, text: &str) -> Result<(), CliError> {
        let expr = parse_expression(text, self.cli.anchor).map_err(usage)?;
        let v = expr.eval(&|_| None).map_err(computation)?;
        if self.cli.json {
            let value = self.value_json(&v)?;
            return self.json(&json!({ "expression": text, "value": value }));
        }
        let s = self.show(&v);
        self.line(&s)
    }

    fn factor(&mut self, text: &str) -> Result<(), CliError> {
        let v = self.number(text, Some(0))?;
        let n = v
            .to_integer()
            .ok_or_else(|| usage(format!("{text} is not an integer")))?;
        let f = numtheory::factor(n).map_err(computation)?;
        if self.cli.json {
            let factors: Vec<Value> = f.factors().iter().map(|(p, e)| json!([p, e])).collect();
            let value = self.value_json(&v)?;
            return self.json(&json!({ "n": value, "factors": factors, "regular": f.is_regular() }));
        }
        self.line(&f.to_string())
    }

    fn recip(&mut self, text: &str) -> Result<(), CliError> {
        let v = self.number(text, None)?;
        let r = numtheory::reciprocal(&v).map_err(computation)?;
        if self.cli.json {
            let (n, r) = (self.value_json(&v)?, self.value_json(&r)?);
            return self.json(&json!({ "n": n, "reciprocal": r }));
        }
        let s = self.show(&r);
        self.line(&s)
    }

    fn table(&mut self, text: &str) -> Result<(), CliError> {
        let limit = self
            .number(text, Some(0))?
            .to_integer()
            .and_then(|n| u64::try_from(n).ok())
            .ok_or_else(|| usage(format!("{text} is not a nonnegative integer")))?;
        let rows = numtheory::reciprocal_table(limit).map_err(computation)?;
        if self.cli.json {
            let rows = rows
                .iter()
                .map(|(n, r)| {
                    Ok(json!({ "n": self.value_json(&ExactNumber::from(*n as i64))?, "reciprocal": self.value_json(r)? }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            return self.json(&Value::Array(rows));
        }
        let mut text = String::new();
        for (n, r) in &rows {
            let n = self.show(&ExactNumber::from(*n as i64));
            let r = self.show(r);
            text.push_str(&format!("{n}  {r}\n"));
        }
        self.emit(&text)
    }

    fn list(&mut self) -> Result<(), CliError> {
        let problems = corpus::corpus().problems();
        if self.cli.json {
            let items: Vec<Value> = problems
                .iter()
                .map(|p| json!({ "id": p.id, "title": p.title, "modes": modes(p) }))
                .collect();
            return self.json(&Value::Array(items));
        }
        let mut text = String::new();
        for p in problems {
            text.push_str(&format!("{:<10}{:<18}{}\n", p.id, modes(p).join(","), p.title));
        }
        self.emit(&text)
    }

    fn run_problem(&mut self, id: &str, mode: Mode) -> Result<(), CliError> {
        let spec = corpus::corpus().get(id)?;
        let run = corpus::run_problem(id, mode)?;
        for d in &run.diagnostics {
            let _ = writeln!(self.err, "note: {d}");
        }
        if self.cli.json {
            return self.json(&trace_value(&run.trace));
        }
        let mut text = String::new();
        if self.cli.trace {
            for e in &run.trace.entries {
                let line = e.render_with(&|v| render(v, self.cli.format).0);
                text.push_str(&line);
                text.push('\n');
            }
        }
        for (name, v) in &run.bindings {
            let shown = self.show(v);
            text.push_str(&format!("{} = {shown}\n", spec.role(name)));
        }
        self.emit(&text)
    }

    fn verify(&mut self, id: &str, set: &[String]) -> Result<(), CliError> {
        let spec = corpus::corpus().get(id)?;
        let mut bindings = spec.expected.clone();
        for item in set {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("expected NAME=VALUE, got {item:?}")))?;
            let value = self.number(value.trim(), None)?;
            let name = name.trim().to_string();
            match bindings.iter_mut().find(|(n, _)| *n == name) {
                Some(slot) => slot.1 = value,
                None => bindings.push((name, value)),
            }
        }
        let report = corpus::verify_solution(id, &bindings)?;
        if self.cli.json {
            let checks = report
                .checks
                .iter()
                .map(|c| {
                    let side = |s: &Result<ExactNumber, corpus::EvalError>| match s {
                        Ok(v) => self.value_json(v),
                        Err(e) => Ok(json!({ "error": e.to_string() })),
                    };
                    Ok(json!({
                        "line": c.line,
                        "equation": c.equation,
                        "lhs": side(&c.lhs)?,
                        "rhs": side(&c.rhs)?,
                        "satisfied": c.satisfied(),
                    }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            self.json(&json!({
                "id": id,
                "bindings": bindings_value(&bindings),
                "equations": checks,
                "satisfied": report.satisfied_count(),
                "total": report.checks.len(),
            }))?;
        } else {
            let format = self.cli.format;
            let text = report.render_with(&|v| render(v, format).0);
            self.line(&text)?;
        }
        if report.all_satisfied() {
            Ok(())
        } else {
            Err(computation(format!(
                "{} of {} equations violated",
                report.checks.len() - report.satisfied_count(),
                report.checks.len()
            )))
        }
    }

    fn check(&mut self, id: &str) -> Result<(), CliError> {
        let report = corpus::cross_check(id)?;
        if self.cli.json {
            let rejected: Vec<Value> = report.rejected.iter().map(|c| bindings_value(&c.bindings)).collect();
            self.json(&json!({
                "id": id,
                "scribal": bindings_value(&report.scribal),
                "modern": bindings_value(&report.modern),
                "rejected": rejected,
                "agree": report.agree(),
            }))?;
        } else {
            self.line(&report.to_string())?;
        }
        if report.agree() {
            Ok(())
        } else {
            Err(computation("scribal and modern solutions differ"))
        }
    }
}

fn modes(p: &corpus::ProblemSpec) -> Vec<&'static str> {
    let mut m = Vec::new();
    if p.procedure.is_some() {
        m.push("scribal");
    }
    if p.modern_route.is_some() {
        m.push("modern");
    }
    m
}

/// Renders `v`; the flag reports a sexagesimal request that fell back to `p/q`.
fn render(v: &ExactNumber, format: Format) -> (String, bool) {
    let sex = numeral::format(v).ok();
    let fell_back = sex.is_none() && format != Format::Rat;
    let text = match (format, sex) {
        (Format::Rat, _) | (_, None) => v.to_ratio_string(),
        (Format::Sex, Some(s)) => s,
        (Format::Both, Some(s)) => format!("{s} ({})", v.to_ratio_string()),
    };
    (text, fell_back)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExpressionError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

/// Reads one number: anchored text (`0;30`), a floating numeral
/// (`26,40`, needs `anchor`), or a decimal integer or `p/q`.
pub fn parse_number(text: &str, anchor: Option<i32>) -> Result<ExactNumber, String> {
    if text.contains(',') || text.contains(';') {
        return match numeral::parse(text).map_err(|e| e.to_string())? {
            Numeral::Anchored(form) => Ok(numeral::to_exact(&form)),
            Numeral::Floating(num) => match anchor {
                Some(k) => Ok(numeral::anchor(&num, k)),
                None => Err(format!("floating numeral {text} needs --anchor")),
            },
        };
    }
    text.parse::<ExactNumber>().map_err(|e| format!("{text}: {e}"))
}

/// Parses infix arithmetic over numerals. Bare decimal integers are exact
/// integers; numerals with `,` but no `;` need `anchor`.
pub fn parse_expression(text: &str, anchor: Option<i32>) -> Result<Expr, ExpressionError> {
    let mut p = ExprParser {
        chars: text.chars().collect(),
        pos: 0,
        anchor,
    };
    let e = p.sum()?;
    p.skip_space();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(e)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    anchor: Option<i32>,
}

impl ExprParser {
    fn error(&self, message: String) -> ExpressionError {
        ExpressionError {
            column: self.pos + 1,
            message,
        }
    }

    fn skip_space(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_space();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExpressionError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(vec![acc, self.product()?]);
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExpressionError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(vec![acc, self.unary()?]);
            } else if self.eat('/') {
                let divisor = self.unary()?;
                acc = Expr::Mul(vec![acc, Expr::Pow { base: Box::new(divisor), exp: -1 }]);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExpressionError> {
        if self.eat('-') {
            let e = self.unary()?;
            return Ok(Expr::Mul(vec![Expr::constant(-1), e]));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExpressionError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_space();
        let start = self.pos;
        let negative = self.eat('-');
        self.skip_space();
        let digits_at = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let digits: String = self.chars[digits_at..self.pos].iter().collect();
        let exp: i32 = digits.parse().map_err(|_| ExpressionError {
            column: start + 1,
            message: "exponent must be an integer".into(),
        })?;
        Ok(Expr::Pow {
            base: Box::new(base),
            exp: if negative { -exp } else { exp },
        })
    }

    fn atom(&mut self) -> Result<Expr, ExpressionError> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression".into())),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == ',' || *c == ';')
                {
                    self.pos += 1;
                }
                let token: String = self.chars[start..self.pos].iter().collect();
                parse_number(&token, self.anchor)
                    .map(Expr::Const)
                    .map_err(|message| ExpressionError {
                        column: start + 1,
                        message,
                    })
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric()) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                if word != "sqrt" {
                    return Err(ExpressionError {
                        column: start + 1,
                        message: format!("unknown function {word:?}; only sqrt is available"),
                    });
                }
                if !self.eat('(') {
                    return Err(self.error("expected '(' after sqrt".into()));
                }
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'".into()));
                }
                Ok(Expr::Sqrt(Box::new(e)))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("susa").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(call(&["eval", "0;30,50 - 0;27,30"]).1, "0;3,20\n");
        assert_eq!(call(&["eval", "sqrt(3,50,35,23,27,24,26,40)", "--anchor", "0"]).1, "15,11,6,40\n");
        assert_eq!(call(&["eval", "1/3 + 1/3 + 1/3"]).1, "1\n");
        assert_eq!(call(&["eval", "2^-2 * -4"]).1, "-1\n");
        assert_eq!(call(&["--format", "both", "eval", "(1 + 2) * 0;10"]).1, "0;30 (1/2)\n");
    }

    #[test]
    fn eval_errors() {
        let (code, _, err) = call(&["eval", "26,40 + 1"]);
        assert_eq!(code, 2);
        assert!(err.contains("column 1") && err.contains("--anchor"), "{err}");
        let (code, _, err) = call(&["eval", "1 + * 2"]);
        assert_eq!(code, 2);
        assert!(err.contains("column 5"), "{err}");
        assert_eq!(call(&["eval", "sqrt(2)"]).0, 1);
        assert_eq!(call(&["eval", "1/0"]).0, 1);
        let (code, out, err) = call(&["eval", "1/7"]);
        assert_eq!((code, out.as_str()), (0, "1/7\n"));
        assert!(err.contains("warning"));
        assert_eq!(call(&["--json", "eval", "1/7"]).0, 1);
        assert_eq!(call(&["--json", "--format", "rat", "eval", "1/7"]).0, 0);
    }

    #[test]
    fn number_theory_commands() {
        assert_eq!(call(&["factor", "3,50,35,23,27,24,26,40"]).1, "2^14 * 5^8 * 41^2\n");
        assert_eq!(call(&["recip", "26,40", "--anchor", "0"]).1, "0;0,2,15\n");
        assert_eq!(call(&["recip", "26,40"]).0, 2);
        let table = call(&["table", "10"]).1;
        let ns: Vec<&str> = table.lines().map(|l| l.split("  ").next().unwrap()).collect();
        assert_eq!(ns, ["1", "2", "3", "4", "5", "6", "8", "9", "10"]);
        assert_eq!(table.lines().last(), Some("10  0;6"));
        assert_eq!(call(&["table", "2000000"]).0, 1);
    }

    #[test]
    fn problem_commands() {
        let (code, out, _) = call(&["problem", "run", "smt19", "--mode", "scribal", "--trace"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last(), Some("width = 30"));
        assert!(out.contains("L4      square(14,48,53,20) \u{2192} 3,39,28,43,27,24,26,40"), "{out}");
        assert_eq!(call(&["problem", "verify", "smt17"]).1.lines().last(), Some("2/2 equations satisfied"));
        let (code, _, err) = call(&["problem", "run", "nosuch"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown problem"));
        assert_eq!(call(&["problem", "verify", "smt11.2", "--set", "y=0;20"]).0, 1);
        assert_eq!(call(&["problem", "check", "smt8.2"]).0, 0);
        assert_eq!(call(&["problem", "run", "smt11.1", "--mode", "modern"]).0, 2);
        assert_eq!(call(&["problem", "list"]).1.lines().count(), 11);
    }

    #[test]
    fn json_is_deterministic() {
        let a = call(&["--json", "problem", "run", "smt11.2"]);
        let b = call(&["--json", "problem", "run", "smt11.2"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["outputs"]["y"]["sexagesimal"], "0;25");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--format", "hex", "eval", "1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
