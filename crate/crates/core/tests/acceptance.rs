//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Every comparison is exact.

use std::collections::BTreeSet;
use std::process::Command;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use susa::corpus::{corpus, cross_check, identity_check, run_problem, verify_solution, Identity, Run};
use susa::equations::{
    complete_square, gaussian_eliminate, rational_roots, solve_symmetric, LinearSystem, Mode,
    Quadratic, SolutionSet,
};
use susa::numeral::{self, ExactNumber};
use susa::numtheory::{factor, reciprocal, reciprocal_table, sqrt_exact};

type Outcome = Result<(), String>;
type Check = fn() -> Outcome;

const CASES: u32 = 10_000;

fn n(text: &str) -> ExactNumber {
    numeral::sexagesimal(text, 0).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn int(v: i64) -> ExactNumber {
    ExactNumber::from(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scribal(id: &str) -> Result<Run, String> {
    run_problem(id, Mode::Scribal).map_err(|e| e.to_string())
}

fn check_binding(run: &Run, name: &str, want: &str) -> Outcome {
    let got = run.get(name).ok_or_else(|| format!("{}: no binding {name}", run.id))?;
    ensure(*got == n(want), || format!("{}: {name} = {got}, expected {want}", run.id))
}

/// Each label must exist in the trace and carry the paired value.
fn check_chain(run: &Run, chain: &[(&str, &str)]) -> Outcome {
    for (label, want) in chain {
        let entry = run
            .trace
            .by_label(label)
            .ok_or_else(|| format!("{}: no step labelled {label}", run.id))?;
        ensure(entry.result == n(want), || {
            format!("{}: {label} = {}, expected {want}", run.id, entry.result)
        })?;
    }
    Ok(())
}

fn check_reconstructed(run: &Run, label: &str) -> Outcome {
    let entry = run.trace.by_label(label).ok_or_else(|| format!("{}: no {label}", run.id))?;
    ensure(entry.step.annotation.reconstructed, || {
        format!("{}: {label} is not marked reconstructed", run.id)
    })
}

fn check_agree(id: &str) -> Outcome {
    let check = cross_check(id).map_err(|e| e.to_string())?;
    ensure(check.agree(), || format!("routes disagree:\n{check}"))
}

fn smt8_1() -> Outcome {
    let run = scribal("smt8.1")?;
    for (name, v) in [("z", "5"), ("x", "30"), ("y", "20")] {
        check_binding(&run, name, v)?;
    }
    check_chain(
        &run,
        &[
            ("provisional-area", "28"),
            ("scaled-area", "4,40,0"),
            ("scaled-excess", "20"),
            ("half", "10"),
            ("half-squared", "1,40"),
            ("completed-square", "4,41,40"),
            ("root", "2,10"),
            ("scaled-unknown", "2,20"),
            ("z", "5"),
            ("provisional-length-value", "35"),
            ("x", "30"),
            ("y", "20"),
        ],
    )
}

fn smt8_2() -> Outcome {
    let run = scribal("smt8.2")?;
    for (name, v) in [("z", "5"), ("x", "30"), ("y", "20")] {
        check_binding(&run, name, v)?;
    }
    check_chain(
        &run,
        &[
            ("provisional-area", "20"),
            ("scaled-area", "3,20,0"),
            ("half", "10"),
            ("half-squared", "1,40"),
            ("completed-square", "3,21,40"),
            ("root", "1,50"),
            ("scaled-unknown", "1,40"),
            ("reciprocal", "0;3"),
            ("z", "5"),
            ("provisional-length-value", "25"),
            ("x", "30"),
            ("y", "20"),
        ],
    )
}

fn smt11_1() -> Outcome {
    let run = scribal("smt11.1")?;
    check_binding(&run, "x", "20")?;
    check_binding(&run, "sum", "26")?;
    check_binding(&run, "y", "6")?;
    check_reconstructed(&run, "y")
}

fn smt11_2() -> Outcome {
    let run = scribal("smt11.2")?;
    check_chain(
        &run,
        &[
            ("sum-times-half", "0;17,30"),
            ("remainder", "0;29,10"),
            ("provisional-area", "0;6,40"),
            ("scaled-constant", "0;3,14,26,40"),
            ("half-times-factor", "0;10"),
            ("sum-times-factor", "0;11,40"),
            ("difference", "0;1,40"),
            ("coefficient", "1;1,40"),
            ("half", "0;30,50"),
            ("half-squared", "0;15,50,41,40"),
            ("completed-square", "0;12,36,15"),
            ("root", "0;27,30"),
            ("scaled-unknown", "0;3,20"),
            ("reciprocal", "9"),
            ("length", "0;30"),
        ],
    )?;
    check_binding(&run, "x", "0;30")?;
    check_binding(&run, "y", "0;25")?;

    let printed = vec![("x".to_string(), n("0;30")), ("y".to_string(), n("0;20"))];
    let v = verify_solution("smt11.2", &printed).map_err(|e| e.to_string())?;
    ensure(v.checks.len() == 2 && !v.checks[1].satisfied(), || {
        format!("tablet width 0;20 should violate the second equation:\n{v}")
    })?;
    let corrected = vec![("x".to_string(), n("0;30")), ("y".to_string(), n("0;25"))];
    let v = verify_solution("smt11.2", &corrected).map_err(|e| e.to_string())?;
    ensure(v.all_satisfied(), || format!("corrected width should satisfy both:\n{v}"))
}

fn smt17() -> Outcome {
    let run = scribal("smt17")?;
    for (name, v) in [
        ("x", "0;40"),
        ("y", "0;20"),
        ("excess", "0;20"),
        ("true-area", "0;13,20"),
        ("checksum", "0;20"),
    ] {
        check_binding(&run, name, v)?;
    }
    // u = x + y = 4·0;15, v = xy = (u² − 0;20)/3
    let u = int(4).mul(&n("0;15"));
    let v = u.square().sub(&n("0;20")).div(&int(3)).map_err(|e| e.to_string())?;
    let (x, y) = solve_symmetric(&u, &v).map_err(|e| e.to_string())?;
    ensure(x == n("0;40") && y == n("0;20"), || format!("solve_symmetric gave {x}, {y}"))?;
    check_agree("smt17")
}

fn smt19() -> Outcome {
    let run = scribal("smt19")?;
    check_chain(
        &run,
        &[
            ("area-squared", "6,40,0,0"),
            ("product-squared", "3,39,28,43,27,24,26,40"),
            ("half", "3,20,0,0"),
            ("half-squared", "11,6,40,0,0,0,0"),
            ("completed-square", "3,50,35,23,27,24,26,40"),
            ("root", "15,11,6,40"),
            ("x4", "11,51,6,40"),
            ("x2", "26,40"),
            ("reciprocal", "0;0,2,15"),
            ("y2", "15,0"),
            ("y", "30"),
            ("x", "40"),
            ("d", "50"),
        ],
    )?;
    check_reconstructed(&run, "x")?;
    check_reconstructed(&run, "d")?;
    let f = factor(10_758_400_000_000u64).map_err(|e| e.to_string())?;
    ensure(f.factors() == [(2, 14), (5, 8), (41, 2)], || format!("factor gave {f}"))?;
    check_agree("smt19")
}

fn modern_examples() -> Outcome {
    let sys = LinearSystem::from_integers(&[&[2, -1, 3], &[1, 1, 2], &[-1, 2, 1]], &[2, 1, 0])
        .map_err(|e| e.to_string())?;
    let want = vec![ExactNumber::ratio(1, 6), ExactNumber::ratio(-1, 6), ExactNumber::ratio(1, 2)];
    match gaussian_eliminate(&sys) {
        SolutionSet::Unique(x) if x == want => {}
        other => return Err(format!("3x3 system gave {other:?}")),
    }

    let sys = LinearSystem::from_integers(&[&[1, 1, -1], &[1, -1, 1]], &[1, 1])
        .map_err(|e| e.to_string())?;
    match gaussian_eliminate(&sys) {
        SolutionSet::Parametric { particular, basis }
            if particular == [int(1), int(0), int(0)]
                && basis.len() == 1
                && basis[0][0].is_zero()
                && !basis[0][1].is_zero()
                && basis[0][1] == basis[0][2] => {}
        other => return Err(format!("2x3 system gave {other:?}")),
    }

    let roots = rational_roots(&[int(1), int(0), int(-4), int(-48)]).map_err(|e| e.to_string())?;
    ensure(roots == [int(4)], || format!("rational roots of u^3-4u-48: {roots:?}"))?;
    let run = run_problem("modern.4", Mode::Modern).map_err(|e| e.to_string())?;
    for (name, v) in [("u", 4), ("v", 4), ("x", 2), ("y", 2)] {
        ensure(run.get(name) == Some(&int(v)), || format!("modern.4: {name} = {:?}", run.get(name)))?;
    }

    let run = run_problem("modern.3", Mode::Modern).map_err(|e| e.to_string())?;
    for name in ["x", "y", "z"] {
        ensure(run.get(name) == Some(&int(1)), || format!("modern.3: {name} = {:?}", run.get(name)))?;
    }
    Ok(())
}

// ---- property suites ----

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_prop<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    runner(CASES)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn rational() -> impl Strategy<Value = ExactNumber> {
    (-100_000i64..=100_000, 1i64..=5_000).prop_map(|(p, q)| ExactNumber::ratio(p, q))
}

/// Digits of an anchored numeral with no leading or trailing zero groups.
fn canonical_numeral() -> impl Strategy<Value = (bool, Vec<u8>, Vec<u8>)> {
    let int = prop_oneof![
        Just(vec![0u8]),
        (1u8..60, prop::collection::vec(0u8..60, 0..6)).prop_map(|(h, mut t)| {
            t.insert(0, h);
            t
        }),
    ];
    let frac = prop_oneof![
        Just(vec![]),
        (prop::collection::vec(0u8..60, 0..6), 1u8..60).prop_map(|(mut h, t)| {
            h.push(t);
            h
        }),
    ];
    (any::<bool>(), int, frac)
}

fn join(digits: &[u8]) -> String {
    digits.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

/// Horner evaluation, independent of the parser.
fn digits_value(negative: bool, int: &[u8], frac: &[u8]) -> ExactNumber {
    let all = int.iter().chain(frac).fold(BigInt::from(0), |acc, &d| acc * 60 + d);
    let mut v = ExactNumber::new(all, BigInt::from(60).pow(frac.len() as u32)).unwrap();
    if negative {
        v = v.neg();
    }
    v
}

fn roundtrip() -> Outcome {
    run_prop("roundtrip", canonical_numeral(), |(neg, int, frac)| {
        let is_zero = int == [0] && frac.is_empty();
        let sign = if neg && !is_zero { "-" } else { "" };
        let text = if frac.is_empty() {
            format!("{sign}{}", join(&int))
        } else {
            format!("{sign}{};{}", join(&int), join(&frac))
        };
        let parsed = numeral::parse_canonical(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&parsed, &digits_value(neg, &int, &frac));
        prop_assert_eq!(numeral::format(&parsed).unwrap(), text);
        Ok(())
    })
}

fn reciprocal_table_law() -> Outcome {
    let table = reciprocal_table(10_000).map_err(|e| e.to_string())?;
    ensure(table.len() > 80, || format!("only {} regular numbers", table.len()))?;
    for (k, r) in &table {
        let k = int(*k as i64);
        ensure(k.mul(r) == int(1), || format!("{k} * {r} != 1"))?;
        ensure(r.is_terminating(), || format!("1/{k} does not terminate"))?;
        ensure(reciprocal(&k).as_ref() == Ok(r), || format!("reciprocal({k}) disagrees"))?;
    }
    Ok(())
}

fn sqrt_law() -> Outcome {
    run_prop("sqrt", rational(), |v| {
        prop_assert_eq!(sqrt_exact(&v.square()).unwrap(), v.abs());
        Ok(())
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn factor_law() -> Outcome {
    run_prop("factor", 1u64..=1_000_000_000, |k| {
        let f = factor(k).unwrap();
        let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(product, k);
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        for &(p, e) in f.factors() {
            prop_assert!(e > 0 && is_prime(p), "{} in {}", p, f);
        }
        Ok(())
    })
}

/// Rational roots of `a·t² + b·t − c` by the quadratic formula.
fn oracle_roots(a: &ExactNumber, b: &ExactNumber, c: &ExactNumber) -> Option<BTreeSet<ExactNumber>> {
    let disc = b.square().add(&int(4).mul(a).mul(c));
    if disc.is_negative() {
        return Some(BTreeSet::new());
    }
    let (p, q) = (disc.numer(), disc.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    if &(&sp * &sp) != p || &(&sq * &sq) != q {
        return None;
    }
    let root = ExactNumber::new(sp, sq).unwrap();
    let two_a = int(2).mul(a);
    Some(
        [b.neg().add(&root), b.neg().sub(&root)]
            .iter()
            .map(|w| w.div(&two_a).unwrap())
            .collect(),
    )
}

fn small_rational() -> impl Strategy<Value = ExactNumber> {
    (-60i64..=60, 1i64..=12).prop_map(|(p, q)| ExactNumber::ratio(p, q))
}

fn quadratic_law() -> Outcome {
    // half the cases have rational roots by construction
    let from_roots = (small_rational(), small_rational(), small_rational())
        .prop_filter("a != 0", |(a, _, _)| !a.is_zero())
        .prop_map(|(a, r1, r2)| {
            let b = a.mul(&r1.add(&r2)).neg();
            let c = a.mul(&r1).mul(&r2).neg();
            (a, b, c)
        });
    let arbitrary = (small_rational(), small_rational(), small_rational())
        .prop_filter("a != 0", |(a, _, _)| !a.is_zero());
    run_prop("complete_square", prop_oneof![from_roots, arbitrary], |(a, b, c)| {
        let q = Quadratic::new(a.clone(), b.clone(), c.clone()).unwrap();
        let oracle = oracle_roots(&a, &b, &c);
        match (complete_square(&q, Mode::Modern), &oracle) {
            (Ok(sol), Some(want)) => {
                let got: BTreeSet<_> = sol.values().into_iter().collect();
                prop_assert_eq!(&got, want);
                for r in &got {
                    prop_assert!(q.residual(r).is_zero());
                }
            }
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "{}: got {:?}, oracle {:?}", q, got, want),
        }
        if let Ok(sol) = complete_square(&q, Mode::Scribal) {
            let want = oracle.clone().unwrap_or_default();
            for r in sol.values() {
                prop_assert!(!r.is_negative() && want.contains(&r), "{}: scribal root {}", q, r);
                prop_assert!(q.residual(&r).is_zero());
            }
        }
        if let Some(want) = oracle {
            // every positive root is reachable without negative numbers
            if want.iter().any(ExactNumber::is_positive) {
                let sol = complete_square(&q, Mode::Scribal)
                    .map_err(|e| TestCaseError::fail(format!("{q}: {e}")))?;
                let got: BTreeSet<_> = sol.values().into_iter().collect();
                for r in want.iter().filter(|r| r.is_positive()) {
                    prop_assert!(got.contains(r), "{}: scribal missed {}", q, r);
                }
            }
        }
        Ok(())
    })
}

fn identity_law() -> Outcome {
    for id in Identity::ALL {
        run_prop(id.name(), (rational(), rational()), |(x, y)| {
            prop_assert!(identity_check(id, &x, &y));
            Ok(())
        })?;
    }
    Ok(())
}

fn scribal_nonnegative() -> Outcome {
    for spec in corpus().problems().iter().filter(|p| p.procedure.is_some()) {
        let run = scribal(&spec.id)?;
        if let Some(e) = run.trace.entries.iter().find(|e| e.result.is_negative()) {
            return Err(format!("{}: step {} is negative", spec.id, e.index));
        }
    }
    Ok(())
}

fn properties() -> Outcome {
    let suites: [(&str, Check); 7] = [
        ("roundtrip", roundtrip),
        ("reciprocal table", reciprocal_table_law),
        ("sqrt", sqrt_law),
        ("factor", factor_law),
        ("complete_square", quadratic_law),
        ("identities", identity_law),
        ("scribal nonnegative", scribal_nonnegative),
    ];
    for (name, suite) in suites {
        suite().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_susa");
    let mut runs = 0;
    for spec in corpus().problems() {
        for (mode, present) in [
            ("scribal", spec.procedure.is_some()),
            ("modern", spec.modern_route.is_some()),
        ] {
            if !present {
                continue;
            }
            let once = || {
                Command::new(bin)
                    .args(["--json", "problem", "run", &spec.id, "--mode", mode])
                    .output()
                    .map_err(|e| e.to_string())
            };
            let (a, b) = (once()?, once()?);
            ensure(a.status.success(), || {
                format!("{} {mode}: {}", spec.id, String::from_utf8_lossy(&a.stderr))
            })?;
            ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || {
                format!("{} {mode}: output differs between runs", spec.id)
            })?;
            runs += 1;
        }
    }
    ensure(runs >= corpus().problems().len(), || format!("only {runs} runs"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("SMT 8.1 scribal run and trace chain", smt8_1),
        ("SMT 8.2 scribal run and trace chain", smt8_2),
        ("SMT 11.1 sum and reconstructed width", smt11_1),
        ("SMT 11.2 chain, corrected width, tablet width flagged", smt11_2),
        ("SMT 17 factorization route and symmetric route", smt17),
        ("SMT 19 chain, factorization, octic route", smt19),
        ("modern examples", modern_examples),
        ("property suites", properties),
        ("byte-identical --json runs", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}\n    {}", i + 1, e.replace('\n', "\n    "));
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
