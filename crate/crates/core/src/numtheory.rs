//! Factorization by trial division, regular numbers, reciprocals and exact
//! square roots.
//!
//! Square roots are taken the long way round: factor numerator and
//! denominator, halve every exponent. A number with an odd exponent anywhere
//! is not a perfect square and no approximation is ever produced.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeral::ExactNumber;

/// Largest integer [`factor`] accepts.
pub const FACTOR_BUDGET: u64 = 1_000_000_000_000_000;

/// Largest limit [`reciprocal_table`] accepts.
pub const TABLE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("{0} exceeds the trial-division budget of 10^15")]
    OutOfBudget(BigUint),
    #[error("{0} is not a positive integer")]
    NonPositive(BigInt),
    #[error("{0} is not a perfect square")]
    NotPerfectSquare(ExactNumber),
    #[error("square root of negative number {0}")]
    NegativeInput(ExactNumber),
    #[error("reciprocal of zero")]
    DivisionByZero,
    #[error("table limit {0} exceeds 10^6")]
    TableTooLarge(u64),
}

/// A prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
    value: BigUint,
}

impl Factorization {
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Product of the prime powers. Equals [`value`](Self::value) by construction.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    pub fn is_regular(&self) -> bool {
        self.factors.iter().all(|&(p, _)| matches!(p, 2 | 3 | 5))
    }

    pub fn is_perfect_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Square root by halving exponents, if every exponent is even.
    pub fn sqrt(&self) -> Option<BigUint> {
        self.is_perfect_square().then(|| {
            self.factors
                .iter()
                .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e / 2))
        })
    }
}

/// `2^14 * 5^8 * 41^2`; `1` for the empty factorization.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factors `n` for `1 <= n <= 10^15`.
pub fn factor(n: impl Into<BigInt>) -> Result<Factorization, NumberTheoryError> {
    let n = n.into();
    if n.sign() != Sign::Plus {
        return Err(NumberTheoryError::NonPositive(n));
    }
    let n = n.into_parts().1;
    if n > BigUint::from(FACTOR_BUDGET) {
        return Err(NumberTheoryError::OutOfBudget(n));
    }
    factor_smooth_first(&n)
}

/// Strips 2, 3 and 5 from `n` of any size, then trial-divides the cofactor,
/// which must be within budget.
fn factor_smooth_first(n: &BigUint) -> Result<Factorization, NumberTheoryError> {
    debug_assert!(!n.is_zero());
    let mut factors = Vec::new();
    let mut rest = n.clone();
    for p in [2u64, 3, 5] {
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let rest = match rest.to_u64() {
        Some(r) if r <= FACTOR_BUDGET => r,
        _ => return Err(NumberTheoryError::OutOfBudget(n.clone())),
    };
    factors.extend(wheel_trial_division(rest));
    Ok(Factorization {
        factors,
        value: n.clone(),
    })
}

/// Trial division of an integer coprime to 30, stepping through residues
/// coprime to 30.
fn wheel_trial_division(mut n: u64) -> Vec<(u64, u32)> {
    const OFFSETS: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
    let mut factors = Vec::new();
    let mut base = 0u64;
    'outer: while n > 1 {
        for &off in &OFFSETS {
            let p = base + off;
            if p < 7 {
                continue;
            }
            if p.saturating_mul(p) > n {
                break 'outer;
            }
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        base += 30;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// True iff `n`'s only prime factors are 2, 3 and 5.
pub fn is_regular(n: impl Into<BigInt>) -> Result<bool, NumberTheoryError> {
    factor(n).map(|f| f.is_regular())
}

/// Exact square root of a nonnegative rational whose numerator and
/// denominator are both perfect squares.
pub fn sqrt_exact(v: &ExactNumber) -> Result<ExactNumber, NumberTheoryError> {
    if v.is_negative() {
        return Err(NumberTheoryError::NegativeInput(v.clone()));
    }
    if v.is_zero() {
        return Ok(ExactNumber::zero());
    }
    let not_square = || NumberTheoryError::NotPerfectSquare(v.clone());
    let num = square_root_of(v.numer().magnitude()).ok_or_else(not_square)?;
    let den = square_root_of(v.denom().magnitude()).ok_or_else(not_square)?;
    Ok(ExactNumber::new(BigInt::from(num), BigInt::from(den)).expect("nonzero root of denominator"))
}

/// Root of a perfect square by halving the exponents of its factorization.
/// Non-squares are turned away by an integer-root check before any trial
/// division; squares past the factoring budget take the integer root.
fn square_root_of(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r != *n {
        return None;
    }
    match factor_smooth_first(n) {
        Ok(f) => f.sqrt(),
        Err(_) => Some(r),
    }
}

pub fn reciprocal(v: &ExactNumber) -> Result<ExactNumber, NumberTheoryError> {
    v.recip().map_err(|_| NumberTheoryError::DivisionByZero)
}

/// Every regular `n` in `1..=limit`, ascending, with its reciprocal.
pub fn reciprocal_table(limit: u64) -> Result<Vec<(u64, ExactNumber)>, NumberTheoryError> {
    if limit > TABLE_LIMIT {
        return Err(NumberTheoryError::TableTooLarge(limit));
    }
    let mut regular = Vec::new();
    let mut p2 = 1u64;
    while p2 <= limit {
        let mut p3 = p2;
        while p3 <= limit {
            let mut p5 = p3;
            while p5 <= limit {
                regular.push(p5);
                p5 *= 5;
            }
            p3 *= 3;
        }
        p2 *= 2;
    }
    regular.sort_unstable();
    Ok(regular
        .into_iter()
        .map(|n| (n, ExactNumber::ratio(1, n as i64)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeral::{format, sexagesimal};

    #[test]
    fn factors_the_huge_square() {
        let n = sexagesimal("3,50,35,23,27,24,26,40", 0).unwrap();
        assert_eq!(n, ExactNumber::from(10_758_400_000_000));
        let f = factor(n.to_integer().unwrap()).unwrap();
        assert_eq!(f.factors(), &[(2, 14), (5, 8), (41, 2)]);
        assert_eq!(f.to_string(), "2^14 * 5^8 * 41^2");
        assert_eq!(f.product(), *f.value());
    }

    #[test]
    fn factor_small_and_edge_cases() {
        assert_eq!(factor(28).unwrap().factors(), &[(2, 2), (7, 1)]);
        assert_eq!(factor(28).unwrap().to_string(), "2^2 * 7");
        assert!(factor(1).unwrap().factors().is_empty());
        assert_eq!(factor(1).unwrap().to_string(), "1");
        assert_eq!(factor(49).unwrap().factors(), &[(7, 2)]);
        assert_eq!(factor(7 * 11 * 13 * 31).unwrap().factors(), &[(7, 1), (11, 1), (13, 1), (31, 1)]);
        assert!(matches!(factor(0), Err(NumberTheoryError::NonPositive(_))));
        assert!(matches!(factor(-4), Err(NumberTheoryError::NonPositive(_))));
        assert!(matches!(
            factor(FACTOR_BUDGET + 1),
            Err(NumberTheoryError::OutOfBudget(_))
        ));
        // largest prime below 10^15
        let p = 999_999_999_999_989u64;
        assert_eq!(factor(p).unwrap().factors(), &[(p, 1)]);
    }

    #[test]
    fn square_roots_beyond_the_factoring_budget() {
        // (10^9 + 7)^2 / (2^40 * 10^9 + 9)^2
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(1u64 << 40) * 1_000_000_000u64 + 9u32;
        let v = ExactNumber::new(&p * &p, &q * &q).unwrap();
        assert_eq!(sqrt_exact(&v).unwrap(), ExactNumber::new(p, q.clone()).unwrap());
        let off = ExactNumber::new(BigInt::from(2), &q * &q).unwrap();
        assert!(matches!(sqrt_exact(&off), Err(NumberTheoryError::NotPerfectSquare(_))));
    }

    #[test]
    fn regularity() {
        assert!(is_regular(20).unwrap());
        assert!(!is_regular(28).unwrap());
        assert!(is_regular(1).unwrap());
    }

    #[test]
    fn square_roots() {
        let root = sqrt_exact(&sexagesimal("4,41,40", 0).unwrap()).unwrap();
        assert_eq!(format(&root).unwrap(), "2,10");
        let root = sqrt_exact(&sexagesimal("0;12,36,15", 0).unwrap()).unwrap();
        assert_eq!(format(&root).unwrap(), "0;27,30");
        assert!(matches!(
            sqrt_exact(&ExactNumber::from(2)),
            Err(NumberTheoryError::NotPerfectSquare(_))
        ));
        assert!(matches!(
            sqrt_exact(&ExactNumber::from(-4)),
            Err(NumberTheoryError::NegativeInput(_))
        ));
        assert!(matches!(
            sqrt_exact(&ExactNumber::ratio(4, 3)),
            Err(NumberTheoryError::NotPerfectSquare(_))
        ));
        assert_eq!(sqrt_exact(&ExactNumber::zero()).unwrap(), ExactNumber::zero());
        // regular part beyond the budget is still fine
        let big = sexagesimal("11,6,40,0,0,0,0,0,0,0,0", 0).unwrap();
        assert!(sqrt_exact(&big.square()).is_ok());
    }

    #[test]
    fn reciprocals() {
        let r = reciprocal(&sexagesimal("26,40", 0).unwrap()).unwrap();
        assert_eq!(format(&r).unwrap(), "0;0,2,15");
        assert_eq!(format(&reciprocal(&ExactNumber::from(20)).unwrap()).unwrap(), "0;3");
        assert_eq!(reciprocal(&ExactNumber::one()).unwrap(), ExactNumber::one());
        assert_eq!(reciprocal(&ExactNumber::from(28)).unwrap(), ExactNumber::ratio(1, 28));
        assert_eq!(reciprocal(&ExactNumber::zero()), Err(NumberTheoryError::DivisionByZero));
    }

    #[test]
    fn tables() {
        let t = reciprocal_table(20).unwrap();
        let ns: Vec<u64> = t.iter().map(|(n, _)| *n).collect();
        assert_eq!(ns, vec![1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 18, 20]);
        assert_eq!(format(&t.last().unwrap().1).unwrap(), "0;3");
        assert_eq!(reciprocal_table(1).unwrap(), vec![(1, ExactNumber::one())]);
        let t = reciprocal_table(1600).unwrap();
        let (n, r) = t.last().unwrap();
        assert_eq!(*n, 1600);
        assert_eq!(format(r).unwrap(), "0;0,2,15");
        assert!(reciprocal_table(0).unwrap().is_empty());
        assert!(matches!(
            reciprocal_table(TABLE_LIMIT + 1),
            Err(NumberTheoryError::TableTooLarge(_))
        ));
    }
}
