//! Exact rational numbers and their sexagesimal notation.
//!
//! Two textual shapes are supported. A numeral containing `;` is *anchored*:
//! digits left of the semicolon are the integer part, digits to the right are
//! sixtieths, three-thousand-six-hundredths and so on (`0;6,40` is 1/9).
//! A numeral with only commas is *floating*, the way the tablets write
//! numbers: `4,41,40` names the digit string but not its absolute size. A
//! floating numeral becomes a number only once [`anchor`] fixes the power of
//! sixty of its last digit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest digit value in base sixty.
pub const MAX_DIGIT: u8 = 59;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseNumeralError {
    #[error("empty numeral")]
    EmptyInput,
    #[error("digit group {group} at position {position} is not a base-60 digit")]
    DigitOutOfRange { group: String, position: usize },
    #[error("malformed separator at position {position}: {reason}")]
    MalformedSeparator { position: usize, reason: &'static str },
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter { found: char, position: usize },
    #[error("a floating numeral cannot carry a sign")]
    SignedFloating,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot subtract {subtrahend} from the smaller number {minuend}")]
    NegativeResult {
        minuend: ExactNumber,
        subtrahend: ExactNumber,
    },
    #[error("{0} has no finite sexagesimal expansion")]
    NonTerminating(ExactNumber),
}

/// A reduced signed rational. Zero is always `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactNumber(BigRational);

impl ExactNumber {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    /// `numerator / denominator`, reduced. Fails on a zero denominator.
    pub fn new(
        numerator: impl Into<BigInt>,
        denominator: impl Into<BigInt>,
    ) -> Result<Self, ArithmeticError> {
        let d = denominator.into();
        if d.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        Ok(Self(BigRational::new(numerator.into(), d)))
    }

    /// Shorthand for small literal fractions. Panics on a zero denominator.
    pub fn ratio(numerator: i64, denominator: i64) -> Self {
        Self::new(numerator, denominator).expect("nonzero denominator")
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// Signed difference. Scribal computations go through [`checked_sub`](Self::checked_sub) instead.
    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ArithmeticError> {
        if other.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        Ok(Self(&self.0 / &other.0))
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    pub fn halve(&self) -> Self {
        Self(&self.0 / BigInt::from(2))
    }

    pub fn square(&self) -> Self {
        Self(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Result<Self, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exponent: i32) -> Result<Self, ArithmeticError> {
        if exponent < 0 && self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        Ok(Self(num_traits::Pow::pow(&self.0, exponent)))
    }

    /// Subtraction of a smaller number from a greater one, the only kind the
    /// scribes performed.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithmeticError> {
        if other > self {
            return Err(ArithmeticError::NegativeResult {
                minuend: self.clone(),
                subtrahend: other.clone(),
            });
        }
        Ok(Self(&self.0 - &other.0))
    }

    /// True iff the denominator has no prime factor other than 2, 3, 5.
    pub fn is_terminating(&self) -> bool {
        let mut d = self.denom().magnitude().clone();
        for p in [2u32, 3, 5] {
            let p = BigUint::from(p);
            while (&d % &p).is_zero() {
                d /= &p;
            }
        }
        d.is_one()
    }

    /// `p/q` text, always with an explicit denominator.
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    /// Canonical sexagesimal text; see [`format()`].
    pub fn to_sexagesimal(&self) -> Result<String, ArithmeticError> {
        format(self)
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactNumber({})", self.to_ratio_string())
    }
}

/// Sexagesimal when the expansion terminates, `p/q` otherwise.
impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match format(self) {
            Ok(text) => f.write_str(&text),
            Err(_) => f.write_str(&self.to_ratio_string()),
        }
    }
}

impl From<i64> for ExactNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactNumber {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

/// Parses `p`, `p/q` or `-p/q` decimal rational text.
impl FromStr for ExactNumber {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| ParseRationalError(s.to_string()))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| ParseRationalError(s.to_string()))?;
        if den.is_zero() {
            return Err(ParseRationalError(s.to_string()));
        }
        Ok(Self(BigRational::new(num, den)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ExactNumber> for &ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &ExactNumber) -> ExactNumber {
                ExactNumber(&self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for &ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-&self.0)
    }
}

/// Serialized as `{"sexagesimal": "0;30" | null, "rational": "1/2"}`.
impl serde::Serialize for ExactNumber {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ExactNumber", 2)?;
        st.serialize_field("sexagesimal", &format(self).ok())?;
        st.serialize_field("rational", &self.to_ratio_string())?;
        st.end()
    }
}

/// Accepts the serialized object (whose `sexagesimal` field, when present,
/// must agree with `rational`) or a bare string: `p/q` decimal text or an
/// anchored sexagesimal numeral.
impl<'de> serde::Deserialize<'de> for ExactNumber {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;

        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Object {
                sexagesimal: Option<String>,
                rational: String,
            },
        }

        match Repr::deserialize(deserializer)? {
            Repr::Text(text) => Self::from_text(&text).map_err(D::Error::custom),
            Repr::Object {
                sexagesimal,
                rational,
            } => {
                let value: ExactNumber = rational.parse().map_err(D::Error::custom)?;
                if let Some(sex) = sexagesimal {
                    let parsed = parse_canonical(&sex).map_err(D::Error::custom)?;
                    if parsed != value {
                        return Err(D::Error::custom(format_args!(
                            "sexagesimal {sex} disagrees with rational {rational}"
                        )));
                    }
                }
                Ok(value)
            }
        }
    }
}

impl ExactNumber {
    /// `p/q` text, or an anchored sexagesimal numeral if the text contains `;`.
    pub fn from_text(text: &str) -> Result<Self, String> {
        if text.contains(';') {
            parse_anchored(text)
                .map(|f| to_exact(&f))
                .map_err(|e| e.to_string())
        } else {
            text.parse::<ExactNumber>().map_err(|e| e.to_string())
        }
    }
}

/// An anchored base-60 numeral: sign, integer digits, fractional digits.
///
/// Canonical: no leading zero in `integer` except the lone `[0]`, no trailing
/// zero in `fraction`, and zero is never negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SexagesimalForm {
    negative: bool,
    integer: Vec<u8>,
    fraction: Vec<u8>,
}

impl SexagesimalForm {
    /// Builds a form from raw digits, normalizing to canonical shape.
    pub fn new(negative: bool, integer: Vec<u8>, fraction: Vec<u8>) -> Result<Self, ParseNumeralError> {
        for (position, &d) in integer.iter().chain(fraction.iter()).enumerate() {
            if d > MAX_DIGIT {
                return Err(ParseNumeralError::DigitOutOfRange {
                    group: d.to_string(),
                    position,
                });
            }
        }
        let mut form = Self {
            negative,
            integer,
            fraction,
        };
        form.normalize();
        Ok(form)
    }

    fn normalize(&mut self) {
        let lead = self
            .integer
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(self.integer.len());
        self.integer.drain(..lead);
        if self.integer.is_empty() {
            self.integer.push(0);
        }
        while self.fraction.last() == Some(&0) {
            self.fraction.pop();
        }
        if self.integer == [0] && self.fraction.is_empty() {
            self.negative = false;
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn integer_digits(&self) -> &[u8] {
        &self.integer
    }

    pub fn fraction_digits(&self) -> &[u8] {
        &self.fraction
    }
}

impl fmt::Display for SexagesimalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write_groups(f, &self.integer)?;
        if !self.fraction.is_empty() {
            f.write_str(";")?;
            write_groups(f, &self.fraction)?;
        }
        Ok(())
    }
}

fn write_groups(f: &mut fmt::Formatter<'_>, digits: &[u8]) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

/// A place-value-free digit string. It denotes `D * 60^k` for some unknown
/// integer `k`, where `D` is the digits read as a base-60 integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FloatingNumeral {
    digits: Vec<u8>,
}

impl FloatingNumeral {
    pub fn new(digits: Vec<u8>) -> Result<Self, ParseNumeralError> {
        if digits.is_empty() {
            return Err(ParseNumeralError::EmptyInput);
        }
        if let Some(position) = digits.iter().position(|&d| d > MAX_DIGIT) {
            return Err(ParseNumeralError::DigitOutOfRange {
                group: digits[position].to_string(),
                position,
            });
        }
        let lead = digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(digits.len() - 1);
        Ok(Self {
            digits: digits[lead..].to_vec(),
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The digit string read as a base-60 integer.
    pub fn digit_value(&self) -> BigInt {
        self.digits
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * 60 + d)
    }
}

impl fmt::Display for FloatingNumeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_groups(f, &self.digits)
    }
}

/// Result of [`parse`]: anchored iff the text contained `;`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Numeral {
    Anchored(SexagesimalForm),
    Floating(FloatingNumeral),
}

impl Numeral {
    /// Exact value, anchoring a floating numeral with `anchor_exponent` when one is given.
    pub fn value(&self, anchor_exponent: Option<i32>) -> Option<ExactNumber> {
        match self {
            Numeral::Anchored(form) => Some(to_exact(form)),
            Numeral::Floating(num) => anchor_exponent.map(|k| anchor(num, k)),
        }
    }
}

/// Parses numeral text per `'-'? group (',' group)* (';' group (',' group)*)?`
/// with `group := [0-9]{1,2}` in `0..=59`.
pub fn parse(text: &str) -> Result<Numeral, ParseNumeralError> {
    if text.is_empty() {
        return Err(ParseNumeralError::EmptyInput);
    }
    let (negative, body, offset) = match text.strip_prefix('-') {
        Some(rest) => (true, rest, 1),
        None => (false, text, 0),
    };
    if body.is_empty() {
        return Err(ParseNumeralError::EmptyInput);
    }

    let mut integer = Vec::new();
    let mut fraction = Vec::new();
    let mut seen_semicolon = false;
    let mut group_start = offset;
    let mut group = String::new();

    let close_group = |group: &mut String,
                           start: usize,
                           semicolon: bool,
                           integer: &mut Vec<u8>,
                           fraction: &mut Vec<u8>|
     -> Result<(), ParseNumeralError> {
        if group.is_empty() {
            return Err(ParseNumeralError::MalformedSeparator {
                position: start,
                reason: "empty digit group",
            });
        }
        if group.len() > 2 {
            return Err(ParseNumeralError::DigitOutOfRange {
                group: group.clone(),
                position: start,
            });
        }
        let value: u8 = group.parse().expect("one or two ascii digits");
        if value > MAX_DIGIT {
            return Err(ParseNumeralError::DigitOutOfRange {
                group: group.clone(),
                position: start,
            });
        }
        if semicolon {
            fraction.push(value);
        } else {
            integer.push(value);
        }
        group.clear();
        Ok(())
    };

    for (i, c) in body.char_indices() {
        let position = offset + i;
        match c {
            '0'..='9' => group.push(c),
            ',' => {
                close_group(&mut group, group_start, seen_semicolon, &mut integer, &mut fraction)?;
                group_start = position + 1;
            }
            ';' => {
                if seen_semicolon {
                    return Err(ParseNumeralError::MalformedSeparator {
                        position,
                        reason: "second ';'",
                    });
                }
                close_group(&mut group, group_start, seen_semicolon, &mut integer, &mut fraction)?;
                seen_semicolon = true;
                group_start = position + 1;
            }
            other => {
                return Err(ParseNumeralError::InvalidCharacter {
                    found: other,
                    position,
                })
            }
        }
    }
    close_group(&mut group, group_start, seen_semicolon, &mut integer, &mut fraction)?;

    if seen_semicolon {
        Ok(Numeral::Anchored(SexagesimalForm::new(negative, integer, fraction)?))
    } else if negative {
        Err(ParseNumeralError::SignedFloating)
    } else {
        Ok(Numeral::Floating(FloatingNumeral::new(integer)?))
    }
}

/// Parses text that must be anchored (contain `;`).
pub fn parse_anchored(text: &str) -> Result<SexagesimalForm, ParseNumeralError> {
    match parse(text)? {
        Numeral::Anchored(form) => Ok(form),
        Numeral::Floating(_) => Err(ParseNumeralError::MalformedSeparator {
            position: text.len(),
            reason: "anchored numeral needs ';'",
        }),
    }
}

pub fn to_exact(form: &SexagesimalForm) -> ExactNumber {
    let int = form
        .integer
        .iter()
        .fold(BigInt::zero(), |acc, &d| acc * 60 + d);
    let frac_num = form
        .fraction
        .iter()
        .fold(BigInt::zero(), |acc, &d| acc * 60 + d);
    let frac_den = num_traits::pow(BigInt::from(60), form.fraction.len());
    let magnitude = BigRational::new(int * &frac_den + frac_num, frac_den);
    ExactNumber(if form.negative { -magnitude } else { magnitude })
}

/// Fixes the absolute value of a floating numeral: the last digit counts
/// `60^exponent_of_last_digit`.
pub fn anchor(num: &FloatingNumeral, exponent_of_last_digit: i32) -> ExactNumber {
    let d = BigRational::from_integer(num.digit_value());
    let scale = num_traits::Pow::pow(
        &BigRational::from_integer(BigInt::from(60)),
        exponent_of_last_digit,
    );
    ExactNumber(d * scale)
}

/// The canonical anchored form of `value`, if its expansion terminates.
pub fn to_form(value: &ExactNumber) -> Result<SexagesimalForm, ArithmeticError> {
    if !value.is_terminating() {
        return Err(ArithmeticError::NonTerminating(value.clone()));
    }
    let magnitude = value.0.abs();
    let int_part = magnitude.to_integer();
    let mut integer = Vec::new();
    let mut n = int_part.magnitude().clone();
    let sixty = BigUint::from(60u32);
    while !n.is_zero() {
        let (q, r) = n.div_rem(&sixty);
        integer.push(r.to_u8().expect("remainder below 60"));
        n = q;
    }
    integer.reverse();

    let mut fraction = Vec::new();
    let mut frac = magnitude.fract();
    while !frac.is_zero() {
        frac *= BigInt::from(60);
        let digit = frac.to_integer();
        fraction.push(digit.to_u8().expect("digit below 60"));
        frac = frac.fract();
    }
    Ok(SexagesimalForm::new(value.is_negative(), integer, fraction)
        .expect("digits produced in range"))
}

/// Inverse of [`format()`]: anchored text as written, comma-only text as an
/// integer (last digit in the ones place), with an optional leading `-`.
pub fn parse_canonical(text: &str) -> Result<ExactNumber, ParseNumeralError> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let magnitude = match parse(body)? {
        Numeral::Anchored(form) if !form.is_negative() => to_exact(&form),
        Numeral::Anchored(_) => {
            return Err(ParseNumeralError::InvalidCharacter {
                found: '-',
                position: 1,
            })
        }
        Numeral::Floating(num) => anchor(&num, 0),
    };
    Ok(if negative { magnitude.neg() } else { magnitude })
}

/// Canonical sexagesimal text of `value`.
pub fn format(value: &ExactNumber) -> Result<String, ArithmeticError> {
    to_form(value).map(|form| form.to_string())
}

/// Parses anchored text or a floating numeral at a given anchor; convenience
/// for tables and tests where the absolute value is known.
pub fn sexagesimal(text: &str, anchor_exponent: i32) -> Result<ExactNumber, ParseNumeralError> {
    Ok(match parse(text)? {
        Numeral::Anchored(form) => to_exact(&form),
        Numeral::Floating(num) => anchor(&num, anchor_exponent),
    })
}

impl PartialOrd<i64> for ExactNumber {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

impl PartialEq<i64> for ExactNumber {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}
