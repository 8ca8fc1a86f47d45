//! Exact scalars: big rationals and the quadratic field Q(√5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// Which field a profile's probabilities live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rational,
    QuadExt,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "rational",
            Field::QuadExt => "quad_ext",
        })
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "rational" => Ok(Field::Rational),
            "quad_ext" => Ok(Field::QuadExt),
            other => Err(Error::invalid(format!("unknown field {other:?}"))),
        }
    }
}

pub fn normalize_rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational, Error> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(Rational::new(num.into(), den))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p". Whitespace around the parts is not allowed.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::invalid(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| bad())?;
    let den = BigInt::from_str(d).map_err(|_| bad())?;
    if d.starts_with('+') || n.starts_with('+') {
        return Err(bad());
    }
    normalize_rational(num, den)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// a + b·√5 with rational a, b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero() }
    }

    pub fn sqrt5() -> Self {
        QuadExt { a: Rational::zero(), b: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone() }
    }

    /// a² − 5b², nonzero for every nonzero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(5) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

pub fn sign_quadext(x: &QuadExt) -> i8 {
    let sa = sign_rational(&x.a);
    let sb = sign_rational(&x.b);
    if sa >= 0 && sb >= 0 {
        return if sa == 0 && sb == 0 { 0 } else { 1 };
    }
    if sa <= 0 && sb <= 0 {
        return -1;
    }
    // Opposite signs: compare a² with 5b².
    let a2 = &x.a * &x.a;
    let b2 = int(5) * &x.b * &x.b;
    let mag = match a2.cmp(&b2) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    };
    if sa > 0 {
        mag
    } else {
        -mag
    }
}

pub fn sign_rational(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt5", self.a, self.b)
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        QuadExt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt { a: self.a + &o.a, b: self.b + &o.b }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        QuadExt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt { a: self.a - &o.a, b: self.b - &o.b }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b }
    }
}

impl<'a> Mul<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let a = &self.a * &o.a + int(5) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        self * &o
    }
}

impl<'a> Div<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn div(self, o: &QuadExt) -> QuadExt {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt5)");
        let p = self * &o.conj();
        QuadExt { a: p.a / &n, b: p.b / n }
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, o: QuadExt) -> QuadExt {
        self / &o
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::from_rational(Rational::one())
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_quadext(&(self.clone() - other)).cmp(&0)
    }
}

/// Common interface of the two exact fields used for probabilities.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Ord
    + std::hash::Hash
    + Send
    + Sync
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Div<Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const FIELD: Field;
    fn from_rational(r: &Rational) -> Self;
    fn as_rational(&self) -> Option<Rational>;
    fn sign(&self) -> i8;
    fn to_quad(&self) -> QuadExt;

    fn is_pos(&self) -> bool {
        self.sign() > 0
    }
}

impl Scalar for Rational {
    const FIELD: Field = Field::Rational;
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn sign(&self) -> i8 {
        sign_rational(self)
    }
    fn to_quad(&self) -> QuadExt {
        QuadExt::from_rational(self.clone())
    }
}

impl Scalar for QuadExt {
    const FIELD: Field = Field::QuadExt;
    fn from_rational(r: &Rational) -> Self {
        QuadExt::from_rational(r.clone())
    }
    fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
    fn sign(&self) -> i8 {
        sign_quadext(self)
    }
    fn to_quad(&self) -> QuadExt {
        self.clone()
    }
}
