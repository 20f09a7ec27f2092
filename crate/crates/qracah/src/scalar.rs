//! Numeric backends.
//!
//! Every formula in the crate is generic over [`Num`], which is implemented
//! for `rug::Rational` (exact) and `rug::Float` (binary floating point with a
//! per-value precision). Parameters that appear under half-integer powers are
//! held as [`RootParam`]s: the square root is stored and the value is its
//! square, so `value^(k/2)` is just `root^k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::{Float, Rational};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Default float precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Smallest accepted float precision.
pub const MIN_PRECISION: u32 = 64;

/// Arithmetic shared by the exact and float backends.
///
/// Values carry their own context (the precision for floats), so constants
/// are usually built with [`Num::lift`] from an existing value.
pub trait Num:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// `()` for rationals, the precision in bits for floats.
    type Ctx: Copy + fmt::Debug + PartialEq + Send + Sync;

    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Precision in bits, `None` for the exact backend.
    fn precision(&self) -> Option<u32>;
    /// Canonical text: `num/den` (or an integer) for rationals, a decimal
    /// with every significant digit for floats.
    fn to_text(&self) -> String;

    fn try_div(&self, rhs: &Self) -> Result<Self>;

    fn sqrt(&self) -> Result<Self>;
    fn exp(&self) -> Result<Self>;
    /// `(ln|Γ(x)|, sign of Γ(x))`.
    fn ln_abs_gamma(&self) -> Result<(Self, i8)>;

    fn lift(&self, v: i64) -> Self {
        Self::from_i64(v, self.ctx())
    }

    fn one_like(&self) -> Self {
        self.lift(1)
    }

    fn zero_like(&self) -> Self {
        self.lift(0)
    }

    fn recip(&self) -> Result<Self> {
        self.one_like().try_div(self)
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Num for Rational {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}

    fn from_i64(v: i64, _: ()) -> Self {
        Rational::from(v)
    }

    fn from_rational(r: &Rational, _: ()) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }

    fn abs(&self) -> Self {
        self.clone().abs()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn to_text(&self) -> String {
        // rug prints integers without a denominator and reduced fractions
        // with a positive one.
        self.to_string()
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from(self / rhs))
    }

    fn sqrt(&self) -> Result<Self> {
        if self.cmp0() == Ordering::Less {
            return Err(Error::Domain("square root of a negative rational".into()));
        }
        let (n, d) = (self.numer(), self.denom());
        if n.is_perfect_square() && d.is_perfect_square() {
            Ok(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
        } else {
            Err(Error::Domain(format!("{self} has no rational square root")))
        }
    }

    fn exp(&self) -> Result<Self> {
        Err(Error::FloatOnly("exp"))
    }

    fn ln_abs_gamma(&self) -> Result<(Self, i8)> {
        Err(Error::FloatOnly("log_gamma"))
    }
}

impl Num for Float {
    type Ctx = u32;
    const EXACT: bool = false;

    fn ctx(&self) -> u32 {
        self.prec()
    }

    fn from_i64(v: i64, prec: u32) -> Self {
        Float::with_val(prec, v)
    }

    fn from_rational(r: &Rational, prec: u32) -> Self {
        Float::with_val(prec, r)
    }

    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }

    fn abs(&self) -> Self {
        self.clone().abs()
    }

    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }

    fn precision(&self) -> Option<u32> {
        Some(self.prec())
    }

    fn to_text(&self) -> String {
        float_text(self)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if Float::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(Float::with_val(self.prec(), self / rhs))
    }

    fn sqrt(&self) -> Result<Self> {
        if self.is_sign_negative() && !Float::is_zero(self) {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        Ok(self.clone().sqrt())
    }

    fn exp(&self) -> Result<Self> {
        Ok(self.clone().exp())
    }

    fn ln_abs_gamma(&self) -> Result<(Self, i8)> {
        log_gamma_signed(self)
    }
}

/// Decimal digits that fully represent a `prec`-bit mantissa.
pub fn decimal_digits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

fn float_text(x: &Float) -> String {
    if Float::is_zero(x) {
        return "0".into();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

/// `x^k` by binary exponentiation. `x^0 = 1` for every `x`, including zero
/// (empty-product convention); zero to a negative power is an error.
pub fn int_pow<T: Num>(x: &T, k: i64) -> Result<T> {
    if k < 0 {
        if x.is_zero() {
            return Err(Error::ZeroToNegativePower(k));
        }
        return int_pow(x, -k)?.recip();
    }
    let mut acc = x.one_like();
    let mut base = x.clone();
    let mut e = k as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * &base;
        }
    }
    Ok(acc)
}

/// A parameter stored through its square root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootParam<T> {
    root: T,
}

impl<T: Num> RootParam<T> {
    pub fn new(root: T) -> Self {
        Self { root }
    }

    /// Float backend only: take the square root of a nonnegative value.
    pub fn from_value(value: &T) -> Result<Self> {
        Ok(Self { root: value.sqrt()? })
    }

    pub fn root(&self) -> &T {
        &self.root
    }

    pub fn value(&self) -> T {
        self.root.clone() * &self.root
    }

    /// `value^(k/2)`, i.e. `root^k`.
    pub fn half_pow(&self, k: i64) -> Result<T> {
        int_pow(&self.root, k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { root: self.root.clone() * &other.root }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(Self { root: self.root.try_div(&other.root)? })
    }

    pub fn recip(&self) -> Result<Self> {
        Ok(Self { root: self.root.recip()? })
    }

    /// `self · base^(k/2)` at root level.
    pub fn times_half_pow(&self, base: &Self, k: i64) -> Result<Self> {
        Ok(Self { root: self.root.clone() * &base.half_pow(k)? })
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`, via MPFR's `lgamma`.
fn log_gamma_signed(x: &Float) -> Result<(Float, i8)> {
    if x.is_integer() && !x.is_sign_positive() || Float::is_zero(x) {
        return Err(Error::GammaPole(x.to_f64()));
    }
    let (v, ord) = x.clone().ln_abs_gamma();
    let sign = if ord == Ordering::Less { -1 } else { 1 };
    Ok((v, sign))
}

/// `ln Γ(x)` for `Γ(x) > 0`. Correctly rounded by MPFR (well inside 4 ulp).
pub fn log_gamma<T: Num>(x: &T) -> Result<T> {
    let (v, sign) = x.ln_abs_gamma()?;
    if sign < 0 {
        return Err(Error::Domain(format!("Gamma({}) is negative", x.to_f64())));
    }
    Ok(v)
}

/// `Γ(x)` as `±exp(ln|Γ(x)|)`.
pub fn gamma<T: Num>(x: &T) -> Result<T> {
    let (v, sign) = x.ln_abs_gamma()?;
    let g = v.exp()?;
    Ok(if sign < 0 { -g } else { g })
}

/// A backend-tagged value, used at API boundaries (CLI, reports).
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(Float),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn apply<T: Num>(x: &T, y: &T, op: ArithOp) -> Result<T> {
    Ok(match op {
        ArithOp::Add => x.clone() + y,
        ArithOp::Sub => x.clone() - y,
        ArithOp::Mul => x.clone() * y,
        ArithOp::Div => x.try_div(y)?,
    })
}

/// Binary arithmetic on tagged scalars. Mixing backends is an error.
pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar> {
    match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) => apply(a, b, op).map(Scalar::Exact),
        (Scalar::Float(a), Scalar::Float(b)) => {
            // Round at the wider of the two precisions.
            let p = a.prec().max(b.prec());
            let a = Float::with_val(p, a);
            let b = Float::with_val(p, b);
            apply(&a, &b, op).map(Scalar::Float)
        }
        _ => Err(Error::BackendMismatch),
    }
}

impl Scalar {
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Exact(r) => r.to_text(),
            Scalar::Float(f) => format!("{} [P={}]", float_text(f), f.prec()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => Num::is_zero(r),
            Scalar::Float(f) => Float::is_zero(f),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<Float> for Scalar {
    fn from(f: Float) -> Self {
        Scalar::Float(f)
    }
}

/// Parse `"a/b"`, `"a"` or a decimal such as `"0.45"` or `"-1e-3"` into an
/// exact rational. Decimals are converted exactly, not through `f64`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: rug::Integer = n.trim().parse().map_err(|_| bad())?;
        let d: rug::Integer = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Ok(i) = t.parse::<rug::Integer>() {
        return Ok(Rational::from(i));
    }
    parse_decimal(t).ok_or_else(bad)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: rug::Integer = format!("{ip}{fp}").parse().ok()?;
    let scale = exp - fp.len() as i32;
    let mut r = Rational::from(digits);
    let pow10 = Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, scale.unsigned_abs())));
    if scale >= 0 {
        r *= pow10;
    } else {
        r /= pow10;
    }
    Some(if neg { -r } else { r })
}

/// Parse a float-backend value: exact rational text converted at `prec`.
pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, parse_rational(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_addition_and_identity() {
        let x = scalar_arith(&r(1, 3).into(), &r(1, 6).into(), ArithOp::Add).unwrap();
        assert_eq!(x, Scalar::Exact(r(1, 2)));
        let y = scalar_arith(&r(5, 7).into(), &r(1, 1).into(), ArithOp::Mul).unwrap();
        assert_eq!(y, Scalar::Exact(r(5, 7)));
        let z = scalar_arith(&r(2, 7).into(), &r(2, 7).into(), ArithOp::Div).unwrap();
        assert_eq!(z.to_text(), "1");
    }

    #[test]
    fn division_by_zero_and_mismatch_are_errors() {
        let e = scalar_arith(&r(1, 2).into(), &r(0, 1).into(), ArithOp::Div);
        assert!(matches!(e, Err(Error::DivisionByZero)));
        let f = Scalar::Float(Float::with_val(64, 1));
        assert!(matches!(scalar_arith(&r(1, 2).into(), &f, ArithOp::Add), Err(Error::BackendMismatch)));
    }

    #[test]
    fn int_pow_examples() {
        assert_eq!(int_pow(&r(1, 2), 3).unwrap(), r(1, 8));
        assert_eq!(int_pow(&r(5, 3), 0).unwrap(), r(1, 1));
        assert_eq!(int_pow(&r(2, 1), -2).unwrap(), r(1, 4));
        assert_eq!(int_pow(&r(0, 1), 0).unwrap(), r(1, 1));
        assert!(matches!(int_pow(&r(0, 1), -1), Err(Error::ZeroToNegativePower(-1))));
    }

    #[test]
    fn half_pow_examples() {
        let p = RootParam::new(r(1, 2));
        assert_eq!(p.half_pow(2).unwrap(), r(1, 4));
        assert_eq!(p.half_pow(0).unwrap(), r(1, 1));
        assert_eq!(RootParam::new(r(2, 3)).half_pow(3).unwrap(), r(8, 27));
        assert_eq!(p.value(), r(1, 4));
    }

    #[test]
    fn log_gamma_values() {
        let one = Float::with_val(256, 1);
        assert!(log_gamma(&one).unwrap().is_zero());
        assert!(log_gamma(&Float::with_val(256, 2)).unwrap().is_zero());
        let half = Float::with_val(256, 0.5);
        // ln(sqrt(pi)) from an independent 60-digit reference.
        let want = Float::with_val(256, Float::parse("0.572364942924700087071713675676529355824").unwrap());
        let got = log_gamma(&half).unwrap();
        let err = Float::with_val(256, &got - &want).abs();
        assert!(err < 1e-38, "{got}");
        assert!(matches!(log_gamma(&Float::with_val(256, -2)), Err(Error::GammaPole(_))));
        assert!(matches!(log_gamma(&r(1, 2)), Err(Error::FloatOnly(_))));
    }

    #[test]
    fn gamma_sign() {
        let g = gamma(&Float::with_val(128, -0.5)).unwrap();
        // Γ(-1/2) = -2 sqrt(pi)
        let want = -2.0 * std::f64::consts::PI.sqrt();
        assert!((g.to_f64() - want).abs() < 1e-14);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("6/4").unwrap(), r(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), r(-3, 1));
        assert_eq!(parse_rational("0.45").unwrap(), r(9, 20));
        assert_eq!(parse_rational("1e-3").unwrap(), r(1, 1000));
        assert!(matches!(parse_rational("3/0"), Err(Error::Parse(_))));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(Scalar::Exact(r(6, -4)).to_text(), "-3/2");
        assert_eq!(Scalar::Exact(r(4, 2)).to_text(), "2");
        let f = Scalar::Float(Float::with_val(64, 0.5));
        assert!(f.to_text().ends_with("[P=64]"));
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(Num::sqrt(&r(4, 9)).unwrap(), r(2, 3));
        assert!(Num::sqrt(&r(2, 1)).is_err());
    }
}
