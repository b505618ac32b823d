//! Arbitrary-precision real scalar backed by MPFR.
//!
//! Every value is created at the process-wide working precision (see
//! [`set_working_precision`]). Results are correctly rounded to nearest.
//! Operator overloads panic if MPFR hands back NaN; the fallible
//! operations (`sqrt`, `ln`, `checked_div`, ...) return [`Error::NotANumber`]
//! instead.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted by [`set_working_precision`].
pub const MIN_PRECISION: u32 = 64;

static WORKING_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

/// Current working precision in bits.
pub fn working_precision() -> u32 {
    WORKING_PRECISION.load(AtomicOrdering::Relaxed)
}

/// Sets the process-wide working precision. Intended to be called once at
/// start-up; values created earlier keep their own precision.
pub fn set_working_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION {
        return Err(Error::InvalidParameter(format!(
            "precision must be at least {MIN_PRECISION} bits, got {bits}"
        )));
    }
    WORKING_PRECISION.store(bits, AtomicOrdering::Relaxed);
    Ok(())
}

#[derive(Clone)]
pub struct BigReal(Float);

#[inline]
fn checked(f: Float, op: &'static str) -> BigReal {
    assert!(!f.is_nan(), "{}", Error::NotANumber(op));
    BigReal(f)
}

impl BigReal {
    fn with<T>(value: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigReal(Float::with_val(working_precision(), value))
    }

    pub fn zero() -> Self {
        Self::with(0)
    }

    pub fn one() -> Self {
        Self::with(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::with(v)
    }

    /// Exact conversion of a binary double.
    pub fn from_f64(v: f64) -> Self {
        assert!(!v.is_nan(), "{}", Error::NotANumber("from_f64"));
        Self::with(v)
    }

    /// `num / den`, correctly rounded.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    pub fn pi() -> Self {
        Self::with(Constant::Pi)
    }

    /// `2^exp`.
    pub fn pow2(exp: i32) -> Self {
        let mut f = Float::with_val(working_precision(), 1);
        f <<= exp;
        BigReal(f)
    }

    /// Unit roundoff of the working precision, `2^(1 - prec)`.
    pub fn epsilon() -> Self {
        Self::pow2(1 - working_precision() as i32)
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn from_float(f: Float) -> Result<Self> {
        if f.is_nan() {
            return Err(Error::NotANumber("from_float"));
        }
        Ok(BigReal(f))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        Self::with(self.0.abs_ref())
    }

    pub fn square(&self) -> Self {
        Self::with(self.0.square_ref())
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.0.is_sign_negative() && !self.0.is_zero() {
            return Err(Error::NotANumber("sqrt"));
        }
        Ok(Self::with(self.0.sqrt_ref()))
    }

    pub fn exp(&self) -> Self {
        checked(Float::with_val(working_precision(), self.0.exp_ref()), "exp")
    }

    /// Natural logarithm; fails for non-positive arguments.
    pub fn ln(&self) -> Result<Self> {
        if self.signum() <= 0 {
            return Err(Error::NotANumber("ln"));
        }
        Ok(Self::with(self.0.ln_ref()))
    }

    pub fn log10(&self) -> Result<Self> {
        if self.signum() <= 0 {
            return Err(Error::NotANumber("log10"));
        }
        Ok(Self::with(self.0.log10_ref()))
    }

    /// Euler Gamma function; fails at poles.
    pub fn gamma(&self) -> Result<Self> {
        let g = Float::with_val(working_precision(), self.0.gamma_ref());
        if g.is_nan() || g.is_infinite() {
            return Err(Error::NotANumber("gamma"));
        }
        Ok(BigReal(g))
    }

    pub fn powi(&self, n: i32) -> Self {
        checked(Float::with_val(working_precision(), (&self.0).pow(n)), "powi")
    }

    /// `self^e` for `self > 0`, or `self = 0` with `e > 0`.
    pub fn powr(&self, e: &BigReal) -> Result<Self> {
        let f = Float::with_val(working_precision(), (&self.0).pow(&e.0));
        if f.is_nan() {
            return Err(Error::NotANumber("powr"));
        }
        Ok(BigReal(f))
    }

    pub fn checked_div(&self, rhs: &BigReal) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::NotANumber("division by zero"));
        }
        Ok(Self::with(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn floor(&self) -> Self {
        Self::with(self.0.floor_ref())
    }

    /// Returns `true` when the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Total order on non-NaN values (NaN cannot be constructed).
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// `log2 |self|` without overflow; minus infinity for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.abs().log2() + f64::from(e)
    }

    /// `self += a * b` with a single rounding.
    pub fn add_mul_assign(&mut self, a: &BigReal, b: &BigReal) {
        self.0 += &a.0 * &b.0;
        assert!(!self.0.is_nan(), "{}", Error::NotANumber("add_mul"));
    }

    /// `self -= a * b` with a single rounding.
    pub fn sub_mul_assign(&mut self, a: &BigReal, b: &BigReal) {
        self.0 -= &a.0 * &b.0;
        assert!(!self.0.is_nan(), "{}", Error::NotANumber("sub_mul"));
    }

    /// Decimal string with `digits` significant digits, rounded to nearest
    /// with ties to even. Positional notation for moderate magnitudes,
    /// scientific (`1.234e-12`) otherwise.
    pub fn to_sig_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.0.is_zero() {
            return if digits == 1 {
                "0".to_string()
            } else {
                format!("0.{}", "0".repeat(digits - 1))
            };
        }
        let (neg, mantissa, exp) = self.0.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        // value = 0.mantissa * 10^exp
        let exp = exp.unwrap_or(0);
        let mut out = String::with_capacity(digits + 8);
        if neg {
            out.push('-');
        }
        let point = exp; // digits before the decimal point
        if (-4..=15).contains(&point) {
            if point <= 0 {
                out.push_str("0.");
                out.push_str(&"0".repeat((-point) as usize));
                out.push_str(&mantissa);
            } else if point as usize >= mantissa.len() {
                out.push_str(&mantissa);
                out.push_str(&"0".repeat(point as usize - mantissa.len()));
            } else {
                out.push_str(&mantissa[..point as usize]);
                out.push('.');
                out.push_str(&mantissa[point as usize..]);
            }
        } else {
            out.push_str(&mantissa[..1]);
            if mantissa.len() > 1 {
                out.push('.');
                out.push_str(&mantissa[1..]);
            }
            out.push_str(&format!("e{}", point - 1));
        }
        out
    }
}

impl Default for BigReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i32> for BigReal {
    fn from(v: i32) -> Self {
        Self::from_i64(v as i64)
    }
}

impl From<i64> for BigReal {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl From<u32> for BigReal {
    fn from(v: u32) -> Self {
        Self::from_i64(v as i64)
    }
}

impl From<usize> for BigReal {
    fn from(v: usize) -> Self {
        Self::from_i64(v as i64)
    }
}

impl FromStr for BigReal {
    type Err = Error;

    /// Parses a decimal literal at working precision (correctly rounded,
    /// so `"0.1"` is not the binary double 0.1).
    fn from_str(s: &str) -> Result<Self> {
        let parsed =
            Float::parse(s.trim()).map_err(|e| Error::InvalidArgument(format!("cannot parse `{s}` as a real: {e}")))?;
        let f = Float::with_val(working_precision(), parsed);
        BigReal::from_float(f)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sig_string(24))
    }
}

impl fmt::Display for BigReal {
    /// `{}` prints 20 significant digits; `{:.N}` prints N.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.pad(&self.to_sig_string(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<i32> for BigReal {
    fn eq(&self, other: &i32) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i32> for BigReal {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::with(-&self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident, $sym:tt, $name:literal) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(self, rhs: &BigReal) -> BigReal {
                checked(Float::with_val(working_precision(), &self.0 $sym &rhs.0), $name)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(self, rhs: BigReal) -> BigReal {
                self $sym &rhs
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(mut self, rhs: &BigReal) -> BigReal {
                $atr::$amethod(&mut self.0, &rhs.0);
                checked(self.0, $name)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(self, rhs: BigReal) -> BigReal {
                self $sym &rhs
            }
        }
        impl $tr<i32> for &BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(self, rhs: i32) -> BigReal {
                checked(Float::with_val(working_precision(), &self.0 $sym rhs), $name)
            }
        }
        impl $tr<i32> for BigReal {
            type Output = BigReal;
            #[inline]
            fn $method(mut self, rhs: i32) -> BigReal {
                $atr::$amethod(&mut self.0, rhs);
                checked(self.0, $name)
            }
        }
        impl $atr<&BigReal> for BigReal {
            #[inline]
            fn $amethod(&mut self, rhs: &BigReal) {
                $atr::$amethod(&mut self.0, &rhs.0);
                assert!(!self.0.is_nan(), "{}", Error::NotANumber($name));
            }
        }
        impl $atr<BigReal> for BigReal {
            #[inline]
            fn $amethod(&mut self, rhs: BigReal) {
                $atr::$amethod(self, &rhs);
            }
        }
        impl $atr<i32> for BigReal {
            #[inline]
            fn $amethod(&mut self, rhs: i32) {
                $atr::$amethod(&mut self.0, rhs);
                assert!(!self.0.is_nan(), "{}", Error::NotANumber($name));
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +, "add");
binop!(Sub, sub, SubAssign, sub_assign, -, "sub");
binop!(Mul, mul, MulAssign, mul_assign, *, "mul");
binop!(Div, div, DivAssign, div_assign, /, "div");

impl Sub<&BigReal> for i32 {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        BigReal::from(self) - rhs
    }
}

impl Mul<&BigReal> for i32 {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        rhs * self
    }
}

impl Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(iter: I) -> BigReal {
        iter.fold(BigReal::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigReal> for BigReal {
    fn sum<I: Iterator<Item = &'a BigReal>>(iter: I) -> BigReal {
        iter.fold(BigReal::zero(), |acc, x| acc + x)
    }
}

impl Product for BigReal {
    fn product<I: Iterator<Item = BigReal>>(iter: I) -> BigReal {
        iter.fold(BigReal::one(), |acc, x| acc * x)
    }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[BigReal], b: &[BigReal]) -> BigReal {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigReal::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_squared_is_two() {
        let r = BigReal::from(2).sqrt().unwrap();
        let diff = (r.square() - 2).abs();
        assert!(diff < BigReal::epsilon() * 4);
    }

    #[test]
    fn nan_producing_ops_are_errors() {
        assert_eq!(BigReal::from(-1).sqrt(), Err(Error::NotANumber("sqrt")));
        assert!(BigReal::zero().ln().is_err());
        assert!(BigReal::one().checked_div(&BigReal::zero()).is_err());
        assert!(BigReal::zero().gamma().is_err());
    }

    #[test]
    #[should_panic(expected = "NaN")]
    fn operator_nan_panics() {
        let inf = BigReal::one() / BigReal::zero();
        let _ = &inf - &inf;
    }

    #[test]
    fn decimal_parsing_is_correctly_rounded() {
        let tenth: BigReal = "0.1".parse().unwrap();
        let ten_tenths = &tenth * 10;
        assert!((ten_tenths - 1).abs() < BigReal::epsilon() * 8);
        assert!("abc".parse::<BigReal>().is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(BigReal::from(4).to_sig_string(10), "4.000000000");
        let x: BigReal = "10.499976018".parse().unwrap();
        assert_eq!(x.to_sig_string(10), "10.49997602");
        let y: BigReal = "-1.4595871342".parse().unwrap();
        assert_eq!(y.to_sig_string(10), "-1.459587134");
        assert_eq!(BigReal::zero().to_sig_string(3), "0.00");
        let small: BigReal = "1.5e-9".parse().unwrap();
        assert_eq!(small.to_sig_string(3), "1.50e-9");
        let big: BigReal = "123456".parse().unwrap();
        assert_eq!(big.to_sig_string(3), "123000");
        let frac: BigReal = "0.00123".parse().unwrap();
        assert_eq!(frac.to_sig_string(2), "0.0012");
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = BigReal::ratio(1, 2).gamma().unwrap();
        let sp = BigReal::pi().sqrt().unwrap();
        assert!((g - sp).abs() < BigReal::epsilon() * 4);
    }
}
