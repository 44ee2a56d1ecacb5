//! Scalar backends: `f64` for floating-point work and [`Rational`] for exact
//! arithmetic on integer-valued inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Field of scalars a matrix can be built over.
///
/// The two implementations differ in how rank and least-squares questions are
/// answered: `f64` goes through singular values with a tolerance, `Rational`
/// through fraction-free elimination with exact zero tests.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug + std::fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_zero(&self) -> bool;

    /// Approximate absolute value, used for pivot selection and for reporting
    /// residual magnitudes.
    fn magnitude(&self) -> f64;

    /// Nearest floating-point value.
    fn to_f64(&self) -> f64;

    /// Whether this backend is exact (no tolerances anywhere).
    fn exact() -> bool;

    /// Default comparison tolerance for this backend (0 when exact).
    fn default_tol() -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exact() -> bool {
        false
    }
    fn default_tol() -> f64 {
        1e-9
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn exact() -> bool {
        true
    }
    fn default_tol() -> f64 {
        0.0
    }
}

/// Parse a rational from an integer or `"a/b"` string form.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if Zero::is_zero(&den) {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let v: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(v))
    }
}

/// Render a rational as an integer or `"a/b"` string.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
