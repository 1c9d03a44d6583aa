//! Scalar backends.
//!
//! Every geometric routine in the crate is generic over [`Scalar`], which is
//! implemented by exact rationals ([`Rational`]) and by binary64 floats.
//! Complexified quantities use [`num_complex::Complex`] over the same scalar
//! through the [`Field`] trait.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Relative tolerance for float equality of curvature values.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Absolute tolerance for float constancy verdicts, applied after
/// normalizing the tensor to unit max-component.
pub const FLOAT_VERDICT_TOL: f64 = 1e-8;

/// A commutative field element usable as a vector coordinate: either a real
/// scalar or a complex number over one.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    type Real: Scalar;

    fn from_real(r: Self::Real) -> Self;

    /// Multiplies by a real scalar.
    fn scale(&self, r: &Self::Real) -> Self;

    fn real_part(&self) -> Self::Real;

    fn imag_part(&self) -> Self::Real;

    fn conj(&self) -> Self;

    /// Modulus as an `f64` (for tolerance decisions only).
    fn magnitude(&self) -> f64;

    /// Exact zero test for exact backends; for floats, `|x| <= 1e-9 * max(scale, 1)`.
    fn is_negligible(&self, scale: f64) -> bool {
        if <Self::Real as Scalar>::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= FLOAT_REL_TOL * scale.max(1.0)
        }
    }
}

/// A real scalar backend.
pub trait Scalar: Field<Real = Self> + PartialOrd + num_traits::Num {
    /// Whether arithmetic is exact.
    const EXACT: bool;

    /// Short backend name used in reports.
    const NAME: &'static str;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts an `f64`; exact for rationals (every finite double is dyadic).
    fn from_f64(v: f64) -> Option<Self>;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact for rationals; the dyadic value of a float.
    fn to_rational(&self) -> Rational;

    fn abs(&self) -> Self;

    fn is_finite(&self) -> bool;

    /// Square root when it exists in the backend: always for non-negative
    /// floats, only for perfect rational squares in the exact backend.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Equality at the backend's resolution: exact, or relative `1e-9`.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            let (a, b) = (self.to_f64(), other.to_f64());
            (a - b).abs() <= FLOAT_REL_TOL * a.abs().max(b.abs()).max(1.0)
        }
    }
}

impl Field for Rational {
    type Real = Rational;

    fn from_real(r: Rational) -> Self {
        r
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn real_part(&self) -> Rational {
        self.clone()
    }

    fn imag_part(&self) -> Rational {
        Rational::zero()
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        Scalar::to_f64(self).abs()
    }
}

fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = perfect_square(self.numer())?;
        let d = perfect_square(self.denom())?;
        Some(Rational::new(n, d))
    }
}

impl Field for f64 {
    type Real = f64;

    fn from_real(r: f64) -> Self {
        r
    }

    fn scale(&self, r: &f64) -> Self {
        self * r
    }

    fn real_part(&self) -> f64 {
        *self
    }

    fn imag_part(&self) -> f64 {
        0.0
    }

    fn conj(&self) -> Self {
        *self
    }

    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl<T: Scalar> Field for Complex<T> {
    type Real = T;

    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }

    fn scale(&self, r: &T) -> Self {
        Complex::new(self.re.clone() * r.clone(), self.im.clone() * r.clone())
    }

    fn real_part(&self) -> T {
        self.re.clone()
    }

    fn imag_part(&self) -> T {
        self.im.clone()
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, `q > 0`).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
