use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Number field of a matrix ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(format!("unknown field `{other}` (expected real|complex)")),
        }
    }
}

/// Floating point type underlying every scalar: `f32` or `f64`.
pub trait RealScalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// Matrix entry type: a real float or a complex number over one.
///
/// Real entries behave as complex numbers with zero imaginary part, so the
/// linear algebra kernels are written once against this trait.
pub trait Scalar:
    Copy
    + PartialEq
    + NumAssign
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + std::ops::Neg<Output = Self>
    + Sum
    + Debug
    + Default
    + Send
    + Sync
    + 'static
{
    type Real: RealScalar;

    const FIELD: Field;

    fn from_real(re: Self::Real) -> Self;
    /// Builds `re + i·im`; the imaginary part is dropped for real scalars.
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    fn abs_sqr(self) -> Self::Real;
    fn scale(self, factor: Self::Real) -> Self;

    /// `|z|` as `sqrt(re² + im²)`; entries here are O(1), so the overflow
    /// protection of `hypot` is not needed and its cost is.
    #[inline]
    fn modulus(self) -> Self::Real {
        self.abs_sqr().sqrt()
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }
}

macro_rules! impl_real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const FIELD: Field = Field::Real;

            #[inline]
            fn from_real(re: $t) -> Self {
                re
            }
            #[inline]
            fn from_parts(re: $t, _im: $t) -> Self {
                re
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn abs_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn scale(self, factor: $t) -> Self {
                self * factor
            }
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
        }
    };
}

macro_rules! impl_complex_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            type Real = $t;
            const FIELD: Field = Field::Complex;

            #[inline]
            fn from_real(re: $t) -> Self {
                Complex::new(re, 0.0)
            }
            #[inline]
            fn from_parts(re: $t, im: $t) -> Self {
                Complex::new(re, im)
            }
            #[inline]
            fn re(self) -> $t {
                self.re
            }
            #[inline]
            fn im(self) -> $t {
                self.im
            }
            #[inline]
            fn conj(self) -> Self {
                Complex::new(self.re, -self.im)
            }
            #[inline]
            fn abs_sqr(self) -> $t {
                self.re * self.re + self.im * self.im
            }
            #[inline]
            fn scale(self, factor: $t) -> Self {
                Complex::new(self.re * factor, self.im * factor)
            }
        }
    };
}

impl_real_scalar!(f32);
impl_real_scalar!(f64);
impl_complex_scalar!(f32);
impl_complex_scalar!(f64);

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn field_parses_case_insensitively() {
        assert_eq!("Real".parse::<Field>().unwrap(), Field::Real);
        assert_eq!("complex".parse::<Field>().unwrap(), Field::Complex);
        assert!("quaternion".parse::<Field>().is_err());
    }

    #[test]
    fn real_scalars_drop_imaginary_parts() {
        assert_eq!(<f64 as Scalar>::from_parts(2.0, 5.0), 2.0);
        assert_eq!(Scalar::conj(-3.0f64), -3.0);
        assert_eq!(Scalar::im(1.5f32), 0.0);
    }

    #[test]
    fn complex_modulus_and_conjugate() {
        let z = Complex64::new(3.0, -4.0);
        assert_eq!(z.modulus(), 5.0);
        assert_eq!(Scalar::conj(z), Complex64::new(3.0, 4.0));
        assert_eq!(z.abs_sqr(), 25.0);
    }
}
