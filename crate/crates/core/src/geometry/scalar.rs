use std::fmt;
use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real value carrying an integer power of the measure line, counted in
/// seconds: `dim = 1` is a time span, `dim = 2` an area (sec²), `dim = -1`
/// an inverse time such as a mass or an energy in natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureScalar {
    value: f64,
    dim: i32,
}

impl MeasureScalar {
    pub const fn new(value: f64, dim: i32) -> Self {
        Self { value, dim }
    }

    pub const fn number(value: f64) -> Self {
        Self::new(value, 0)
    }

    pub const fn seconds(value: f64) -> Self {
        Self::new(value, 1)
    }

    /// `value` per second, e.g. a mass with ħ = c = 1.
    pub const fn per_second(value: f64) -> Self {
        Self::new(value, -1)
    }

    pub const fn value(&self) -> f64 {
        self.value
    }

    pub const fn dim(&self) -> i32 {
        self.dim
    }

    /// The value, provided the dimension is the expected one.
    pub fn value_in(&self, dim: i32) -> Result<f64> {
        if self.dim == dim {
            Ok(self.value)
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: dim,
            })
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.same_dim(&rhs)?;
        Ok(Self::new(self.value + rhs.value, self.dim))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.same_dim(&rhs)?;
        Ok(Self::new(self.value - rhs.value, self.dim))
    }

    pub fn sqrt(self) -> Result<Self> {
        if self.dim % 2 != 0 || self.value < 0.0 {
            return Err(Error::InvalidSqrt {
                value: self.value,
                dim: self.dim,
            });
        }
        Ok(Self::new(self.value.sqrt(), self.dim / 2))
    }

    pub fn abs(self) -> Self {
        Self::new(self.value.abs(), self.dim)
    }

    fn same_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim == rhs.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            })
        }
    }
}

impl Mul for MeasureScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.value * rhs.value, self.dim + rhs.dim)
    }
}

impl Div for MeasureScalar {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Self::new(self.value / rhs.value, self.dim - rhs.dim)
    }
}

impl Mul<f64> for MeasureScalar {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.value * rhs, self.dim)
    }
}

impl Neg for MeasureScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.dim)
    }
}

impl fmt::Display for MeasureScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "{} sec", self.value),
            d => write!(f, "{} sec^{}", self.value, d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_dimension_addition_is_an_error() {
        let t = MeasureScalar::seconds(2.0);
        let area = MeasureScalar::new(3.0, 2);
        assert_eq!(
            t.checked_add(area),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
        assert!(t.checked_sub(MeasureScalar::number(1.0)).is_err());
        assert_eq!(t.checked_add(t).unwrap(), MeasureScalar::seconds(4.0));
    }

    #[test]
    fn products_track_dimension() {
        let t = MeasureScalar::seconds(3.0);
        let m = MeasureScalar::per_second(2.0);
        assert_eq!((t * t).dim(), 2);
        assert_eq!((t * m), MeasureScalar::number(6.0));
        assert_eq!((t / t).dim(), 0);
        assert_eq!((m / t).dim(), -2);
    }

    #[test]
    fn sqrt_rules() {
        assert_eq!(
            MeasureScalar::new(9.0, 2).sqrt().unwrap(),
            MeasureScalar::seconds(3.0)
        );
        assert!(MeasureScalar::seconds(4.0).sqrt().is_err());
        assert!(MeasureScalar::new(-1.0, 2).sqrt().is_err());
        assert_eq!(
            MeasureScalar::new(4.0, -2).sqrt().unwrap(),
            MeasureScalar::per_second(2.0)
        );
    }

    #[test]
    fn value_in_checks_dimension() {
        assert_eq!(MeasureScalar::seconds(1.5).value_in(1), Ok(1.5));
        assert!(MeasureScalar::seconds(1.5).value_in(0).is_err());
    }
}
