//! The scalar abstraction shared by the double and extended precision tiers.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::dd::Dd;

/// Arithmetic tier requested by a caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    /// Double precision, escalating to extended where a routine knows it must.
    #[default]
    Auto,
    Double,
    Extended,
}

pub trait Real:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Unit roundoff of the tier.
    const EPS: f64;
    const EXTENDED: bool;

    fn from_f64(x: f64) -> Self;
    /// Rounds an extended constant into this tier.
    fn from_dd(x: Dd) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan(self) -> Self;
    fn floor(self) -> Self;
    fn round(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn pi() -> Self;
    fn is_finite(self) -> bool;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    #[inline]
    fn one() -> Self {
        Self::from_f64(1.0)
    }

    #[inline]
    fn f(x: f64) -> Self {
        Self::from_f64(x)
    }

    fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    fn max(self, o: Self) -> Self {
        if o > self {
            o
        } else {
            self
        }
    }

    fn min(self, o: Self) -> Self {
        if o < self {
            o
        } else {
            self
        }
    }

    fn signum(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }

    /// sin(πx) with exact zeros at the integers.
    fn sinpi(self) -> Self {
        let n = (self * Self::f(0.5)).round() * Self::f(2.0);
        let r = self - n; // in [-1, 1]
        let a = r.abs();
        let s = if a <= Self::f(0.25) {
            (a * Self::pi()).sin()
        } else if a <= Self::f(0.75) {
            ((a - Self::f(0.5)) * Self::pi()).cos()
        } else {
            ((Self::one() - a) * Self::pi()).sin()
        };
        if r < Self::zero() {
            -s
        } else {
            s
        }
    }

    /// cos(πx) with exact zeros at the half-integers.
    fn cospi(self) -> Self {
        (self + Self::f(0.5)).sinpi()
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON * 0.5;
    const EXTENDED: bool = false;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_dd(x: Dd) -> Self {
        x.to_f64()
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn atan(self) -> Self {
        f64::atan(self)
    }
    #[inline]
    fn floor(self) -> Self {
        f64::floor(self)
    }
    #[inline]
    fn round(self) -> Self {
        f64::round(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

impl Real for Dd {
    const EPS: f64 = Dd::EPSILON;
    const EXTENDED: bool = true;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    #[inline]
    fn from_dd(x: Dd) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn sin(self) -> Self {
        Dd::sin(self)
    }
    fn cos(self) -> Self {
        Dd::cos(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        Dd::sin_cos(self)
    }
    fn atan(self) -> Self {
        Dd::atan(self)
    }
    fn floor(self) -> Self {
        Dd::floor(self)
    }
    fn round(self) -> Self {
        Dd::round(self)
    }
    fn powi(self, n: i32) -> Self {
        Dd::powi(self, n)
    }
    fn pi() -> Self {
        Dd::pi()
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}
