//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! values giving roughly 32 significant decimal digits.
//!
//! Products use Dekker splitting rather than `mul_add`, so the type is fast
//! on targets without hardware FMA.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    const THRESH: f64 = 6.696_928_794_914_17e299;
    if a.abs() > THRESH {
        let b = a * 3.725_290_298_461_914e-9; // 2^-28
        let t = SPLITTER * b;
        let hi = t - (t - b);
        let lo = b - hi;
        (hi * 268_435_456.0, lo * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

const PI: Dd = Dd::new(std::f64::consts::PI, 1.224_646_799_147_353_2e-16);
const HALF_PI: Dd = Dd::new(std::f64::consts::FRAC_PI_2, 6.123_233_995_736_766e-17);
const LN2: Dd = Dd::new(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);

impl Dd {
    pub const ZERO: Dd = Dd::new(0.0, 0.0);
    pub const ONE: Dd = Dd::new(1.0, 0.0);
    pub const EPSILON: f64 = 4.93038065763132e-32; // 2^-104

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn pi() -> Self {
        PI
    }

    pub fn ln2() -> Self {
        LN2
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (s, e) = quick_two_sum(p1, p2 + self.lo * b);
        Dd::new(s, e)
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (s, e) = quick_two_sum(p1, p2);
        Dd::new(s, e)
    }

    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd::new(self.hi * f, self.lo * f)
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (s, e) = quick_two_sum(hi, self.lo.floor());
            Dd::new(s, e)
        } else {
            Dd::new(hi, 0.0)
        }
    }

    pub fn round(self) -> Self {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::new(f64::NAN, f64::NAN) };
        }
        let x = self.hi.sqrt();
        let ax = Dd::from_f64(x);
        ax + (self - ax.sqr()).mul_f64(0.5 / x)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Dd::new(f64::INFINITY, 0.0);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-10);
        // expm1 on |r| < 4e-4 by Taylor
        let mut term = r;
        let mut s = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * r / Dd::from_f64(n);
            s += term;
            if term.hi.abs() <= 1e-36 * s.hi.abs() {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s.sqr();
        }
        (s + Dd::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Dd::new(f64::NEG_INFINITY, 0.0)
            } else {
                Dd::new(f64::NAN, f64::NAN)
            };
        }
        if self.hi == f64::INFINITY {
            return self;
        }
        let x = Dd::from_f64(self.hi.ln());
        x + self * (-x).exp() - Dd::ONE
    }

    fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
        let r2 = r.sqr();
        let mut s = r;
        let mut term = r;
        let mut k = 1.0;
        loop {
            term = -(term * r2) / Dd::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        let mut c = Dd::ONE;
        let mut term = Dd::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * r2) / Dd::from_f64((k + 1.0) * (k + 2.0));
            c += term;
            k += 2.0;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        (s, c)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let k = (self.hi / HALF_PI.hi).round();
        let r = self - HALF_PI * Dd::from_f64(k);
        let (s, c) = Self::sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn atan(self) -> Self {
        let y = Dd::from_f64(self.hi.atan());
        let (s, c) = y.sin_cos();
        y + c * (self * c - s)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s, e) = quick_two_sum(s1, s2 + t2);
        Dd::new(s, e)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (s, e) = quick_two_sum(p1, p2);
        Dd::new(s, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Dd::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e) + Dd::from_f64(q3)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Dd {
            #[inline]
            fn $m(&mut self, b: Dd) { *self = *self $op b; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl fmt::Display for Dd {
    /// Scientific notation with 32 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0.0");
        }
        let neg = self.hi < 0.0;
        let mut x = self.abs();
        let mut e10 = x.hi.log10().floor() as i32;
        x /= Dd::from_f64(10.0).powi(e10);
        if x.hi >= 10.0 {
            x /= Dd::from_f64(10.0);
            e10 += 1;
        } else if x.hi < 1.0 {
            x *= Dd::from_f64(10.0);
            e10 -= 1;
        }
        let mut digits = Vec::with_capacity(33);
        for _ in 0..33 {
            let d = x.hi.floor().clamp(0.0, 9.0);
            digits.push(d as u8);
            x = (x - Dd::from_f64(d)) * Dd::from_f64(10.0);
        }
        if digits[32] >= 5 {
            let mut i = 31;
            loop {
                digits[i] += 1;
                if digits[i] < 10 {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    digits.insert(0, 1);
                    e10 += 1;
                    break;
                }
                i -= 1;
            }
        }
        let s: String = digits[..32].iter().map(|d| char::from(b'0' + d)).collect();
        write!(f, "{}{}.{}e{}", if neg { "-" } else { "" }, &s[..1], &s[1..], e10)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDdError;

impl fmt::Display for ParseDdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid double-double literal")
    }
}

impl std::error::Error for ParseDdError {}

impl FromStr for Dd {
    type Err = ParseDdError;

    /// Parses decimal literals such as `-1.2345678901234567890123456789e-3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| ParseDdError)?),
            None => (body, 0),
        };
        let mut acc = Dd::ZERO;
        let mut frac_digits = 0;
        let mut seen_dot = false;
        let mut any = false;
        for ch in mant.chars() {
            match ch {
                '.' if !seen_dot => seen_dot = true,
                '0'..='9' => {
                    any = true;
                    acc = acc * Dd::from_f64(10.0) + Dd::from_f64(f64::from(ch as u8 - b'0'));
                    if seen_dot {
                        frac_digits += 1;
                    }
                }
                _ => return Err(ParseDdError),
            }
        }
        if !any {
            return Err(ParseDdError);
        }
        let e = exp - frac_digits;
        let ten = Dd::from_f64(10.0);
        acc = if e >= 0 { acc * ten.powi(e) } else { acc / ten.powi(-e) };
        Ok(if neg { -acc } else { acc })
    }
}
