//! Gamma, reciprocal Gamma and digamma for real arguments.
//!
//! Double precision uses the g=7 Lanczos sum; the extended tier uses the
//! Stirling series after shifting the argument above 30.

use crate::dd::Dd;
use crate::real::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k-1)) as numerator/denominator pairs.
const STIRLING: [(f64, f64); 16] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360_360.0),
    (1.0, 156.0),
    (-3617.0, 122_400.0),
    (43867.0, 244_188.0),
    (-174_611.0, 125_400.0),
    (77683.0, 5796.0),
    (-236_364_091.0, 1_506_960.0),
    (657_931.0, 300.0),
    (-3_392_780_147.0, 93960.0),
    (1_723_168_255_201.0, 2_492_028.0),
    (-7_709_321_041_217.0, 505_920.0),
];

// B_{2k} / (2k)
const DIGAMMA: [(f64, f64); 16] = [
    (1.0, 12.0),
    (-1.0, 120.0),
    (1.0, 252.0),
    (-1.0, 240.0),
    (1.0, 132.0),
    (-691.0, 32760.0),
    (1.0, 12.0),
    (-3617.0, 8160.0),
    (43867.0, 14364.0),
    (-174_611.0, 6600.0),
    (77683.0, 276.0),
    (-236_364_091.0, 65520.0),
    (657_931.0, 12.0),
    (-3_392_780_147.0, 3480.0),
    (1_723_168_255_201.0, 85932.0),
    (-7_709_321_041_217.0, 16320.0),
];

fn ratio<R: Real>((n, d): (f64, f64)) -> R {
    R::f(n) / R::f(d)
}

fn half_ln_2pi<R: Real>() -> R {
    (R::f(2.0) * R::pi()).ln() * R::f(0.5)
}

fn ln_gamma_lanczos<R: Real>(x: R) -> R {
    let x = x - R::one();
    let mut a = R::f(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += R::f(c) / (x + R::f(i as f64));
    }
    let t = x + R::f(LANCZOS_G + 0.5);
    half_ln_2pi::<R>() + (x + R::f(0.5)) * t.ln() - t + a.ln()
}

fn ln_gamma_stirling<R: Real>(x: R) -> R {
    let mut x = x;
    let mut prod = R::one();
    while x < R::f(30.0) {
        prod *= x;
        x += R::one();
    }
    let inv = R::one() / x;
    let inv2 = inv * inv;
    let mut pw = inv;
    let mut sum = R::zero();
    for &c in &STIRLING {
        sum += ratio::<R>(c) * pw;
        pw *= inv2;
    }
    (x - R::f(0.5)) * x.ln() - x + half_ln_2pi::<R>() + sum - prod.ln()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma_pos<R: Real>(x: R) -> R {
    if R::EXTENDED {
        ln_gamma_stirling(x)
    } else if x < R::f(0.5) {
        // Lanczos is tuned for x >= 1/2
        ln_gamma_lanczos(x + R::one()) - x.ln()
    } else {
        ln_gamma_lanczos(x)
    }
}

/// Digamma ψ(x) for x > 0.
pub fn digamma_pos<R: Real>(x: R) -> R {
    let shift = if R::EXTENDED { 30.0 } else { 12.0 };
    let terms = if R::EXTENDED { 16 } else { 8 };
    let mut x = x;
    let mut acc = R::zero();
    while x < R::f(shift) {
        acc -= R::one() / x;
        x += R::one();
    }
    let inv2 = R::one() / (x * x);
    let mut pw = inv2;
    let mut sum = R::zero();
    for &c in DIGAMMA.iter().take(terms) {
        sum += ratio::<R>(c) * pw;
        pw *= inv2;
    }
    acc + x.ln() - R::f(0.5) / x - sum
}

/// (sign, ln|Γ(x)|). Poles give sign 0 and ln = +∞.
pub fn ln_gamma_signed<R: Real>(x: R) -> (i32, R) {
    if x > R::zero() {
        return (1, ln_gamma_pos(x));
    }
    let s = x.sinpi();
    if s == R::zero() {
        return (0, R::f(f64::INFINITY));
    }
    let sign = if s > R::zero() { 1 } else { -1 };
    (sign, R::pi().ln() - s.abs().ln() - ln_gamma_pos(R::one() - x))
}

/// 1/Γ(x) as `m · exp(e)` together with its derivative `dm · exp(e)`.
///
/// Exact zeros at the poles of Γ; never overflows.
pub fn rgamma_scaled<R: Real>(x: R) -> (R, R, R) {
    if x >= R::f(0.5) {
        (R::one(), -digamma_pos(x), -ln_gamma_pos(x))
    } else {
        let y = R::one() - x;
        let s = x.sinpi();
        let c = x.cospi();
        let pi = R::pi();
        (s / pi, c - s * digamma_pos(y) / pi, ln_gamma_pos(y))
    }
}

/// Γ(x) in double precision (±∞ at poles).
#[must_use]
pub fn gamma(x: f64) -> f64 {
    let (sign, l) = ln_gamma_signed(x);
    if sign == 0 {
        return f64::INFINITY;
    }
    f64::from(sign) * l.exp()
}

/// 1/Γ(x) in double precision, exactly zero at x = 0, −1, −2, …
#[must_use]
pub fn rgamma(x: f64) -> f64 {
    let (m, _, e) = rgamma_scaled(x);
    m * e.exp()
}

/// ln Γ(x) for x > 0 in double precision.
#[must_use]
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_pos(x)
}

#[must_use]
pub fn digamma(x: f64) -> f64 {
    digamma_pos(x)
}

/// Extended-precision 1/Γ.
#[must_use]
pub fn rgamma_dd(x: Dd) -> Dd {
    let (m, _, e) = rgamma_scaled(x);
    m * e.exp()
}
