//! Airy function Ai on the real line, and the zeros of Ai and Ai'.

use std::str::FromStr;

use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};
use crate::real::Real;
use crate::specfun::taylor::{propagate, Quadratic, State};

const AI0: &str = "0.355028053887817239260063186004183176397979174199177573";
const AIP0: &str = "-0.258819403792806798405183560189203963479091138354934582";

/// Largest index accepted by [`airy_zero`].
pub const MAX_ZERO_INDEX: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AiryZeroKind {
    OfAi,
    OfAiPrime,
}

fn constant<R: Real>(s: &str) -> R {
    R::from_dd(Dd::from_str(s).expect("valid literal"))
}

fn switch_point<R: Real>() -> R {
    R::f(if R::EXTENDED { 15.0 } else { 10.0 })
}

/// (Ai, Ai') as mantissas times exp(ln_scale), large positive x.
fn asymptotic<R: Real>(x: R) -> (R, R, R) {
    let zeta = R::f(2.0) / R::f(3.0) * x * x.sqrt();
    let inv = R::one() / zeta;
    let mut u = R::one();
    let mut su = R::one();
    let mut sv = R::one();
    let mut pw = R::one();
    let mut last = R::f(f64::INFINITY);
    for k in 1..200 {
        let kf = k as f64;
        u = u * R::f((6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0))
            / R::f((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -u * R::f(6.0 * kf + 1.0) / R::f(6.0 * kf - 1.0);
        pw = -pw * inv;
        let tu = u * pw;
        if tu.abs() >= last {
            break;
        }
        last = tu.abs();
        su += tu;
        sv += v * pw;
        if last < R::f(R::EPS * 0.1) {
            break;
        }
    }
    let q = x.sqrt().sqrt();
    let c = R::one() / (R::f(2.0) * R::pi().sqrt());
    (c * su / q, -c * q * sv, -zeta)
}

/// Ai(x) and Ai'(x) in the tier `R`, scaled: values are mantissa · exp(scale).
pub(crate) fn airy_scaled<R: Real>(x: R) -> (R, R, R) {
    let x0 = switch_point::<R>();
    let q = Quadratic {
        a: R::zero(),
        b: R::one(),
        c: R::zero(),
    };
    if x >= x0 {
        asymptotic(x)
    } else if x > R::zero() {
        let (a, d, s) = asymptotic(x0);
        let st = State {
            y: a,
            dy: d,
            w: R::zero(),
            dw: R::zero(),
            ln_scale: s,
        };
        let r = propagate(&q, x0, x, st, false);
        (r.y, r.dy, r.ln_scale)
    } else {
        let st = State {
            y: constant::<R>(AI0),
            dy: constant::<R>(AIP0),
            w: R::zero(),
            dw: R::zero(),
            ln_scale: R::zero(),
        };
        let r = propagate(&q, R::zero(), x, st, false);
        (r.y, r.dy, r.ln_scale)
    }
}

/// Ai(x) and Ai'(x) in the tier `R`.
pub fn airy_generic<R: Real>(x: R) -> (R, R) {
    let (a, d, s) = airy_scaled(x);
    let f = s.exp();
    (a * f, d * f)
}

/// Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> Result<(f64, f64)> {
    check_finite("x", x)?;
    Ok(airy_generic(x))
}

fn estimate(kind: AiryZeroKind, n: usize) -> f64 {
    let nf = n as f64;
    match kind {
        AiryZeroKind::OfAi => {
            let t = 3.0 * std::f64::consts::PI * (4.0 * nf + 3.0) / 8.0;
            -t.powf(2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t * t))
        }
        AiryZeroKind::OfAiPrime => {
            let t = 3.0 * std::f64::consts::PI * (4.0 * nf + 1.0) / 8.0;
            -t.powf(2.0 / 3.0) * (1.0 - 7.0 / (48.0 * t * t))
        }
    }
}

/// n-th zero (counting from 0 at the origin side) in the tier `R`.
pub fn airy_zero_generic<R: Real>(kind: AiryZeroKind, n: usize) -> Result<R> {
    if n > MAX_ZERO_INDEX {
        return Err(Error::Capability(format!(
            "Airy zero index {n} exceeds {MAX_ZERO_INDEX}"
        )));
    }
    let g = |x: R| {
        let (a, d) = airy_generic(x);
        match kind {
            AiryZeroKind::OfAi => a,
            AiryZeroKind::OfAiPrime => d,
        }
    };
    let e = estimate(kind, n);
    let half = (0.2 * std::f64::consts::PI / e.abs().sqrt()).min(0.25);
    let mut lo = R::f(e - half);
    let mut hi = R::f(e + half);
    let mut glo = g(lo);
    if (glo > R::zero()) == (g(hi) > R::zero()) {
        return Err(Error::NoRoot(format!("Airy zero bracket around {e}")));
    }
    for _ in 0..200 {
        let mid = (lo + hi) * R::f(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == R::zero() {
            return Ok(mid);
        }
        if (gm > R::zero()) == (glo > R::zero()) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * R::f(0.5))
}

/// a_n (zeros of Ai) or b_n (zeros of Ai'), strictly decreasing in n.
pub fn airy_zero(kind: AiryZeroKind, n: usize) -> Result<f64> {
    airy_zero_generic::<f64>(kind, n)
}
