use crate::error::{check_finite, Error, Result};
use crate::real::Real;

pub fn hermite_he_generic<R: Real>(n: usize, z: R) -> R {
    let mut prev = R::one();
    if n == 0 {
        return prev;
    }
    let mut cur = z;
    for k in 1..n {
        let next = z * cur - R::f(k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Probabilists' Hermite polynomial He_n(z).
pub fn hermite_he(n: usize, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    let v = hermite_he_generic(n, z);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Capability(format!("He_{n}({z}) overflows")))
    }
}
