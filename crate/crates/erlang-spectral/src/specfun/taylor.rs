//! Taylor-series propagation for y'' = q(x) y with q quadratic in x.
//!
//! Carries an optional second pair w'' = q w − y alongside, which is what the
//! parameter derivative of a solution family satisfies when ∂q/∂p = −1.

use crate::real::Real;

/// q(x) = a + b x + c x².
#[derive(Clone, Copy, Debug)]
pub(crate) struct Quadratic<R> {
    pub a: R,
    pub b: R,
    pub c: R,
}

impl<R: Real> Quadratic<R> {
    fn at(&self, x: R) -> R {
        self.a + x * (self.b + x * self.c)
    }

    fn slope(&self, x: R) -> R {
        self.b + R::f(2.0) * self.c * x
    }
}

/// (y, y', w, w') with a shared log scale.
#[derive(Clone, Copy, Debug)]
pub(crate) struct State<R> {
    pub y: R,
    pub dy: R,
    pub w: R,
    pub dw: R,
    pub ln_scale: R,
}

const MAX_TERMS: usize = 400;

fn step<R: Real>(q: &Quadratic<R>, x0: R, h: R, s: &mut State<R>, with_w: bool) {
    let h2 = h * h;
    let q0 = q.at(x0) * h2;
    let q1 = q.slope(x0) * h2 * h;
    let q2 = q.c * h2 * h2;

    // scaled coefficients c_k = a_k h^k
    let mut c = vec![s.y, s.dy * h];
    let mut d = vec![s.w, s.dw * h];
    let mut y = c[0] + c[1];
    let mut dy = c[1];
    let mut w = d[0] + d[1];
    let mut dw = d[1];
    let tol = R::f(R::EPS * 0.25);
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let at = |v: &Vec<R>, j: isize| if j < 0 { R::zero() } else { v[j as usize] };
        let ki = k as isize;
        let denom = R::f(((k + 1) * (k + 2)) as f64);
        let cn = (q0 * c[k] + q1 * at(&c, ki - 1) + q2 * at(&c, ki - 2)) / denom;
        let dn = if with_w {
            (q0 * d[k] + q1 * at(&d, ki - 1) + q2 * at(&d, ki - 2) - h2 * c[k]) / denom
        } else {
            R::zero()
        };
        c.push(cn);
        d.push(dn);
        let n = R::f((k + 2) as f64);
        y += cn;
        dy += n * cn;
        w += dn;
        dw += n * dn;
        let size = y.abs() + dy.abs() + w.abs() + dw.abs();
        if (cn.abs() + dn.abs()) * n <= tol * size {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    s.y = y;
    s.dy = dy / h;
    s.w = w;
    s.dw = dw / h;
}

fn renormalize<R: Real>(s: &mut State<R>) {
    let m = s.y.abs().max(s.dy.abs()).max(s.w.abs()).max(s.dw.abs());
    if m > R::zero() && m.is_finite() {
        let inv = R::one() / m;
        s.y *= inv;
        s.dy *= inv;
        s.w *= inv;
        s.dw *= inv;
        s.ln_scale += m.ln();
    }
}

/// Propagates `s` from `x0` to `x1` along y'' = q y.
pub(crate) fn propagate<R: Real>(
    q: &Quadratic<R>,
    x0: R,
    x1: R,
    mut s: State<R>,
    with_w: bool,
) -> State<R> {
    let mut x = x0;
    let dir = if x1 >= x0 { R::one() } else { -R::one() };
    loop {
        let remaining = (x1 - x).abs();
        if remaining <= R::zero() {
            break;
        }
        let local = q.at(x).abs() + R::f(0.25) * q.slope(x).abs() + R::f(0.0625) * q.c.abs();
        let hmax = (R::f(0.75) / (local + R::one()).sqrt()).min(R::f(0.25));
        let h = if remaining < hmax * R::f(1.0001) {
            remaining
        } else {
            hmax
        };
        step(q, x, dir * h, &mut s, with_w);
        x = if h == remaining { x1 } else { x + dir * h };
        renormalize(&mut s);
    }
    s
}
