//! Parabolic cylinder functions D_p(z) for real p and z.
//!
//! For z ≥ 0 the Bromwich integral
//! D_p(z) = e^{z²/4}/(i√(2π)) ∫ e^{u²/2 − zu} u^p du
//! is summed by the trapezoid rule on a vertical line through the saddle.
//! For z < 0 we use D_p(−x) = cos(πp) D_p(x) + W(x), where W solves the same
//! equation and is started at x = 0 from the Gamma-function values there.

use crate::dd::Dd;
use crate::error::{check_finite, Result};
use crate::real::{Precision, Real};
use crate::specfun::gamma::rgamma_scaled;
use crate::specfun::taylor::{propagate, Quadratic, State};

/// Point of evaluation (index p, argument z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcfQuery {
    pub p: f64,
    pub z: f64,
}

impl PcfQuery {
    #[must_use]
    pub fn new(p: f64, z: f64) -> Self {
        Self { p, z }
    }
}

/// D_p(z) with its z, p and mixed derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcfEval {
    pub value: f64,
    pub dz: f64,
    pub dp: f64,
    /// ∂²D/∂z∂p
    pub dzp: f64,
    pub abs_err_est: f64,
}

/// Same bundle as [`PcfEval`] but every field is a mantissa to be multiplied
/// by `exp(ln_scale)`. Used wherever D_p(z) would over- or underflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcfScaled<R> {
    pub d: R,
    pub dz: R,
    pub dp: R,
    pub dzp: R,
    pub ln_scale: R,
    pub err: R,
}

impl<R: Real> PcfScaled<R> {
    fn rescaled(&self, target: R) -> [R; 5] {
        let f = (self.ln_scale - target).exp();
        [self.d * f, self.dz * f, self.dp * f, self.dzp * f, self.err * f]
    }

    /// Unscaled values in double precision.
    #[must_use]
    pub fn to_eval(&self) -> PcfEval {
        let f = self.ln_scale.to_f64().exp();
        let g = |x: R| {
            let v = x.to_f64();
            if v == 0.0 {
                0.0
            } else {
                v * f
            }
        };
        PcfEval {
            value: g(self.d),
            dz: g(self.dz),
            dp: g(self.dp),
            dzp: g(self.dzp),
            abs_err_est: g(self.err),
        }
    }
}

struct Sums<R> {
    f: [R; 4],
    mass: R,
}

fn bromwich<R: Real>(p: R, z: R) -> PcfScaled<R> {
    let two = R::f(2.0);
    let half = R::f(0.5);
    let disc = z * z - R::f(4.0) * p;
    let c0 = if disc >= R::zero() {
        (z + disc.sqrt()) * half
    } else {
        z * half
    };
    let c = c0.max(R::one());
    let lc = c.ln();
    let (tpeak, rmax) = if p > c * c {
        let tp = (p - c * c).sqrt();
        (tp, p * half * (p / (c * c)).ln() - (p - c * c) * half)
    } else {
        (R::zero(), R::zero())
    };
    let x = z * half - c;

    let expo = |t: R| {
        let s = t / c;
        p * half * (R::one() + s * s).ln() - t * t * half - rmax
    };
    let eval = |t: R| -> ([R; 4], R) {
        let s = t / c;
        let l = half * (R::one() + s * s).ln();
        let a = s.atan();
        let e = (p * l - t * t * half - rmax).exp();
        let phi = p * a + (c - z) * t;
        let (sn, cs) = phi.sin_cos();
        let lg = lc + l;
        let xr = x * lg + t * a;
        let yi = x * a - t * lg;
        let f = [
            e * cs,
            e * (x * cs + t * sn),
            e * (lg * cs - a * sn),
            e * (xr * cs - yi * sn),
        ];
        let w = (R::one() + x.abs() + t) * (R::one() + lg.abs() + a.abs());
        (f, e * w)
    };

    // integrate out to where the envelope is negligible
    let cut = R::f(R::EPS.ln() - 8.0);
    let mut tmax = tpeak + R::one();
    while expo(tmax) > cut {
        tmax += R::one();
    }

    let mut h = c.min(R::one()) * R::f(0.25);
    let n = (tmax / h).floor().to_f64() as usize + 1;
    let (f0, m0) = eval(R::zero());
    let mut sums = Sums {
        f: f0.map(|v| v * half),
        mass: m0 * half,
    };
    for k in 1..=n {
        let (f, m) = eval(h * R::f(k as f64));
        for (s, v) in sums.f.iter_mut().zip(f) {
            *s += v;
        }
        sums.mass += m;
    }
    let mut t_old = sums.f.map(|v| v * two * h);
    let mut npts = n;
    let mut err = R::zero();
    let gate = R::f(R::EPS.sqrt() * 0.1);
    for level in 0..10 {
        for k in 0..npts {
            let (f, m) = eval(h * (R::f(k as f64) + half));
            for (s, v) in sums.f.iter_mut().zip(f) {
                *s += v;
            }
            sums.mass += m;
        }
        h *= half;
        npts *= 2;
        let t_new = sums.f.map(|v| v * two * h);
        let mass = sums.mass * two * h;
        let diff = (0..4)
            .map(|j| (t_new[j] - t_old[j]).abs())
            .fold(R::zero(), R::max);
        t_old = t_new;
        err = R::f(16.0 * R::EPS) * mass + diff * diff / mass;
        if level >= 1 && diff <= gate * mass {
            break;
        }
    }

    let ln_scale = z * z * R::f(0.25) + p * lc - z * c + c * c * half
        - half * (two * R::pi()).ln()
        + rmax;
    PcfScaled {
        d: t_old[0],
        dz: t_old[1],
        dp: t_old[2],
        dzp: t_old[3],
        ln_scale,
        err,
    }
}

// z = −x with x > 0
fn reflected<R: Real>(p: R, x: R) -> PcfScaled<R> {
    let half = R::f(0.5);
    let b = bromwich(p, x);

    let (m1, dm1, e1) = rgamma_scaled((R::one() - p) * half);
    let (m2, dm2, e2) = rgamma_scaled(-p * half);
    let e = e1.max(e2);
    let (f1, f2) = ((e1 - e).exp(), (e2 - e).exp());
    let (m1, dm1, m2, dm2) = (m1 * f1, dm1 * f1, m2 * f2, dm2 * f2);
    let ln2 = R::f(2.0).ln();
    let r2 = R::f(2.0).sqrt();
    // D_p(0), D'_p(0) and their p-derivatives, all times exp(sw0)
    let d0 = m1;
    let dd0 = -r2 * m2;
    let d0p = ln2 * half * m1 - half * dm1;
    let dd0p = -r2 * (ln2 * half * m2 - half * dm2);
    let sw0 = e + half * R::pi().ln() + p * half * ln2;

    let s2 = (p * half).sinpi();
    let s2 = s2 * s2;
    let c2 = (p * half).cospi();
    let c2 = c2 * c2;
    let sn = p.sinpi();
    let cs = p.cospi();
    let pis = R::pi() * sn;
    let two = R::f(2.0);
    let start = State {
        y: two * s2 * d0,
        dy: -two * c2 * dd0,
        w: pis * d0 + two * s2 * d0p,
        dw: pis * dd0 - two * c2 * dd0p,
        ln_scale: sw0,
    };
    let q = Quadratic {
        a: -p - half,
        b: R::zero(),
        c: R::f(0.25),
    };
    let w = propagate(&q, R::zero(), x, start, true);

    let s = b.ln_scale.max(w.ln_scale);
    let [db, ddb, dpb, dzpb, eb] = b.rescaled(s);
    let fw = (w.ln_scale - s).exp();
    let (wy, wdy, ww, wdw) = (w.y * fw, w.dy * fw, w.w * fw, w.dw * fw);
    let werr = R::f(64.0 * R::EPS) * (wy.abs() + wdy.abs() + ww.abs() + wdw.abs());
    PcfScaled {
        d: cs * db + wy,
        dz: -(cs * ddb + wdy),
        dp: -pis * db + cs * dpb + ww,
        dzp: -(-pis * ddb + cs * dzpb + wdw),
        ln_scale: s,
        err: eb + werr,
    }
}

/// Scaled evaluation in the arithmetic tier `R`.
pub fn pcf_scaled<R: Real>(p: R, z: R) -> PcfScaled<R> {
    if z >= R::zero() {
        bromwich(p, z)
    } else {
        reflected(p, -z)
    }
}

/// Scaled evaluation with inputs validated and the tier chosen by `precision`.
/// `Auto` runs in double precision.
pub fn pcf_scaled_with(p: f64, z: f64, precision: Precision) -> Result<PcfScaled<f64>> {
    check_finite("p", p)?;
    check_finite("z", z)?;
    Ok(match precision {
        Precision::Extended => {
            let s = pcf_scaled(Dd::from_f64(p), Dd::from_f64(z));
            PcfScaled {
                d: s.d.to_f64(),
                dz: s.dz.to_f64(),
                dp: s.dp.to_f64(),
                dzp: s.dzp.to_f64(),
                ln_scale: s.ln_scale.to_f64(),
                err: s.err.to_f64(),
            }
        }
        _ => pcf_scaled(p, z),
    })
}

/// D_p(z) with derivatives, in the requested tier.
pub fn pcf_eval_with(q: PcfQuery, precision: Precision) -> Result<PcfEval> {
    Ok(pcf_scaled_with(q.p, q.z, precision)?.to_eval())
}

/// D_p(z) with derivatives in double precision.
pub fn pcf_eval(q: PcfQuery) -> Result<PcfEval> {
    pcf_eval_with(q, Precision::Double)
}

/// D_p(z).
pub fn pcf_d(p: f64, z: f64) -> Result<f64> {
    Ok(pcf_eval(PcfQuery::new(p, z))?.value)
}

/// ∂D_p(z)/∂z.
pub fn pcf_d_dz(p: f64, z: f64) -> Result<f64> {
    Ok(pcf_eval(PcfQuery::new(p, z))?.dz)
}

/// ∂D_p(z)/∂p.
pub fn pcf_d_dp(p: f64, z: f64) -> Result<f64> {
    Ok(pcf_eval(PcfQuery::new(p, z))?.dp)
}
