//! Self-check suites: exact identities, published tables, the discrete
//! oracle and qualitative properties, each reported as a flat list of checks.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristic::{
    char_v, eigenvalues, gap_beta_derivative_sign, spectral_gap, ModelParams,
};
use crate::discrete::{
    convergence_study, default_truncation, delta_det, discrete_gap, generator_gap,
    DiscreteParams,
};
use crate::error::Result;
use crate::real::Precision;
use crate::specfun::{gamma, pcf_eval, rgamma, PcfQuery};
use crate::tables;
use crate::transient::{
    hw_laplace_limit, laplace_density, orthogonality_check, spectral_density, steady_density,
    DensityQuery,
};

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Special-function identities, symmetries and the η = 1 case.
    Quick,
    /// Everything.
    Full,
}

/// One measured quantity against its expectation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_deviation: Option<String>,
}

impl Check {
    /// |value − expected| ≤ tol.
    pub fn abs(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            check: name.into(),
            value,
            expected,
            tol,
            pass: (value - expected).abs() <= tol,
            known_deviation: None,
        }
    }

    /// |value − expected| ≤ tol·|expected|.
    pub fn rel(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let mut c = Self::abs(name, value, expected, tol);
        c.pass = (value - expected).abs() <= tol * expected.abs();
        c
    }

    /// A residual or error measure that must not exceed `tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            check: name.into(),
            value,
            expected: 0.0,
            tol,
            pass: value <= tol,
            known_deviation: None,
        }
    }

    /// value lies in [lo, hi]; `expected` holds the midpoint.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            check: name.into(),
            value,
            expected: 0.5 * (lo + hi),
            tol: 0.5 * (hi - lo),
            pass: value >= lo && value <= hi,
            known_deviation: None,
        }
    }

    fn failed(name: impl Into<String>, why: String) -> Self {
        Self {
            check: name.into(),
            value: f64::NAN,
            expected: f64::NAN,
            tol: 0.0,
            pass: false,
            known_deviation: Some(format!("error: {why}")),
        }
    }
}

/// True when every check passes or carries a recorded deviation that is not
/// an evaluation error.
#[must_use]
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| {
        c.pass
            || c
                .known_deviation
                .as_deref()
                .is_some_and(|d| !d.starts_with("error:"))
    })
}

fn guard(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, e.to_string())])
}

fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|k| a + k as f64 * step).collect()
}

fn d(p: f64, z: f64) -> Result<(f64, f64)> {
    let e = pcf_eval(PcfQuery::new(p, z))?;
    Ok((e.value, e.dz))
}

fn max_of(v: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    v.into_iter().try_fold(0.0_f64, |m, x| Ok(m.max(x?)))
}

/// Recurrences, Wronskian, values at 0 and the ODE for D_p.
pub fn specfun_checks() -> Vec<Check> {
    guard("specfun", || {
        let ps = grid(-5.0, 10.0, 0.5);
        let zs = grid(-6.0, 6.0, 0.5);
        let pts: Vec<(f64, f64)> = ps.iter().flat_map(|&p| zs.iter().map(move |&z| (p, z))).collect();
        let per: Vec<Result<[f64; 4]>> = pts
            .par_iter()
            .map(|&(p, z)| {
                let (dp, dpz) = d(p, z)?;
                let (dm1, _) = d(p - 1.0, z)?;
                let (dm2, _) = d(p - 2.0, z)?;
                let (dp1, _) = d(p + 1.0, z)?;
                let down = dpz + 0.5 * z * dp - p * dm1;
                let up = dpz - 0.5 * z * dp + dp1;
                let s_down = dpz.abs() + (1.0 + 0.5 * z.abs()) * dp.abs() + (p * dm1).abs();
                let s_up = dpz.abs() + (1.0 + 0.5 * z.abs()) * dp.abs() + dp1.abs();
                // D'' from the lowering relation applied twice
                let dm1_prime = -0.5 * z * dm1 + (p - 1.0) * dm2;
                let d2 = -0.5 * dp - 0.5 * z * dpz + p * dm1_prime;
                let ode = (d2 - (z * z / 4.0 - p - 0.5) * dp).abs() / (1.0 + dp.abs());
                // Wronskian
                let (dn, dnz) = d(p, -z)?;
                let w = dp * dnz + dpz * dn;
                let near_int = p >= -1e-3 && (p - p.round()).abs() < 1e-3;
                let wr = if near_int {
                    w.abs() / (1.0 + (dp * dnz).abs().max((dpz * dn).abs()))
                } else {
                    let target = -(2.0 * PI).sqrt() * rgamma(-p);
                    (w - target).abs() / target.abs()
                };
                Ok([down.abs() / s_down.max(1e-300), up.abs() / s_up.max(1e-300), wr, ode])
            })
            .collect();
        let mut worst = [0.0_f64; 4];
        for r in per {
            let r = r?;
            for k in 0..4 {
                worst[k] = worst[k].max(r[k]);
            }
        }
        let mut out = vec![
            Check::at_most("pcf lowering recurrence, max relative residual", worst[0], 1e-9),
            Check::at_most("pcf raising recurrence, max relative residual", worst[1], 1e-9),
            Check::at_most("pcf Wronskian, max relative error", worst[2], 1e-9),
            Check::at_most("pcf ODE residual", worst[3], 1e-8),
        ];
        for p in [-3.0, -1.5, 0.5, 2.5] {
            let (v, dv) = d(p, 0.0)?;
            let v0 = 2f64.powf(p / 2.0) * PI.sqrt() * rgamma((1.0 - p) / 2.0);
            let dv0 = -2f64.powf((p + 1.0) / 2.0) * PI.sqrt() * rgamma(-p / 2.0);
            out.push(Check::rel(format!("D_{p}(0)"), v, v0, 1e-12));
            out.push(Check::rel(format!("D'_{p}(0)"), dv, dv0, 1e-12));
        }
        let mut min_h = f64::INFINITY;
        for pp in [0.5, 1.0, 2.7] {
            for z in grid(0.0, 8.0, 0.25) {
                let (v, dv) = d(pp, z)?;
                min_h = min_h.min((pp - z * z / 4.0) * v * v + dv * dv);
            }
        }
        out.push(Check {
            check: "H(P,z) > 0 on P in {0.5,1,2.7}, z in [0,8] (min value)".into(),
            value: min_h,
            expected: 0.0,
            tol: 0.0,
            pass: min_h > 0.0,
            known_deviation: None,
        });
        Ok(out)
    })
}

fn v_unscaled(theta: f64, p: ModelParams) -> Result<(f64, f64)> {
    let c = char_v(theta, p, Precision::Auto)?;
    let s = c.ln_scale.exp();
    Ok((c.v * s, c.m * s))
}

/// Symmetries, 𝒱(0) = 0, the parity relation at integer θ and η = 1.
pub fn characteristic_checks() -> Vec<Check> {
    let mut out = guard("symmetry of V", || {
        let mut worst: f64 = 0.0;
        for &b in &[-1.5, 0.0, 0.7, 2.0] {
            for &e in &[0.3, 2.0] {
                for &t in &[-2.3, -0.6, 0.4, 1.7] {
                    let p = ModelParams::new(b, e)?;
                    let (lhs, _) = v_unscaled(t, p)?;
                    let (rhs, _) = v_unscaled(t / e, ModelParams::new(-b / e.sqrt(), 1.0 / e)?)?;
                    let rhs = e.sqrt() * rhs;
                    worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
                }
            }
        }
        Ok(vec![Check::at_most("V(theta;eta,beta) = sqrt(eta) V(theta/eta;1/eta,-beta/sqrt(eta))", worst, 1e-9)])
    });
    out.extend(guard("gap symmetry", || {
        let cases: Vec<(f64, f64)> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .flat_map(|&b| [0.25, 0.5, 2.0, 4.0].into_iter().map(move |e| (b, e)))
            .collect();
        let errs: Vec<Result<f64>> = cases
            .par_iter()
            .map(|&(b, e)| {
                let r = spectral_gap(ModelParams::new(b, e)?)?.r;
                let s = spectral_gap(ModelParams::new(-b / e.sqrt(), 1.0 / e)?)?.r;
                Ok((r - e * s).abs())
            })
            .collect();
        Ok(vec![Check::at_most("r(beta,eta) = eta r(-beta/sqrt(eta),1/eta), max error", max_of(errs)?, 1e-8)])
    }));
    out.extend(guard("V(0)", || {
        let mut worst: f64 = 0.0;
        for &(b, e) in &[(1.0, 0.5), (-1.0, 2.0), (2.5, 0.1)] {
            let c = char_v(0.0, ModelParams::new(b, e)?, Precision::Auto)?;
            worst = worst.max(c.v.abs() / (1.0 + c.dv_dtheta.abs()));
        }
        Ok(vec![Check::at_most("V(0) = 0 (scaled)", worst, 1e-12)])
    }));
    out.extend(guard("parity", || {
        let mut worst: f64 = 0.0;
        for &(b, e) in &[(0.5, 0.5), (-1.0, 2.0), (1.5, 0.3)] {
            for m in 1..=3 {
                let c = char_v(-(m as f64), ModelParams::new(b, e)?, Precision::Auto)?;
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                worst = worst.max((c.v - sign * c.m).abs() / c.v.abs());
            }
        }
        Ok(vec![Check::at_most("V(-M) = (-1)^(M+1) M(-M), M = 1..3", worst, 1e-9)])
    }));
    out.extend(guard("eta = 1", || {
        let mut v = Vec::new();
        for b in [-2.0, 0.0, 1.5] {
            let r = spectral_gap(ModelParams::new(b, 1.0)?)?.r;
            v.push(Check::abs(format!("r({b}, 1) = 1"), r, 1.0, 1e-9));
        }
        let set = eigenvalues(ModelParams::new(0.4, 1.0)?, 5)?;
        let worst = set
            .lambdas
            .iter()
            .enumerate()
            .map(|(k, l)| (l - (k + 1) as f64).abs())
            .fold(0.0, f64::max);
        v.push(Check::at_most("eta = 1 eigenvalues are 1..5", worst, 1e-8));
        for t in [0.5, 1.5, -0.5, 2.5] {
            let (val, _) = v_unscaled(t, ModelParams::new(0.8, 1.0)?)?;
            v.push(Check::rel(format!("V({t};1,0.8) = sqrt(2pi)/Gamma(theta)"), val, (2.0 * PI).sqrt() / gamma(t), 1e-10));
        }
        // free OU: resolvent and density in closed form
        let (x, x0, th, b) = (0.7, -0.4, 1.3, 0.5);
        let q = DensityQuery::new(x, x0, ModelParams::new(b, 1.0)?)?;
        let (y, y0) = (x + b, x0 + b);
        let (hi, lo) = if y > y0 { (y, y0) } else { (y0, y) };
        let closed = gamma(th) / (2.0 * PI).sqrt()
            * ((y0 * y0 - y * y) / 4.0).exp()
            * d(-th, hi)?.0
            * d(-th, -lo)?.0;
        v.push(Check::rel("eta = 1 Laplace transform vs OU resolvent", laplace_density(q, th, false)?, closed, 1e-9));
        let (x, x0, b, t): (f64, f64, f64, f64) = (0.5, -0.5, 0.3, 1.0);
        let q = DensityQuery::new(x, x0, ModelParams::new(b, 1.0)?)?;
        let var = 1.0 - (-2.0 * t).exp();
        let mean = -b + (x0 + b) * (-t).exp();
        let ou = (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
        v.push(Check::abs("eta = 1 spectral density vs OU density, t = 1", spectral_density(q, t, 20)?.value, ou, 1e-6));
        Ok(v)
    }));
    out
}

/// Criterion-6 identities: special functions plus the characteristic function.
pub fn identity_checks() -> Vec<Check> {
    let (mut a, b) = rayon::join(specfun_checks, characteristic_checks);
    a.extend(b);
    a
}

/// One check per cell of table `id`.
pub fn table_checks(id: u8) -> Vec<Check> {
    guard(&format!("table {id}"), || {
        let rep = tables::reproduce(id)?;
        Ok(rep
            .cells
            .into_iter()
            .map(|c| Check {
                check: match c.eta {
                    Some(e) => format!("table {id} {} at eta={e}", c.column),
                    None => format!("table {id} {}", c.column),
                },
                value: c.computed,
                expected: c.published,
                tol: c.tol,
                pass: c.pass,
                known_deviation: c.deviation.map(str::to_string),
            })
            .collect())
    })
}

/// Small-m triples for the generator comparison.
pub const ORACLE_TRIPLES: [(usize, f64, f64); 6] = [
    (9, 6.0, 0.7),
    (5, 4.5, 0.7),
    (10, 8.0, 0.3),
    (20, 20.0 - 4.472_135_954_999_58, 0.5),
    (25, 30.0, 2.0),
    (1, 0.5, 1.0),
];

/// Discrete model against the generator and the diffusion limit.
pub fn oracle_checks() -> Vec<Check> {
    let mut out: Vec<Check> = ORACLE_TRIPLES
        .par_iter()
        .map(|&(m, rho, eta)| {
            let name = format!("discrete gap = generator gap at (m,rho,eta)=({m},{rho:.4},{eta})");
            guard(&name, || {
                let dp = DiscreteParams::new(m, rho, eta)?;
                let g = generator_gap(dp, default_truncation(dp))?;
                Ok(vec![Check::abs(name.clone(), discrete_gap(dp)?, g.gap, 1e-6)])
            })
        })
        .flatten()
        .collect();
    out.extend(guard("Delta(0)", || {
        let dl = delta_det(0.0, DiscreteParams::new(5, 4.5, 0.7)?)?;
        Ok(vec![Check::at_most("Delta(0) = 0 relative, (m,rho,eta)=(5,4.5,0.7)", dl.mantissa.abs() / dl.magnitude, 1e-12)])
    }));
    out.extend(guard("convergence", || {
        let rows = convergence_study(1.0, 0.5, &[100, 400])?;
        let ratio = rows[0].difference.abs() / rows[1].difference.abs();
        Ok(vec![Check::within("gap difference ratio m=100 over m=400, beta=1, eta=0.5", ratio, 1.3, 3.0)])
    }));
    out
}

/// Sign law, gap bracket, orthogonality and decay rate.
pub fn property_checks() -> Vec<Check> {
    let betas = [-2.0, -1.0, -0.3, 0.4, 1.0, 2.0, 3.0];
    let etas = [0.2, 0.5, 0.8, 1.5, 2.0, 3.0];
    let cases: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| etas.iter().map(move |&e| (b, e)))
        .collect();
    let mut out: Vec<Check> = cases
        .par_iter()
        .map(|&(b, e)| {
            guard(&format!("grid point ({b},{e})"), || {
                let p = ModelParams::new(b, e)?;
                let r = spectral_gap(p)?.r;
                let s = gap_beta_derivative_sign(p)?;
                let want = if e < 1.0 { 1.0 } else { -1.0 };
                Ok(vec![
                    Check::abs(format!("sign dr/dbeta at ({b},{e})"), f64::from(s), want, 0.0),
                    Check::within(format!("min(1,eta) <= r <= max(1,eta) at ({b},{e})"), r, e.min(1.0), e.max(1.0)),
                ])
            })
        })
        .flatten()
        .collect();
    out.extend(guard("orthogonality", || {
        let p = ModelParams::new(0.5, 0.5)?;
        let mut v = Vec::new();
        for n in 1..=2 {
            for m in 1..=2 {
                let want = if n == m { 1.0 } else { 0.0 };
                v.push(Check::abs(format!("orthogonality ({n},{m})"), orthogonality_check(p, n, m)?, want, 1e-8));
            }
        }
        Ok(v)
    }));
    out.extend(guard("decay rate", || {
        let p = ModelParams::new(1.0, 0.5)?;
        let q = DensityQuery::new(0.5, -0.5, p)?;
        let pinf = steady_density(0.5, p);
        let (t1, t2) = (8.0, 12.0);
        let d1 = spectral_density(q, t1, 10)?.value - pinf;
        let d2 = spectral_density(q, t2, 10)?.value - pinf;
        let slope = (d2.abs().ln() - d1.abs().ln()) / (t2 - t1);
        let r = spectral_gap(p)?.r;
        Ok(vec![Check::rel("large-t log slope of p - p_inf vs -r", slope, -r, 0.02)])
    }));
    out
}

/// Transient checks beyond the η = 1 closed forms.
pub fn transient_checks() -> Vec<Check> {
    guard("transient", || {
        let p = ModelParams::new(1.0, 0.5)?;
        let th = 1e-7;
        let q = DensityQuery::new(0.3, -0.5, p)?;
        let res = th * laplace_density(q, th, false)?;
        let hw = hw_laplace_limit(0.5, 1.0, -0.5, 1.0)?;
        let small = laplace_density(DensityQuery::new(0.5, -0.5, ModelParams::new(1.0, 1e-4)?)?, 1.0, false)?;
        Ok(vec![
            Check::rel("theta p-hat at theta = 1e-7 vs stationary density", res, steady_density(0.3, p), 1e-6),
            Check::rel("eta = 1e-4 Laplace transform vs eta = 0 limit", small, hw, 1e-2),
        ])
    })
}

/// Runs a suite; the order of the checks does not depend on thread count.
#[must_use]
pub fn run(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Quick => identity_checks(),
        Suite::Full => {
            let groups: Vec<Box<dyn Fn() -> Vec<Check> + Sync>> = vec![
                Box::new(identity_checks),
                Box::new(transient_checks),
                Box::new(|| table_checks(2)),
                Box::new(|| table_checks(3)),
                Box::new(|| table_checks(4)),
                Box::new(|| table_checks(5)),
                Box::new(|| table_checks(6)),
                Box::new(oracle_checks),
                Box::new(property_checks),
            ];
            groups.par_iter().map(|g| g()).flatten().collect()
        }
    }
}
