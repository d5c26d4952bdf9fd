//! Stationary and transient densities of the hybrid OU diffusion.
//!
//! The generator has unit diffusion coefficient and drift −(β + ηx) above
//! zero, −(β + x) below. Densities start from δ(x − x₀).

use std::f64::consts::PI;

use crate::characteristic::{char_parts, eigenvalues, spectral_gap, EigenSet, ModelParams};
use crate::error::{check_finite, Error, Result};
use crate::quad::integrate_pieces;
use crate::specfun::gamma::ln_gamma_signed;
use crate::specfun::pcf::{pcf_scaled, PcfScaled};

/// Below this time the spectral sum converges slowly and a warning is set.
pub const SMALL_T: f64 = 0.05;
/// Hard cap on spectral terms.
pub const MAX_TERMS: usize = 200;

/// State x and initial state x₀ for a density evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityQuery {
    pub x: f64,
    pub x0: f64,
    pub params: ModelParams,
}

impl DensityQuery {
    pub fn new(x: f64, x0: f64, params: ModelParams) -> Result<Self> {
        check_finite("x", x)?;
        check_finite("x0", x0)?;
        Ok(Self { x, x0, params })
    }

    // the same density seen through x → −x√η, t → ηt
    fn mirrored(&self) -> Self {
        let s = self.params.eta.sqrt();
        Self {
            x: -self.x * s,
            x0: -self.x0 * s,
            params: self.params.mirrored(),
        }
    }
}

/// e^{z²/2}∫_z^∞ e^{−ξ²/2} dξ on the log scale.
fn ln_tail_scaled(z: f64) -> f64 {
    if z >= 0.0 {
        let s = pcf_scaled(-1.0, z);
        s.d.ln() + s.ln_scale + z * z / 4.0
    } else {
        let s = pcf_scaled(-1.0, -z);
        let small = s.d * (s.ln_scale - z * z / 4.0).exp();
        z * z / 2.0 + ((2.0 * PI).sqrt() - small).ln()
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// The stationary law C e^{−ηx²/2−βx} (x > 0), C e^{−x²/2−βx} (x < 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyDensity {
    pub params: ModelParams,
    /// Normalizing constant; underflows to 0 when ln_c < −745.
    pub c: f64,
    pub ln_c: f64,
}

impl SteadyDensity {
    #[must_use]
    pub fn new(params: ModelParams) -> Self {
        let (b, e) = (params.beta, params.eta);
        let upper = ln_tail_scaled(b / e.sqrt()) - 0.5 * e.ln();
        let lower = ln_tail_scaled(-b);
        let ln_c = -log_add(upper, lower);
        Self {
            params,
            c: ln_c.exp(),
            ln_c,
        }
    }

    #[must_use]
    pub fn pdf(&self, x: f64) -> f64 {
        let (b, e) = (self.params.beta, self.params.eta);
        let q = if x > 0.0 { e } else { 1.0 };
        (self.ln_c - 0.5 * q * x * x - b * x).exp()
    }

    /// τ = 1/r.
    pub fn relaxation_time(&self) -> Result<f64> {
        Ok(spectral_gap(self.params)?.relaxation_time())
    }
}

/// p(x, ∞).
pub fn steady_density(x: f64, params: ModelParams) -> f64 {
    SteadyDensity::new(params).pdf(x)
}

/// Interval outside of which every density here is negligible.
pub(crate) fn support(params: ModelParams, x0: f64) -> (f64, f64) {
    let (b, e) = (params.beta, params.eta);
    let lo = (-b).min(x0).min(0.0) - 14.0;
    let hi = (-b / e).max(x0).max(0.0) + 14.0 / e.sqrt();
    (lo, hi)
}

fn ln_gamma_parts(theta: f64) -> (f64, f64) {
    let (s, l) = ln_gamma_signed(theta);
    (f64::from(s), l)
}

/// Laplace transform p̂(x; θ) of the transient density.
///
/// θ must be positive unless `continued` is set, in which case the
/// analytic continuation is returned. Removable singularities at θ = −1,
/// −2, … are evaluated by symmetric averaging.
pub fn laplace_density(q: DensityQuery, theta: f64, continued: bool) -> Result<f64> {
    check_finite("theta", theta)?;
    if theta <= 0.0 && !continued {
        return Err(Error::Domain(format!(
            "theta must be positive without continuation, got {theta}"
        )));
    }
    if q.x0 > 0.0 {
        let m = q.mirrored();
        return Ok(native(m.x, m.x0, theta / q.params.eta, m.params)? / q.params.eta.sqrt());
    }
    native(q.x, q.x0, theta, q.params)
}

fn native(x: f64, x0: f64, theta: f64, params: ModelParams) -> Result<f64> {
    let near_int = (theta - theta.round()).abs() < 1e-7;
    if x < 0.0 && theta < 0.5 && near_int {
        const H: f64 = 1e-5;
        let a = native(x, x0, theta - H, params)?;
        let b = native(x, x0, theta + H, params)?;
        return Ok(0.5 * (a + b));
    }
    let (beta, eta) = (params.beta, params.eta);
    let parts = char_parts(-theta, -theta / eta, beta, eta, true);
    if parts.v == 0.0 || parts.v.abs() < 1e-12 * parts.dv.abs() * (1.0 + theta.abs()) {
        return Err(Error::Pole { root: theta });
    }
    let se = eta.sqrt();
    let src = pcf_scaled(-theta, -x0 - beta);
    if x >= 0.0 {
        let tgt = pcf_scaled(-theta / eta, (eta * x + beta) / se);
        let ln = 0.5 * beta * (x0 - x) + 0.25 * (x0 * x0 - eta * x * x) + src.ln_scale
            + tgt.ln_scale
            - parts.ln_scale;
        return Ok(src.d * tgt.d / parts.v * ln.exp());
    }
    let ratio = parts.m / parts.v;
    // bracket u(s) + w(s)·ℳ/𝒱 with u = D_{−θ}(s), w = D_{−θ}(−s)
    let mix = |s: f64| -> (f64, f64) {
        let u = pcf_scaled(-theta, s);
        let w = pcf_scaled(-theta, -s);
        let l = u.ln_scale.max(w.ln_scale);
        (u.d * (u.ln_scale - l).exp() + w.d * ratio * (w.ln_scale - l).exp(), l)
    };
    let (outer, (bm, bl)) = if x <= x0 {
        (pcf_scaled(-theta, -x - beta), mix(x0 + beta))
    } else {
        (src, mix(x + beta))
    };
    let (gs, gl) = ln_gamma_parts(theta);
    let ln = 0.5 * beta * (x0 - x) + 0.25 * (x0 * x0 - x * x) + gl - 0.5 * (2.0 * PI).ln()
        + outer.ln_scale
        + bl;
    Ok(gs * outer.d * bm * ln.exp())
}

/// η → 0 limit of p̂ for x > 0 > x₀.
pub fn hw_laplace_limit(x: f64, theta: f64, x0: f64, beta: f64) -> Result<f64> {
    for (n, v) in [("x", x), ("theta", theta), ("x0", x0), ("beta", beta)] {
        check_finite(n, v)?;
    }
    let s = theta + beta * beta / 4.0;
    if s <= 0.0 {
        return Err(Error::BranchCut(format!(
            "theta + beta^2/4 = {s} is on the cut (branch point at theta = {})",
            -beta * beta / 4.0
        )));
    }
    if !(x > 0.0 && x0 < 0.0) {
        return Err(Error::Domain("needs x > 0 > x0".into()));
    }
    let a = pcf_scaled(-theta, -beta);
    let c = pcf_scaled(-theta, -beta - x0);
    let den = s.sqrt() - a.dz / a.d;
    if den == 0.0 {
        return Err(Error::Pole { root: theta });
    }
    let ln = 0.25 * x0 * x0 + 0.5 * beta * x0 + c.ln_scale - a.ln_scale - 0.5 * x * beta
        - x * s.sqrt();
    Ok(c.d / a.d * ln.exp() / den)
}

/// 𝒱/(θD_{−1−θ}(−β)) and ℳ/(θD_{−1−θ}(β)) at large η; both tend to 1.
pub fn rou_limit_check(theta: f64, beta: f64, eta_large: f64) -> Result<(f64, f64)> {
    check_finite("theta", theta)?;
    let params = ModelParams::new(beta, eta_large)?;
    if eta_large < 100.0 {
        return Err(Error::Domain(format!("needs eta >= 100, got {eta_large}")));
    }
    let vm = |t: f64| -> (f64, f64) {
        let p = char_parts(-t, -t / params.eta, beta, params.eta, true);
        let f = p.ln_scale.exp();
        (p.v * f, p.m * f)
    };
    let d = |z: f64, t: f64| pcf_scaled(-1.0 - t, z).to_eval().value;
    if theta == 0.0 {
        // removable: compare θ-derivatives
        const H: f64 = 1e-5;
        let (vp, mp) = vm(H);
        let (vn, mn) = vm(-H);
        let dv = (vp - vn) / (2.0 * H);
        let dm = (mp - mn) / (2.0 * H);
        return Ok((dv / d(-beta, 0.0), dm / d(beta, 0.0)));
    }
    let (v, m) = vm(theta);
    Ok((v / (theta * d(-beta, theta)), m / (theta * d(beta, theta))))
}

/// One decaying mode of the spectral expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralTerm {
    pub lambda_n: f64,
    pub k_n: f64,
    /// ∂𝒱/∂θ at −λₙ, mantissa of `delta_ln`.
    pub delta_n_star: f64,
    pub delta_ln: f64,
    params: ModelParams,
    a: PcfScaled<f64>,
    b: PcfScaled<f64>,
}

impl SpectralTerm {
    fn new(params: ModelParams, lambda: f64) -> Self {
        let (beta, eta) = (params.beta, params.eta);
        let parts = char_parts(lambda, lambda / eta, beta, eta, false);
        let a = pcf_scaled(lambda, -beta);
        let b = pcf_scaled(lambda / eta, beta / eta.sqrt());
        Self {
            lambda_n: lambda,
            k_n: a.d * b.d / parts.dv,
            delta_n_star: parts.dv,
            delta_ln: parts.ln_scale,
            params,
            a,
            b,
        }
    }

    /// ψₙ⁻(x) for x ≤ 0.
    #[must_use]
    pub fn psi_minus_at(&self, x: f64) -> f64 {
        let s = pcf_scaled(self.lambda_n, -x - self.params.beta);
        self.k_n.sqrt() * s.d / self.a.d * (s.ln_scale - self.a.ln_scale).exp()
    }

    /// ψₙ⁺(x) for x ≥ 0.
    #[must_use]
    pub fn psi_plus_at(&self, x: f64) -> f64 {
        let (beta, eta) = (self.params.beta, self.params.eta);
        let s = pcf_scaled(self.lambda_n / eta, (eta * x + beta) / eta.sqrt());
        self.k_n.sqrt() * s.d / self.b.d * (s.ln_scale - self.b.ln_scale).exp()
    }

    /// ψₙ⁻(x₀)ψₙ^±(x) without dividing by D_λ(−β) when it vanishes.
    fn product(&self, x0: f64, x: f64) -> f64 {
        let (beta, eta) = (self.params.beta, self.params.eta);
        let se = eta.sqrt();
        let s0 = pcf_scaled(self.lambda_n, -x0 - beta);
        if x >= 0.0 {
            let s = pcf_scaled(self.lambda_n / eta, (eta * x + beta) / se);
            let ln = s0.ln_scale + s.ln_scale - self.delta_ln;
            return s0.d * s.d / self.delta_n_star * ln.exp();
        }
        let s = pcf_scaled(self.lambda_n, -x - beta);
        // b/a, or −√η b'/a' from 𝒱 = 0 when a is the smaller
        let (num, den) = if self.a.d.abs() >= self.a.dz.abs() / 4.0 {
            (self.b.d, self.a.d)
        } else {
            (-se * self.b.dz, self.a.dz)
        };
        let ln = s0.ln_scale + s.ln_scale + self.b.ln_scale - self.a.ln_scale - self.delta_ln;
        s0.d * s.d * num / den / self.delta_n_star * ln.exp()
    }
}

/// A density value from the spectral sum.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    /// Heuristic bound on the omitted terms.
    pub tail_bound: f64,
    pub terms_used: usize,
    pub warning: Option<String>,
}

/// Eigenvalues and coefficients, computed once and reused across (x, x₀, t).
#[derive(Clone, Debug)]
pub struct SpectralExpansion {
    pub params: ModelParams,
    pub terms: Vec<SpectralTerm>,
    steady: SteadyDensity,
    next_lambda: f64,
}

impl SpectralExpansion {
    pub fn new(params: ModelParams, n_terms: usize) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::Domain("need at least one term".into()));
        }
        let n = n_terms.min(MAX_TERMS);
        let set: EigenSet = eigenvalues(params, n + 1)?;
        if set.lambdas.len() < n + 1 {
            return Err(Error::Convergence(
                set.diagnostic.unwrap_or_else(|| "eigenvalue scan incomplete".into()),
            ));
        }
        let terms = set.lambdas[..n]
            .iter()
            .map(|&l| SpectralTerm::new(params, l))
            .collect();
        Ok(Self {
            params,
            terms,
            steady: SteadyDensity::new(params),
            next_lambda: set.lambdas[n],
        })
    }

    /// p(x, t) for x₀ ≤ 0.
    pub fn density(&self, x: f64, x0: f64, t: f64) -> Result<DensityValue> {
        check_finite("x", x)?;
        check_finite("x0", x0)?;
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        if x0 > 0.0 {
            return Err(Error::Domain("expansion is built for x0 <= 0".into()));
        }
        let (beta, eta) = (self.params.beta, self.params.eta);
        let q = if x > 0.0 { eta } else { 1.0 };
        let pref = (0.5 * beta * (x0 - x) + 0.25 * (x0 * x0 - q * x * x)).exp();
        let mut sum = 0.0;
        let mut used = 0;
        let mut quiet = 0;
        let mut last = 0.0;
        for term in &self.terms {
            let c = term.product(x0, x) * (-term.lambda_n * t).exp();
            sum += c;
            used += 1;
            last = c.abs();
            quiet = if last * pref < 1e-12 { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
        }
        let tail_bound = if used == self.terms.len() {
            let gap = self.next_lambda - self.terms[used - 1].lambda_n;
            pref * last * (-gap * t).exp() / (1.0 - (-gap * t).exp())
        } else {
            pref * last
        };
        let warning = (t < SMALL_T).then(|| format!("t = {t} is below {SMALL_T}; spectral sum converges slowly"));
        Ok(DensityValue {
            value: self.steady.pdf(x) + pref * sum,
            tail_bound,
            terms_used: used,
            warning,
        })
    }
}

/// p(x, t) from the first `n_terms` modes.
pub fn spectral_density(q: DensityQuery, t: f64, n_terms: usize) -> Result<DensityValue> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if q.x0 > 0.0 {
        let m = q.mirrored();
        let exp = SpectralExpansion::new(m.params, n_terms)?;
        let mut v = exp.density(m.x, m.x0, t * q.params.eta)?;
        let s = q.params.eta.sqrt();
        v.value *= s;
        v.tail_bound *= s;
        return Ok(v);
    }
    SpectralExpansion::new(q.params, n_terms)?.density(q.x, q.x0, t)
}

/// ∫ψₙψₘ over the line; should equal δ(n, m).
pub fn orthogonality_check(params: ModelParams, n: usize, m: usize) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("mode indices start at 1".into()));
    }
    let set = eigenvalues(params, n.max(m))?;
    if set.lambdas.len() < n.max(m) {
        return Err(Error::Convergence(set.diagnostic.unwrap_or_default()));
    }
    let tn = SpectralTerm::new(params, set.lambdas[n - 1]);
    let tm = SpectralTerm::new(params, set.lambdas[m - 1]);
    let (lo, hi) = support(params, 0.0);
    let mid = (-params.beta).clamp(lo + 1.0, 0.0);
    let (neg, _) = integrate_pieces(
        |x| tn.psi_minus_at(x) * tm.psi_minus_at(x),
        &[lo, mid, 0.0],
        1e-12,
        1e-11,
    );
    let (pos, _) = integrate_pieces(|x| tn.psi_plus_at(x) * tm.psi_plus_at(x), &[0.0, hi], 1e-12, 1e-11);
    Ok(neg + pos)
}
