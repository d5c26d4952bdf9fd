//! The characteristic functions 𝒱 and ℳ of the hybrid Ornstein-Uhlenbeck
//! process, its spectral gap and its eigenvalues.
//!
//! With a = D_{−θ}(−β) and b = D_{−θ/η}(β/√η),
//! 𝒱(θ) = −√η a b' − a' b and ℳ(θ) = √η c b' − c' b with c = D_{−θ}(β).

use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};
use crate::real::{Precision, Real};
use crate::roots::{bisect, first_sign_change, linspace, par_eval};
use crate::specfun::gamma::rgamma;
use crate::specfun::pcf::pcf_scaled;

/// Scan bracket half-width around [min(1,η), max(1,η)].
pub const BRACKET_DELTA: f64 = 0.05;
/// Initial number of scan points for the gap.
pub const SCAN_POINTS: usize = 2000;
/// Scan refinement ceiling.
pub const SCAN_POINTS_MAX: usize = 32000;
/// Gaps closer to η than this are recomputed in extended precision under
/// [`Precision::Auto`].
pub const ESCALATION_WIDTH: f64 = 1e-8;

/// Capacity slack β and abandonment ratio η of the diffusion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub beta: f64,
    pub eta: f64,
}

impl ModelParams {
    pub fn new(beta: f64, eta: f64) -> Result<Self> {
        check_finite("beta", beta)?;
        check_finite("eta", eta)?;
        if eta <= 0.0 {
            return Err(Error::Domain(format!("eta must be positive, got {eta}")));
        }
        Ok(Self { beta, eta })
    }

    /// (−β/√η, 1/η), the partner under the x → −x√η symmetry.
    #[must_use]
    pub fn mirrored(&self) -> Self {
        Self {
            beta: -self.beta / self.eta.sqrt(),
            eta: 1.0 / self.eta,
        }
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.beta, self.eta).map(|_| ())
    }
}

/// 𝒱, ℳ and ∂𝒱/∂θ at one θ. The true values are the fields times
/// `exp(ln_scale)`; `ln_scale` is zero whenever that product is representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharEval {
    pub theta: f64,
    pub v: f64,
    pub m: f64,
    pub dv_dtheta: f64,
    pub ln_scale: f64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CharParts<R> {
    pub v: R,
    pub m: R,
    pub dv: R,
    pub ln_scale: R,
}

/// 𝒱 and friends with the two indices given directly: pa = −θ, pb = −θ/η.
pub(crate) fn char_parts<R: Real>(pa: R, pb: R, beta: R, eta: R, with_m: bool) -> CharParts<R> {
    let se = eta.sqrt();
    let a = pcf_scaled(pa, -beta);
    let b = pcf_scaled(pb, beta / se);
    let v = -se * a.d * b.dz - a.dz * b.d;
    let dv = se * a.dp * b.dz + a.d * b.dzp / se + a.dzp * b.d + a.dz * b.dp / eta;
    let m = if with_m {
        let c = pcf_scaled(pa, beta);
        (se * c.d * b.dz - c.dz * b.d) * (c.ln_scale - a.ln_scale).exp()
    } else {
        R::zero()
    };
    CharParts {
        v,
        m,
        dv,
        ln_scale: a.ln_scale + b.ln_scale,
    }
}

fn fold(theta: f64, p: CharParts<f64>) -> CharEval {
    let big = p.v.abs().max(p.m.abs()).max(p.dv.abs());
    let total = p.ln_scale + if big > 0.0 { big.ln() } else { 0.0 };
    if total.abs() < 600.0 && p.ln_scale.abs() < 600.0 {
        let f = p.ln_scale.exp();
        CharEval {
            theta,
            v: p.v * f,
            m: p.m * f,
            dv_dtheta: p.dv * f,
            ln_scale: 0.0,
        }
    } else {
        CharEval {
            theta,
            v: p.v,
            m: p.m,
            dv_dtheta: p.dv,
            ln_scale: p.ln_scale,
        }
    }
}

fn parts_with(pa: f64, pb: f64, params: ModelParams, precision: Precision) -> CharParts<f64> {
    match precision {
        Precision::Extended => {
            let p = char_parts(
                Dd::from_f64(pa),
                Dd::from_f64(pb),
                Dd::from_f64(params.beta),
                Dd::from_f64(params.eta),
                true,
            );
            CharParts {
                v: p.v.to_f64(),
                m: p.m.to_f64(),
                dv: p.dv.to_f64(),
                ln_scale: p.ln_scale.to_f64(),
            }
        }
        _ => char_parts(pa, pb, params.beta, params.eta, true),
    }
}

/// 𝒱(θ; η, β), ℳ(θ; η, β) and ∂𝒱/∂θ.
pub fn char_v(theta: f64, params: ModelParams, precision: Precision) -> Result<CharEval> {
    params.validate()?;
    check_finite("theta", theta)?;
    Ok(fold(
        theta,
        parts_with(-theta, -theta / params.eta, params, precision),
    ))
}

/// The β = 0 form whose zero set equals that of 𝒱(θ; η, 0).
pub fn char_v_beta0(theta: f64, eta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    if eta <= 0.0 || !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    Ok(eta.sqrt() * rgamma(theta / (2.0 * eta)) * rgamma((1.0 + theta) / 2.0)
        + rgamma(theta / 2.0) * rgamma(0.5 + theta / (2.0 * eta)))
}

/// Sign-carrying scaled 𝒱(−λ) in double precision.
fn v_at(lambda: f64, params: ModelParams) -> f64 {
    char_parts(lambda, lambda / params.eta, params.beta, params.eta, false).v
}

/// How the gap was located.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMethod {
    /// Uniform scan of λ followed by bisection.
    Scan,
    /// θ = −η(1+ε) with ε found directly.
    NearEta,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapResult {
    pub r: f64,
    /// r − η computed without cancellation when the near-η path ran.
    pub r_minus_eta: f64,
    pub details: CharEval,
    pub precision: Precision,
    pub method: GapMethod,
    /// Scanned interval in λ.
    pub bracket: (f64, f64),
}

impl GapResult {
    /// Relaxation time 1/r.
    #[must_use]
    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.r
    }
}

/// Spectral gap r(β, η) with automatic precision escalation.
pub fn spectral_gap(params: ModelParams) -> Result<GapResult> {
    spectral_gap_with(params, Precision::Auto)
}

/// Spectral gap r(β, η) in the requested tier.
pub fn spectral_gap_with(params: ModelParams, precision: Precision) -> Result<GapResult> {
    params.validate()?;
    let (beta, eta) = (params.beta, params.eta);
    if beta < 0.0 && eta < 0.25 {
        if let Some(res) = near_eta(params, precision)? {
            return Ok(res);
        }
    }
    let lo = eta.min(1.0) * (1.0 - BRACKET_DELTA);
    let hi = eta.max(1.0) * (1.0 + BRACKET_DELTA);
    let mut n = SCAN_POINTS;
    loop {
        let grid = scan_grid(lo, hi, n, params);
        let vals = par_eval(&grid, |l| v_at(l, params));
        if let Some(i) = first_sign_change(&vals) {
            let lam = refine_lambda(params, grid[i], grid[i + 1], vals[i], precision);
            let details = char_v(-lam, params, precision)?;
            return Ok(GapResult {
                r: lam,
                r_minus_eta: lam - eta,
                details,
                precision: resolved(precision),
                method: GapMethod::Scan,
                bracket: (lo, hi),
            });
        }
        if n >= SCAN_POINTS_MAX || !(beta < 0.0 && eta < 0.2) {
            return Err(Error::NoRoot(format!(
                "no sign change of V(-lambda) for lambda in [{lo}, {hi}] with {n} points; root at bracket edge?"
            )));
        }
        n *= 2;
    }
}

/// Uniform grid on [lo, hi], refined where neighbouring roots can sit closer
/// than one uniform step: geometrically near λ = 0, where roots are O(η) apart
/// for small β, and in the Airy layer of width η^{2/3}(β/2)^{2/3} about β²/4.
fn scan_grid(lo: f64, hi: f64, n: usize, params: ModelParams) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    let q = 0.05;
    let mut grid = Vec::with_capacity(n + 400);
    let mut l = lo;
    while l * q < h && l < hi {
        grid.push(l);
        l *= 1.0 + q;
    }
    grid.extend(linspace(lo, hi, n).into_iter().filter(|&x| x >= l));
    let beta = params.beta;
    if beta > 0.0 {
        let a = (params.eta * beta / 2.0).powf(2.0 / 3.0);
        let fine = 0.1 * a;
        if fine < h {
            let c = beta * beta / 4.0;
            let (from, to) = ((c - 4.0 * a).max(lo), (c + 12.0 * a).min(hi));
            let k = ((to - from) / fine).ceil() as usize;
            grid.extend((0..=k).map(|i| from + (to - from) * i as f64 / k.max(1) as f64));
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn resolved(p: Precision) -> Precision {
    match p {
        Precision::Extended => Precision::Extended,
        _ => Precision::Double,
    }
}

fn refine_lambda(params: ModelParams, lo: f64, hi: f64, flo: f64, precision: Precision) -> f64 {
    const TOL: f64 = 1e-13;
    match precision {
        Precision::Extended => {
            let (b, e) = (Dd::from_f64(params.beta), Dd::from_f64(params.eta));
            let f = |l: Dd| char_parts(l, l / e, b, e, false).v;
            let dlo = Dd::from_f64(lo);
            bisect(f, dlo, Dd::from_f64(hi), f(dlo), Dd::from_f64(TOL)).to_f64()
        }
        _ => bisect(|l| v_at(l, params), lo, hi, flo, TOL),
    }
}

/// ε ↦ 𝒱(−η(1+ε)) in tier `R`, scaled.
fn v_eps<R: Real>(eps: R, beta: R, eta: R) -> R {
    let one = R::one();
    char_parts(eta * (one + eps), one + eps, beta, eta, false).v
}

fn near_eta(params: ModelParams, precision: Precision) -> Result<Option<GapResult>> {
    let run = |tier: Precision| -> Option<(f64, f64)> {
        match tier {
            Precision::Extended => solve_eps::<Dd>(params),
            _ => solve_eps::<f64>(params),
        }
    };
    let mut tier = resolved(precision);
    let Some(mut found) = run(tier) else {
        return Ok(None);
    };
    if precision == Precision::Auto && found.1 * params.eta < ESCALATION_WIDTH {
        if let Some(f) = run(Precision::Extended) {
            found = f;
            tier = Precision::Extended;
        }
    }
    let (r, eps) = found;
    let details = char_v(-r, params, tier)?;
    Ok(Some(GapResult {
        r,
        r_minus_eta: params.eta * eps,
        details,
        precision: tier,
        method: GapMethod::NearEta,
        bracket: (params.eta, params.eta * 2.0),
    }))
}

/// Geometric scan of ε in tier `R`; returns a sign-change bracket.
fn eps_bracket<R: Real>(params: ModelParams, from: f64) -> Option<(f64, f64)> {
    let (beta, eta) = (R::f(params.beta), R::f(params.eta));
    let f = |e: f64| v_eps(R::f(e), beta, eta);
    let pos = f(0.0) > R::zero();
    let mut prev = 0.0;
    let mut e = from;
    while e < 0.5 {
        if (f(e) > R::zero()) != pos {
            return Some((prev, e));
        }
        prev = e;
        e *= 1.5;
    }
    None
}

/// (r, ε) with r = η(1+ε), or None when no sign change is seen for ε ≤ 1/2.
fn solve_eps<R: Real>(params: ModelParams) -> Option<(f64, f64)> {
    let (beta, eta) = (R::f(params.beta), R::f(params.eta));
    let f = |e: R| v_eps(e, beta, eta);
    let f0 = f(R::zero());
    if f0 == R::zero() {
        return Some((params.eta, 0.0));
    }
    let pos = f0 > R::zero();
    // bracket cheaply in double precision, then confirm in the working tier
    let (lo, hi) = match eps_bracket::<f64>(params, 1e-18) {
        Some((lo, hi)) if (f(R::f(lo)) > R::zero()) == pos && (f(R::f(hi)) > R::zero()) != pos => {
            (lo, hi)
        }
        _ => eps_bracket::<R>(params, 1e-30)?,
    };
    let (mut lo, mut hi) = (R::f(lo), R::f(hi));
    if lo > R::zero() {
        while hi / lo > R::f(1.01) {
            let mid = (lo * hi).sqrt();
            if (f(mid) > R::zero()) == pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let tol = hi * R::f(1e-13);
    let flo = if lo > R::zero() { f(lo) } else { f0 };
    let root = bisect(f, lo, hi, flo, tol);
    Some(((eta * (R::one() + root)).to_f64(), root.to_f64()))
}

/// First `count` positive roots of 𝒱(−λ) = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSet {
    pub params: ModelParams,
    pub lambdas: Vec<f64>,
    /// ∂𝒱/∂θ at θ = −λₙ, unscaled where representable (see [`CharEval`]).
    pub v_theta_derivs: Vec<f64>,
    /// log scale matching each entry of `v_theta_derivs`.
    pub ln_scales: Vec<f64>,
    /// Set when the scan ceiling was reached before `count` roots.
    pub diagnostic: Option<String>,
}

impl EigenSet {
    #[must_use]
    pub fn is_complete(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Eigenvalues λ₁ < … < λ_count.
pub fn eigenvalues(params: ModelParams, count: usize) -> Result<EigenSet> {
    params.validate()?;
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let (eta, beta) = (params.eta, params.beta);
    let step = 0.05 * eta.min(1.0);
    let ceiling = eta.max(1.0) * (count as f64 + 1.0) * 1.5 + beta * beta / 4.0 + 1.0;
    let mut lambdas = Vec::new();
    let mut derivs = Vec::new();
    let mut scales = Vec::new();
    let first = spectral_gap(params)?;
    lambdas.push(first.r);
    let mut start = first.r + step * 0.5;
    let mut prev_v = v_at(start, params);
    const BLOCK: usize = 256;
    while lambdas.len() < count && start < ceiling {
        let grid: Vec<f64> = (1..=BLOCK).map(|k| start + step * k as f64).collect();
        let vals = par_eval(&grid, |l| v_at(l, params));
        let mut left = (start, prev_v);
        for (&l, &v) in grid.iter().zip(&vals) {
            if lambdas.len() >= count {
                break;
            }
            if left.1 != 0.0 && v.is_finite() && (v > 0.0) != (left.1 > 0.0) {
                lambdas.push(refine_lambda(params, left.0, l, left.1, Precision::Double));
            }
            left = (l, v);
        }
        start = left.0;
        prev_v = left.1;
    }
    for &l in &lambdas {
        let e = char_v(-l, params, Precision::Double)?;
        derivs.push(e.dv_dtheta);
        scales.push(e.ln_scale);
    }
    let diagnostic = (lambdas.len() < count).then(|| {
        format!(
            "found {} of {count} eigenvalues below the scan ceiling {ceiling}",
            lambdas.len()
        )
    });
    Ok(EigenSet {
        params,
        lambdas,
        v_theta_derivs: derivs,
        ln_scales: scales,
        diagnostic,
    })
}

/// sgn(∂r/∂β) by a central difference of the gap.
pub fn gap_beta_derivative_sign(params: ModelParams) -> Result<i32> {
    params.validate()?;
    if params.eta == 1.0 {
        return Ok(0);
    }
    const H: f64 = 1e-4;
    let up = spectral_gap(ModelParams::new(params.beta + H, params.eta)?)?.r;
    let down = spectral_gap(ModelParams::new(params.beta - H, params.eta)?)?.r;
    let d = up - down;
    Ok(if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    })
}

/// ∫_z^∞ e^{−ξ²/2} dξ.
pub fn gaussian_tail(z: f64) -> f64 {
    let s = pcf_scaled(-1.0, z);
    s.d * (s.ln_scale - z * z / 4.0).exp()
}

/// ∂𝒱/∂θ at θ = 0 from the closed form (positive for every β, η).
#[must_use]
pub fn dv_dtheta_at_zero(params: ModelParams) -> f64 {
    let (b, e) = (params.beta, params.eta);
    let d = b * b / 4.0 - b * b / (4.0 * e);
    d.exp() * gaussian_tail(-b) + (-d).exp() * gaussian_tail(b / e.sqrt()) / e.sqrt()
}
