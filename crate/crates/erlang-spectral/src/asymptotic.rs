//! Small-η approximations of the gap in the five ranges of β, and the
//! constants and auxiliary roots they need.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use crate::characteristic::ModelParams;
use crate::error::{check_finite, Error, Result};
use crate::roots::bisect;
use crate::specfun::airy::{airy_scaled, airy_zero, AiryZeroKind};
use crate::specfun::pcf::{pcf_scaled, PcfEval};

/// Multiplier on √η in the regime boundaries.
pub const SQRT_ETA_BAND: f64 = 3.0;
/// Multiplier on η^{1/3} around β*.
pub const CUBE_ROOT_BAND: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    NegBeta,
    SmallBeta,
    MidBeta,
    NearBetaStar,
    LargeBeta,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::NegBeta => "neg-beta",
            Regime::SmallBeta => "small-beta",
            Regime::MidBeta => "mid-beta",
            Regime::NearBetaStar => "near-beta-star",
            Regime::LargeBeta => "large-beta",
        };
        f.write_str(s)
    }
}

/// An approximate gap with its additive pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeEstimate {
    pub regime: Regime,
    /// Sum of `terms`.
    pub value: f64,
    /// The estimate without its O(η) term. Equal to `value` except in the
    /// mid-β regime.
    pub leading: f64,
    pub terms: Vec<(&'static str, f64)>,
    pub validity_note: String,
}

impl RegimeEstimate {
    fn new(regime: Regime, terms: Vec<(&'static str, f64)>, leading: Option<f64>) -> Self {
        let value = terms.iter().map(|t| t.1).sum();
        Self {
            regime,
            value,
            leading: leading.unwrap_or(value),
            terms,
            validity_note: String::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.validity_note = s.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    R0,
    RofGamma,
    ChiOfW,
}

/// A root of one of the auxiliary equations, with the parameter it was
/// solved for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub kind: BranchKind,
    pub parameter: f64,
    pub root: f64,
}

/// Solves the auxiliary equation named by `kind` at `parameter`.
pub fn branch_point(kind: BranchKind, parameter: f64) -> Result<BranchPoint> {
    let root = match kind {
        BranchKind::R0 => r0_of_beta(parameter)?.ok_or_else(|| {
            Error::NoRoot(format!("r0 has no positive solution at beta = {parameter}"))
        })?,
        BranchKind::RofGamma => r_of_gamma(parameter)?,
        BranchKind::ChiOfW => chi_of_w(parameter)?,
    };
    Ok(BranchPoint {
        kind,
        parameter,
        root,
    })
}

fn pcf(p: f64, z: f64) -> PcfEval {
    pcf_scaled(p, z).to_eval()
}

/// D'_{β²/4}(−β) up to a positive factor.
fn g_star(beta: f64) -> f64 {
    pcf_scaled(beta * beta / 4.0, -beta).dz
}

/// β*, the smallest positive zero of β ↦ D'_{β²/4}(−β).
pub fn beta_star() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let (lo, hi) = (1.5, 2.2);
        bisect(g_star, lo, hi, g_star(lo), 1e-15)
    })
}

fn v_tilde(p: f64, beta: f64) -> f64 {
    let s = pcf_scaled(p, -beta);
    s.dz - (beta * beta / 4.0 - p).max(0.0).sqrt() * s.d
}

/// r₀(β): minimal p ∈ (0, β²/4] with D'_p(−β) = √(β²/4 − p) D_p(−β).
/// `None` below β*.
pub fn r0_of_beta(beta: f64) -> Result<Option<f64>> {
    check_finite("beta", beta)?;
    let bs = beta_star();
    if beta < bs - 1e-12 {
        return Ok(None);
    }
    let top = beta * beta / 4.0;
    if (beta - bs).abs() <= 1e-12 {
        return Ok(Some(top));
    }
    let n = 800;
    let f = |p: f64| v_tilde(p, beta);
    let mut left = (1e-6, f(1e-6));
    for k in 1..=n {
        let p = 1e-6 + (top - 1e-6) * k as f64 / n as f64;
        let v = f(p);
        if v == 0.0 {
            return Ok(Some(p));
        }
        if (v > 0.0) != (left.1 > 0.0) {
            return Ok(Some(bisect(f, left.0, p, left.1, 1e-13)));
        }
        left = (p, v);
    }
    Ok(Some(top))
}

/// 𝒜(β), the O(η) coefficient above β*.
pub fn correction_a(beta: f64) -> Result<f64> {
    check_finite("beta", beta)?;
    if beta <= beta_star() {
        return Err(Error::Domain(format!(
            "correction term needs beta > beta* = {}, got {beta}",
            beta_star()
        )));
    }
    let r0 = r0_of_beta(beta)?.expect("r0 exists above beta*");
    let disc = beta * beta - 4.0 * r0;
    let root = (beta * beta / 4.0 - r0).sqrt();
    let e = pcf(r0, -beta);
    let dvp = e.dzp - root * e.dp + e.value / (2.0 * root);
    Ok(0.5 * (beta - disc.sqrt()) / disc * e.value / dvp)
}

fn mills_left(beta: f64) -> f64 {
    // e^{β²/2} ∫_{−∞}^{β} e^{−u²/2} du, with β < 0
    let z = -beta;
    let s = pcf_scaled(-1.0, z);
    s.d * (s.ln_scale + z * z / 4.0).exp()
}

/// β < 0: the gap approaches η from above, exponentially fast.
pub fn gap_neg_beta(params: ModelParams) -> Result<RegimeEstimate> {
    let (b, e) = (params.beta, params.eta);
    if b >= 0.0 {
        return Err(Error::Domain(format!("needs beta < 0, got {b}")));
    }
    let corr = -(b * e.sqrt() / (2.0 * PI).sqrt())
        * (-b * b / (2.0 * e)).exp()
        * (1.0 + b * mills_left(b));
    let est = RegimeEstimate::new(Regime::NegBeta, vec![("eta", e), ("exponential", corr)], None);
    Ok(if e > 0.5 {
        est.note("eta above 0.5; the expansion is for small eta")
    } else {
        est
    })
}

/// R(γ): minimal R > 0 with D_{R−1}(γ) = 0.
pub fn r_of_gamma(gamma: f64) -> Result<f64> {
    check_finite("gamma", gamma)?;
    // D_p(γ) > 0 for p ≤ 0, so scan p = R − 1 upward from 0
    let f = |p: f64| pcf_scaled(p, gamma).d;
    let top = gamma * gamma / 4.0 + 3.0 * (gamma.abs() / 2.0).powf(2.0 / 3.0) + 10.0;
    let mut left = (0.0, f(0.0));
    let mut p = 1e-14;
    while p < top {
        let v = f(p);
        if v == 0.0 {
            return Ok(1.0 + p);
        }
        if (v > 0.0) != (left.1 > 0.0) {
            let tol = (1e-12 * p).max(1e-15);
            return Ok(1.0 + bisect(f, left.0, p, left.1, tol));
        }
        left = (p, v);
        p = if p < 0.02 { p * 2.0 } else { p + 0.02 };
    }
    Err(Error::NoRoot(format!(
        "no zero of D_(R-1)({gamma}) for R up to {}",
        top + 1.0
    )))
}

/// β = γ√η with γ = O(1): r ≈ η R(γ).
pub fn gap_small_beta(params: ModelParams) -> Result<RegimeEstimate> {
    let g = params.beta / params.eta.sqrt();
    let est = RegimeEstimate::new(
        Regime::SmallBeta,
        vec![("eta*R(gamma)", params.eta * r_of_gamma(g)?)],
        None,
    );
    Ok(if g.abs() > SQRT_ETA_BAND {
        est.note(format!("|gamma| = {:.3} is outside the small-beta band", g.abs()))
    } else {
        est
    })
}

/// 0 < β < β*: β²/4 plus η^{2/3} and η terms.
pub fn gap_mid_beta(params: ModelParams) -> Result<RegimeEstimate> {
    let (b, e) = (params.beta, params.eta);
    if !(b > 0.0 && b < beta_star()) {
        return Err(Error::Domain(format!(
            "needs 0 < beta < beta* = {}, got {b}",
            beta_star()
        )));
    }
    let a0 = airy_zero(AiryZeroKind::OfAi, 0)?.abs();
    let s = pcf_scaled(b * b / 4.0, -b);
    let t0 = b * b / 4.0;
    let t1 = e.powf(2.0 / 3.0) * a0 * (b / 2.0).powf(2.0 / 3.0);
    let t2 = 0.5 * e * (b * s.d / s.dz - 1.0);
    Ok(RegimeEstimate::new(
        Regime::MidBeta,
        vec![("beta^2/4", t0), ("airy", t1), ("order-eta", t2)],
        Some(t0 + t1),
    )
    .note("the order-eta term does not match onto the small-beta regime"))
}

/// L = (d/dβ D'_{β²/4}(−β)) / D_{β²/4}(−β) at β*.
pub fn l_constant() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| l_at(beta_star()))
}

// d/dβ D'_{β²/4}(−β) = (β/2)∂²D/∂z∂p − D'' and D'' = −D/2 at p = z²/4
fn l_at(beta: f64) -> f64 {
    let s = pcf_scaled(beta * beta / 4.0, -beta);
    (0.5 * beta * s.dzp + 0.5 * s.d) / s.d
}

fn robin(chi: f64, w: f64) -> f64 {
    // Ai' + w Ai, sign-correct mantissa
    let (a, d, _) = airy_scaled(chi);
    d + w * a
}

/// χ(W): maximal real root of Ai'(χ) + (2/β*)^{1/3} L W Ai(χ) = 0.
pub fn chi_of_w(w: f64) -> Result<f64> {
    check_finite("W", w)?;
    let b0 = airy_zero(AiryZeroKind::OfAiPrime, 0)?;
    if w == 0.0 {
        return Ok(b0);
    }
    let k = (2.0 / beta_star()).cbrt() * l_constant() * w;
    let f = |x: f64| robin(x, k);
    let (lo, hi) = if k > 0.0 {
        (b0, (k + 2.0) * (k + 2.0))
    } else {
        (airy_zero(AiryZeroKind::OfAi, 0)?, b0)
    };
    let flo = f(lo);
    if (flo > 0.0) == (f(hi) > 0.0) {
        return Err(Error::NoRoot(format!("chi bracket [{lo}, {hi}] at W = {w}")));
    }
    Ok(bisect(f, lo, hi, flo, 1e-14))
}

/// β − β* = η^{1/3} W: Airy-type transition layer.
pub fn gap_near_beta_star(params: ModelParams) -> Result<RegimeEstimate> {
    let (b, e) = (params.beta, params.eta);
    let bs = beta_star();
    let w = (b - bs) / e.cbrt();
    let chi = chi_of_w(w)?;
    let est = RegimeEstimate::new(
        Regime::NearBetaStar,
        vec![
            ("beta^2/4", b * b / 4.0),
            ("airy", -e.powf(2.0 / 3.0) * (bs / 2.0).powf(2.0 / 3.0) * chi),
        ],
        None,
    );
    Ok(est.note(format!("W = {w:.4}, chi = {chi:.6}")))
}

/// β > β*: r₀(β) + 𝒜(β) η.
pub fn gap_large_beta(params: ModelParams) -> Result<RegimeEstimate> {
    let b = params.beta;
    let a = correction_a(b)?;
    let r0 = r0_of_beta(b)?.expect("r0 exists above beta*");
    Ok(RegimeEstimate::new(
        Regime::LargeBeta,
        vec![("r0", r0), ("eta*A", params.eta * a)],
        None,
    ))
}

/// Picks the regime whose expansion applies at (β, η) and evaluates it.
pub fn regime_select(params: ModelParams) -> Result<RegimeEstimate> {
    let (b, e) = (params.beta, params.eta);
    let bs = beta_star();
    let small = SQRT_ETA_BAND * e.sqrt();
    let near = CUBE_ROOT_BAND * e.cbrt();
    let in_small = b.abs() < small;
    let in_near = (b - bs).abs() < near;
    let est = if b <= -small {
        gap_neg_beta(params)?
    } else if in_small {
        gap_small_beta(params)?
    } else if in_near {
        gap_near_beta_star(params)?
    } else if b < bs {
        gap_mid_beta(params)?
    } else {
        gap_large_beta(params)?
    };
    let overlap = in_small && in_near;
    Ok(if overlap {
        let note = format!("{}; small-beta and near-beta* bands overlap", est.validity_note);
        est.note(note.trim_start_matches("; ").to_string())
    } else {
        est
    })
}
