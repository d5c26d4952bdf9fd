//! The exact M/M/s+M queue: contour functions F_n and H_n, the determinant
//! Δ(θ) whose least negative zero is the discrete gap, and a tridiagonal
//! generator eigenvalue oracle.
//!
//! Time is scaled so the service rate is 1; ρ is the arrival rate and η the
//! per-customer abandonment rate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characteristic::{spectral_gap, ModelParams};
use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};
use crate::real::Real;
use crate::roots::{bisect, first_sign_change, linspace, par_eval};
use crate::specfun::gamma::ln_gamma;

/// Above this index F_n is summed in double-double.
pub const F_EXTENDED_INDEX: usize = 50;

/// Servers m, arrival rate ρ and abandonment ratio η.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscreteParams {
    pub m: usize,
    pub rho: f64,
    pub eta: f64,
}

impl DiscreteParams {
    pub fn new(m: usize, rho: f64, eta: f64) -> Result<Self> {
        check_finite("rho", rho)?;
        check_finite("eta", eta)?;
        if m == 0 {
            return Err(Error::Domain("need at least one server".into()));
        }
        if rho <= 0.0 || eta <= 0.0 {
            return Err(Error::Domain(format!(
                "rho and eta must be positive, got {rho}, {eta}"
            )));
        }
        Ok(Self { m, rho, eta })
    }

    /// ρ = m − β√m.
    pub fn halfin_whitt(m: usize, beta: f64, eta: f64) -> Result<Self> {
        Self::new(m, m as f64 - beta * (m as f64).sqrt(), eta)
    }
}

/// A contour function value `value · exp(ln_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourEval {
    pub n: usize,
    pub theta: f64,
    pub value: f64,
    pub ln_scale: f64,
    /// Absolute error of `value` (same scale).
    pub quadrature_err: f64,
}

impl ContourEval {
    /// value · exp(ln_scale), possibly overflowing.
    #[must_use]
    pub fn unscaled(&self) -> f64 {
        self.value * self.ln_scale.exp()
    }
}

fn f_sum<R: Real>(theta: f64, rho: f64, n: usize) -> (R, f64) {
    // terms ρ^{n−ℓ}/(n−ℓ)! · (θ)_ℓ/ℓ!, relative to the ℓ = 0 term
    let ln0 = n as f64 * rho.ln() - ln_gamma(n as f64 + 1.0);
    let th = R::f(theta);
    let r = R::f(rho);
    let mut t = R::one();
    let mut s = R::one();
    for l in 0..n {
        let lf = R::f(l as f64);
        t = t * R::f((n - l) as f64) / r * (th + lf) / (lf + R::one());
        s += t;
    }
    (s, ln0)
}

/// F_n(θ) from the finite sum.
pub fn f_n(theta: f64, rho: f64, n: usize) -> Result<ContourEval> {
    check_finite("theta", theta)?;
    if rho <= 0.0 || !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let (v, ln) = if n > F_EXTENDED_INDEX {
        let (s, l) = f_sum::<Dd>(theta, rho, n);
        (s.to_f64(), l)
    } else {
        f_sum::<f64>(theta, rho, n)
    };
    if !ln.is_finite() {
        return Err(Error::Capability(format!(
            "rho^n/n! out of range at n = {n}, rho = {rho}; rescale rho"
        )));
    }
    Ok(ContourEval {
        n,
        theta,
        value: v,
        ln_scale: ln,
        quadrature_err: 0.0,
    })
}

/// F_n(θ) by the trapezoid rule on the circle |z| = radius < 1.
pub fn f_n_contour(theta: f64, rho: f64, n: usize, radius: f64) -> Result<ContourEval> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {radius}")));
    }
    let ln_f = |z: Complex64| rho * z - (n as f64 + 1.0) * z.ln() - theta * (1.0 - z).ln();
    let scale = (ln_f(Complex64::new(radius, 0.0)).re).max(rho * radius - n as f64 * radius.ln());
    let sum = |k: usize| -> f64 {
        let mut s = 0.0;
        for j in 0..k {
            let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            s += ((ln_f(z) - scale).exp() * z).re;
        }
        s / k as f64
    };
    let mut k = 64.max(4 * n);
    let mut old = sum(k);
    for _ in 0..12 {
        k *= 2;
        let new = sum(k);
        let d = (new - old).abs();
        old = new;
        if d <= 1e-15 * new.abs().max(1e-300) {
            break;
        }
    }
    Ok(ContourEval {
        n,
        theta,
        value: old,
        ln_scale: scale,
        quadrature_err: 1e-15 * old.abs(),
    })
}

// real s > 1 where |integrand| of H is smallest along the axis
fn h_crossing(theta: f64, dp: DiscreteParams, big_n: f64) -> Option<f64> {
    let (rho, eta) = (dp.rho, dp.eta);
    let b = rho + theta + big_n * eta;
    let disc = b * b - 4.0 * rho * big_n * eta;
    let s = (b + disc.max(0.0).sqrt()) / (2.0 * rho);
    (disc >= 0.0 && s > 1.0).then_some(s - 1.0)
}

// parabola z(u) = x0 + i·b·u − a·u², crossing the axis right of z = 1
#[derive(Clone, Copy)]
struct Parabola {
    x0: f64,
    a: f64,
    b: f64,
}

impl Parabola {
    fn z(&self, u: f64) -> Complex64 {
        Complex64::new(self.x0 - self.a * u * u, self.b * u)
    }
    fn dz(&self, u: f64) -> Complex64 {
        Complex64::new(-2.0 * self.a * u, self.b)
    }
}

// trapezoid sums of Im f·dz and |f·dz| on [0, ∞) relative to exp(g0)
struct Trapezoid<'a> {
    f: &'a (dyn Fn(Complex64) -> Complex64 + Sync),
    path: Parabola,
    umax: f64,
}

impl Trapezoid<'_> {
    fn point(&self, u: f64) -> (f64, f64) {
        let e = (self.f)(self.path.z(u)).exp() * self.path.dz(u);
        if e.is_finite() {
            (e.im, e.norm())
        } else {
            (f64::NAN, f64::INFINITY)
        }
    }
}

// step out from u = 0 until the integrand is 1e-18 below its running peak
fn extent(t: &Trapezoid<'_>, h0: f64) -> Option<f64> {
    let mut peak = t.point(0.0).1;
    let mut u = 0.0;
    for _ in 0..4000 {
        u += h0;
        let v = t.point(u).1;
        if !v.is_finite() {
            return None;
        }
        peak = peak.max(v);
        if v < 1e-18 * peak && (t.path.a * u * u) > 4.0 * t.path.b.abs() * h0 {
            return Some(u);
        }
    }
    None
}

fn width(path: &Parabola, rho: f64, eta: f64) -> f64 {
    (eta / (rho * path.a)).sqrt().min(path.x0 / path.a.max(1e-300)).max(1e-3)
}

// ln ∫|f dz| on a coarse grid, or +∞ when the path is unusable
fn ln_l1(ln_f: &(dyn Fn(Complex64) -> Complex64 + Sync), path: Parabola, rho: f64, eta: f64) -> f64 {
    let g0 = ln_f(Complex64::new(path.x0, 0.0)).re;
    let shifted = |z: Complex64| ln_f(z) - g0;
    let mut t = Trapezoid { f: &shifted, path, umax: 0.0 };
    let h0 = width(&path, rho, eta) / 6.0;
    let Some(umax) = extent(&t, h0) else {
        return f64::INFINITY;
    };
    t.umax = umax;
    let n = (umax / h0).ceil() as usize;
    let mass: f64 = (0..=n).map(|k| t.point(k as f64 * h0).1).sum::<f64>() * h0;
    if mass > 0.0 && mass.is_finite() {
        g0 + mass.ln()
    } else {
        f64::INFINITY
    }
}

/// H_n(θ) by quadrature on a parabolic Hankel loop around z = 1 opening
/// towards −∞; the parabola is picked to keep ∫|integrand| small.
pub fn h_n(theta: f64, dp: DiscreteParams, n: usize) -> Result<ContourEval> {
    check_finite("theta", theta)?;
    let (rho, eta, m) = (dp.rho, dp.eta, dp.m as f64);
    let big_n = n as f64 + 1.0 - m + m / eta;
    let ln_f = |z: Complex64| rho * z / eta - theta / eta * (z - 1.0).ln() - big_n * z.ln();
    let sigma = (eta / rho).sqrt().min(1.0);
    let mut best = (f64::INFINITY, Parabola { x0: 1.0 + sigma, a: sigma, b: 2.0 * sigma });
    let mut mus: Vec<f64> = (-7..=4).map(|k| sigma * 2f64.powi(k)).collect();
    mus.extend(h_crossing(theta, dp, big_n));
    let shape = |mu: f64, kb: i32, ka: f64| {
        let b = 2.0 * mu * 2f64.powi(kb);
        Parabola { x0: 1.0 + mu, a: ka * b * b / (4.0 * mu), b }
    };
    let l1s: Vec<f64> = mus.iter().map(|&mu| ln_l1(&ln_f, shape(mu, 0, 1.0), rho, eta)).collect();
    for (&mu, &l) in mus.iter().zip(&l1s) {
        if l < best.0 {
            best = (l, shape(mu, 0, 1.0));
        }
    }
    // refine the shape around the best crossing
    let mu0 = best.1.x0 - 1.0;
    for mu in [mu0 / 1.5, mu0, mu0 * 1.5] {
        for kb in -3..=3 {
            for ka in [0.25, 1.0, 4.0] {
                let path = shape(mu, kb, ka);
                let l = ln_l1(&ln_f, path, rho, eta);
                if l < best.0 {
                    best = (l, path);
                }
            }
        }
    }
    let (ln_mass, path) = best;
    if !ln_mass.is_finite() {
        return Err(Error::Convergence(format!(
            "no usable contour for H_{n} at theta = {theta}"
        )));
    }
    let g0 = ln_f(Complex64::new(path.x0, 0.0)).re;
    let shifted = |z: Complex64| ln_f(z) - g0;
    let mut t = Trapezoid { f: &shifted, path, umax: 0.0 };
    let h0 = width(&path, rho, eta) / 6.0;
    t.umax = extent(&t, h0).ok_or_else(|| {
        Error::Convergence(format!("H_{n} integrand does not decay at theta = {theta}"))
    })?;
    let mut h = h0;
    let count = |h: f64| (t.umax / h).ceil() as usize;
    let (mut sum, mut mass) = (1..=count(h)).map(|k| t.point(k as f64 * h)).fold(
        (0.5 * t.point(0.0).0, 0.5 * t.point(0.0).1),
        |(s, m), (a, b)| (s + a, m + b),
    );
    let mut old = sum * h;
    let mut err = f64::INFINITY;
    for level in 0..12 {
        let k = count(h);
        let (ds, dm) = (0..k)
            .into_par_iter()
            .map(|j| t.point((j as f64 + 0.5) * h))
            .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
        sum += ds;
        mass += dm;
        h *= 0.5;
        let new = sum * h;
        err = (new - old).abs() + 1e-16 * mass * h;
        old = new;
        if level >= 1 && err <= 1e-14 * (mass * h) {
            break;
        }
    }
    // (1/2πi)∫ f dz = (1/π)·Im∫_0^∞ f dz over the upper half
    let c = 1.0 / std::f64::consts::PI;
    Ok(ContourEval {
        n,
        theta,
        value: c * old,
        ln_scale: g0,
        quadrature_err: c * err,
    })
}

/// Δ(θ) = F_m H_{m−1} − H_m F_{m−1}, as mantissa times exp(ln_scale).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaEval {
    pub theta: f64,
    pub mantissa: f64,
    pub ln_scale: f64,
    /// Larger of the two summed products, on the same scale; Δ is small when
    /// |mantissa| is small against this.
    pub magnitude: f64,
}

/// Δ(θ) via F_m − F_{m−1} = F_m(θ−1) and H_m − H_{m−1} = −H_m(θ−η), which
/// gives Δ = H_m(θ)F_m(θ−1) + F_m(θ)H_m(θ−η) with no cancellation at θ = 0.
pub fn delta_det(theta: f64, dp: DiscreteParams) -> Result<DeltaEval> {
    let m = dp.m;
    let f = f_n(theta, dp.rho, m)?;
    let fd = f_n(theta - 1.0, dp.rho, m)?;
    let h = h_n(theta, dp, m)?;
    let hd = h_n(theta - dp.eta, dp, m)?;
    let l1 = h.ln_scale + fd.ln_scale;
    let l2 = f.ln_scale + hd.ln_scale;
    let l = l1.max(l2);
    let t1 = h.value * fd.value * (l1 - l).exp();
    let t2 = f.value * hd.value * (l2 - l).exp();
    Ok(DeltaEval {
        theta,
        mantissa: t1 + t2,
        ln_scale: l,
        magnitude: t1.abs().max(t2.abs()),
    })
}

/// F_m H_{m−1} − H_m F_{m−1} evaluated literally, for cross-checks.
pub fn delta_det_direct(theta: f64, dp: DiscreteParams) -> Result<DeltaEval> {
    let m = dp.m;
    let (fm, fm1) = (f_n(theta, dp.rho, m)?, f_n(theta, dp.rho, m - 1)?);
    let (hm, hm1) = (h_n(theta, dp, m)?, h_n(theta, dp, m - 1)?);
    let l1 = fm.ln_scale + hm1.ln_scale;
    let l2 = hm.ln_scale + fm1.ln_scale;
    let l = l1.max(l2);
    let t1 = fm.value * hm1.value * (l1 - l).exp();
    let t2 = hm.value * fm1.value * (l2 - l).exp();
    Ok(DeltaEval {
        theta,
        mantissa: t1 - t2,
        ln_scale: l,
        magnitude: t1.abs().max(t2.abs()),
    })
}

fn delta_sign(lambda: f64, dp: DiscreteParams) -> f64 {
    delta_det(-lambda, dp).map_or(f64::NAN, |d| d.mantissa)
}

/// Least λ > 0 with Δ(−λ) = 0.
pub fn discrete_gap(dp: DiscreteParams) -> Result<f64> {
    let hi = dp.eta.max(1.0) * 1.05 + 5.0 / (dp.m as f64).sqrt();
    let lo = 1e-4 * dp.eta.min(1.0);
    let n = ((hi / (0.25 * dp.eta.min(1.0))).ceil() as usize).clamp(40, 400);
    let grid = linspace(lo, hi, n);
    let vals = par_eval(&grid, |l| delta_sign(l, dp));
    let i = first_sign_change(&vals).ok_or_else(|| {
        Error::NoRoot(format!("no sign change of Delta(-lambda) for lambda in [{lo}, {hi}]"))
    })?;
    Ok(bisect(|l| delta_sign(l, dp), grid[i], grid[i + 1], vals[i], 1e-12))
}

/// Sturm count: eigenvalues of the symmetric tridiagonal (d, e) below x.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let qq = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1.0) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / qq;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    let bound = d
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            let l = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let r = e.get(i).map_or(0.0, |v| v.abs());
            di.abs() + l + r
        })
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Result of the truncated-generator eigen-solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorGap {
    pub gap: f64,
    /// Smallest eigenvalue of −Q; zero up to rounding.
    pub smallest: f64,
    /// Final number of states minus one.
    pub truncation: usize,
}

fn generator_eigs(dp: DiscreteParams, n: usize) -> (f64, f64) {
    let birth = |k: usize| if k < n { dp.rho } else { 0.0 };
    let death = |k: usize| {
        let k = k as f64;
        let m = dp.m as f64;
        k.min(m) + (k - m).max(0.0) * dp.eta
    };
    let d: Vec<f64> = (0..=n).map(|k| birth(k) + death(k)).collect();
    let e: Vec<f64> = (0..n).map(|k| -(birth(k) * death(k + 1)).sqrt()).collect();
    (kth_eigenvalue(&d, &e, 0), kth_eigenvalue(&d, &e, 1))
}

/// Spectral gap of the truncated birth-death generator, enlarging the
/// truncation from `truncation` until the gap moves less than 1e-8.
pub fn generator_gap(dp: DiscreteParams, truncation: usize) -> Result<GeneratorGap> {
    let mut n = truncation.max(dp.m + 1);
    let mut g = generator_eigs(dp, n).1;
    for _ in 0..30 {
        let n2 = n + n / 2;
        let (s2, g2) = generator_eigs(dp, n2);
        let moved = (g2 - g).abs();
        n = n2;
        g = g2;
        if moved < 1e-8 {
            return Ok(GeneratorGap {
                gap: g,
                smallest: s2,
                truncation: n,
            });
        }
    }
    Err(Error::Convergence(format!(
        "generator gap still moving at truncation {n}"
    )))
}

/// Recommended starting truncation m + 50√(max(ρ, m)/min(1, η)).
#[must_use]
pub fn default_truncation(dp: DiscreteParams) -> usize {
    let m = dp.m as f64;
    (m + 50.0 * (dp.rho.max(m) / dp.eta.min(1.0)).sqrt()).ceil() as usize
}

/// One row of [`convergence_study`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub m: usize,
    pub discrete: f64,
    pub diffusion: f64,
    pub difference: f64,
}

/// Discrete gap at ρ = m − β√m against the diffusion gap r(β, η).
pub fn convergence_study(beta: f64, eta: f64, m_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let r = spectral_gap(ModelParams::new(beta, eta)?)?.r;
    m_list
        .iter()
        .map(|&m| {
            if m < 25 {
                return Err(Error::Domain(format!("convergence study needs m >= 25, got {m}")));
            }
            let d = discrete_gap(DiscreteParams::halfin_whitt(m, beta, eta)?)?;
            Ok(ConvergenceRow {
                m,
                discrete: d,
                diffusion: r,
                difference: d - r,
            })
        })
        .collect()
}
