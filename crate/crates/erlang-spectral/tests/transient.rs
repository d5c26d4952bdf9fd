use std::f64::consts::PI;

use erlang_spectral::specfun::{gamma, pcf_d};
use erlang_spectral::transient::{
    hw_laplace_limit, laplace_density, orthogonality_check, rou_limit_check, spectral_density,
    steady_density, DensityQuery, SpectralExpansion, SteadyDensity,
};
use erlang_spectral::{spectral_gap, Error, ModelParams};

fn params(beta: f64, eta: f64) -> ModelParams {
    ModelParams::new(beta, eta).unwrap()
}

fn query(x: f64, x0: f64, beta: f64, eta: f64) -> DensityQuery {
    DensityQuery::new(x, x0, params(beta, eta)).unwrap()
}

fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Gaver-Stehfest inversion on the real axis.
fn stehfest(f: impl Fn(f64) -> f64, t: f64, n: usize) -> f64 {
    let h = n / 2;
    let ln2 = std::f64::consts::LN_2;
    let mut s = 0.0;
    for k in 1..=n {
        let mut v = 0.0;
        for j in k.div_ceil(2)..=k.min(h) {
            v += (j as f64).powi(h as i32) * factorial(2 * j)
                / (factorial(h - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k));
        }
        if (k + h) % 2 == 1 {
            v = -v;
        }
        s += v * f(k as f64 * ln2 / t);
    }
    s * ln2 / t
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}

#[test]
fn steady_density_is_normalized() {
    for (beta, eta) in [(1.0, 0.5), (-2.0, 0.1), (0.0, 3.0)] {
        let s = SteadyDensity::new(params(beta, eta));
        let mass = trapezoid(|x| s.pdf(x), -20.0, 0.0, 20_000) + trapezoid(|x| s.pdf(x), 0.0, 80.0, 80_000);
        assert!((mass - 1.0).abs() < 1e-9, "({beta},{eta}): {mass}");
    }
    let s = SteadyDensity::new(params(0.4, 0.7));
    assert!((s.relaxation_time().unwrap() * spectral_gap(params(0.4, 0.7)).unwrap().r - 1.0).abs() < 1e-14);
}

#[test]
fn steady_density_eta_one_is_normal() {
    for beta in [0.0, 1.5, -0.8] {
        for x in [-2.0, -0.1, 0.3, 1.7] {
            let want = normal_pdf(x, -beta, 1.0);
            assert!((steady_density(x, params(beta, 1.0)) - want).abs() < 1e-14);
        }
    }
}

#[test]
fn eta_one_resolvent_is_ou() {
    let beta: f64 = 0.3;
    for (x, x0, theta) in [(0.5_f64, -0.5, 0.7), (-1.0, -0.3, 1.4), (0.2, 0.9, 2.3), (-0.4, -1.6, 0.25)] {
        let y = x + beta;
        let y0 = x0 + beta;
        let (hi, lo) = if y > y0 { (y, y0) } else { (y0, y) };
        let want = gamma(theta) / (2.0 * PI).sqrt()
            * ((y0 * y0 - y * y) / 4.0).exp()
            * pcf_d(-theta, hi).unwrap()
            * pcf_d(-theta, -lo).unwrap();
        let got = laplace_density(query(x, x0, beta, 1.0), theta, false).unwrap();
        assert!((got - want).abs() < 1e-9 * want, "({x},{x0},{theta}): {got} vs {want}");
    }
}

#[test]
fn eta_one_spectral_density_is_ou() {
    let (x, x0, beta, t) = (0.5, -0.5, 0.3, 1.0);
    let got = spectral_density(query(x, x0, beta, 1.0), t, 20).unwrap().value;
    let mean = -beta + (x0 + beta) * (-t).exp();
    let want = normal_pdf(x, mean, 1.0 - (-2.0 * t).exp());
    assert!((got - want).abs() < 1e-6);
}

#[test]
fn eta_one_coefficients() {
    let beta = 0.6;
    let exp = SpectralExpansion::new(params(beta, 1.0), 5).unwrap();
    for (i, term) in exp.terms.iter().enumerate() {
        let n = i + 1;
        assert!((term.lambda_n - n as f64).abs() < 1e-9);
        let want = pcf_d(n as f64, beta).unwrap().powi(2) / (factorial(n) * (2.0 * PI).sqrt());
        assert!((term.k_n - want).abs() < 1e-8 * (1.0 + want.abs()), "k_{n}: {} vs {want}", term.k_n);
    }
}

#[test]
fn spectral_density_matches_transform_inversion() {
    for (x, x0) in [(0.5, -0.5), (-0.7, -0.2), (1.2, 0.4)] {
        let q = query(x, x0, 1.0, 0.5);
        let spec = spectral_density(q, 0.5, 40).unwrap().value;
        let inv = stehfest(|th| laplace_density(q, th, false).unwrap(), 0.5, 14);
        assert!((spec - inv).abs() < 1e-4, "({x},{x0}): {spec} vs {inv}");
    }
}

#[test]
fn spectral_density_tends_to_steady_state() {
    let q = query(0.3, -1.0, 0.5, 0.5);
    let far = spectral_density(q, 60.0, 10).unwrap();
    assert!((far.value - steady_density(0.3, q.params)).abs() < 1e-12);
    let early = spectral_density(q, 0.01, 30).unwrap();
    assert!(early.warning.is_some());
    assert!(spectral_density(q, 0.0, 10).is_err());
}

#[test]
fn residue_at_zero_is_the_steady_state() {
    for (beta, eta, x) in [(1.0, 0.5, 0.3), (-1.0, 2.0, -0.4)] {
        let q = query(x, -0.5, beta, eta);
        let th = 1e-7;
        let res = th * laplace_density(q, th, false).unwrap();
        let want = steady_density(x, q.params);
        assert!((res / want - 1.0).abs() < 1e-6);
    }
}

#[test]
fn bounded_near_gamma_pole() {
    // theta = -1 is not a root of V here, so the transform stays finite
    let q = query(-0.5, -1.0, 0.7, 0.4);
    let vals: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&d| laplace_density(q, -1.0 + d, true).unwrap())
        .collect();
    let at = laplace_density(q, -1.0, true).unwrap();
    assert!(at.is_finite());
    for v in &vals {
        assert!((v - at).abs() < 0.05 * at.abs().max(1.0), "{vals:?} vs {at}");
    }
    assert!(laplace_density(q, -0.5, false).is_err());
}

#[test]
fn small_eta_transform_approaches_limit() {
    let hw = hw_laplace_limit(0.5, 1.0, -0.5, 1.0).unwrap();
    let gap = |eta: f64| {
        let v = laplace_density(query(0.5, -0.5, 1.0, eta), 1.0, false).unwrap();
        (v / hw - 1.0).abs()
    };
    let (g3, g4) = (gap(1e-3), gap(1e-4));
    assert!(g4 < 1e-2);
    assert!(g4 < g3 / 2.0, "{g3} {g4}");
}

#[test]
fn limit_transform_branch_and_pole() {
    assert!(matches!(hw_laplace_limit(0.5, -0.5, -0.5, 1.0), Err(Error::BranchCut(_))));
    assert!(hw_laplace_limit(-0.5, 1.0, -0.5, 1.0).is_err());
    let th = 1e-8;
    let with_pole = th * hw_laplace_limit(0.5, th, -0.5, 1.0).unwrap();
    let without = th * hw_laplace_limit(0.5, th, -0.5, -1.0).unwrap();
    assert!(with_pole > 1e-3);
    assert!(without.abs() < 1e-6);
}

#[test]
fn reflected_ou_limit() {
    // mpmath values of the two ratios at theta = 0.7, beta = 0.5
    let cases = [
        (1e4, 1.010_846_606_805_5, 0.981_976_567_504_30),
        (1e6, 1.001_085_159_379_8, 0.998_187_753_973_55),
    ];
    for (eta, v, m) in cases {
        let (rv, rm) = rou_limit_check(0.7, 0.5, eta).unwrap();
        assert!((rv - v).abs() < 1e-8 && (rm - m).abs() < 1e-8, "eta={eta}: {rv} {rm}");
    }
    // the deviation from 1 falls like eta^(-1/2)
    let (a, _) = rou_limit_check(0.7, 0.5, 1e4).unwrap();
    let (b, _) = rou_limit_check(0.7, 0.5, 1e6).unwrap();
    assert!(((a - 1.0) / (b - 1.0) / 10.0 - 1.0).abs() < 0.05);
    let (z, w) = rou_limit_check(0.0, 0.0, 1e6).unwrap();
    assert!((z - 1.0).abs() < 1e-2 && (w - 1.0).abs() < 1e-2);
    assert!(rou_limit_check(0.7, 0.5, 10.0).is_err());
}

#[test]
fn orthonormal_modes() {
    let p = params(0.5, 0.5);
    for n in 1..=3 {
        for m in 1..=3 {
            let want = if n == m { 1.0 } else { 0.0 };
            let got = orthogonality_check(p, n, m).unwrap();
            assert!((got - want).abs() < 1e-8, "({n},{m}): {got}");
        }
    }
    assert!(orthogonality_check(p, 0, 1).is_err());
}

#[test]
fn large_t_decay_rate() {
    let p = params(0.5, 0.5);
    let q = DensityQuery::new(0.5, -0.5, p).unwrap();
    let pinf = steady_density(0.5, p);
    let d1 = spectral_density(q, 8.0, 10).unwrap().value - pinf;
    let d2 = spectral_density(q, 12.0, 10).unwrap().value - pinf;
    let slope = (d2.abs().ln() - d1.abs().ln()) / 4.0;
    let r = spectral_gap(p).unwrap().r;
    assert!((slope / -r - 1.0).abs() < 0.02);
}
