use erlang_spectral::asymptotic::{
    beta_star, branch_point, chi_of_w, correction_a, gap_large_beta, gap_mid_beta,
    gap_near_beta_star, gap_neg_beta, gap_small_beta, l_constant, r0_of_beta, r_of_gamma,
    regime_select, BranchKind, Regime,
};
use erlang_spectral::specfun::{airy_ai, airy_zero, pcf_eval, AiryZeroKind, PcfQuery};
use erlang_spectral::{spectral_gap, ModelParams};

fn params(beta: f64, eta: f64) -> ModelParams {
    ModelParams::new(beta, eta).unwrap()
}

fn gap(beta: f64, eta: f64) -> f64 {
    spectral_gap(params(beta, eta)).unwrap().r
}

// 25-digit values from an independent arbitrary-precision evaluation
const BETA_STAR: f64 = 1.857_221_697_516_938_8;
const L_CONST: f64 = 2.738_752_966_589_7;
const R0_AT_2: f64 = 0.932_299_688_279_746_2;

#[test]
fn constants_match_reference() {
    assert!((beta_star() - BETA_STAR).abs() < 1e-12);
    assert!((l_constant() - L_CONST).abs() < 1e-8);
    let g = pcf_eval(PcfQuery::new(BETA_STAR * BETA_STAR / 4.0, -BETA_STAR)).unwrap().dz;
    assert!(g.abs() < 1e-10);
}

#[test]
fn r0_branch() {
    assert!((r0_of_beta(2.0).unwrap().unwrap() - R0_AT_2).abs() < 1e-11);
    let at_star = r0_of_beta(beta_star()).unwrap().unwrap();
    assert!((at_star - beta_star().powi(2) / 4.0).abs() < 1e-12);
    assert!(r0_of_beta(1.5).unwrap().is_none());
    let far = r0_of_beta(6.0).unwrap().unwrap();
    assert!(far < 1.0 && far > 0.99);
    let b = branch_point(BranchKind::R0, 2.0).unwrap();
    assert_eq!(b.kind, BranchKind::R0);
    assert!(branch_point(BranchKind::R0, 1.0).is_err());
}

#[test]
fn r0_is_the_minimal_root() {
    for beta in [2.0, 2.5, 3.0] {
        let r0 = r0_of_beta(beta).unwrap().unwrap();
        let vt = |p: f64| {
            let e = pcf_eval(PcfQuery::new(p, -beta)).unwrap();
            e.dz - (beta * beta / 4.0 - p).sqrt() * e.value
        };
        let first = vt(1e-6);
        for k in 1..400 {
            let p = 1e-6 + (r0 - 2e-6) * k as f64 / 400.0;
            assert_eq!(vt(p) > 0.0, first > 0.0, "beta={beta}: sign change at p={p} below r0={r0}");
        }
    }
}

#[test]
fn r_of_gamma_values() {
    assert!((r_of_gamma(0.0).unwrap() - 2.0).abs() < 1e-11);
    assert!((r_of_gamma(1.0).unwrap() - 3.0).abs() < 1e-11);
    assert!((r_of_gamma(-1.0).unwrap() - 1.388_238_294_706_785_5).abs() < 1e-10);
    assert!((r_of_gamma(0.5).unwrap() - 2.448_686_774_535_172).abs() < 1e-10);
    assert!((r_of_gamma(-2.0).unwrap() - 1.097_274_595_858_843_5).abs() < 1e-10);
}

#[test]
fn r_of_gamma_tails() {
    let g: f64 = -4.0;
    let want = -(g / (2.0 * std::f64::consts::PI).sqrt()) * (-g * g / 2.0).exp();
    let got = r_of_gamma(g).unwrap() - 1.0;
    assert!((got / want - 1.0).abs() < 0.15, "{got} vs {want}");
    assert!((r_of_gamma(8.0).unwrap() - 22.667_765_753_179_355).abs() < 1e-9);
    // (R - gamma^2/4) / (|a0| (gamma/2)^(2/3)) tends to 1 from above
    let a0 = airy_zero(AiryZeroKind::OfAi, 0).unwrap().abs();
    let q = |g: f64| (r_of_gamma(g).unwrap() - g * g / 4.0) / (a0 * (g / 2.0).powf(2.0 / 3.0));
    let (q8, q16, q32) = (q(8.0), q(16.0), q(32.0));
    assert!(q8 > q16 && q16 > q32 && q32 > 1.0 && q32 < 1.05, "{q8} {q16} {q32}");
}

#[test]
fn chi_branch() {
    let b0 = airy_zero(AiryZeroKind::OfAiPrime, 0).unwrap();
    assert!((chi_of_w(0.0).unwrap() - b0).abs() < 1e-13);
    let chi = chi_of_w(1.0).unwrap();
    let (ai, aip) = airy_ai(chi).unwrap();
    let k = (2.0 / beta_star()).cbrt() * l_constant();
    assert!((aip + k * ai).abs() < 1e-10);
    let a0 = airy_zero(AiryZeroKind::OfAi, 0).unwrap();
    let low = chi_of_w(-200.0).unwrap();
    assert!(low > a0 && low - a0 < 0.01);
    assert!(chi_of_w(5.0).unwrap() > chi_of_w(1.0).unwrap());
    assert!(chi_of_w(1.0).unwrap() > b0);
}

#[test]
fn neg_beta_estimate() {
    let e = gap_neg_beta(params(-1.0, 0.1)).unwrap();
    assert_eq!(e.regime, Regime::NegBeta);
    assert!((e.value - 0.1 - 2.926_85e-4).abs() < 5e-9);
    let tiny = gap_neg_beta(params(-1.0, 0.025)).unwrap();
    assert!((tiny.terms[1].1 - 4.476_65e-11).abs() < 5e-16);
    let wide = gap_neg_beta(params(-1.0, 0.5)).unwrap();
    assert!((wide.terms[1].1 - 3.573_25e-2).abs() < 5e-7);
    assert!(wide.validity_note.is_empty());
    assert!(!gap_neg_beta(params(-1.0, 0.6)).unwrap().validity_note.is_empty());
    assert!(gap_neg_beta(params(0.5, 0.1)).is_err());
}

#[test]
fn small_beta_tracks_exact_gap() {
    let e = gap_small_beta(params(0.5 * 1e-3_f64.sqrt(), 1e-3)).unwrap();
    let r = gap(0.5 * 1e-3_f64.sqrt(), 1e-3);
    assert!((e.value - r).abs() < 0.05 * 1e-3);
    for (gamma, eta, want) in [(1.0, 0.01, 0.03), (0.0, 0.05, 0.1), (-1.0, 0.1, 0.138_82)] {
        let v = gap_small_beta(params(gamma * f64::sqrt(eta), eta)).unwrap().value;
        assert!((v - want).abs() < 5e-6, "gamma={gamma}: {v}");
    }
}

#[test]
fn mid_beta_leading_error_is_order_eta() {
    // the two-term estimate; the difference to the exact gap shrinks linearly
    let errs: Vec<f64> = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&eta| (gap_mid_beta(params(1.0, eta)).unwrap().leading - gap(1.0, eta)).abs())
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.5..2.5).contains(&ratio), "{errs:?}");
    }
    let e = gap_mid_beta(params(1.0, 0.001)).unwrap();
    assert_eq!(e.terms.len(), 3);
    assert!((e.leading - 0.264_72).abs() < 5e-5);
    assert!(gap_mid_beta(params(2.0, 0.001)).is_err());
}

#[test]
fn mid_beta_error_is_order_eta_four_thirds() {
    let errs: Vec<f64> = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&eta| (gap_mid_beta(params(1.0, eta)).unwrap().value - gap(1.0, eta)).abs())
        .collect();
    let want = 2f64.powf(4.0 / 3.0);
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > want / 2.0 && ratio < want * 2.0, "{errs:?}");
    }
    // the O(eta) coefficient, against a Richardson limit of (r - leading)/eta
    for (beta, limit) in [(0.5, 0.1532), (1.0, -0.3140), (1.5, -1.2616)] {
        let e = gap_mid_beta(params(beta, 1.0)).unwrap();
        assert!((e.terms[2].1 - limit).abs() < 5e-4, "beta={beta}: {}", e.terms[2].1);
    }
}

#[test]
fn large_beta_error_is_order_eta_squared() {
    let errs: Vec<f64> = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&eta| (gap_large_beta(params(2.0, eta)).unwrap().value - gap(2.0, eta)).abs())
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((2.0..8.0).contains(&ratio), "{errs:?}");
    }
    let v = gap_large_beta(params(2.0, 0.001)).unwrap().value;
    assert!((v - 0.932_82).abs() < 5e-4);
}

#[test]
fn correction_term() {
    let a = correction_a(2.0).unwrap();
    assert!((a - 0.540_205).abs() < 1e-6);
    assert!(correction_a(2.5).unwrap() > 0.0);
    assert!(correction_a(beta_star() + 1e-3).unwrap() > 10.0 * a);
    assert!(correction_a(1.5).is_err());
    let r0 = r0_of_beta(2.0).unwrap().unwrap();
    let slope = |eta: f64| (gap(2.0, eta) - r0) / eta;
    let (d3, d4) = ((slope(1e-3) - a).abs(), (slope(1e-4) - a).abs());
    assert!(d4 < 2e-3 && d4 < d3 / 5.0, "{d3} {d4}");
}

#[test]
fn near_beta_star_estimate() {
    let e = gap_near_beta_star(params(beta_star(), 0.001)).unwrap();
    assert_eq!(e.regime, Regime::NearBetaStar);
    let exact = gap(beta_star(), 0.001);
    assert!((exact - 0.869_66).abs() < 5e-5);
    assert!((e.value - exact).abs() < 3e-3);
}

#[test]
fn dispatch() {
    assert_eq!(regime_select(params(-1.0, 0.01)).unwrap().regime, Regime::NegBeta);
    assert_eq!(regime_select(params(1.86, 0.001)).unwrap().regime, Regime::NearBetaStar);
    assert_eq!(regime_select(params(1.0, 0.01)).unwrap().regime, Regime::MidBeta);
    assert_eq!(regime_select(params(0.01, 0.01)).unwrap().regime, Regime::SmallBeta);
    assert_eq!(regime_select(params(3.0, 0.001)).unwrap().regime, Regime::LargeBeta);
}

#[test]
fn adjacent_regimes_agree_at_boundaries() {
    for eta in [0.01_f64, 0.001, 1e-4] {
        let b = -3.0 * eta.sqrt();
        let neg = gap_neg_beta(params(b, eta)).unwrap().value;
        let small = gap_small_beta(params(b, eta)).unwrap().value;
        assert!((neg / small - 1.0).abs() < 0.1, "eta={eta}: {neg} vs {small}");
        let b = beta_star() - 3.0 * eta.cbrt();
        let mid = gap_mid_beta(params(b, eta)).unwrap().value;
        let near = gap_near_beta_star(params(b, eta)).unwrap().value;
        assert!((mid / near - 1.0).abs() < 0.1, "eta={eta}: {mid} vs {near}");
    }
}

#[test]
fn small_and_mid_beta_share_scaling() {
    // at beta = 3 sqrt(eta) both are eta times a constant
    let ratio = |eta: f64| {
        let b = 3.0 * eta.sqrt();
        gap_small_beta(params(b, eta)).unwrap().value / gap_mid_beta(params(b, eta)).unwrap().leading
    };
    assert!((ratio(0.01) - ratio(1e-4)).abs() < 1e-9);
    let a0 = airy_zero(AiryZeroKind::OfAi, 0).unwrap().abs();
    let want = r_of_gamma(3.0).unwrap() / (2.25 + a0 * 1.5_f64.powf(2.0 / 3.0));
    assert!((ratio(0.01) - want).abs() < 1e-9);
}

#[test]
fn outer_branch_matches_transition_layer() {
    // beta^2/4 - r0(beta) ~ L^2 (beta - beta*)^2, the large-W limit of the layer
    let l2 = l_constant().powi(2);
    let d: f64 = 1e-4;
    let b = beta_star() + d;
    let r0 = r0_of_beta(b).unwrap().unwrap();
    assert!(((b * b / 4.0 - r0) / (d * d) / l2 - 1.0).abs() < 5e-3);
}
