use std::str::FromStr;

use erlang_spectral::specfun::airy::airy_zero_generic;
use erlang_spectral::specfun::pcf::pcf_scaled;
use erlang_spectral::specfun::{
    airy_ai, airy_zero, digamma, gamma, hermite_he, ln_gamma, pcf_eval, pcf_eval_with,
    pcf_uniform_airy, rgamma, AiryZeroKind, PcfQuery,
};
use erlang_spectral::{Dd, Precision};

// (p, z, D, dD/dz, dD/dp) from a 40-digit hypergeometric evaluation.
const REFERENCE: [(f64, f64, f64, f64, f64); 10] = [
    (0.5, 1.0, 0.842_203_244_069_839_6, -0.094_565_608_685_238_83, 0.024_082_546_948_107_79),
    (-2.3, -4.0, 720.036_055_944_071_1, -1_669.548_591_772_306_5, -602.053_915_755_713_4),
    (7.0, 3.0, -41.738_092_926_498_28, -8.221_139_515_825_418, -37.813_425_448_103_5),
    (-0.5, 12.0, 6.678_706_054_319_363e-17, -4.034_769_424_673_667e-16, 1.664_159_956_335_374e-16),
    (3.7, -2.5, -0.982_050_326_190_745_4, -4.103_554_565_360_933, 5.015_754_295_288_813),
    (-4.2, 0.0, 0.289_194_444_202_483_9, -0.558_719_184_970_731_5, 0.208_826_532_153_534_4),
    (1.5, 6.0, 0.001_794_947_824_101_308_3, -0.004_929_870_794_359_514, 0.003_165_735_331_974_427),
    (-1.0, -1.0, 2.707_930_673_734_684, -2.132_766_119_938_747, -1.467_704_867_539_226_4),
    (10.0, -6.0, 1_278.956_393_964_066_7, 538.325_042_537_876_3, -467.751_015_494_352_04),
    (2.2, 20.0, 2.700_114_088_627_097e-41, -2.670_323_417_017_896e-40, 8.077_300_938_317_449e-41),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn pcf_matches_reference_values() {
    for &(p, z, d, dz, dp) in &REFERENCE {
        let e = pcf_eval(PcfQuery::new(p, z)).unwrap();
        assert!(rel(e.value, d) < 1e-11, "D_{p}({z}) = {} want {d}", e.value);
        assert!(rel(e.dz, dz) < 1e-10, "D'_{p}({z}) = {} want {dz}", e.dz);
        assert!(rel(e.dp, dp) < 1e-9, "dD/dp at ({p},{z}) = {} want {dp}", e.dp);
    }
}

#[test]
fn extended_tier_agrees_with_reference() {
    for &(p, z, d, _, _) in &REFERENCE {
        let e = pcf_eval_with(PcfQuery::new(p, z), Precision::Extended).unwrap();
        assert!(rel(e.value, d) < 1e-14, "D_{p}({z}) extended = {} want {d}", e.value);
    }
}

#[test]
fn extended_tier_beats_double() {
    let cases = [
        (-0.5, 12.0, "6.67870605431936312926335630766510154e-17"),
        (2.25, -3.0, "0.0111532732889696235674334988701113989"),
    ];
    for (p, z, want) in cases {
        let want = Dd::from_str(want).unwrap();
        let s = pcf_scaled(Dd::from_f64(p), Dd::from_f64(z));
        let got = s.d * s.ln_scale.exp();
        let err = ((got - want) / want).abs().to_f64();
        assert!(err < 1e-25, "D_{p}({z}) relative error {err:e}");
    }
}

#[test]
fn integer_index_reduces_to_hermite() {
    for n in 0..8 {
        for &z in &[-3.0, -0.7, 0.0, 1.1, 4.0] {
            let want = hermite_he(n, z).unwrap() * (-z * z / 4.0_f64).exp();
            let got = pcf_eval(PcfQuery::new(n as f64, z)).unwrap().value;
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()), "n={n} z={z}: {got} vs {want}");
        }
    }
}

#[test]
fn hermite_values() {
    assert_eq!(hermite_he(0, 2.5).unwrap(), 1.0);
    assert_eq!(hermite_he(3, 2.0).unwrap(), 2.0);
    assert_eq!(hermite_he(4, 1.0).unwrap(), -2.0);
    assert!(hermite_he(2, f64::NAN).is_err());
}

#[test]
fn non_finite_arguments_are_rejected() {
    assert!(pcf_eval(PcfQuery::new(f64::NAN, 1.0)).is_err());
    assert!(pcf_eval(PcfQuery::new(1.0, f64::INFINITY)).is_err());
}

#[test]
fn airy_zeros() {
    let a = [-2.338_107_410_459_767, -4.087_949_444_130_971, -12.828_776_752_865_757];
    let b = [-1.018_792_971_647_471, -3.248_197_582_179_837, -12.384_788_371_845_747];
    for (k, n) in [0usize, 1, 9].into_iter().enumerate() {
        assert!((airy_zero(AiryZeroKind::OfAi, n).unwrap() - a[k]).abs() < 1e-12);
        assert!((airy_zero(AiryZeroKind::OfAiPrime, n).unwrap() - b[k]).abs() < 1e-12);
    }
    let a0: Dd = airy_zero_generic(AiryZeroKind::OfAi, 0).unwrap();
    let want = Dd::from_str("-2.3381074104597670384891972524467").unwrap();
    assert!((a0 - want).abs().to_f64() < 1e-28);
    assert!(airy_zero(AiryZeroKind::OfAi, 1000).is_err());
}

#[test]
fn airy_values() {
    let cases = [
        (-5.5, 0.017_781_541_276_574_976),
        (0.0, 0.355_028_053_887_817_2),
        (1.3, 0.093_474_665_771_502_7),
        (8.0, 4.692_207_616_099_232e-8),
    ];
    for (x, want) in cases {
        let (ai, _) = airy_ai(x).unwrap();
        assert!(rel(ai, want) < 1e-12, "Ai({x}) = {ai} want {want}");
    }
}

#[test]
fn gamma_family() {
    assert!(rel(ln_gamma(123.4), 469.336_097_442_190_6) < 1e-15);
    assert!(rel(gamma(-2.5), -0.945_308_720_482_941_9) < 1e-14);
    assert!(rel(digamma(0.3), -3.502_524_222_200_133) < 1e-14);
    assert!(rel(gamma(6.0), 120.0) < 1e-14);
    assert_eq!(rgamma(-3.0), 0.0);
    assert!(rel(rgamma(0.5), 1.0 / std::f64::consts::PI.sqrt()) < 1e-15);
}

#[test]
fn uniform_airy_error_shrinks_like_b_to_minus_four_thirds() {
    // (B, delta, D_{-A}(B), D'_{-A}(B)) with A = -B^2/4 + (B/2)^(2/3) delta.
    let cases = [
        (10.0, 0.0, 1_900_903_595_924.517, -2_084_977_981_994.42),
        (10.0, 1.5, 417_925_433.780_617_2, -928_913_147.062_941_3),
        (20.0, 0.0, 3.988_455_852_340_775e78, -5.782_710_140_423_814e78),
        (20.0, 1.5, 1.032_582_723_281_482_6e71, -2.938_302_922_773_014e71),
    ];
    let mut errs = Vec::new();
    for (b, delta, d, dp) in cases {
        let a = -b * b / 4.0 + (b / 2.0_f64).powf(2.0 / 3.0) * delta;
        let (ud, udp) = pcf_uniform_airy(a, b).unwrap();
        let bound = 0.25 * (2.0 / b).powf(4.0 / 3.0);
        let e = rel(ud, d).max(rel(udp, dp));
        assert!(e < bound, "B={b} delta={delta}: error {e:e} above {bound:e}");
        errs.push(e);
    }
    assert!(errs[2] < errs[0] / 2.0 && errs[3] < errs[1] / 2.0, "{errs:?}");
    assert!(pcf_uniform_airy(-4.0, 2.0).is_err());
}

#[test]
fn dd_arithmetic() {
    let third = Dd::from_f64(1.0) / Dd::from_f64(3.0);
    let back = third * Dd::from_f64(3.0) - Dd::from_f64(1.0);
    assert!(back.abs().to_f64() < 1e-31);
    let e = Dd::from_f64(1.0).exp();
    let want = Dd::from_str("2.7182818284590452353602874713527").unwrap();
    assert!((e - want).abs().to_f64() < 1e-30);
    assert!((e.ln() - Dd::from_f64(1.0)).abs().to_f64() < 1e-30);
    let s = Dd::from_f64(2.0).sqrt();
    assert!((s.sqr() - Dd::from_f64(2.0)).abs().to_f64() < 1e-30);
    assert!(Dd::from_str("1.2.3").is_err());
}
