//! Adaptive 15-point Gauss-Kronrod quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// ∫_a^b f with error estimate; bisects the worst piece until the total
/// error is below max(abs_tol, rel_tol·|I|).
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let (v, e) = rule(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, val: v, err: e });
    let (mut total, mut err) = (v, e);
    for _ in 0..2000 {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = rule(&f, p.a, m);
        let (v2, e2) = rule(&f, m, p.b);
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, val: v2, err: e2 });
    }
    // re-sum to shed the drift of the running totals
    let (mut s, mut e) = (0.0, 0.0);
    for p in heap {
        s += p.val;
        e += p.err;
    }
    (s, e)
}

/// Sum of [`integrate`] over consecutive breakpoints.
pub(crate) fn integrate_pieces<F: Fn(f64) -> f64>(f: F, pts: &[f64], abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    pts.windows(2).fold((0.0, 0.0), |(s, e), w| {
        let (v, d) = integrate(&f, w[0], w[1], abs_tol, rel_tol);
        (s + v, e + d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let (v, e) = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-14, 1e-14);
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13, "{v} {e}");
    }

    #[test]
    fn kink_is_resolved() {
        let (v, _) = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-12, 1e-12);
        assert!((v - 4.0 / 3.0).abs() < 1e-9);
    }
}
