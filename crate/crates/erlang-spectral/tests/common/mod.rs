#![allow(dead_code)]

/// Gap of the diffusion generator f'' + b(x)f' from a reflecting
/// finite-difference chain on a truncated line, Richardson-extrapolated in h.
pub fn fd_gap(beta: f64, eta: f64) -> f64 {
    let r1 = fd_gap_at(beta, eta, 0.02);
    let r2 = fd_gap_at(beta, eta, 0.01);
    (4.0 * r2 - r1) / 3.0
}

fn fd_gap_at(beta: f64, eta: f64, h: f64) -> f64 {
    let lo = -beta.abs() - 14.0;
    let hi = (-beta / eta).max(0.0) + 14.0 / eta.sqrt();
    let n = ((hi - lo) / h).ceil() as usize + 1;
    let drift = |x: f64| if x < 0.0 { -beta - x } else { -beta - eta * x };
    let up: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { 0.0 } else { 1.0 / (h * h) + drift(lo + i as f64 * h) / (2.0 * h) })
        .collect();
    let down: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 0.0 } else { 1.0 / (h * h) - drift(lo + i as f64 * h) / (2.0 * h) })
        .collect();
    let diag: Vec<f64> = (0..n).map(|i| up[i] + down[i]).collect();
    let off2: Vec<f64> = (0..n - 1).map(|i| up[i] * down[i + 1]).collect();
    let below = |x: f64| {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if q == 0.0 { 1e-300 } else { q };
            q = diag[i] - x - off2[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut a, mut b) = (1e-9, 2.0 * eta.max(1.0) + 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if below(mid) >= 2 {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}
