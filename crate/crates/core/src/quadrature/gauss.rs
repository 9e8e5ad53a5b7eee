//! Gauss–Legendre rules, computed by Newton iteration on `P_n`.

use std::f64::consts::PI;

/// Nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, z).1;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `P_n(z)` and `P_n'(z)` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Rule mapped to `[lo, hi]`.
pub fn gauss_on(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

/// Composite rule on `[lo, hi]` with breakpoints graded geometrically
/// toward `lo`: `lo + h, lo + 2h, lo + 4h, ...`.
pub fn graded_rule(lo: f64, hi: f64, h: f64, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let mut cuts = vec![lo];
    let mut step = h;
    while lo + step < hi {
        cuts.push(lo + step);
        step *= 2.0;
    }
    cuts.push(hi);
    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    for c in cuts.windows(2) {
        let (x, w) = gauss_on(per_panel, c[0], c[1]);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}
