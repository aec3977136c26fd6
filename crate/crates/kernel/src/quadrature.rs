//! Fixed quadrature rules.

use heatcorr_grid::symmetric_eigen;

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(0.5 * (b - a) * x + 0.5 * (a + b));
        weights.push(0.5 * (b - a) * w);
    }
    (nodes, weights)
}

/// Nodes and weights for `E[f(Z)]`, `Z ~ N(0, 1)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = vec![0.0; n * n];
    for k in 1..n {
        let b = (k as f64).sqrt();
        jac[(k - 1) * n + k] = b;
        jac[k * n + k - 1] = b;
    }
    let (nodes, vecs) = symmetric_eigen(&jac, n);
    let weights = (0..n).map(|k| vecs[k].powi(2)).collect();
    (nodes, weights)
}
