//! Fixed-point solver for the gradient `u = grad_x psi(., y)` of the phase at a
//! fixed second argument, built on the Gaussian kernel of the drift-diffusion
//! generator `(h^2/2) Laplacian - ((x - y)/t) . grad`.

use crate::quadrature::{gauss_hermite, gauss_legendre};
use crate::KernelError;
use heatcorr_exec::{map_range, Execution};
use heatcorr_grid::GridSpec;
use heatcorr_interaction::LatticePotential;
use serde::{Deserialize, Serialize};

/// Discretisation and iteration controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct DuhamelParams {
    pub nodes_per_interval: usize,
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Gauss-Hermite nodes per axis for the Gaussian averages on the grid.
    pub hermite_nodes: usize,
    /// Hermite nodes per axis for the analytic potential average in the phase.
    pub closing_hermite_nodes: usize,
    /// Gauss-Legendre nodes in `s` for the analytic potential average.
    pub closing_nodes: usize,
    /// Start time as a fraction of the hypothesis time scale `T0 / hbar`.
    pub start_fraction: f64,
    pub max_halvings: usize,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for DuhamelParams {
    fn default() -> Self {
        DuhamelParams {
            nodes_per_interval: 64,
            tolerance: 1e-10,
            max_sweeps: 50,
            hermite_nodes: 12,
            closing_hermite_nodes: 10,
            closing_nodes: 32,
            start_fraction: 1e-3,
            max_halvings: 6,
            exec: Execution::Auto,
        }
    }
}

/// Phase and gradient on `grid^N` at fixed `y`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DuhamelSolution {
    pub t: f64,
    pub t0: f64,
    pub y: Vec<f64>,
    pub psi: Vec<f64>,
    /// `gradient[l][x]` is `d psi / d x_l` at grid point `x`.
    pub gradient: Vec<Vec<f64>>,
    pub intervals: usize,
    pub sweeps: usize,
}

struct Tensor<'a> {
    grid: &'a GridSpec,
    n_sites: usize,
    coords: Vec<f64>,
    hermite: (Vec<f64>, Vec<f64>),
}

impl<'a> Tensor<'a> {
    fn new(grid: &'a GridSpec, n_sites: usize, hermite_nodes: usize) -> Self {
        Tensor { grid, n_sites, coords: grid.coordinates(), hermite: gauss_hermite(hermite_nodes) }
    }

    fn n(&self) -> usize {
        self.grid.points
    }

    fn dim(&self) -> usize {
        self.n().pow(self.n_sites as u32)
    }

    fn lagrange(&self, p: f64, row: &mut [f64], weight: f64) {
        let n = self.n();
        let l = self.grid.half_width;
        let dx = self.grid.spacing();
        let p = p.clamp(-l, l);
        let order = 6.min(n);
        let start = (((p + l) / dx).floor() as i64 - (order as i64 / 2 - 1)).clamp(0, (n - order) as i64) as usize;
        for j in start..start + order {
            let mut w = 1.0;
            for k in start..start + order {
                if k != j {
                    w *= (p - self.coords[k]) / (self.coords[j] - self.coords[k]);
                }
            }
            row[j] += weight * w;
        }
    }

    /// Per-axis matrix of `f -> E f(m(x) + sigma Z)` with `m = (1 - s/t) y + (s/t) x`.
    fn axis_matrix(&self, s: f64, t: f64, y: f64, hbar: f64) -> Vec<f64> {
        let n = self.n();
        let r = s / t;
        let sigma = hbar * (s * (t - s) / t).max(0.0).sqrt();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            let m = (1.0 - r) * y + r * self.coords[i];
            let row = &mut a[i * n..(i + 1) * n];
            if sigma == 0.0 {
                self.lagrange(m, row, 1.0);
            } else {
                for (z, w) in self.hermite.0.iter().zip(&self.hermite.1) {
                    self.lagrange(m + sigma * z, row, *w);
                }
            }
        }
        a
    }

    fn smoothing(&self, s: f64, t: f64, y: &[f64], hbar: f64) -> Vec<Vec<f64>> {
        y.iter().map(|&yl| self.axis_matrix(s, t, yl, hbar)).collect()
    }

    fn apply(&self, mats: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut cur = f.to_vec();
        let mut next = vec![0.0; cur.len()];
        for (axis, a) in mats.iter().enumerate() {
            let stride = n.pow((self.n_sites - 1 - axis) as u32);
            next.iter_mut().for_each(|v| *v = 0.0);
            for outer in (0..cur.len()).step_by(stride * n) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for i in 0..n {
                        let row = &a[i * n..(i + 1) * n];
                        let mut acc = 0.0;
                        for (j, &c) in row.iter().enumerate() {
                            if c != 0.0 {
                                acc += c * cur[base + j * stride];
                            }
                        }
                        next[base + i * stride] = acc;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    fn point(&self, mut flat: usize) -> Vec<f64> {
        let n = self.n();
        let mut x = vec![0.0; self.n_sites];
        for k in (0..self.n_sites).rev() {
            x[k] = self.coords[flat % n];
            flat /= n;
        }
        x
    }

    /// Grid derivative along `axis`: fourth order in the interior, second order
    /// one-sided at the ends.
    fn derivative(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let n = self.n();
        let dx = self.grid.spacing();
        let stride = n.pow((self.n_sites - 1 - axis) as u32);
        let mut out = vec![0.0; f.len()];
        for (k, o) in out.iter_mut().enumerate() {
            let i = (k / stride) % n;
            let at = |d: i64| f[(k as i64 + d * stride as i64) as usize];
            *o = if i >= 2 && i + 2 < n {
                (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * dx)
            } else if i == 0 {
                (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dx)
            } else if i + 1 == n {
                (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * dx)
            } else {
                (at(1) - at(-1)) / (2.0 * dx)
            };
        }
        out
    }
}

fn trapezoid_weights(k: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; k + 1];
    w[0] = 0.5 * h;
    w[k] = 0.5 * h;
    w
}

struct Interval {
    nodes: Vec<f64>,
    values: Vec<Vec<Vec<f64>>>,
    sweeps: usize,
}

fn squared_norm(u: &[Vec<f64>]) -> Vec<f64> {
    let mut g = vec![0.0; u[0].len()];
    for comp in u {
        for (g, v) in g.iter_mut().zip(comp) {
            *g += v * v;
        }
    }
    g
}

fn solve_interval(
    tensor: &Tensor,
    potential_grad: &[Vec<f64>],
    y: &[f64],
    hbar: f64,
    a: f64,
    b: f64,
    phi: &[Vec<f64>],
    params: &DuhamelParams,
) -> Option<Interval> {
    let q = params.nodes_per_interval.max(2);
    let n_sites = tensor.n_sites;
    let h = (b - a) / (q - 1) as f64;
    let nodes: Vec<f64> = (0..q).map(|k| a + h * k as f64).collect();
    let exec = params.exec;
    let pairs: Vec<(usize, usize)> = (1..q).flat_map(|k| (0..=k).map(move |j| (j, k))).collect();
    let mats: Vec<Vec<Vec<f64>>> = map_range(exec, pairs.len(), |p| {
        let (j, k) = pairs[p];
        tensor.smoothing(nodes[j], nodes[k], y, hbar)
    });
    let offset = |k: usize| k * (k + 1) / 2 - 1;
    // Terms independent of the iterate.
    let fixed: Vec<Vec<Vec<f64>>> = map_range(exec, q, |k| {
        if k == 0 {
            return phi.to_vec();
        }
        let base = offset(k);
        let w = trapezoid_weights(k, h);
        (0..n_sites)
            .map(|l| {
                let r0 = a / nodes[k];
                let mut acc: Vec<f64> = tensor.apply(&mats[base], &phi[l]).into_iter().map(|v| r0 * v).collect();
                for j in 0..=k {
                    let r = nodes[j] / nodes[k];
                    let g = tensor.apply(&mats[base + j], &potential_grad[l]);
                    for (acc, g) in acc.iter_mut().zip(g) {
                        *acc += w[j] * r * g;
                    }
                }
                acc
            })
            .collect()
    });
    let mut values = fixed.clone();
    let mut last = f64::INFINITY;
    let mut growth = 0;
    for sweep in 1..=params.max_sweeps {
        let sq: Vec<Vec<f64>> = values.iter().map(|u| squared_norm(u)).collect();
        let next: Vec<Vec<Vec<f64>>> = map_range(exec, q, |k| {
            if k == 0 {
                return phi.to_vec();
            }
            let base = offset(k);
            let w = trapezoid_weights(k, h);
            let mut smooth = vec![0.0; sq[0].len()];
            for j in 0..=k {
                let g = tensor.apply(&mats[base + j], &sq[j]);
                for (s, g) in smooth.iter_mut().zip(g) {
                    *s += w[j] * g;
                }
            }
            (0..n_sites)
                .map(|l| {
                    let d = tensor.derivative(&smooth, l);
                    fixed[k][l].iter().zip(d).map(|(f, d)| f - 0.5 * hbar * hbar * d).collect()
                })
                .collect()
        });
        let mut change = 0.0f64;
        let mut scale = 1.0f64;
        for (new, old) in next.iter().zip(&values) {
            for (nc, oc) in new.iter().zip(old) {
                for (x, y) in nc.iter().zip(oc) {
                    change = change.max((x - y).abs());
                    scale = scale.max(x.abs());
                }
            }
        }
        values = next;
        if !change.is_finite() {
            return None;
        }
        if change <= params.tolerance * scale {
            return Some(Interval { nodes, values, sweeps: sweep });
        }
        growth = if change > last { growth + 1 } else { 0 };
        if growth >= 3 {
            return None;
        }
        last = change;
    }
    None
}

/// Solve for `grad_x psi(., y)` on `grid^N` up to time `t` and assemble `psi`.
///
/// `time_scale` is the hypothesis time `T0`; integration starts at
/// `start_fraction * T0 / hbar` from the small-time expansion of the gradient.
pub fn solve_duhamel(
    potential: &LatticePotential,
    grid: &GridSpec,
    hbar: f64,
    y: &[f64],
    t: f64,
    time_scale: f64,
    params: &DuhamelParams,
) -> Result<DuhamelSolution, KernelError> {
    grid.validate()?;
    let n_sites = potential.len();
    if y.len() != n_sites || n_sites == 0 {
        return Err(KernelError::Incompatible("base point must have one coordinate per site".into()));
    }
    if !(t > 0.0) || !(hbar > 0.0) || !(time_scale > 0.0) {
        return Err(KernelError::InvalidArgument("time, hbar and time scale must be positive".into()));
    }
    let tensor = Tensor::new(grid, n_sites, params.hermite_nodes);
    let dim = tensor.dim();
    let t0 = (params.start_fraction * time_scale / hbar).min(0.5 * t);
    let points: Vec<Vec<f64>> = (0..dim).map(|i| tensor.point(i)).collect();
    let grads: Vec<Vec<f64>> = points.iter().map(|x| potential.gradient(x)).collect();
    let potential_grad: Vec<Vec<f64>> = (0..n_sites).map(|l| grads.iter().map(|g| g[l]).collect()).collect();

    let (gx, gw) = gauss_legendre(16, 0.0, 1.0);
    let mut initial = vec![vec![0.0; dim]; n_sites];
    for (i, x) in points.iter().enumerate() {
        for (th, w) in gx.iter().zip(&gw) {
            let p: Vec<f64> = y.iter().zip(x).map(|(y, x)| y + th * (x - y)).collect();
            for (l, g) in potential.gradient(&p).into_iter().enumerate() {
                initial[l][i] += t0 * w * th * g;
            }
        }
    }

    let mut pending = vec![(t0, t, 0usize)];
    let mut phi = initial.clone();
    let mut history: Vec<(f64, Vec<f64>)> = vec![(0.0, vec![0.0; dim]), (t0, squared_norm(&initial))];
    let mut intervals = 0;
    let mut sweeps = 0;
    while let Some((a, b, depth)) = pending.pop() {
        match solve_interval(&tensor, &potential_grad, y, hbar, a, b, &phi, params) {
            Some(sol) => {
                intervals += 1;
                sweeps += sol.sweeps;
                for (s, u) in sol.nodes.iter().zip(&sol.values).skip(1) {
                    history.push((*s, squared_norm(u)));
                }
                phi = sol.values.last().cloned().unwrap_or(phi);
            }
            None if depth < params.max_halvings => {
                let mid = 0.5 * (a + b);
                pending.push((mid, b, depth + 1));
                pending.push((a, mid, depth + 1));
            }
            None => {
                return Err(KernelError::Diverged(format!("fixed-point iteration failed on [{a:.3e}, {b:.3e}]")));
            }
        }
    }

    // psi = int_0^t G(s,t)[V] ds - (h^2/2) int_0^t G(s,t)[|u(s)|^2] ds
    let (hz, hw) = gauss_hermite(params.closing_hermite_nodes);
    let (sx, sw) = gauss_legendre(params.closing_nodes, 0.0, t);
    let combos = hw.len().pow(n_sites as u32);
    let drift: Vec<f64> = map_range(params.exec, dim, |i| {
        let x = &points[i];
        let mut total = 0.0;
        let mut p = vec![0.0; n_sites];
        for (s, ws) in sx.iter().zip(&sw) {
            let r = s / t;
            let sigma = hbar * (s * (t - s) / t).sqrt();
            let mut acc = 0.0;
            for c in 0..combos {
                let mut rem = c;
                let mut w = 1.0;
                for l in 0..n_sites {
                    let q = rem % hw.len();
                    rem /= hw.len();
                    p[l] = (1.0 - r) * y[l] + r * x[l] + sigma * hz[q];
                    w *= hw[q];
                }
                acc += w * potential.value(&p);
            }
            total += ws * acc;
        }
        total
    });
    let smoothed: Vec<Vec<f64>> = map_range(params.exec, history.len(), |j| {
        let (s, g) = &history[j];
        tensor.apply(&tensor.smoothing(*s, t, y, hbar), g)
    });
    let mut psi = drift;
    for j in 0..history.len() {
        let left = if j > 0 { history[j].0 - history[j - 1].0 } else { 0.0 };
        let right = if j + 1 < history.len() { history[j + 1].0 - history[j].0 } else { 0.0 };
        let w = 0.5 * (left + right);
        for (p, v) in psi.iter_mut().zip(&smoothed[j]) {
            *p -= 0.5 * hbar * hbar * w * v;
        }
    }
    Ok(DuhamelSolution { t, t0, y: y.to_vec(), psi, gradient: phi, intervals, sweeps })
}

/// Solution of the linear drift-diffusion problem with data `g` at `t0` and
/// source `f(x, s)`, the setting of the maximum principle.
#[allow(clippy::too_many_arguments)]
pub fn solve_linear_drift(
    grid: &GridSpec,
    n_sites: usize,
    hbar: f64,
    y: &[f64],
    t0: f64,
    t: f64,
    g: &[f64],
    f: impl Fn(&[f64], f64) -> f64,
    nodes: usize,
) -> Result<Vec<f64>, KernelError> {
    grid.validate()?;
    if y.len() != n_sites || !(t > t0 && t0 > 0.0) || nodes < 2 {
        return Err(KernelError::InvalidArgument("need 0 < t0 < t, one base coordinate per site and two nodes".into()));
    }
    let tensor = Tensor::new(grid, n_sites, 12);
    if g.len() != tensor.dim() {
        return Err(KernelError::Incompatible("initial data has the wrong length".into()));
    }
    let points: Vec<Vec<f64>> = (0..tensor.dim()).map(|i| tensor.point(i)).collect();
    let mut out = tensor.apply(&tensor.smoothing(t0, t, y, hbar), g);
    let h = (t - t0) / (nodes - 1) as f64;
    for (j, w) in trapezoid_weights(nodes - 1, h).into_iter().enumerate() {
        let s = t0 + h * j as f64;
        let src: Vec<f64> = points.iter().map(|x| f(x, s)).collect();
        for (o, v) in out.iter_mut().zip(tensor.apply(&tensor.smoothing(s, t, y, hbar), &src)) {
            *o += w * v;
        }
    }
    Ok(out)
}
