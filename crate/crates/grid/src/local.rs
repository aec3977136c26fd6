use crate::{symmetric_eigen, GridError, LatticeHamiltonian};
use heatcorr_exec::{map_range, Execution};
use std::collections::HashMap;

const NONE: u32 = u32::MAX;

/// Per-basis-vector Gauss quadrature for `<e_i, f(H) e_i>`.
///
/// With the nearest-neighbour stencil, `k` Lanczos steps from `e_i` only touch
/// grid points within `l^1` distance `k - 1` of `i`. The recurrence therefore
/// runs on a fixed ball-shaped template around each point, which makes the
/// `steps`-point Gauss rule of the full operator cheap to form for every `i`.
pub struct LocalQuadrature<'a> {
    h: &'a LatticeHamiltonian,
    steps: usize,
    offsets: Vec<Vec<i32>>,
    radius_end: Vec<usize>,
    neighbours: Vec<u32>,
}

/// Gauss rules for every diagonal entry, shifted by the potential minimum.
#[derive(Clone, Debug)]
pub struct GaussRules {
    pub steps: usize,
    pub shift: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Diagonals of `exp(-tH)` and `H exp(-tH)`, both scaled by `exp(-log_scale)`.
#[derive(Clone, Debug)]
pub struct DiagonalQuadrature {
    pub t: f64,
    pub log_scale: f64,
    pub heat: Vec<f64>,
    pub energy: Vec<f64>,
}

impl DiagonalQuadrature {
    pub fn log_partition(&self) -> f64 {
        self.log_scale + self.heat.iter().sum::<f64>().ln()
    }

    /// `d/dt ln Z`.
    pub fn mean_energy(&self) -> f64 {
        -self.energy.iter().sum::<f64>() / self.heat.iter().sum::<f64>()
    }

    /// Gibbs expectation of a multiplication operator given by its values.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        let z: f64 = self.heat.iter().sum();
        self.heat.iter().zip(values).map(|(r, a)| r * a).sum::<f64>() / z
    }
}

impl GaussRules {
    pub fn len(&self) -> usize {
        self.nodes.len() / self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Evaluate both diagonals at inverse temperature `t`.
    pub fn evaluate(&self, t: f64) -> DiagonalQuadrature {
        let m = self.steps;
        let mut heat = Vec::with_capacity(self.len());
        let mut energy = Vec::with_capacity(self.len());
        for c in 0..self.len() {
            let (mut a, mut b) = (0.0, 0.0);
            for k in c * m..(c + 1) * m {
                let e = self.weights[k] * (-t * (self.nodes[k] - self.shift)).exp();
                a += e;
                b += e * self.nodes[k];
            }
            heat.push(a);
            energy.push(b);
        }
        DiagonalQuadrature { t, log_scale: -t * self.shift, heat, energy }
    }
}

fn ball(dims: usize, radius: i32) -> Vec<Vec<i32>> {
    fn rec(dims: usize, budget: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == dims {
            out.push(cur.clone());
            return;
        }
        for c in -budget..=budget {
            cur.push(c);
            rec(dims, budget - c.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dims, radius, &mut Vec::new(), &mut out);
    out.sort_by_key(|o| o.iter().map(|c| c.abs()).sum::<i32>());
    out
}

impl<'a> LocalQuadrature<'a> {
    pub fn new(h: &'a LatticeHamiltonian, steps: usize) -> Result<Self, GridError> {
        if !h.is_nearest_neighbour() {
            return Err(GridError::NotNearestNeighbour);
        }
        if steps == 0 {
            return Err(GridError::InvalidArgument("at least one quadrature node is required".into()));
        }
        let radius = steps as i32 - 1;
        let dims = h.sites();
        let offsets = ball(dims, radius);
        let lookup: HashMap<&[i32], u32> = offsets.iter().enumerate().map(|(i, o)| (o.as_slice(), i as u32)).collect();
        let mut neighbours = vec![NONE; offsets.len() * 2 * dims];
        let mut probe = vec![0; dims];
        for (p, o) in offsets.iter().enumerate() {
            for a in 0..dims {
                for (s, delta) in [-1, 1].into_iter().enumerate() {
                    probe.copy_from_slice(o);
                    probe[a] += delta;
                    if let Some(&q) = lookup.get(probe.as_slice()) {
                        neighbours[p * 2 * dims + 2 * a + s] = q;
                    }
                }
            }
        }
        let mut radius_end = vec![0; steps];
        for (r, end) in radius_end.iter_mut().enumerate() {
            *end = offsets.iter().filter(|o| o.iter().map(|c| c.abs()).sum::<i32>() <= r as i32).count();
        }
        Ok(LocalQuadrature { h, steps, offsets, radius_end, neighbours })
    }

    pub fn template_size(&self) -> usize {
        self.offsets.len()
    }

    /// Gauss rules for all diagonal entries.
    pub fn rules(&self, exec: Execution) -> GaussRules {
        let dim = self.h.dim();
        let chunk = 512;
        let parts = map_range(exec, dim.div_ceil(chunk), |c| {
            let mut scratch = Scratch::new(self.offsets.len(), self.steps);
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for i in c * chunk..((c + 1) * chunk).min(dim) {
                self.column(i, &mut scratch, &mut nodes, &mut weights);
            }
            (nodes, weights)
        });
        let mut nodes = Vec::with_capacity(dim * self.steps);
        let mut weights = Vec::with_capacity(dim * self.steps);
        for (n, w) in parts {
            nodes.extend(n);
            weights.extend(w);
        }
        GaussRules { steps: self.steps, shift: self.h.potential_min(), nodes, weights }
    }

    fn column(&self, flat: usize, s: &mut Scratch, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
        let h = self.h;
        let dims = h.sites();
        let n = h.points() as i64;
        let centre = h.multi_index(flat);
        let kin_diag = h.kinetic()[0] * dims as f64;
        let hop = h.hop();
        let size = self.offsets.len();
        for p in 0..size {
            let o = &self.offsets[p];
            let mut g = 0i64;
            let mut ok = true;
            for a in 0..dims {
                let c = centre[a] as i64 + o[a] as i64;
                if c < 0 || c >= n {
                    ok = false;
                    break;
                }
                g = g * n + c;
            }
            s.valid[p] = ok;
            s.diag[p] = if ok { h.potential()[g as usize] + kin_diag } else { 0.0 };
            s.v[p] = 0.0;
            s.prev[p] = 0.0;
        }
        s.v[0] = 1.0;
        let m = self.steps;
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for k in 0..m {
            let reach = self.radius_end[(k + 1).min(m - 1)];
            for p in 0..reach {
                if !s.valid[p] {
                    s.w[p] = 0.0;
                    continue;
                }
                let mut acc = s.diag[p] * s.v[p];
                for &q in &self.neighbours[p * 2 * dims..(p + 1) * 2 * dims] {
                    if q != NONE {
                        acc += hop * s.v[q as usize];
                    }
                }
                s.w[p] = acc;
            }
            let span = self.radius_end[k];
            let a: f64 = (0..span).map(|p| s.w[p] * s.v[p]).sum();
            alpha.push(a);
            if k + 1 == m {
                break;
            }
            let bprev = beta.last().copied().unwrap_or(0.0);
            let mut norm = 0.0;
            for p in 0..reach {
                s.w[p] -= a * s.v[p] + bprev * s.prev[p];
                norm += s.w[p] * s.w[p];
            }
            let b = norm.sqrt();
            if b <= 1e-14 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            for p in 0..reach {
                s.prev[p] = s.v[p];
                s.v[p] = s.w[p] / b;
            }
        }
        let k = alpha.len();
        let mut t = vec![0.0; k * k];
        for i in 0..k {
            t[i * k + i] = alpha[i];
            if i + 1 < k {
                t[i * k + i + 1] = beta[i];
                t[(i + 1) * k + i] = beta[i];
            }
        }
        let (vals, vecs) = symmetric_eigen(&t, k);
        for j in 0..m {
            if j < k {
                nodes.push(vals[j]);
                weights.push(vecs[j].powi(2));
            } else {
                nodes.push(vals[k - 1]);
                weights.push(0.0);
            }
        }
    }
}

struct Scratch {
    valid: Vec<bool>,
    diag: Vec<f64>,
    v: Vec<f64>,
    prev: Vec<f64>,
    w: Vec<f64>,
}

impl Scratch {
    fn new(size: usize, _steps: usize) -> Self {
        Scratch { valid: vec![false; size], diag: vec![0.0; size], v: vec![0.0; size], prev: vec![0.0; size], w: vec![0.0; size] }
    }
}
