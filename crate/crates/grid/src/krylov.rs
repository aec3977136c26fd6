use crate::{symmetric_eigen, LatticeHamiltonian};

/// Lanczos recurrence coefficients for a start vector.
#[derive(Clone, Debug)]
pub struct LanczosTridiagonal {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Orthonormal Krylov basis, when requested.
    pub basis: Vec<Vec<f64>>,
    /// Norm of the start vector.
    pub norm: f64,
}

impl LanczosTridiagonal {
    fn dense(&self) -> Vec<f64> {
        let m = self.alpha.len();
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            t[i * m + i] = self.alpha[i];
            if i + 1 < m {
                t[i * m + i + 1] = self.beta[i];
                t[(i + 1) * m + i] = self.beta[i];
            }
        }
        t
    }

    /// Gauss nodes and weights of the spectral measure of the start vector.
    pub fn gauss(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.alpha.len();
        let (nodes, vecs) = symmetric_eigen(&self.dense(), m);
        let weights = (0..m).map(|k| vecs[k].powi(2)).collect();
        (nodes, weights)
    }

    /// Gauss estimate of `v^T f(H) v`.
    pub fn quadrature(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (nodes, weights) = self.gauss();
        self.norm * self.norm * nodes.iter().zip(&weights).map(|(&x, &w)| w * f(x)).sum::<f64>()
    }
}

/// Run at most `steps` Lanczos iterations from `start`, stopping early on an
/// invariant subspace. Full reorthogonalisation is applied when the basis is kept.
pub fn lanczos(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    start: &[f64],
    steps: usize,
    keep_basis: bool,
) -> LanczosTridiagonal {
    let n = start.len();
    let norm = start.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut out = LanczosTridiagonal { alpha: Vec::new(), beta: Vec::new(), basis: Vec::new(), norm };
    if norm == 0.0 || steps == 0 {
        return out;
    }
    let mut v: Vec<f64> = start.iter().map(|x| x / norm).collect();
    let mut prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut beta_prev = 0.0;
    for k in 0..steps {
        apply(&v, &mut w);
        let alpha: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        for i in 0..n {
            w[i] -= alpha * v[i] + beta_prev * prev[i];
        }
        if keep_basis {
            for q in out.basis.iter().chain(std::iter::once(&v)) {
                let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for i in 0..n {
                    w[i] -= c * q[i];
                }
            }
        }
        out.alpha.push(alpha);
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if k + 1 == steps || beta <= 1e-14 * alpha.abs().max(1.0) {
            if keep_basis {
                out.basis.push(v);
            }
            break;
        }
        out.beta.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        prev = std::mem::replace(&mut v, next);
        if keep_basis {
            out.basis.push(prev.clone());
        }
        beta_prev = beta;
    }
    out
}

/// Matrix-free `v -> exp(-tH) v` through a Krylov subspace.
pub struct KrylovHeat<'a> {
    pub hamiltonian: &'a LatticeHamiltonian,
    pub t: f64,
    pub steps: usize,
}

impl KrylovHeat<'_> {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let lz = lanczos(|x, y| self.hamiltonian.apply(x, y), v, self.steps, true);
        let m = lz.alpha.len();
        let mut out = vec![0.0; v.len()];
        if m == 0 {
            return out;
        }
        let (vals, vecs) = symmetric_eigen(&lz.dense(), m);
        // Coefficients of exp(-tT) e_1 in the Krylov basis.
        let coef: Vec<f64> = (0..m)
            .map(|i| lz.norm * (0..m).map(|k| vecs[i * m + k] * (-self.t * vals[k]).exp() * vecs[k]).sum::<f64>())
            .collect();
        for (c, q) in coef.iter().zip(&lz.basis) {
            for (o, qi) in out.iter_mut().zip(q) {
                *o += c * qi;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Budget, DenseSpectrum, GridSpec};

    #[test]
    fn krylov_action_matches_dense() {
        let g = GridSpec::new(3.0, 8).with_margin(1);
        let h = LatticeHamiltonian::from_potential_fn(&g, 2, 1.0, &Budget::default(), |x| x[0].abs() + 0.2 * (x[0] - x[1]).cos()).unwrap();
        let s = DenseSpectrum::new(&h, &Budget::default()).unwrap();
        let heat = s.heat_matrix(0.3);
        let v: Vec<f64> = (0..h.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        let kv = KrylovHeat { hamiltonian: &h, t: 0.3, steps: 40 }.apply(&v);
        for i in 0..h.dim() {
            let d: f64 = (0..h.dim()).map(|j| heat.entry(i, j) * v[j]).sum();
            assert!((d - kv[i]).abs() < 1e-10, "{i}: {d} vs {}", kv[i]);
        }
        let lz = lanczos(|x, y| h.apply(x, y), &v, 40, false);
        let q = lz.quadrature(|x| (-0.3 * x).exp());
        let exact: f64 = v.iter().zip(&kv).map(|(a, b)| a * b).sum();
        assert!((q - exact).abs() < 1e-10 * exact.abs());
    }
}
