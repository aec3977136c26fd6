use crate::{Budget, GridError, LatticeHamiltonian};
use faer::{Mat, Side};

/// Full eigendecomposition of a dense Hamiltonian.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    values: Vec<f64>,
    vectors: Mat<f64>,
}

/// `exp(-tH) = exp(log_scale) * matrix`, with `matrix` row-major.
#[derive(Clone, Debug)]
pub struct HeatMatrix {
    pub dim: usize,
    pub log_scale: f64,
    pub matrix: Vec<f64>,
}

impl HeatMatrix {
    /// Scaled entry; multiply by `exp(log_scale)` for the true value.
    pub fn scaled(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.scaled(i, j) * self.log_scale.exp()
    }
}

impl DenseSpectrum {
    pub fn new(h: &LatticeHamiltonian, budget: &Budget) -> Result<Self, GridError> {
        let dense = h.to_dense(budget)?;
        Self::from_row_major(&dense, h.dim())
    }

    pub fn from_row_major(a: &[f64], dim: usize) -> Result<Self, GridError> {
        let m = Mat::<f64>::from_fn(dim, dim, |i, j| a[i * dim + j]);
        let eig = m.self_adjoint_eigen(Side::Lower).map_err(|_| GridError::EigenFailure)?;
        let values: Vec<f64> = (0..dim).map(|k| eig.S().column_vector()[k]).collect();
        let vectors = eig.U().to_owned();
        Ok(DenseSpectrum { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Component `i` of eigenvector `k`.
    pub fn vector(&self, i: usize, k: usize) -> f64 {
        self.vectors[(i, k)]
    }

    fn weights(&self, t: f64) -> (f64, Vec<f64>) {
        let e0 = self.values[0];
        (-t * e0, self.values.iter().map(|&e| (-t * (e - e0)).exp()).collect())
    }

    /// `exp(-tH)` as a dense matrix.
    pub fn heat_matrix(&self, t: f64) -> HeatMatrix {
        let dim = self.dim();
        let (log_scale, w) = self.weights(t);
        let scaled = Mat::<f64>::from_fn(dim, dim, |i, k| self.vectors[(i, k)] * w[k]);
        let prod = &scaled * self.vectors.transpose();
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                matrix[i * dim + j] = prod[(i, j)];
            }
        }
        HeatMatrix { dim, log_scale, matrix }
    }

    /// Diagonal of `exp(-tH)`, scaled by `exp(-log_scale)`; returns `(log_scale, diag)`.
    pub fn heat_diagonal(&self, t: f64) -> (f64, Vec<f64>) {
        let (log_scale, w) = self.weights(t);
        let dim = self.dim();
        let diag = (0..dim).map(|i| (0..dim).map(|k| self.vectors[(i, k)].powi(2) * w[k]).sum()).collect();
        (log_scale, diag)
    }

    /// `ln Tr exp(-tH)`.
    pub fn log_partition(&self, t: f64) -> f64 {
        let (log_scale, w) = self.weights(t);
        log_scale + w.iter().sum::<f64>().ln()
    }

    /// `d/dt ln Z = -Tr(H exp(-tH)) / Z`.
    pub fn mean_energy(&self, t: f64) -> f64 {
        let (_, w) = self.weights(t);
        let z: f64 = w.iter().sum();
        -self.values.iter().zip(&w).map(|(e, w)| e * w).sum::<f64>() / z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GridSpec;

    #[test]
    fn heat_matrix_is_symmetric_semigroup() {
        let g = GridSpec::new(3.0, 9).with_margin(1);
        let h = LatticeHamiltonian::from_potential_fn(&g, 2, 1.0, &Budget::default(), |x| (1.0 + x[0] * x[0]).sqrt() + 0.1 * (x[0] - x[1]).cos()).unwrap();
        let s = DenseSpectrum::new(&h, &Budget::default()).unwrap();
        let a = s.heat_matrix(0.1);
        let b = s.heat_matrix(0.2);
        let dim = a.dim;
        for i in 0..dim {
            for j in 0..dim {
                assert!((a.entry(i, j) - a.entry(j, i)).abs() < 1e-14);
                let sq: f64 = (0..dim).map(|k| a.entry(i, k) * a.entry(k, j)).sum();
                assert!((sq - b.entry(i, j)).abs() < 1e-12);
            }
        }
        let (ls, d) = s.heat_diagonal(0.2);
        let z: f64 = d.iter().sum::<f64>() * ls.exp();
        assert!((z.ln() - s.log_partition(0.2)).abs() < 1e-12);
    }
}
