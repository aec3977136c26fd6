use crate::{GridError, GridSpec, Stencil};
use heatcorr_interaction::LatticePotential;
use serde::{Deserialize, Serialize};

/// Size limits for dense matrices and for matrix-free vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Budget {
    pub dense: usize,
    pub sparse: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { dense: 5000, sparse: 1_000_000 }
    }
}

impl Budget {
    pub fn check_dense(&self, dim: usize) -> Result<(), GridError> {
        if dim > self.dense {
            return Err(GridError::BudgetExceeded { storage: "dense", dim, budget: self.dense });
        }
        Ok(())
    }

    pub fn check_sparse(&self, dim: usize) -> Result<(), GridError> {
        if dim > self.sparse {
            return Err(GridError::BudgetExceeded { storage: "sparse", dim, budget: self.sparse });
        }
        Ok(())
    }
}

/// `H = sum_l K_l + V` on the tensor grid `grid^sites`.
///
/// Flat indices are lexicographic in the per-site grid indices, first site slowest.
#[derive(Clone, Debug)]
pub struct LatticeHamiltonian {
    grid: GridSpec,
    sites: usize,
    hbar: f64,
    kinetic: Vec<f64>,
    potential: Vec<f64>,
}

impl LatticeHamiltonian {
    /// Sample `potential` on the grid and attach the kinetic term.
    pub fn build(potential: &LatticePotential, grid: &GridSpec, hbar: f64, budget: &Budget) -> Result<Self, GridError> {
        if potential.is_empty() {
            return Err(heatcorr_lattice::LatticeError::EmptyGeometry.into());
        }
        let coords = grid.coordinates();
        Self::from_fn(grid, potential.len(), hbar, budget, |x| potential.value(x), &coords)
    }

    /// Like [`LatticeHamiltonian::build`] for an arbitrary potential function.
    pub fn from_potential_fn(
        grid: &GridSpec,
        sites: usize,
        hbar: f64,
        budget: &Budget,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self, GridError> {
        Self::from_fn(grid, sites, hbar, budget, f, &grid.coordinates())
    }

    fn from_fn(
        grid: &GridSpec,
        sites: usize,
        hbar: f64,
        budget: &Budget,
        f: impl Fn(&[f64]) -> f64,
        coords: &[f64],
    ) -> Result<Self, GridError> {
        grid.validate()?;
        if sites == 0 {
            return Err(heatcorr_lattice::LatticeError::EmptyGeometry.into());
        }
        if !(hbar > 0.0) {
            return Err(GridError::InvalidArgument("hbar must be positive".into()));
        }
        let dim = grid
            .points
            .checked_pow(sites as u32)
            .ok_or(GridError::BudgetExceeded { storage: "sparse", dim: usize::MAX, budget: budget.sparse })?;
        budget.check_sparse(dim)?;
        let n = grid.points;
        let mut potential = Vec::with_capacity(dim);
        let mut idx = vec![0usize; sites];
        let mut x = vec![coords[0]; sites];
        for _ in 0..dim {
            potential.push(f(&x));
            for a in (0..sites).rev() {
                idx[a] += 1;
                if idx[a] < n {
                    x[a] = coords[idx[a]];
                    break;
                }
                idx[a] = 0;
                x[a] = coords[0];
            }
        }
        Ok(LatticeHamiltonian { grid: *grid, sites, hbar, kinetic: grid.kinetic_matrix(hbar), potential })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.potential.len()
    }

    pub fn points(&self) -> usize {
        self.grid.points
    }

    /// Sampled potential, one entry per flat index.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Row-major per-axis kinetic matrix.
    pub fn kinetic(&self) -> &[f64] {
        &self.kinetic
    }

    pub fn is_nearest_neighbour(&self) -> bool {
        self.grid.stencil == Stencil::ThreePoint
    }

    /// Off-diagonal kinetic entry between neighbouring points (three-point stencil).
    pub fn hop(&self) -> f64 {
        self.kinetic[1]
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.grid.points.pow((self.sites - 1 - axis) as u32)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let n = self.grid.points;
        let mut out = vec![0; self.sites];
        for a in (0..self.sites).rev() {
            out[a] = flat % n;
            flat /= n;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.grid.points + i)
    }

    /// Diagonal entry `H_ii`.
    pub fn diagonal(&self, flat: usize) -> f64 {
        let n = self.grid.points;
        self.multi_index(flat).iter().map(|&j| self.kinetic[j * n + j]).sum::<f64>() + self.potential[flat]
    }

    /// `out = H v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.grid.points;
        for ((o, &p), &vi) in out.iter_mut().zip(&self.potential).zip(v) {
            *o = p * vi;
        }
        for axis in 0..self.sites {
            let inner = self.stride(axis);
            let outer = self.dim() / (inner * n);
            for block in 0..outer {
                let base = block * n * inner;
                for j in 0..n {
                    let row = &self.kinetic[j * n..(j + 1) * n];
                    let (lo, hi) = if self.is_nearest_neighbour() { (j.saturating_sub(1), (j + 2).min(n)) } else { (0, n) };
                    let dst = base + j * inner;
                    for (k, &kjk) in row.iter().enumerate().take(hi).skip(lo) {
                        if kjk == 0.0 {
                            continue;
                        }
                        let src = base + k * inner;
                        for r in 0..inner {
                            out[dst + r] += kjk * v[src + r];
                        }
                    }
                }
            }
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self, budget: &Budget) -> Result<Vec<f64>, GridError> {
        let dim = self.dim();
        budget.check_dense(dim)?;
        let n = self.grid.points;
        let mut h = vec![0.0; dim * dim];
        for i in 0..dim {
            h[i * dim + i] += self.potential[i];
            let idx = self.multi_index(i);
            for axis in 0..self.sites {
                let s = self.stride(axis);
                let j = idx[axis];
                let base = i - j * s;
                for k in 0..n {
                    h[i * dim + base + k * s] += self.kinetic[j * n + k];
                }
            }
        }
        Ok(h)
    }

    /// Smallest sampled potential value; the kinetic part is positive.
    pub fn potential_min(&self) -> f64 {
        self.potential.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_free_matches_dense() {
        for stencil in [Stencil::ThreePoint, Stencil::SineDvr] {
            let g = GridSpec::new(2.0, 5).with_stencil(stencil).with_margin(1);
            let h = LatticeHamiltonian::from_potential_fn(&g, 3, 0.7, &Budget::default(), |x| x[0] * x[1] + x[2].cos()).unwrap();
            let dense = h.to_dense(&Budget::default()).unwrap();
            let dim = h.dim();
            let v: Vec<f64> = (0..dim).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
            let mut out = vec![0.0; dim];
            h.apply(&v, &mut out);
            for i in 0..dim {
                let d: f64 = (0..dim).map(|j| dense[i * dim + j] * v[j]).sum();
                assert!((d - out[i]).abs() < 1e-10);
                assert!((dense[i * dim + i] - h.diagonal(i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budget_error_names_dimension() {
        let g = GridSpec::new(2.0, 10).with_margin(1);
        let err = LatticeHamiltonian::from_potential_fn(&g, 7, 1.0, &Budget::default(), |_| 0.0).unwrap_err();
        assert!(err.to_string().contains("10000000"));
        let h = LatticeHamiltonian::from_potential_fn(&g, 4, 1.0, &Budget::default(), |_| 0.0).unwrap();
        assert!(h.to_dense(&Budget::default()).unwrap_err().to_string().contains("10000"));
    }
}
