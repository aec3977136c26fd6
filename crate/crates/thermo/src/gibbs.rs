use crate::ThermoError;
use faer::Mat;
use heatcorr_exec::Execution;
use heatcorr_grid::{Budget, DenseSpectrum, Embedded, GridError, LatticeHamiltonian, LocalObservable, LocalQuadrature};
use heatcorr_lattice::Site;
use serde::{Deserialize, Serialize};

/// How the Gibbs weight `exp(-tH)` is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "camelCase", deny_unknown_fields)]
pub enum GibbsMethod {
    /// Full matrix from the dense spectrum.
    Dense,
    /// Diagonal only, by per-point Gauss quadrature; multiplication observables only.
    LocalQuadrature { steps: usize },
}

enum Weight {
    /// `exp(-tH)` up to a constant factor, row-major.
    Dense(Vec<f64>),
    /// Diagonal of `exp(-tH)` up to a constant factor.
    Diagonal(Vec<f64>),
}

/// `exp(-tH) / Z` on a lattice, ready for expectations.
pub struct GibbsState {
    sites: Vec<Site>,
    dim: usize,
    weight: Weight,
    z: f64,
}

impl GibbsState {
    pub fn new(
        h: &LatticeHamiltonian,
        sites: &[Site],
        t: f64,
        method: GibbsMethod,
        budget: &Budget,
        exec: Execution,
    ) -> Result<Self, ThermoError> {
        if !(t > 0.0) {
            return Err(ThermoError::InvalidArgument("inverse temperature must be positive".into()));
        }
        if sites.len() != h.sites() {
            return Err(ThermoError::InvalidArgument("site list does not match the Hamiltonian".into()));
        }
        match method {
            GibbsMethod::Dense => Ok(Self::from_spectrum(&DenseSpectrum::new(h, budget)?, sites, t)),
            GibbsMethod::LocalQuadrature { steps } => {
                let d = LocalQuadrature::new(h, steps)?.rules(exec).evaluate(t);
                Ok(Self::from_diagonal(d.heat, sites))
            }
        }
    }

    pub fn from_spectrum(spectrum: &DenseSpectrum, sites: &[Site], t: f64) -> Self {
        let heat = spectrum.heat_matrix(t);
        let z = (0..heat.dim).map(|i| heat.matrix[i * heat.dim + i]).sum();
        GibbsState { sites: sites.to_vec(), dim: heat.dim, weight: Weight::Dense(heat.matrix), z }
    }

    /// From the (scaled) diagonal of `exp(-tH)`.
    pub fn from_diagonal(diag: Vec<f64>, sites: &[Site]) -> Self {
        let z = diag.iter().sum();
        GibbsState { sites: sites.to_vec(), dim: diag.len(), weight: Weight::Diagonal(diag), z }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.weight, Weight::Dense(_))
    }

    fn embed(&self, a: &LocalObservable) -> Result<Embedded, ThermoError> {
        let e = a.embed(&self.sites).map_err(|e| match e {
            GridError::InvalidArgument(_) => ThermoError::OutsideLattice,
            other => other.into(),
        })?;
        if !self.is_dense() && matches!(e, Embedded::Dense(_)) {
            return Err(ThermoError::NotDiagonal);
        }
        Ok(e)
    }

    /// Unnormalised `Tr(W X)` for an embedded `X`.
    fn trace(&self, x: &Embedded) -> f64 {
        let n = self.dim;
        match (&self.weight, x) {
            (Weight::Diagonal(w), Embedded::Diagonal(d)) => w.iter().zip(d).map(|(w, d)| w * d).sum(),
            (Weight::Dense(p), Embedded::Diagonal(d)) => (0..n).map(|i| p[i * n + i] * d[i]).sum(),
            (Weight::Dense(p), Embedded::Dense(m)) => {
                (0..n).map(|i| (0..n).map(|j| p[i * n + j] * m[j * n + i]).sum::<f64>()).sum()
            }
            (Weight::Diagonal(_), Embedded::Dense(_)) => unreachable!("rejected by embed"),
        }
    }

    /// `E(A) = Tr(exp(-tH) A) / Z`.
    pub fn mean(&self, a: &LocalObservable) -> Result<f64, ThermoError> {
        Ok(self.trace(&self.embed(a)?) / self.z)
    }

    /// `Cov(A, B) = E(AB) - E(A) E(B)` for disjoint supports.
    pub fn covariance(&self, a: &LocalObservable, b: &LocalObservable) -> Result<f64, ThermoError> {
        if a.overlaps(b) {
            return Err(ThermoError::Overlap);
        }
        let (ea, eb) = (self.embed(a)?, self.embed(b)?);
        let product = match (&ea, &eb) {
            (Embedded::Diagonal(x), Embedded::Diagonal(y)) => Embedded::Diagonal(x.iter().zip(y).map(|(x, y)| x * y).collect()),
            _ => {
                let n = self.dim;
                let ma = Mat::from_fn(n, n, |i, j| entry(&ea, n, i, j));
                let mb = Mat::from_fn(n, n, |i, j| entry(&eb, n, i, j));
                let ab = ma * mb;
                let mut out = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = ab[(i, j)];
                    }
                }
                Embedded::Dense(out)
            }
        };
        let z = self.z;
        Ok(self.trace(&product) / z - self.trace(&ea) * self.trace(&eb) / (z * z))
    }
}

fn entry(e: &Embedded, n: usize, i: usize, j: usize) -> f64 {
    match e {
        Embedded::Diagonal(d) => {
            if i == j {
                d[i]
            } else {
                0.0
            }
        }
        Embedded::Dense(m) => m[i * n + j],
    }
}

/// Dense `E(A)` at inverse temperature `t`.
pub fn gibbs_mean(h: &LatticeHamiltonian, sites: &[Site], a: &LocalObservable, t: f64, budget: &Budget) -> Result<f64, ThermoError> {
    GibbsState::new(h, sites, t, GibbsMethod::Dense, budget, Execution::Auto)?.mean(a)
}

/// Dense `Cov(A, B)` at inverse temperature `t`.
pub fn covariance(
    h: &LatticeHamiltonian,
    sites: &[Site],
    a: &LocalObservable,
    b: &LocalObservable,
    t: f64,
    budget: &Budget,
) -> Result<f64, ThermoError> {
    GibbsState::new(h, sites, t, GibbsMethod::Dense, budget, Execution::Auto)?.covariance(a, b)
}
