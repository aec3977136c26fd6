use crate::{lanczos, Budget, DenseSpectrum, GridError, LatticeHamiltonian, LocalQuadrature};
use heatcorr_exec::{map_range, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How `Tr exp(-tH)` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "camelCase", deny_unknown_fields)]
pub enum TraceMethod {
    /// Exact, from a full eigendecomposition.
    Dense,
    /// Rademacher probes with Lanczos quadrature.
    Hutchinson { probes: usize, steps: usize, seed: u64 },
    /// Deterministic Gauss quadrature of every diagonal entry.
    LocalQuadrature { steps: usize },
}

/// Partition function estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionEstimate {
    pub log_z: f64,
    /// Standard error of `Z` relative to `Z`; `None` for deterministic methods.
    pub rel_std_error: Option<f64>,
    /// `d/dt ln Z`.
    pub mean_energy: f64,
}

pub fn partition_function(
    h: &LatticeHamiltonian,
    t: f64,
    method: TraceMethod,
    budget: &Budget,
    exec: Execution,
) -> Result<PartitionEstimate, GridError> {
    if !(t > 0.0) {
        return Err(GridError::InvalidArgument("inverse temperature must be positive".into()));
    }
    match method {
        TraceMethod::Dense => {
            let s = DenseSpectrum::new(h, budget)?;
            Ok(PartitionEstimate { log_z: s.log_partition(t), rel_std_error: None, mean_energy: s.mean_energy(t) })
        }
        TraceMethod::Hutchinson { probes, steps, seed } => hutchinson(h, t, probes, steps, seed, exec),
        TraceMethod::LocalQuadrature { steps } => {
            let d = LocalQuadrature::new(h, steps)?.rules(exec).evaluate(t);
            Ok(PartitionEstimate { log_z: d.log_partition(), rel_std_error: None, mean_energy: d.mean_energy() })
        }
    }
}

/// Stochastic trace estimate with `probes` independent Rademacher vectors.
pub fn hutchinson(
    h: &LatticeHamiltonian,
    t: f64,
    probes: usize,
    steps: usize,
    seed: u64,
    exec: Execution,
) -> Result<PartitionEstimate, GridError> {
    if probes < 2 {
        return Err(GridError::InvalidArgument("at least two probes are required".into()));
    }
    let shift = h.potential_min();
    let dim = h.dim();
    let samples = map_range(exec, probes, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let z: Vec<f64> = (0..dim).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
        let lz = lanczos(|x, y| h.apply(x, y), &z, steps, false);
        let heat = lz.quadrature(|x| (-t * (x - shift)).exp());
        let energy = lz.quadrature(|x| x * (-t * (x - shift)).exp());
        (heat, energy)
    });
    let p = probes as f64;
    let mean = samples.iter().map(|s| s.0).sum::<f64>() / p;
    let var = samples.iter().map(|s| (s.0 - mean).powi(2)).sum::<f64>() / (p - 1.0);
    let energy = samples.iter().map(|s| s.1).sum::<f64>() / p;
    Ok(PartitionEstimate {
        log_z: mean.ln() - t * shift,
        rel_std_error: Some((var / p).sqrt() / mean),
        mean_energy: -energy / mean,
    })
}
