use crate::ThermoError;
use heatcorr_exec::Execution;
use heatcorr_grid::{partition_function, Budget, DenseSpectrum, LatticeHamiltonian, PartitionEstimate, TraceMethod};

/// `X(t) = d/dt ln Z = -Tr(H exp(-tH)) / Z` by the chosen trace method.
pub fn mean_energy(
    h: &LatticeHamiltonian,
    t: f64,
    method: TraceMethod,
    budget: &Budget,
    exec: Execution,
) -> Result<PartitionEstimate, ThermoError> {
    Ok(partition_function(h, t, method, budget, exec)?)
}

/// `(ln Z(t + dt) - ln Z(t - dt)) / (2 dt)` from the dense spectrum.
pub fn central_difference_energy(spectrum: &DenseSpectrum, t: f64, dt: f64) -> Result<f64, ThermoError> {
    if !(dt > 0.0 && t - dt > 0.0) {
        return Err(ThermoError::InvalidArgument("need 0 < dt < t".into()));
    }
    Ok((spectrum.log_partition(t + dt) - spectrum.log_partition(t - dt)) / (2.0 * dt))
}
