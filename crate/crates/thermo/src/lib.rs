//! Thermal expectations of lattice Hamiltonians on a grid.
//!
//! Gibbs means and covariances come from the dense heat operator or, for
//! multiplication observables, from its diagonal alone. On top of these sit
//! the correlation-decay fit, the growing-volume sweep and the interpolation
//! that switches off the interaction across a cut.

mod decay;
mod energy;
mod error;
mod gibbs;
mod observables;
mod sweep;
mod theta;

pub use decay::{decay_sweep, fit_decay, linear_fit, DecayConfig, DecayFit, DecayRow, FitStatus, COVARIANCE_FLOOR};
pub use energy::{central_difference_energy, mean_energy};
pub use error::ThermoError;
pub use gibbs::{covariance, gibbs_mean, GibbsMethod, GibbsState};
pub use observables::SiteFunction;
pub use sweep::{thermo_sweep, ThermoConfig, ThermoRow, ThermoSweep};
pub use theta::{interpolated_field, interpolated_potential, theta_interpolation, SiteGradient, ThetaConfig, ThetaRow};

pub use heatcorr_exec::Execution;
