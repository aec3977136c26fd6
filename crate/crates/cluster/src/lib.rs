//! Doubling of variables and the cluster expansion of the doubled heat kernel.
//!
//! The doubled phase is a sum of two single-system phases, so every doubled
//! field here is evaluated pointwise from one [`heatcorr_kernel::KernelField`]
//! and its box decomposition.

mod covariance;
mod error;
mod group;
mod mayer;
mod polymer;

pub use covariance::{doubled_covariance, doubled_covariance_averaged, doubled_covariance_explicit, EXPLICIT_DIM_LIMIT};
pub use error::ClusterError;
pub use group::{group_elements, SymmetryElement};
pub use mayer::{
    all_families, averaged_kernel_direct, averaged_kernel_mayer, fitted_mayer_constant, diagonal_cancellation_check,
    mayer_reconstruct, non_connecting_families, signed_family_sum, CancellationReport, DoubledPoint, FactorSummary, MayerFactors,
    ReconstructionReport,
};
pub use polymer::{
    admissible_temperature, phi_sup, polymer_bound_check, polymer_weight, PolymerBoundParams, PolymerBoundRow,
};

pub use heatcorr_exec::Execution;
