//! Heat kernels of lattice Hamiltonians on a grid: phase extraction, weighted
//! derivative norms, PDE residuals and an independent Duhamel solver.

mod derivatives;
mod duhamel;
mod error;
mod field;
pub mod quadrature;

pub use derivatives::{
    gradient_sup, partial, residual_check, translate_difference, weighted_norm, NormKind, ResidualReport, WeightSets,
};
pub use duhamel::{solve_duhamel, solve_linear_drift, DuhamelParams, DuhamelSolution};
pub use error::KernelError;
pub use field::{extract_psi, kernel_from_operator, ExtractionOptions, KernelField, SpectralKernel};
pub use heatcorr_exec::Execution;
