//! Discretised Hamiltonians `-(h^2/2) sum_l d^2/dx_l^2 + V` on tensor grids.
//!
//! Each site carries the same one-dimensional grid. The kinetic operator acts
//! axis by axis, so the multi-site operator is applied matrix-free; a dense
//! copy is materialised only within the dense budget. Heat operators
//! `exp(-tH)` are available exactly (dense spectrum), as a Krylov action on
//! vectors, and through their diagonal via per-site Gauss quadrature.

mod error;
mod hamiltonian;
mod krylov;
mod local;
mod observable;
mod small_eigen;
mod spec;
mod spectrum;
mod trace;

pub use error::GridError;
pub use hamiltonian::{Budget, LatticeHamiltonian};
pub use krylov::{lanczos, KrylovHeat, LanczosTridiagonal};
pub use local::{DiagonalQuadrature, LocalQuadrature};
pub use observable::{Embedded, LocalObservable, ObservableRepr};
pub use small_eigen::symmetric_eigen;
pub use spec::{GridSpec, Stencil};
pub use spectrum::{DenseSpectrum, HeatMatrix};
pub use trace::{hutchinson, partition_function, PartitionEstimate, TraceMethod};

pub use heatcorr_exec::Execution;
