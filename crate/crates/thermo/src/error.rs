use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error("observable supports overlap")]
    Overlap,
    #[error("observable support lies outside the lattice")]
    OutsideLattice,
    #[error("diagonal Gibbs states only support multiplication observables")]
    NotDiagonal,
    #[error("signal underflow")]
    SignalUnderflow,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Grid(#[from] heatcorr_grid::GridError),
    #[error(transparent)]
    Kernel(#[from] heatcorr_kernel::KernelError),
    #[error(transparent)]
    Interaction(#[from] heatcorr_interaction::InteractionError),
    #[error(transparent)]
    Lattice(#[from] heatcorr_lattice::LatticeError),
}
