use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("grid must contain origin")]
    NoOrigin,
    #[error("{0}")]
    Incompatible(String),
    #[error(transparent)]
    Kernel(#[from] heatcorr_kernel::KernelError),
    #[error(transparent)]
    Grid(#[from] heatcorr_grid::GridError),
    #[error(transparent)]
    Interaction(#[from] heatcorr_interaction::InteractionError),
    #[error(transparent)]
    Lattice(#[from] heatcorr_lattice::LatticeError),
}
