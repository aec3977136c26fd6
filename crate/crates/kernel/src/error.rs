use heatcorr_grid::GridError;
use heatcorr_interaction::InteractionError;
use heatcorr_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("kernel underflow")]
    Underflow,
    #[error("grid must contain origin")]
    NoOrigin,
    #[error("kernel extraction requires dense storage (dimension {0})")]
    DenseRequired(usize),
    #[error("Duhamel iteration diverged: {0}")]
    Diverged(String),
    #[error("fields are incompatible: {0}")]
    Incompatible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
