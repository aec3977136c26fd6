use heatcorr_interaction::InteractionError;
use heatcorr_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("dimension {dim} exceeds the {storage} budget of {budget}")]
    BudgetExceeded { storage: &'static str, dim: usize, budget: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("local quadrature requires the nearest-neighbour stencil")]
    NotNearestNeighbour,
    #[error("eigendecomposition failed")]
    EigenFailure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
