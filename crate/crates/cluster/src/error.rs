use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("supports must be disjoint non-empty subsets of the lattice")]
    InvalidSupports,
    #[error("insufficient valid support")]
    InsufficientSupport,
    #[error("subset budget exceeded: {0} boxes")]
    SubsetBudget(usize),
    #[error("group budget exceeded: {0} elements")]
    GroupBudget(usize),
    #[error("family connects the supports; cancellation needs a non-connecting family")]
    Connecting,
    #[error("outside admissible temperature range")]
    Inadmissible,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Decomposition(#[from] heatcorr_decomposition::DecompositionError),
    #[error(transparent)]
    Grid(#[from] heatcorr_grid::GridError),
    #[error(transparent)]
    Lattice(#[from] heatcorr_lattice::LatticeError),
}
