use heatcorr_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InteractionError {
    #[error("decay parameter must lie in (0,1)")]
    DecayOutOfRange,
    #[error("potential lies outside the decay hypothesis: {0}")]
    OutsideHypothesis(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sub-lattices overlap")]
    Overlap,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
