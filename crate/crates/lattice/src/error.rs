use thiserror::Error;

/// Failures of geometric operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty geometry")]
    EmptyGeometry,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid box: lower corner exceeds upper corner on axis {axis}")]
    InvalidBox { axis: usize },
    #[error("site {0:?} lies outside the lattice")]
    OutsideLattice(Vec<i64>),
    #[error("field configuration does not match the lattice ({expected} sites, {found} values)")]
    FieldMismatch { expected: usize, found: usize },
}
