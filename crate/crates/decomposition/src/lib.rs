//! Box decomposition `T_Q` of lattice functions and of heat-kernel phases.
//!
//! The single-variable form projects onto a box by zeroing the other sites; the
//! doubled form keeps `(x, y)` on the box and sends the rest to `(0, y - x)`.
//! Summing either over all boxes of a lattice telescopes back to the function.

mod doubled;
mod error;
mod profile;
mod single;

pub use doubled::{decompose, diagonal_support_defect, t_q_doubled, telescoping_defect_doubled, DecompositionTerm};
pub use error::DecompositionError;
pub use profile::{
    decay_profile, log_log_slope, point_term_defect, segment_average, splitting_check, DecayProfile, DecayRow,
    SplittingReport,
};
pub use single::{t_q_single, telescoping_defect};
