//! Interaction model: a one-body potential per site plus pair couplings that
//! decay geometrically in the `l^inf` distance between sites.
//!
//! The total potential on a finite set of sites sums the pair term over
//! *ordered* pairs `(l, m)` with `l != m`, so a symmetric coupling contributes
//! twice for each unordered pair.

mod constants;
mod error;
mod potential;
mod terms;

pub use constants::{hypothesis_constants, shell_size, weighted_shell_sum, HypothesisConstants};
pub use error::InteractionError;
pub use potential::{interaction_split, potential_value, LatticePotential, PairTerm};
pub use terms::{InteractionSpec, PairCoupling, PairKind, SitePotential};
