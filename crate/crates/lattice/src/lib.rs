//! Geometry of finite subsets of `Z^d`.
//!
//! Sites, rectangular boxes, the `l^inf` metric, face-removal interiors of a box,
//! coordinate projections of field configurations and polymers (chains of
//! intersecting boxes) are all defined here. Everything downstream indexes
//! fields by the lexicographic site order of a [`LatticeBox`].

mod boxes;
mod error;
mod field;
mod polymer;
mod site;

pub use boxes::{enumerate_boxes, interior_boxes, InteriorBox, LatticeBox};
pub use error::LatticeError;
pub use field::{project, project_doubled, FieldConfig};
pub use polymer::{classify_family, enumerate_polymers, Connectivity, Polymer};
pub use site::{diameter, linf, linf_dist, Region, Site, SiteSet};
