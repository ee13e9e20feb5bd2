//! Watersheds of simplicial stacks and Morse stacks on normal
//! pseudomanifolds.
//!
//! Complexes are stored in canonical face order with incidence in both
//! directions; stacks attach integer altitudes to faces. The watershed of a
//! stack can be computed by ultimate collapse ([`watershed_collapse`]), by
//! a linear flood for Morse stacks ([`morse_watershed`]), or directly from
//! gradient paths ([`morse_watershed_direct`]).

pub mod complex;
mod dsu;
pub mod error;
pub mod fixtures;
pub mod forest;
pub mod io;
pub mod manifold;
pub mod morse;
pub mod stack;
pub mod watershed;

pub use complex::{Complex, FaceId, FaceSubset, Simplex, Vertex};
pub use error::{Error, Result};
pub use forest::{build_facet_graph, msf_oracle, verify_msf_theorem, watershed_forest, Forest, WeightedFacetGraph};
pub use manifold::{is_normal_pseudomanifold, validate, ValidationReport};
pub use morse::{
    classify, gradient, is_morse, random_morse_stack, random_morse_stack_with, stack_from_gradient, CriticalReport,
    GradientField,
};
pub use stack::{Altitude, CollapseMode, MinimaDecomposition, Stack};
pub use watershed::{
    morse_watershed, morse_watershed_direct, verify_cut, verify_drop_of_water, watershed_collapse, Label,
    WatershedResult,
};
