//! Grid domains and the assembled discrete model: the symmetric
//! stiffness-plus-potential matrix, interior/boundary partition, traces and
//! conormal derivatives, and the Dirichlet/Neumann realizations.

mod domain;
mod model;

pub use domain::{build_chain, build_masked, build_rectangle, GridDomain};
pub use model::{assemble, chain4, spectrum_of, DiscreteModel, RealizationPair};
