//! Finite-dimensional calculus of linear relations: canonical subspaces,
//! graph arithmetic, symmetry and selfadjointness predicates, operator-part
//! decomposition and spectra of selfadjoint relations.

mod relation;
mod spectrum;
mod subspace;

pub use relation::{Component, LinearRelation, OperatorPart, SELFADJOINT_TOL};
pub use spectrum::{default_zero_tol, kappa_of, SignClass, Spectrum};
pub use subspace::{Subspace, DEFAULT_TOL};
