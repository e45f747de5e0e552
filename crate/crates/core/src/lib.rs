//! Dirichlet-to-Neumann and Neumann-to-Dirichlet maps of grid Schrödinger
//! operators, realized as linear relations over the boundary space and
//! verified against the structural identities they satisfy — including at
//! eigenvalues, where the maps become multivalued.
//!
//! The crate is organized around four parts:
//!
//! - [`relcore`]: the finite-dimensional calculus of linear relations
//!   (canonical subspaces, graph arithmetic, adjoints, operator parts,
//!   spectra of selfadjoint relations);
//! - [`grid`]: grid domains and the symmetric matrix `S = (1/h^2) L + diag(V)`
//!   with its interior/boundary partition, traces, conormal derivatives and
//!   the Dirichlet/Neumann realizations `A_D`, `A_N`;
//! - [`maps`]: the boundary maps `D(lambda)`, `N(lambda)` and the gamma
//!   fields, built either from the solution space (exact at eigenvalues) or
//!   through the boundary Schur complement (fast off the spectra);
//! - [`verify`]: named, reportable checks for every structural identity,
//!   closed-form grid eigenvalue oracles, spectral counting experiments and
//!   randomized property suites.

pub mod error;
pub mod linalg;
pub mod relcore;
pub mod scalar;

pub mod grid;
pub mod maps;
pub mod verify;

pub mod cli;
pub mod report;
pub mod runspec;

pub use error::{Error, Result};
pub use relcore::{LinearRelation, Spectrum, Subspace};
