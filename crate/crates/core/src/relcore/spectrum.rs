use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::relcore::subspace::Subspace;

/// Eigenvalue sign classes counted by [`Spectrum::kappa`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

/// Spectrum of a selfadjoint relation: the sorted eigenvalues of its operator
/// part, an orthonormal eigenvector set inside the carrier, and the dimension
/// of the multivalued part (the eigenvalue at infinity).
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    mul_dim: usize,
    carrier: Subspace<f64>,
}

impl Spectrum {
    pub(crate) fn new(
        eigenvalues: Vec<f64>,
        eigenvectors: DMatrix<f64>,
        mul_dim: usize,
        carrier: Subspace<f64>,
    ) -> Self {
        Spectrum {
            eigenvalues,
            eigenvectors,
            mul_dim,
            carrier,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns in the ambient space, orthogonal to the
    /// multivalued part.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn mul_dim(&self) -> usize {
        self.mul_dim
    }

    pub fn carrier(&self) -> &Subspace<f64> {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Relative zero threshold: `1e-8 * max(|eigenvalue|, 1)`.
    pub fn default_zero_tol(&self) -> f64 {
        default_zero_tol(&self.eigenvalues)
    }

    /// Count eigenvalues below `-zero_tol`, within `zero_tol` of zero, or
    /// above `zero_tol`.
    pub fn kappa(&self, class: SignClass, zero_tol: f64) -> usize {
        kappa_of(&self.eigenvalues, class, zero_tol)
    }

    /// All three counts at once: (negative, zero, positive).
    pub fn kappa_all(&self, zero_tol: f64) -> (usize, usize, usize) {
        (
            self.kappa(SignClass::Negative, zero_tol),
            self.kappa(SignClass::Zero, zero_tol),
            self.kappa(SignClass::Positive, zero_tol),
        )
    }
}

/// The default relative zero threshold used for integer eigenvalue counts.
pub fn default_zero_tol(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    1e-8 * scale.max(1.0)
}

/// Sign-class count over a raw eigenvalue list.
pub fn kappa_of(values: &[f64], class: SignClass, zero_tol: f64) -> usize {
    match class {
        SignClass::Negative => values.iter().filter(|&&v| v < -zero_tol).count(),
        SignClass::Zero => values.iter().filter(|&&v| v.abs() <= zero_tol).count(),
        SignClass::Positive => values.iter().filter(|&&v| v > zero_tol).count(),
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Spectrum", 4)?;
        st.serialize_field("eigenvalues", &self.eigenvalues)?;
        st.serialize_field("mul_dim", &self.mul_dim)?;
        let vectors: Vec<Vec<f64>> = self
            .eigenvectors
            .column_iter()
            .map(|c| c.iter().cloned().collect())
            .collect();
        st.serialize_field("eigenvectors", &vectors)?;
        st.serialize_field("carrier", &self.carrier)?;
        st.end()
    }
}
