use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Default relative rank-decision threshold.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A subspace of R^n (or C^n) in canonical form: an orthonormal spanning set
/// obtained by singular-value truncation. The universal carrier for kernels,
/// ranges, domains and multivalued parts.
#[derive(Clone, Debug)]
pub struct Subspace<T: Scalar = f64> {
    ambient_dim: usize,
    basis: DMatrix<T>,
    tol: f64,
}

impl<T: Scalar> Subspace<T> {
    /// Canonicalize a spanning set given as columns of a matrix.
    pub fn from_columns(columns: &DMatrix<T>, tol: f64) -> Self {
        Subspace {
            ambient_dim: columns.nrows(),
            basis: linalg::canonicalize(columns, tol),
            tol,
        }
    }

    /// Canonicalize a list of spanning vectors. Vectors must all have length
    /// `ambient_dim`; the empty list yields the zero subspace.
    pub fn from_spanning(vectors: &[DVector<T>], ambient_dim: usize, tol: f64) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace spanning vector",
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim, tol));
        }
        let m = DMatrix::from_columns(vectors);
        Ok(Self::from_columns(&m, tol))
    }

    /// Wrap an already orthonormal basis without re-canonicalizing.
    pub(crate) fn from_orthonormal(basis: DMatrix<T>, tol: f64) -> Self {
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
            tol,
        }
    }

    pub fn zero(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
            tol,
        }
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement; dimensions add up to the ambient dimension.
    pub fn complement(&self) -> Self {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: linalg::orthonormal_complement(&self.basis),
            tol: self.tol,
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Span of the union, canonicalized.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let tol = self.tol.max(other.tol);
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut cols = DMatrix::zeros(self.ambient_dim, self.dim() + other.dim());
        cols.view_mut((0, 0), (self.ambient_dim, self.dim()))
            .copy_from(&self.basis);
        cols.view_mut((0, self.dim()), (self.ambient_dim, other.dim()))
            .copy_from(&other.basis);
        Ok(Self::from_columns(&cols, tol))
    }

    /// Intersection, computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(self.complement().sum(&other.complement())?.complement())
    }

    /// Operator-norm distance between the orthogonal projectors,
    /// `max(||(I - P_self) other||, ||(I - P_other) self||)`. Evaluated from
    /// basis residuals, which stays accurate down to roundoff for nearly
    /// equal subspaces.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_ambient(other)?;
        let r1 = if other.dim() == 0 {
            0.0
        } else {
            let res = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
            linalg::opnorm(&res)
        };
        let r2 = if self.dim() == 0 {
            0.0
        } else {
            let res = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
            linalg::opnorm(&res)
        };
        Ok(r1.max(r2))
    }

    /// Largest residual of the columns of `other` against this subspace;
    /// small iff `other` is contained in `self`.
    pub fn containment_residual(&self, other: &Self) -> Result<f64> {
        self.check_ambient(other)?;
        if other.dim() == 0 {
            return Ok(0.0);
        }
        let res = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        Ok(linalg::opnorm(&res))
    }

    /// Orthogonal projection of a vector onto the subspace.
    pub fn project(&self, v: &DVector<T>) -> Result<DVector<T>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "projection input",
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(&self.basis * (self.basis.adjoint() * v))
    }

    /// Image under a linear map given by its matrix (rows = target dimension).
    pub fn apply(&self, map: &DMatrix<T>) -> Result<Self> {
        if map.ncols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "map applied to subspace",
                expected: self.ambient_dim,
                got: map.ncols(),
            });
        }
        let image = map * &self.basis;
        Ok(Self::from_columns(&image, self.tol))
    }

    /// Check the canonical-form invariants: unit columns within `10 tol`,
    /// pairwise orthogonality within `10 tol`, projector idempotent within
    /// `100 tol`.
    pub fn validate(&self) -> Result<()> {
        if self.dim() > self.ambient_dim {
            return Err(Error::Invariant(format!(
                "subspace dimension {} exceeds ambient dimension {}",
                self.dim(),
                self.ambient_dim
            )));
        }
        let gram = self.basis.adjoint() * &self.basis;
        let defect = linalg::opnorm(&(&gram - DMatrix::<T>::identity(self.dim(), self.dim())));
        if defect > 10.0 * self.tol {
            return Err(Error::Invariant(format!(
                "basis not orthonormal: gram defect {defect:.3e}"
            )));
        }
        let p = self.projector();
        let idem = linalg::opnorm(&(&p * &p - &p));
        if idem > 100.0 * self.tol {
            return Err(Error::Invariant(format!(
                "projector not idempotent: defect {idem:.3e}"
            )));
        }
        Ok(())
    }
}

impl Serialize for Subspace<f64> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Subspace", 4)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("tol", &self.tol)?;
        let vectors: Vec<Vec<f64>> = self
            .basis
            .column_iter()
            .map(|c| c.iter().cloned().collect())
            .collect();
        st.serialize_field("basis", &vectors)?;
        st.end()
    }
}
