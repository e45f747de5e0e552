use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::relcore::spectrum::Spectrum;
use crate::relcore::subspace::Subspace;
use crate::scalar::Scalar;

/// Residual threshold accepted as "selfadjoint" by [`LinearRelation::operator_part`]
/// and [`LinearRelation::eigen`]. Projector distances are scale-free, so an
/// absolute threshold applies.
pub const SELFADJOINT_TOL: f64 = 1e-8;

/// Structural pieces of a linear relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Dom,
    Ran,
    Ker,
    Mul,
}

/// A linear relation from a `dim_g`-dimensional space G into a
/// `dim_h`-dimensional space H: a subspace of G (+) H interpreted as a graph.
/// The first block of the ambient space is the source component, the second
/// the target component.
#[derive(Clone, Debug)]
pub struct LinearRelation<T: Scalar = f64> {
    dim_g: usize,
    dim_h: usize,
    graph: Subspace<T>,
}

/// Operator part of a selfadjoint relation: the carrier (closure of the
/// domain), the matrix of the single-valued part on the carrier basis, and
/// the multivalued part.
#[derive(Clone, Debug)]
pub struct OperatorPart<T: Scalar = f64> {
    pub carrier: Subspace<T>,
    pub matrix: DMatrix<T>,
    pub mul: Subspace<T>,
}

impl<T: Scalar> LinearRelation<T> {
    /// Wrap a graph subspace; its ambient dimension must be `dim_g + dim_h`.
    pub fn from_graph(dim_g: usize, dim_h: usize, graph: Subspace<T>) -> Result<Self> {
        if graph.ambient_dim() != dim_g + dim_h {
            return Err(Error::DimensionMismatch {
                context: "relation graph ambient",
                expected: dim_g + dim_h,
                got: graph.ambient_dim(),
            });
        }
        Ok(LinearRelation { dim_g, dim_h, graph })
    }

    /// Graph of an everywhere-defined operator given by its `dim_h x dim_g`
    /// matrix: `{(g, Mg)}`.
    pub fn from_matrix(m: &DMatrix<T>, tol: f64) -> Self {
        let dim_g = m.ncols();
        let dim_h = m.nrows();
        let mut cols = DMatrix::<T>::zeros(dim_g + dim_h, dim_g);
        cols.view_mut((0, 0), (dim_g, dim_g))
            .copy_from(&DMatrix::identity(dim_g, dim_g));
        cols.view_mut((dim_g, 0), (dim_h, dim_g)).copy_from(m);
        LinearRelation {
            dim_g,
            dim_h,
            graph: Subspace::from_columns(&cols, tol),
        }
    }

    /// Graph spanned by paired columns: inputs `x` (`dim_g x d`) matched with
    /// outputs `y` (`dim_h x d`).
    pub fn from_blocks(x: &DMatrix<T>, y: &DMatrix<T>, tol: f64) -> Result<Self> {
        if x.ncols() != y.ncols() {
            return Err(Error::DimensionMismatch {
                context: "graph block column count",
                expected: x.ncols(),
                got: y.ncols(),
            });
        }
        let dim_g = x.nrows();
        let dim_h = y.nrows();
        let mut cols = DMatrix::<T>::zeros(dim_g + dim_h, x.ncols());
        cols.view_mut((0, 0), (dim_g, x.ncols())).copy_from(x);
        cols.view_mut((dim_g, 0), (dim_h, x.ncols())).copy_from(y);
        Ok(LinearRelation {
            dim_g,
            dim_h,
            graph: Subspace::from_columns(&cols, tol),
        })
    }

    pub fn identity(n: usize, tol: f64) -> Self {
        Self::from_matrix(&DMatrix::identity(n, n), tol)
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn graph(&self) -> &Subspace<T> {
        &self.graph
    }

    pub fn graph_dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn tol(&self) -> f64 {
        self.graph.tol()
    }

    /// Source-component block of the graph basis.
    pub fn g_block(&self) -> DMatrix<T> {
        self.graph
            .basis()
            .view((0, 0), (self.dim_g, self.graph.dim()))
            .into_owned()
    }

    /// Target-component block of the graph basis.
    pub fn h_block(&self) -> DMatrix<T> {
        self.graph
            .basis()
            .view((self.dim_g, 0), (self.dim_h, self.graph.dim()))
            .into_owned()
    }

    pub fn dom(&self) -> Subspace<T> {
        Subspace::from_columns(&self.g_block(), self.tol())
    }

    pub fn ran(&self) -> Subspace<T> {
        Subspace::from_columns(&self.h_block(), self.tol())
    }

    pub fn ker(&self) -> Subspace<T> {
        let coeffs = linalg::nullspace(&self.h_block(), self.tol());
        Subspace::from_columns(&(self.g_block() * coeffs), self.tol())
    }

    pub fn mul(&self) -> Subspace<T> {
        let coeffs = linalg::nullspace(&self.g_block(), self.tol());
        Subspace::from_columns(&(self.h_block() * coeffs), self.tol())
    }

    pub fn component(&self, which: Component) -> Subspace<T> {
        match which {
            Component::Dom => self.dom(),
            Component::Ran => self.ran(),
            Component::Ker => self.ker(),
            Component::Mul => self.mul(),
        }
    }

    /// The inverse relation: graph blocks swapped. Involutive to the bit.
    pub fn inverse(&self) -> Self {
        let d = self.graph.dim();
        let mut basis = DMatrix::<T>::zeros(self.dim_g + self.dim_h, d);
        basis
            .view_mut((0, 0), (self.dim_h, d))
            .copy_from(&self.h_block());
        basis
            .view_mut((self.dim_h, 0), (self.dim_g, d))
            .copy_from(&self.g_block());
        LinearRelation {
            dim_g: self.dim_h,
            dim_h: self.dim_g,
            graph: Subspace::from_orthonormal(basis, self.tol()),
        }
    }

    /// The adjoint relation from H into G: the orthogonal complement, inside
    /// H (+) G, of the flipped-and-negated graph.
    pub fn adjoint(&self) -> Self {
        let d = self.graph.dim();
        let mut flipped = DMatrix::<T>::zeros(self.dim_h + self.dim_g, d);
        flipped
            .view_mut((0, 0), (self.dim_h, d))
            .copy_from(&self.h_block());
        flipped
            .view_mut((self.dim_h, 0), (self.dim_g, d))
            .copy_from(&(-self.g_block()));
        let graph = linalg::orthonormal_complement(&flipped);
        LinearRelation {
            dim_g: self.dim_h,
            dim_h: self.dim_g,
            graph: Subspace::from_orthonormal(graph, self.tol()),
        }
    }

    /// Relation sum `{(g, h + h') : (g,h) in self, (g,h') in other}`.
    pub fn op_sum(&self, other: &Self) -> Result<Self> {
        if self.dim_g != other.dim_g || self.dim_h != other.dim_h {
            return Err(Error::AmbientMismatch {
                left: self.dim_g + self.dim_h,
                right: other.dim_g + other.dim_h,
            });
        }
        let tol = self.tol().max(other.tol());
        let ds = self.graph.dim();
        let dt = other.graph.dim();
        // coefficient pairs (a, b) with G_s a = G_t b
        let mut m = DMatrix::<T>::zeros(self.dim_g, ds + dt);
        m.view_mut((0, 0), (self.dim_g, ds)).copy_from(&self.g_block());
        m.view_mut((0, ds), (self.dim_g, dt))
            .copy_from(&(-other.g_block()));
        let pairs = linalg::nullspace(&m, tol);
        let a = pairs.view((0, 0), (ds, pairs.ncols())).into_owned();
        let b = pairs.view((ds, 0), (dt, pairs.ncols())).into_owned();
        let x = self.g_block() * &a;
        let y = self.h_block() * &a + other.h_block() * &b;
        Self::from_blocks(&x, &y, tol)
    }

    /// Relation product `self . other` (apply `other` first): computed by
    /// intersecting the two cylinders in K (+) G (+) H and projecting out the
    /// middle block.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.dim_h != self.dim_g {
            return Err(Error::DimensionMismatch {
                context: "relation composition",
                expected: self.dim_g,
                got: other.dim_h,
            });
        }
        let tol = self.tol().max(other.tol());
        let k = other.dim_g;
        let g = self.dim_g;
        let h = self.dim_h;
        let ambient = k + g + h;

        // graph(other) (+) H
        let dr = other.graph.dim();
        let mut c1 = DMatrix::<T>::zeros(ambient, dr + h);
        c1.view_mut((0, 0), (k + g, dr))
            .copy_from(other.graph.basis());
        c1.view_mut((k + g, dr), (h, h))
            .copy_from(&DMatrix::identity(h, h));

        // K (+) graph(self)
        let ds = self.graph.dim();
        let mut c2 = DMatrix::<T>::zeros(ambient, k + ds);
        c2.view_mut((0, 0), (k, k))
            .copy_from(&DMatrix::identity(k, k));
        c2.view_mut((k, k), (g + h, ds)).copy_from(self.graph.basis());

        let cyl1 = Subspace::from_orthonormal(c1, tol);
        let cyl2 = Subspace::from_orthonormal(c2, tol);
        let w = cyl1.intersect(&cyl2)?;

        // project out the middle block
        let d = w.dim();
        let mut x = DMatrix::<T>::zeros(k, d);
        let mut y = DMatrix::<T>::zeros(h, d);
        x.copy_from(&w.basis().view((0, 0), (k, d)));
        y.copy_from(&w.basis().view((k + g, 0), (h, d)));
        Self::from_blocks(&x, &y, tol)
    }

    /// The relation `{(g, alpha h - lambda g) : (g, h) in self}`.
    pub fn scale_shift(&self, alpha: T, lambda: T) -> Result<Self> {
        if lambda != T::zero() && self.dim_g != self.dim_h {
            return Err(Error::NotSquare {
                dim_g: self.dim_g,
                dim_h: self.dim_h,
            });
        }
        let x = self.g_block();
        let y = self.h_block() * alpha - &x * lambda;
        Self::from_blocks(&x, &y, self.tol())
    }

    /// Graph intersected with the product `u (+) w`.
    pub fn restrict_to_product(&self, u: &Subspace<T>, w: &Subspace<T>) -> Result<Self> {
        if u.ambient_dim() != self.dim_g {
            return Err(Error::AmbientMismatch {
                left: u.ambient_dim(),
                right: self.dim_g,
            });
        }
        if w.ambient_dim() != self.dim_h {
            return Err(Error::AmbientMismatch {
                left: w.ambient_dim(),
                right: self.dim_h,
            });
        }
        let tol = self.tol().max(u.tol()).max(w.tol());
        let mut prod = DMatrix::<T>::zeros(self.dim_g + self.dim_h, u.dim() + w.dim());
        prod.view_mut((0, 0), (self.dim_g, u.dim())).copy_from(u.basis());
        prod.view_mut((self.dim_g, u.dim()), (self.dim_h, w.dim()))
            .copy_from(w.basis());
        let graph = self
            .graph
            .intersect(&Subspace::from_orthonormal(prod, tol))?;
        Ok(LinearRelation {
            dim_g: self.dim_g,
            dim_h: self.dim_h,
            graph,
        })
    }

    /// Operator-norm distance between the graph projectors. Symmetric in its
    /// arguments.
    pub fn equal_residual(&self, other: &Self) -> Result<f64> {
        if self.dim_g != other.dim_g || self.dim_h != other.dim_h {
            return Err(Error::AmbientMismatch {
                left: self.dim_g + self.dim_h,
                right: other.dim_g + other.dim_h,
            });
        }
        self.graph.distance(&other.graph)
    }

    /// Equality verdict against `tol` together with the residual.
    pub fn relation_equal(&self, other: &Self, tol: f64) -> Result<(bool, f64)> {
        let residual = self.equal_residual(other)?;
        Ok((residual <= tol, residual))
    }

    /// Defect of the (sesquilinear) symmetry pairing over graph-basis pairs.
    pub fn symmetry_residual(&self) -> Result<f64> {
        if self.dim_g != self.dim_h {
            return Err(Error::NotSquare {
                dim_g: self.dim_g,
                dim_h: self.dim_h,
            });
        }
        let m = self.g_block().adjoint() * self.h_block();
        Ok(linalg::opnorm(&(&m - m.adjoint())))
    }

    pub fn is_symmetric(&self) -> Result<bool> {
        let thr = (100.0 * self.tol()).max(1e-12);
        Ok(self.symmetry_residual()? <= thr)
    }

    /// Projector distance between the relation and its adjoint.
    pub fn selfadjoint_residual(&self) -> Result<f64> {
        if self.dim_g != self.dim_h {
            return Err(Error::NotSquare {
                dim_g: self.dim_g,
                dim_h: self.dim_h,
            });
        }
        self.equal_residual(&self.adjoint())
    }

    pub fn is_selfadjoint(&self, tol: f64) -> Result<(bool, f64)> {
        let residual = self.selfadjoint_residual()?;
        Ok((residual <= tol, residual))
    }

    /// Split a selfadjoint relation into its operator part on the carrier
    /// `mul(S)^perp` and its purely multivalued part.
    pub fn operator_part(&self) -> Result<OperatorPart<T>> {
        let residual = self.selfadjoint_residual()?;
        if residual > SELFADJOINT_TOL {
            return Err(Error::NotSelfadjoint { residual });
        }
        let mul = self.mul();
        let carrier = mul.complement();
        let k = carrier.dim();
        if k == 0 {
            return Ok(OperatorPart {
                carrier,
                matrix: DMatrix::zeros(0, 0),
                mul,
            });
        }
        // coefficients a with G a = carrier basis (least squares; the
        // solution is unique up to mul-directions, which the carrier
        // projection quotients away)
        let gb = self.g_block();
        let svd = gb.clone().svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let a = svd
            .solve(&carrier.basis().clone_owned(), self.tol() * smax.max(1.0))
            .map_err(|e| Error::Invariant(format!("operator part solve failed: {e}")))?;
        let h_sel = self.h_block() * a;
        let m = carrier.basis().adjoint() * h_sel;
        let matrix = (&m + m.adjoint()) * T::from_real(0.5);
        Ok(OperatorPart { carrier, matrix, mul })
    }

    /// Matrix of an everywhere-defined single-valued relation, if it is one.
    pub fn to_matrix(&self) -> Option<DMatrix<T>> {
        let d = self.graph.dim();
        if d != self.dim_g || self.mul().dim() != 0 || self.dom().dim() != self.dim_g {
            return None;
        }
        // M G = H with G square invertible: M = (G^T \ H^T)^T
        let gt = self.g_block().transpose();
        let ht = self.h_block().transpose();
        let lu = gt.lu();
        lu.solve(&ht).map(|x| x.transpose())
    }
}

impl LinearRelation<f64> {
    /// Spectrum of a selfadjoint relation: eigendecomposition of the
    /// operator part on its carrier plus the dimension of the multivalued
    /// part (the eigenvalue "at infinity").
    pub fn eigen(&self) -> Result<Spectrum> {
        let part = self.operator_part()?;
        let (values, vecs) = linalg::sym_eigen(&part.matrix);
        let mut ambient_vecs = part.carrier.basis() * vecs;
        linalg::fix_column_signs(&mut ambient_vecs);
        Ok(Spectrum::new(values, ambient_vecs, part.mul.dim(), part.carrier))
    }
}

impl Serialize for LinearRelation<f64> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LinearRelation", 3)?;
        st.serialize_field("dim_g", &self.dim_g)?;
        st.serialize_field("dim_h", &self.dim_h)?;
        st.serialize_field("graph", &self.graph)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::subspace::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DVector, dmatrix};

    fn rel(m: &DMatrix<f64>) -> LinearRelation<f64> {
        LinearRelation::from_matrix(m, DEFAULT_TOL)
    }

    #[test]
    fn matrix_graph_has_expected_span() {
        let s = rel(&dmatrix![2.0]);
        assert_eq!(s.graph_dim(), 1);
        let dir = DVector::from_vec(vec![1.0, 2.0]) / 5.0f64.sqrt();
        let expected = Subspace::from_spanning(&[dir], 2, DEFAULT_TOL).unwrap();
        assert!(s.graph().distance(&expected).unwrap() < 1e-14);
        assert_eq!(s.dom().dim(), 1);
        assert_eq!(s.mul().dim(), 0);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let s = rel(&DMatrix::zeros(2, 2));
        assert_eq!(s.ker().dim(), 2);
        assert_eq!(s.ran().dim(), 0);
    }

    #[test]
    fn generic_matrix_graph_dims() {
        let s = rel(&dmatrix![1.0, 2.0; 0.0, 1.0]);
        assert_eq!(s.graph_dim(), 2);
        assert_eq!(s.mul().dim(), 0);
        assert_eq!(s.ker().dim(), 0);
    }

    #[test]
    fn purely_multivalued_components() {
        // span{((0),(1))} in R x R
        let graph = Subspace::from_spanning(&[DVector::from_vec(vec![0.0, 1.0])], 2, DEFAULT_TOL).unwrap();
        let s = LinearRelation::from_graph(1, 1, graph).unwrap();
        assert_eq!(s.mul().dim(), 1);
        assert_eq!(s.dom().dim(), 0);
        assert_eq!(s.ker().dim(), 0);
        assert_eq!(s.ran().dim(), 1);
    }

    #[test]
    fn inverse_swaps_components() {
        let s = rel(&dmatrix![2.0]);
        let inv = s.inverse();
        let expected = rel(&dmatrix![0.5]);
        assert!(inv.equal_residual(&expected).unwrap() < 1e-14);
        // zero operator on R: inverse is purely multivalued
        let z = rel(&dmatrix![0.0]);
        let zi = z.inverse();
        assert_eq!(zi.dom().dim(), 0);
        assert_eq!(zi.mul().dim(), 1);
        // involution is exact
        assert_abs_diff_eq!(s.inverse().inverse().equal_residual(&s).unwrap(), 0.0);
    }

    #[test]
    fn adjoint_of_matrix_graph_is_transpose() {
        let m = dmatrix![1.0, 2.0; 0.0, 1.0];
        let s = rel(&m);
        let adj = s.adjoint();
        let expected = rel(&m.transpose());
        assert!(adj.equal_residual(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn adjoint_of_purely_multivalued() {
        // S = {(0, h)} in R x R: ran S = R so ker S* = {0}
        let graph = Subspace::from_spanning(&[DVector::from_vec(vec![0.0, 1.0])], 2, DEFAULT_TOL).unwrap();
        let s = LinearRelation::from_graph(1, 1, graph).unwrap();
        let adj = s.adjoint();
        assert_eq!(adj.ker().dim(), 0);
        // (ran S)^perp = ker S*
        assert!(s.ran().complement().distance(&adj.ker()).unwrap() < 1e-14);
    }

    #[test]
    fn op_sum_cancels_opposite_operators() {
        let m = dmatrix![1.0, 3.0; -2.0, 0.5];
        let s = rel(&m).op_sum(&rel(&(-&m))).unwrap();
        let zero = rel(&DMatrix::zeros(2, 2));
        assert!(s.equal_residual(&zero).unwrap() < 1e-13);
    }

    #[test]
    fn op_sum_with_purely_multivalued_enlarges_mul() {
        let s = rel(&dmatrix![3.0]);
        let graph = Subspace::from_spanning(&[DVector::from_vec(vec![0.0, 1.0])], 2, DEFAULT_TOL).unwrap();
        let pm = LinearRelation::from_graph(1, 1, graph).unwrap();
        let sum = s.op_sum(&pm).unwrap();
        assert_eq!(sum.dom().dim(), 1);
        assert_eq!(sum.mul().dim(), 1);
    }

    #[test]
    fn compose_matches_matrix_product() {
        let a = dmatrix![1.0, 2.0; 3.0, 4.0];
        let b = dmatrix![0.0, 1.0; 1.0, 1.0];
        let sr = rel(&a).compose(&rel(&b)).unwrap();
        let expected = rel(&(&a * &b));
        assert!(sr.equal_residual(&expected).unwrap() < 1e-13);
    }

    #[test]
    fn compose_with_inverse_contains_identity_on_range() {
        let m = dmatrix![1.0, 0.0; 0.0, 0.0];
        let s = rel(&m);
        let prod = s.compose(&s.inverse()).unwrap();
        // identity restricted to ran S is contained in S o S^{-1}
        let ran = s.ran();
        let mut pairs = DMatrix::zeros(4, ran.dim());
        pairs.view_mut((0, 0), (2, ran.dim())).copy_from(ran.basis());
        pairs.view_mut((2, 0), (2, ran.dim())).copy_from(ran.basis());
        let id_on_ran = Subspace::from_columns(&pairs, DEFAULT_TOL);
        assert!(prod.graph().containment_residual(&id_on_ran).unwrap() < 1e-13);
    }

    #[test]
    fn scale_shift_shifts_kernel() {
        let s = rel(&dmatrix![3.0]).scale_shift(1.0, 3.0).unwrap();
        assert_eq!(s.ker().dim(), 1);
        // negation applied twice is the identity map on relations
        let m = dmatrix![1.0, 2.0; 0.0, -1.0];
        let neg = rel(&m).scale_shift(-1.0, 0.0).unwrap();
        let back = neg.scale_shift(-1.0, 0.0).unwrap();
        assert!(back.equal_residual(&rel(&m)).unwrap() < 1e-13);
    }

    #[test]
    fn scale_shift_rejects_nonsquare_shift() {
        let s = rel(&DMatrix::<f64>::zeros(3, 2));
        assert!(s.scale_shift(1.0, 1.0).is_err());
        assert!(s.scale_shift(2.0, 0.0).is_ok());
    }

    #[test]
    fn restriction_examples() {
        let s = rel(&dmatrix![1.0]);
        let full = Subspace::full(1, DEFAULT_TOL);
        let same = s.restrict_to_product(&full, &full).unwrap();
        assert!(same.equal_residual(&s).unwrap() < 1e-14);

        let zero = Subspace::zero(1, DEFAULT_TOL);
        let restricted = s.restrict_to_product(&zero, &full).unwrap();
        assert_eq!(restricted.graph_dim(), 0);
    }

    #[test]
    fn relation_equal_calibration() {
        let s = rel(&dmatrix![1.0]);
        assert_abs_diff_eq!(s.equal_residual(&s).unwrap(), 0.0);
        let eps = 1e-6;
        let t = rel(&dmatrix![1.0 + 2.0 * eps]);
        let r = s.equal_residual(&t).unwrap();
        assert!(r > 0.5 * eps && r < 2.0 * eps, "residual {r}");
        let (equal, _) = s.relation_equal(&t, 0.99 * eps).unwrap();
        assert!(!equal);
    }

    #[test]
    fn symmetry_predicates() {
        let sym = rel(&dmatrix![2.0, -1.0; -1.0, 2.0]);
        assert!(sym.is_symmetric().unwrap());
        let (sa, res) = sym.is_selfadjoint(1e-10).unwrap();
        assert!(sa, "residual {res}");

        let nil = rel(&dmatrix![0.0, 1.0; 0.0, 0.0]);
        assert!(!nil.is_symmetric().unwrap());
        assert!(!nil.is_selfadjoint(1e-10).unwrap().0);
    }

    #[test]
    fn operator_part_of_symmetric_matrix() {
        let m = dmatrix![2.0, -1.0; -1.0, 2.0];
        let part = rel(&m).operator_part().unwrap();
        assert_eq!(part.carrier.dim(), 2);
        assert_eq!(part.mul.dim(), 0);
        // same operator expressed on the carrier basis
        let back = part.carrier.basis() * &part.matrix * part.carrier.basis().adjoint();
        assert!(linalg::opnorm(&(back - m)) < 1e-12);
    }

    #[test]
    fn operator_part_of_purely_multivalued() {
        let graph = Subspace::from_spanning(
            &[DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]), DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0])],
            4,
            DEFAULT_TOL,
        )
        .unwrap();
        let s = LinearRelation::from_graph(2, 2, graph).unwrap();
        let part = s.operator_part().unwrap();
        assert_eq!(part.carrier.dim(), 0);
        assert_eq!(part.matrix.nrows(), 0);
        assert_eq!(part.mul.dim(), 2);
    }

    #[test]
    fn operator_part_rejects_nonselfadjoint() {
        let s = rel(&dmatrix![0.0, 1.0; 0.0, 0.0]);
        assert!(matches!(s.operator_part(), Err(Error::NotSelfadjoint { .. })));
    }

    #[test]
    fn eigen_of_diagonal() {
        let spec = rel(&dmatrix![-1.0, 0.0; 0.0, 2.0]).eigen().unwrap();
        assert_eq!(spec.mul_dim(), 0);
        assert_abs_diff_eq!(spec.eigenvalues()[0], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(spec.eigenvalues()[1], 2.0, epsilon = 1e-13);
    }

    #[test]
    fn to_matrix_round_trip() {
        let m = dmatrix![1.0, 2.0; -0.5, 4.0];
        let s = rel(&m);
        let back = s.to_matrix().unwrap();
        assert!(linalg::opnorm(&(back - m)) < 1e-12);
        // a purely multivalued relation has no matrix
        let graph = Subspace::from_spanning(&[DVector::from_vec(vec![0.0, 1.0])], 2, DEFAULT_TOL).unwrap();
        let pm = LinearRelation::from_graph(1, 1, graph).unwrap();
        assert!(pm.to_matrix().is_none());
    }
}
