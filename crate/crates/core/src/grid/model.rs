use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::domain::GridDomain;
use crate::linalg;
use crate::relcore::{Spectrum, Subspace, DEFAULT_TOL};

/// The assembled discrete model: the symmetric matrix
/// `S = (1/h^2) * (graph Laplacian of the edges) + diag(V)` over all nodes,
/// together with the interior/boundary index partition.
#[derive(Clone, Debug)]
pub struct DiscreteModel {
    domain: GridDomain,
    v: DVector<f64>,
    s: DMatrix<f64>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    a_d_values: OnceLock<Vec<f64>>,
    a_n_values: OnceLock<Vec<f64>>,
    a_d_full: OnceLock<(Vec<f64>, DMatrix<f64>)>,
    a_n_full: OnceLock<(Vec<f64>, DMatrix<f64>)>,
}

/// The Dirichlet and Neumann realizations on the interior space: `A_D = S_II`
/// and the Schur complement `A_N = S_II - S_IB S_BB^-1 S_BI`.
#[derive(Clone, Debug)]
pub struct RealizationPair {
    pub a_d: DMatrix<f64>,
    pub a_n: DMatrix<f64>,
    pub essinf_v: f64,
}

/// Assemble the model matrix for a potential given per node.
pub fn assemble(domain: GridDomain, v: Vec<f64>) -> Result<DiscreteModel> {
    let n = domain.node_count();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            context: "potential length",
            expected: n,
            got: v.len(),
        });
    }
    let h2 = domain.h() * domain.h();
    let w = 1.0 / h2;
    let mut s = DMatrix::<f64>::zeros(n, n);
    for &(a, b) in domain.edges() {
        s[(a, a)] += w;
        s[(b, b)] += w;
        s[(a, b)] -= w;
        s[(b, a)] -= w;
    }
    for i in 0..n {
        s[(i, i)] += v[i];
    }

    let interior = domain.interior_indices();
    let boundary = domain.boundary_indices();
    let model = DiscreteModel {
        domain,
        v: DVector::from_vec(v),
        s,
        interior,
        boundary,
        a_d_values: OnceLock::new(),
        a_n_values: OnceLock::new(),
        a_d_full: OnceLock::new(),
        a_n_full: OnceLock::new(),
    };
    model.verify_green_at_assembly()?;
    Ok(model)
}

impl DiscreteModel {
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn h(&self) -> f64 {
        self.domain.h()
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn node_count(&self) -> usize {
        self.domain.node_count()
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    pub fn min_potential(&self) -> f64 {
        self.v.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.s[(rows[i], cols[j])])
    }

    pub fn s_ii(&self) -> DMatrix<f64> {
        self.block(&self.interior, &self.interior)
    }

    pub fn s_ib(&self) -> DMatrix<f64> {
        self.block(&self.interior, &self.boundary)
    }

    pub fn s_bi(&self) -> DMatrix<f64> {
        self.block(&self.boundary, &self.interior)
    }

    pub fn s_bb(&self) -> DMatrix<f64> {
        self.block(&self.boundary, &self.boundary)
    }

    /// Restriction of an all-node vector to the boundary nodes.
    pub fn trace(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_full_len(f)?;
        Ok(DVector::from_fn(self.boundary.len(), |i, _| f[self.boundary[i]]))
    }

    /// Restriction of an all-node vector to the interior nodes.
    pub fn interior_part(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_full_len(f)?;
        Ok(DVector::from_fn(self.interior.len(), |i, _| f[self.interior[i]]))
    }

    /// Discrete conormal derivative: the boundary rows of `S f`. This is the
    /// unique choice for which both Green identities hold exactly.
    pub fn conormal(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_full_len(f)?;
        let sf = &self.s * f;
        Ok(DVector::from_fn(self.boundary.len(), |i, _| sf[self.boundary[i]]))
    }

    /// Boundary values of the Neumann extension of an interior vector:
    /// `-S_BB^-1 S_BI u_I`.
    pub fn neumann_trace(&self, u_i: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_interior_len(u_i)?;
        let rhs = self.s_bi() * u_i;
        let solved = self
            .s_bb_lu()?
            .solve(&rhs)
            .ok_or(Error::SingularBoundaryBlock)?;
        Ok(-solved)
    }

    /// The all-node vector `(u_I, -S_BB^-1 S_BI u_I)` with zero conormal.
    pub fn neumann_extension(&self, u_i: &DVector<f64>) -> Result<DVector<f64>> {
        let bvals = self.neumann_trace(u_i)?;
        let mut f = DVector::zeros(self.node_count());
        for (k, &i) in self.interior.iter().enumerate() {
            f[i] = u_i[k];
        }
        for (k, &b) in self.boundary.iter().enumerate() {
            f[b] = bvals[k];
        }
        Ok(f)
    }

    /// Scatter an interior vector into an all-node vector with zero boundary
    /// values.
    pub fn zero_extension(&self, u_i: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_interior_len(u_i)?;
        let mut f = DVector::zeros(self.node_count());
        for (k, &i) in self.interior.iter().enumerate() {
            f[i] = u_i[k];
        }
        Ok(f)
    }

    fn s_bb_lu(&self) -> Result<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>> {
        let s_bb = self.s_bb();
        let sv = s_bb.clone().singular_values();
        let smax = sv.iter().cloned().fold(0.0f64, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smax <= 0.0 || smin <= 1e-12 * smax {
            return Err(Error::SingularBoundaryBlock);
        }
        Ok(s_bb.lu())
    }

    /// The Dirichlet and Neumann realizations on the interior space.
    pub fn realizations(&self) -> Result<RealizationPair> {
        let a_d = self.s_ii();
        let lu = self.s_bb_lu()?;
        let x = lu
            .solve(&self.s_bi())
            .ok_or(Error::SingularBoundaryBlock)?;
        let a_n = &a_d - self.s_ib() * x;
        Ok(RealizationPair {
            a_d,
            a_n,
            essinf_v: self.min_potential(),
        })
    }

    /// Sorted eigenvalues of `A_D` (computed once, then cached).
    pub fn a_d_eigenvalues(&self) -> &[f64] {
        self.a_d_values
            .get_or_init(|| linalg::sym_eigenvalues(&self.s_ii()))
    }

    /// Sorted eigenvalues of `A_N` (computed once, then cached).
    pub fn a_n_eigenvalues(&self) -> Result<&[f64]> {
        if self.a_n_values.get().is_none() {
            let r = self.realizations()?;
            let _ = self.a_n_values.set(linalg::sym_eigenvalues(&r.a_n));
        }
        Ok(self.a_n_values.get().expect("just initialized"))
    }

    /// Full eigendecomposition of `A_D` (cached; used for kernel extraction).
    pub fn a_d_eigen(&self) -> &(Vec<f64>, DMatrix<f64>) {
        self.a_d_full
            .get_or_init(|| linalg::sym_eigen(&self.s_ii()))
    }

    /// Full eigendecomposition of `A_N` (cached).
    pub fn a_n_eigen(&self) -> Result<&(Vec<f64>, DMatrix<f64>)> {
        if self.a_n_full.get().is_none() {
            let r = self.realizations()?;
            let _ = self.a_n_full.set(linalg::sym_eigen(&r.a_n));
        }
        Ok(self.a_n_full.get().expect("just initialized"))
    }

    /// Orthonormal basis of `ker(A_D - lambda)` as an interior-space subspace,
    /// with eigenvalues matched within `zero_tol`.
    pub fn dirichlet_kernel(&self, lambda: f64, zero_tol: f64) -> Subspace<f64> {
        let (values, vectors) = self.a_d_eigen();
        kernel_from_eigen(values, vectors, lambda, zero_tol)
    }

    /// Orthonormal basis of `ker(A_N - lambda)` as an interior-space subspace.
    pub fn neumann_kernel(&self, lambda: f64, zero_tol: f64) -> Result<Subspace<f64>> {
        let (values, vectors) = self.a_n_eigen()?;
        Ok(kernel_from_eigen(values, vectors, lambda, zero_tol))
    }

    /// Relative threshold under which a lambda counts as "at" an eigenvalue.
    pub fn spectral_zero_tol(&self) -> f64 {
        let scale = self
            .a_d_eigenvalues()
            .iter()
            .fold(1.0f64, |a, &v| a.max(v.abs()));
        1e-8 * scale
    }

    /// Fault injection for calibration runs: perturb a single entry of `S`,
    /// breaking symmetry and with it the Green identities.
    pub fn with_corrupted_entry(mut self, i: usize, j: usize, delta: f64) -> Self {
        self.s[(i, j)] += delta;
        self.a_d_values = OnceLock::new();
        self.a_n_values = OnceLock::new();
        self.a_d_full = OnceLock::new();
        self.a_n_full = OnceLock::new();
        self
    }

    fn check_full_len(&self, f: &DVector<f64>) -> Result<()> {
        if f.len() != self.node_count() {
            return Err(Error::DimensionMismatch {
                context: "all-node vector",
                expected: self.node_count(),
                got: f.len(),
            });
        }
        Ok(())
    }

    fn check_interior_len(&self, f: &DVector<f64>) -> Result<()> {
        if f.len() != self.n_interior() {
            return Err(Error::DimensionMismatch {
                context: "interior vector",
                expected: self.n_interior(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// Residual of the discrete second Green identity for a pair of vectors,
    /// relative to the size of its terms.
    pub fn green_residual(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_full_len(u)?;
        self.check_full_len(v)?;
        let su = &self.s * u;
        let sv = &self.s * v;
        let pick = |f: &DVector<f64>, idx: &[usize]| {
            DVector::from_fn(idx.len(), |i, _| f[idx[i]])
        };
        let su_i = pick(&su, &self.interior);
        let sv_i = pick(&sv, &self.interior);
        let u_i = pick(u, &self.interior);
        let v_i = pick(v, &self.interior);
        let u_b = pick(u, &self.boundary);
        let v_b = pick(v, &self.boundary);
        let lam_u = pick(&su, &self.boundary);
        let lam_v = pick(&sv, &self.boundary);
        let lhs = su_i.dot(&v_i) - u_i.dot(&sv_i);
        let rhs = u_b.dot(&lam_v) - lam_u.dot(&v_b);
        let scale = su.norm() * v.norm() + u.norm() * sv.norm() + 1.0;
        Ok((lhs - rhs).abs() / scale)
    }

    /// Residual of the discrete first Green identity
    /// `(u, S v) = (u_I, (Sv)_I) + (u_B, conormal v)`.
    pub fn green_first_residual(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_full_len(u)?;
        self.check_full_len(v)?;
        let sv = &self.s * v;
        let mut split = 0.0;
        for &i in &self.interior {
            split += u[i] * sv[i];
        }
        for &b in &self.boundary {
            split += u[b] * sv[b];
        }
        let full = u.dot(&sv);
        let scale = u.norm() * sv.norm() + 1.0;
        Ok((full - split).abs() / scale)
    }

    fn verify_green_at_assembly(&self) -> Result<()> {
        // assembly writes symmetric pairs from one expression, so exact
        // symmetry is expected
        for i in 0..self.node_count() {
            for j in (i + 1)..self.node_count() {
                if self.s[(i, j)] != self.s[(j, i)] {
                    return Err(Error::Invariant(format!(
                        "assembled matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_917d);
        let n = self.node_count();
        let thr = 1e-12 * (1.0 + n as f64 / 16.0);
        for _ in 0..8 {
            let u = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let r = self.green_residual(&u, &v)?;
            if r > thr {
                return Err(Error::Invariant(format!(
                    "discrete Green identity violated at assembly: residual {r:.3e}"
                )));
            }
        }
        Ok(())
    }
}

fn kernel_from_eigen(
    values: &[f64],
    vectors: &DMatrix<f64>,
    lambda: f64,
    zero_tol: f64,
) -> Subspace<f64> {
    let cols: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - lambda).abs() <= zero_tol)
        .map(|(i, _)| i)
        .collect();
    let mut basis = DMatrix::zeros(vectors.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        basis.set_column(dst, &vectors.column(src));
    }
    Subspace::from_orthonormal(basis, DEFAULT_TOL)
}

/// Full dense eigendecomposition of a symmetric matrix as a [`Spectrum`]
/// (full carrier, no multivalued part). Rejects matrices whose symmetry
/// defect exceeds `1e-10` relative to the largest entry.
pub fn spectrum_of(matrix: &DMatrix<f64>) -> Result<Spectrum> {
    let defect = linalg::symmetry_defect(matrix);
    if defect > 1e-10 {
        return Err(Error::NotSymmetric { residual: defect });
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    let (values, vectors) = linalg::sym_eigen(&sym);
    let carrier = Subspace::full(matrix.nrows(), DEFAULT_TOL);
    Ok(Spectrum::new(values, vectors, 0, carrier))
}

/// The canonical 4-node chain fixture: `build_chain(4, 1)` with zero
/// potential. `S = [[1,-1,0,0],[-1,2,-1,0],[0,-1,2,-1],[0,0,-1,1]]`,
/// boundary `{0,3}`, interior `{1,2}`.
pub fn chain4() -> DiscreteModel {
    let domain = crate::grid::build_chain(4, 1.0).expect("static fixture");
    assemble(domain, vec![0.0; 4]).expect("static fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_chain, build_rectangle};
    use approx::assert_abs_diff_eq;

    #[test]
    fn chain4_matrix_is_exact() {
        let m = chain4();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, -1.0, 0.0, 0.0, //
                -1.0, 2.0, -1.0, 0.0, //
                0.0, -1.0, 2.0, -1.0, //
                0.0, 0.0, -1.0, 1.0,
            ],
        );
        assert_eq!(m.s(), &expected);
        assert_eq!(m.boundary(), &[0, 3]);
        assert_eq!(m.interior(), &[1, 2]);
    }

    #[test]
    fn chain4_realizations() {
        let m = chain4();
        let r = m.realizations().unwrap();
        assert_eq!(r.a_d, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));
        assert_eq!(r.a_n, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let d_eigs = linalg::sym_eigenvalues(&r.a_d);
        assert_abs_diff_eq!(d_eigs[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d_eigs[1], 3.0, epsilon = 1e-13);
        let n_eigs = linalg::sym_eigenvalues(&r.a_n);
        assert_abs_diff_eq!(n_eigs[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(n_eigs[1], 2.0, epsilon = 1e-13);
    }

    #[test]
    fn chain5_is_path_laplacian() {
        let d = build_chain(5, 1.0).unwrap();
        let m = assemble(d, vec![0.0; 5]).unwrap();
        assert_eq!(m.n_interior(), 3);
        assert_eq!(m.s()[(2, 2)], 2.0);
        assert_eq!(m.s()[(2, 3)], -1.0);
        assert_eq!(m.s()[(0, 0)], 1.0);
    }

    #[test]
    fn constant_potential_shifts_spectra() {
        let d1 = build_chain(6, 1.0).unwrap();
        let base = assemble(d1.clone(), vec![0.0; 6]).unwrap();
        let shifted = assemble(d1, vec![2.5; 6]).unwrap();
        let r0 = base.realizations().unwrap();
        let r1 = shifted.realizations().unwrap();
        let d0 = linalg::sym_eigenvalues(&r0.a_d);
        let d1v = linalg::sym_eigenvalues(&r1.a_d);
        for (a, b) in d0.iter().zip(&d1v) {
            assert_abs_diff_eq!(a + 2.5, *b, epsilon = 1e-12);
        }
        let n0 = linalg::sym_eigenvalues(&r0.a_n);
        let n1 = linalg::sym_eigenvalues(&r1.a_n);
        for (a, b) in n0.iter().zip(&n1) {
            assert_abs_diff_eq!(a + 2.5, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn rectangle_2x2_single_interior_entry() {
        let h = 0.25;
        let d = build_rectangle(2, 2, h).unwrap();
        let m = assemble(d, vec![0.0; 9]).unwrap();
        let s_ii = m.s_ii();
        assert_eq!(s_ii.nrows(), 1);
        assert_abs_diff_eq!(s_ii[(0, 0)], 4.0 / (h * h), epsilon = 1e-12);
    }

    #[test]
    fn negative_potential_respects_lower_bound() {
        let d = build_chain(4, 1.0).unwrap();
        let m = assemble(d, vec![-5.0; 4]).unwrap();
        let r = m.realizations().unwrap();
        let d_eigs = linalg::sym_eigenvalues(&r.a_d);
        assert_abs_diff_eq!(d_eigs[0], -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d_eigs[1], -2.0, epsilon = 1e-12);
        let n_eigs = linalg::sym_eigenvalues(&r.a_n);
        assert!(d_eigs[0] >= r.essinf_v - 1e-8 * 5.0);
        assert!(n_eigs[0] >= r.essinf_v - 1e-8 * 5.0);
    }

    #[test]
    fn rectangle_8x8_neumann_kernel_is_constants() {
        let d = build_rectangle(8, 8, 0.125).unwrap();
        let m = assemble(d, vec![0.0; 81]).unwrap();
        let r = m.realizations().unwrap();
        let eigs = linalg::sym_eigenvalues(&r.a_n);
        assert!(eigs[0].abs() < 1e-9);
        assert!(eigs[1] > 1e-3);
        // the Neumann extension of the all-ones interior vector is all-ones
        let ones = DVector::from_element(m.n_interior(), 1.0);
        let ext = m.neumann_extension(&ones).unwrap();
        for i in 0..m.node_count() {
            assert_abs_diff_eq!(ext[i], 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn neumann_extension_has_zero_conormal() {
        let m = chain4();
        let u = DVector::from_vec(vec![0.3, -1.7]);
        let ext = m.neumann_extension(&u).unwrap();
        let lam = m.conormal(&ext).unwrap();
        assert_abs_diff_eq!(lam.norm(), 0.0, epsilon = 1e-13);
        // (S ext)_I agrees with A_N u
        let r = m.realizations().unwrap();
        let want = r.a_n * &u;
        let got = m.interior_part(&(m.s() * &ext)).unwrap();
        assert_abs_diff_eq!((want - got).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn conormal_of_discrete_affine() {
        // f = (a, a+b, a+2b, a+3b) on the chain: conormal (-b, b)
        let m = chain4();
        let (a, b) = (0.7, -0.4);
        let f = DVector::from_vec(vec![a, a + b, a + 2.0 * b, a + 3.0 * b]);
        let lam = m.conormal(&f).unwrap();
        assert_abs_diff_eq!(lam[0], -b, epsilon = 1e-14);
        assert_abs_diff_eq!(lam[1], b, epsilon = 1e-14);
    }

    #[test]
    fn conormal_of_constant_vanishes() {
        let m = chain4();
        let f = DVector::from_element(4, 3.0);
        let lam = m.conormal(&f).unwrap();
        assert_abs_diff_eq!(lam.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_extension_conormal_of_dirichlet_eigenvector() {
        // g = (1,1) is the A_D eigenvector at 1; S_BI g = (-1,-1)
        let m = chain4();
        let g = DVector::from_vec(vec![1.0, 1.0]);
        let zext = m.zero_extension(&g).unwrap();
        let lam = m.conormal(&zext).unwrap();
        assert_abs_diff_eq!(lam[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lam[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn green_residual_small_on_random_pairs() {
        let d = build_rectangle(5, 4, 0.2).unwrap();
        let m = assemble(d, (0..30).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let u = DVector::from_fn(m.node_count(), |_, _| rng.gen_range(-1.0..1.0));
            let v = DVector::from_fn(m.node_count(), |_, _| rng.gen_range(-1.0..1.0));
            assert!(m.green_residual(&u, &v).unwrap() < 1e-12);
            assert!(m.green_first_residual(&u, &v).unwrap() < 1e-12);
        }
    }

    #[test]
    fn corrupted_entry_breaks_green() {
        let m = chain4().with_corrupted_entry(0, 1, 1e-3);
        let u = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]);
        let v = DVector::from_vec(vec![0.3, -0.2, 1.1, 0.0]);
        let r = m.green_residual(&u, &v).unwrap();
        assert!(r > 1e-5, "residual {r}");
    }

    #[test]
    fn spectrum_of_rejects_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(spectrum_of(&m), Err(Error::NotSymmetric { .. })));
        let d = DMatrix::from_row_slice(1, 1, &[5.0]);
        let spec = spectrum_of(&d).unwrap();
        assert_eq!(spec.eigenvalues(), &[5.0]);
    }

    #[test]
    fn interlacing_for_zero_potential() {
        let d = build_rectangle(6, 5, 0.2).unwrap();
        let m = assemble(d, vec![0.0; 42]).unwrap();
        let r = m.realizations().unwrap();
        let de = linalg::sym_eigenvalues(&r.a_d);
        let ne = linalg::sym_eigenvalues(&r.a_n);
        for (k, (n_k, d_k)) in ne.iter().zip(&de).enumerate() {
            assert!(
                n_k <= &(d_k + 1e-10),
                "interlacing failed at {k}: {n_k} > {d_k}"
            );
        }
    }
}
