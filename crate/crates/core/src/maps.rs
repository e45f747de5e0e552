//! Dirichlet-to-Neumann and Neumann-to-Dirichlet maps and the gamma fields,
//! as linear relations over the boundary space. Every map can be built from
//! one solution-space basis (exact at eigenvalues, where the maps become
//! multivalued); off the spectra a Schur-complement matrix path is available
//! and the production constructors switch to it automatically.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::DiscreteModel;
use crate::linalg;
use crate::relcore::{LinearRelation, Subspace, DEFAULT_TOL};
use crate::scalar::{promote, Scalar};

/// Relative distance to the nearest eigenvalue below which the matrix fast
/// path refuses to run and the subspace path is used instead.
pub const FAST_PATH_PROXIMITY: f64 = 1e-6;

/// All boundary maps of one model at one spectral parameter, derived from a
/// single solution basis, with the structural invariants validated.
#[derive(Clone, Debug)]
pub struct BoundaryMapBundle {
    pub lambda: f64,
    pub d: LinearRelation<f64>,
    pub n: LinearRelation<f64>,
    pub gamma_d: LinearRelation<f64>,
    pub gamma_n: LinearRelation<f64>,
    pub sol_dim: usize,
}

/// Orthonormal basis of the solution space `{f : (Sf)_I = lambda f_I}` over
/// all nodes. Its dimension is `|B| + dim ker(A_D - lambda)`.
pub fn solution_space<T: Scalar>(model: &DiscreteModel, lambda: T) -> Subspace<T> {
    let n = model.node_count();
    let interior = model.interior();
    let mut m = DMatrix::<T>::zeros(interior.len(), n);
    for (k, &i) in interior.iter().enumerate() {
        for j in 0..n {
            m[(k, j)] = T::from_real(model.s()[(i, j)]);
        }
        m[(k, i)] -= lambda;
    }
    Subspace::from_orthonormal(linalg::nullspace(&m, DEFAULT_TOL), DEFAULT_TOL)
}

fn select_rows<T: Scalar>(m: &DMatrix<T>, rows: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)])
}

/// Trace and conormal blocks of a solution basis: `(F_B, (S F)_B, F_I)`.
fn solution_blocks<T: Scalar>(
    model: &DiscreteModel,
    basis: &DMatrix<T>,
) -> (DMatrix<T>, DMatrix<T>, DMatrix<T>) {
    let s = promote::<T>(model.s());
    let sf = &s * basis;
    (
        select_rows(basis, model.boundary()),
        select_rows(&sf, model.boundary()),
        select_rows(basis, model.interior()),
    )
}

/// `D(lambda)` built from the solution space: the relation on the boundary
/// space pairing traces with conormal derivatives. Multivalued exactly when
/// `lambda` is a Dirichlet eigenvalue.
pub fn dtn_subspace<T: Scalar>(model: &DiscreteModel, lambda: T) -> LinearRelation<T> {
    let sol = solution_space(model, lambda);
    let (traces, conormals, _) = solution_blocks(model, sol.basis());
    LinearRelation::from_blocks(&traces, &conormals, DEFAULT_TOL).expect("block rows agree")
}

/// `N(lambda)` built from the solution space; the inverse relation of
/// `D(lambda)`. Multivalued exactly when `lambda` is a Neumann eigenvalue.
pub fn ntd_subspace<T: Scalar>(model: &DiscreteModel, lambda: T) -> LinearRelation<T> {
    dtn_subspace(model, lambda).inverse()
}

/// `gamma_D(lambda)`: boundary trace paired with the interior solution.
pub fn gamma_d_subspace<T: Scalar>(model: &DiscreteModel, lambda: T) -> LinearRelation<T> {
    let sol = solution_space(model, lambda);
    let (traces, _, interiors) = solution_blocks(model, sol.basis());
    LinearRelation::from_blocks(&traces, &interiors, DEFAULT_TOL).expect("block rows agree")
}

/// `gamma_N(lambda)`: conormal derivative paired with the interior solution.
pub fn gamma_n_subspace<T: Scalar>(model: &DiscreteModel, lambda: T) -> LinearRelation<T> {
    let sol = solution_space(model, lambda);
    let (_, conormals, interiors) = solution_blocks(model, sol.basis());
    LinearRelation::from_blocks(&conormals, &interiors, DEFAULT_TOL).expect("block rows agree")
}

/// Direct construction of `gamma_D(lambda)^*` from the Dirichlet realization:
/// the relation `{((A_D - conj(lambda)) g, -S_BI g) : g interior}`. Built by
/// an independent code path and compared against `adjoint(gamma_D)` in the
/// verification suite.
pub fn gamma_d_adjoint_direct<T: Scalar>(model: &DiscreteModel, lambda: T) -> LinearRelation<T> {
    let r = model.realizations().expect("realizations available");
    let mut x = promote::<T>(&r.a_d);
    let conj = lambda.conjugate();
    for i in 0..x.nrows() {
        x[(i, i)] -= conj;
    }
    let y = promote::<T>(&(-model.s_bi()));
    LinearRelation::from_blocks(&x, &y, DEFAULT_TOL).expect("block rows agree")
}

/// Direct construction of `gamma_N(lambda)^*` from the Neumann realization:
/// the relation `{((A_N - conj(lambda)) g, trace of the Neumann extension of g)}`.
pub fn gamma_n_adjoint_direct<T: Scalar>(model: &DiscreteModel, lambda: T) -> Result<LinearRelation<T>> {
    let r = model.realizations()?;
    let mut x = promote::<T>(&r.a_n);
    let conj = lambda.conjugate();
    for i in 0..x.nrows() {
        x[(i, i)] -= conj;
    }
    // columns: neumann_trace(e_k) = -S_BB^-1 S_BI e_k
    let lu = model.s_bb().lu();
    let solved = lu.solve(&model.s_bi()).ok_or(Error::SingularBoundaryBlock)?;
    let y = promote::<T>(&(-solved));
    Ok(LinearRelation::from_blocks(&x, &y, DEFAULT_TOL).expect("block rows agree"))
}

/// Distance from `lambda` to the Dirichlet point spectrum, with the nearest
/// eigenvalue.
fn dirichlet_proximity(model: &DiscreteModel, lambda: f64) -> (f64, f64) {
    let eigs = model.a_d_eigenvalues();
    let mut nearest = f64::INFINITY;
    let mut at = f64::NAN;
    for &e in eigs {
        let d = (e - lambda).abs();
        if d < nearest {
            nearest = d;
            at = e;
        }
    }
    (nearest, at)
}

fn dirichlet_spectral_radius(model: &DiscreteModel) -> f64 {
    model
        .a_d_eigenvalues()
        .iter()
        .fold(1.0f64, |a, &v| a.max(v.abs()))
}

/// Fast path: `D(lambda) = S_BB - S_BI (S_II - lambda)^-1 S_IB`, valid away
/// from the Dirichlet point spectrum. Near an eigenvalue the proximity error
/// names the offending eigenvalue.
pub fn dtn_matrix(model: &DiscreteModel, lambda: f64) -> Result<DMatrix<f64>> {
    let (dist, nearest) = dirichlet_proximity(model, lambda);
    if dist <= FAST_PATH_PROXIMITY * dirichlet_spectral_radius(model) {
        return Err(Error::EigenvalueProximity { lambda, nearest });
    }
    let mut a = model.s_ii();
    for i in 0..a.nrows() {
        a[(i, i)] -= lambda;
    }
    let lu = a.lu();
    let x = lu.solve(&model.s_ib()).ok_or(Error::EigenvalueProximity {
        lambda,
        nearest,
    })?;
    Ok(model.s_bb() - model.s_bi() * x)
}

/// `D(lambda)` with automatic path selection: the Schur-complement matrix
/// away from the Dirichlet spectrum, the solution-space construction near or
/// at eigenvalues (where it is exact and possibly multivalued).
pub fn dtn(model: &DiscreteModel, lambda: f64) -> LinearRelation<f64> {
    match dtn_matrix(model, lambda) {
        Ok(m) => LinearRelation::from_matrix(&m, DEFAULT_TOL),
        Err(_) => dtn_subspace(model, lambda),
    }
}

/// `N(lambda)` with automatic path selection; the inverse of [`dtn`].
pub fn ntd(model: &DiscreteModel, lambda: f64) -> LinearRelation<f64> {
    dtn(model, lambda).inverse()
}

/// Compute all boundary maps at `lambda` from one solution basis and
/// validate the bundle invariants.
pub fn bundle(model: &DiscreteModel, lambda: f64) -> Result<BoundaryMapBundle> {
    let sol = solution_space(model, lambda);
    let (traces, conormals, interiors) = solution_blocks(model, sol.basis());
    let d = LinearRelation::from_blocks(&traces, &conormals, DEFAULT_TOL)?;
    let n = LinearRelation::from_blocks(&conormals, &traces, DEFAULT_TOL)?;
    let gamma_d = LinearRelation::from_blocks(&traces, &interiors, DEFAULT_TOL)?;
    let gamma_n = LinearRelation::from_blocks(&conormals, &interiors, DEFAULT_TOL)?;

    // N and inverse(D) are canonicalized independently; they must agree.
    let inv_residual = n.equal_residual(&d.inverse())?;
    if inv_residual > 1e-12 {
        return Err(Error::Invariant(format!(
            "N(lambda) differs from inverse of D(lambda): residual {inv_residual:.3e}"
        )));
    }

    // rank-nullity: dim graph = sol_dim - dim{f : f_B = 0, conormal f = 0}
    let mut stacked = DMatrix::<f64>::zeros(2 * model.n_boundary(), sol.dim());
    stacked
        .view_mut((0, 0), (model.n_boundary(), sol.dim()))
        .copy_from(&traces);
    stacked
        .view_mut((model.n_boundary(), 0), (model.n_boundary(), sol.dim()))
        .copy_from(&conormals);
    let invisible = linalg::nullspace(&stacked, DEFAULT_TOL).ncols();
    if d.graph_dim() != n.graph_dim() || d.graph_dim() != sol.dim() - invisible {
        return Err(Error::Invariant(format!(
            "graph dimension {} inconsistent with solution dimension {} minus invisible {}",
            d.graph_dim(),
            sol.dim(),
            invisible
        )));
    }

    // kernel/multivalued-part exchange between D and N
    let ker_mul = d.ker().distance(&n.mul())?;
    let mul_ker = d.mul().distance(&n.ker())?;
    if ker_mul > 1e-10 || mul_ker > 1e-10 {
        return Err(Error::Invariant(format!(
            "kernel/mul exchange violated: {ker_mul:.3e}, {mul_ker:.3e}"
        )));
    }

    // warm the eigendata caches used by downstream checks
    let _ = model.a_d_eigenvalues();
    let _ = model.a_n_eigenvalues()?;

    Ok(BoundaryMapBundle {
        lambda,
        d,
        n,
        gamma_d,
        gamma_n,
        sol_dim: sol.dim(),
    })
}

/// Quadratic form `(N(lambda) phi, phi)` for `phi` in the domain of
/// `N(lambda)`, evaluated through the fast path (`lambda` must be off the
/// Dirichlet and Neumann spectra).
pub fn ntd_quadratic_form(model: &DiscreteModel, lambda: f64, phi: &DVector<f64>) -> Result<f64> {
    let d = dtn_matrix(model, lambda)?;
    let lu = d.lu();
    let x = lu.solve(phi).ok_or(Error::EigenvalueProximity {
        lambda,
        nearest: f64::NAN,
    })?;
    Ok(x.dot(phi))
}

/// Quadratic form `(D(lambda) phi, phi)`.
pub fn dtn_quadratic_form(model: &DiscreteModel, lambda: f64, phi: &DVector<f64>) -> Result<f64> {
    let d = dtn_matrix(model, lambda)?;
    Ok((&d * phi).dot(phi))
}

/// The unique interior solution with prescribed conormal data, orthogonal to
/// `ker(A_N - lambda)`; its squared norm is the derivative of
/// `lambda -> (N(lambda) phi, phi)`.
pub fn solution_for_conormal(
    model: &DiscreteModel,
    lambda: f64,
    phi: &DVector<f64>,
    zero_tol: f64,
) -> Result<DVector<f64>> {
    let sol = solution_space(model, lambda);
    let (_, conormals, interiors) = solution_blocks(model, sol.basis());
    let svd = conormals.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let coeff = svd
        .solve(phi, DEFAULT_TOL * smax.max(1.0))
        .map_err(|e| Error::Invariant(format!("conormal solve failed: {e}")))?;
    let residual = (&conormals * &coeff - phi).norm();
    if residual > 1e-8 * (1.0 + phi.norm()) {
        return Err(Error::Invariant(format!(
            "conormal datum not attainable at lambda={lambda}: residual {residual:.3e}"
        )));
    }
    let f_i = &interiors * &coeff;
    let kernel = model.neumann_kernel(lambda, zero_tol)?;
    Ok(&f_i - kernel.basis() * (kernel.basis().adjoint() * &f_i))
}

/// The unique interior solution with prescribed trace data, orthogonal to
/// `ker(A_D - lambda)`; its squared norm is minus the derivative of
/// `lambda -> (D(lambda) phi, phi)`.
pub fn solution_for_trace(
    model: &DiscreteModel,
    lambda: f64,
    phi: &DVector<f64>,
    zero_tol: f64,
) -> Result<DVector<f64>> {
    let sol = solution_space(model, lambda);
    let (traces, _, interiors) = solution_blocks(model, sol.basis());
    let svd = traces.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let coeff = svd
        .solve(phi, DEFAULT_TOL * smax.max(1.0))
        .map_err(|e| Error::Invariant(format!("trace solve failed: {e}")))?;
    let residual = (&traces * &coeff - phi).norm();
    if residual > 1e-8 * (1.0 + phi.norm()) {
        return Err(Error::Invariant(format!(
            "trace datum not attainable at lambda={lambda}: residual {residual:.3e}"
        )));
    }
    let f_i = &interiors * &coeff;
    let kernel = model.dirichlet_kernel(lambda, zero_tol);
    Ok(&f_i - kernel.basis() * (kernel.basis().adjoint() * &f_i))
}
