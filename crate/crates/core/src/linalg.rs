//! Dense kernels shared by the relation calculus: rank-revealing
//! orthonormalization, Householder complements, nullspaces and symmetric
//! eigendecompositions.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Scalar;

/// Orthonormal basis of the column span of `a`.
///
/// Columns whose singular value is at most `tol * sigma_max` (or `tol` when
/// all singular values vanish) are discarded. A matrix with zero columns
/// yields an `n x 0` result.
pub fn canonicalize<T: Scalar>(a: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let n = a.nrows();
    if a.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let thr = if smax > 0.0 { tol * smax } else { tol };
    let rank = sigma.iter().filter(|&&s| s > thr).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the columns of `b`.
///
/// `b` must have orthonormal columns (the canonical form produced by
/// [`canonicalize`]); the complement is then exact to roundoff. Implemented
/// with Householder reflections so no rank decision is involved.
pub fn orthonormal_complement<T: Scalar>(b: &DMatrix<T>) -> DMatrix<T> {
    let n = b.nrows();
    let k = b.ncols();
    if k == 0 {
        return DMatrix::identity(n, n);
    }
    if k >= n {
        return DMatrix::zeros(n, 0);
    }

    // QR of b; reflectors are kept to build the trailing columns of Q.
    let mut r = b.clone();
    let mut reflectors: Vec<DVector<T>> = Vec::with_capacity(k);
    for j in 0..k {
        let m = n - j;
        let mut v = DVector::<T>::zeros(m);
        for i in 0..m {
            v[i] = r[(j + i, j)];
        }
        let norm_x = v.norm();
        let x0 = v[0];
        let sign: T = if x0.modulus() > 0.0 {
            x0 * T::from_real(1.0 / x0.modulus())
        } else {
            T::one()
        };
        let alpha = -sign * T::from_real(norm_x);
        v[0] -= alpha;
        let vn2 = v.norm_squared();
        if vn2 > 0.0 {
            let scale = T::from_real(2.0 / vn2);
            for c in (j + 1)..k {
                let mut w = T::zero();
                for i in 0..m {
                    w += v[i].conjugate() * r[(j + i, c)];
                }
                let f = w * scale;
                for i in 0..m {
                    let upd = v[i] * f;
                    r[(j + i, c)] -= upd;
                }
            }
        }
        reflectors.push(v);
    }

    // Q = H_1 ... H_k applied to the trailing identity columns.
    let mut comp = DMatrix::<T>::zeros(n, n - k);
    for c in 0..(n - k) {
        comp[(k + c, c)] = T::one();
    }
    for j in (0..k).rev() {
        let v = &reflectors[j];
        let vn2 = v.norm_squared();
        if vn2 == 0.0 {
            continue;
        }
        let scale = T::from_real(2.0 / vn2);
        let m = n - j;
        for c in 0..(n - k) {
            let mut w = T::zero();
            for i in 0..m {
                w += v[i].conjugate() * comp[(j + i, c)];
            }
            let f = w * scale;
            for i in 0..m {
                let upd = v[i] * f;
                comp[(j + i, c)] -= upd;
            }
        }
    }
    comp
}

/// Orthonormal basis of `{x : m x = 0}` with relative rank tolerance `tol`.
pub fn nullspace<T: Scalar>(m: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let row_span = canonicalize(&m.adjoint(), tol);
    orthonormal_complement(&row_span)
}

/// Largest singular value (0 for an empty matrix).
pub fn opnorm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
}

/// Fix the sign of each column so its first meaningfully nonzero entry is
/// positive (real part for complex scalars). Makes eigenvector output
/// reproducible across runs.
pub fn fix_column_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let maxabs = col.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        if maxabs == 0.0 {
            continue;
        }
        let lead = col.iter().find(|x| x.abs() > 1e-12 * maxabs).copied();
        if let Some(v) = lead {
            if v < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Eigenvalues and eigenvectors of a symmetric matrix, ascending, with the
/// column sign convention applied.
pub fn sym_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let se = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    fix_column_signs(&mut vectors);
    (values, vectors)
}

/// Eigenvalues of a symmetric matrix, ascending, without eigenvectors.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// Symmetry defect `||a - a^T||_max` relative to `||a||_max`.
pub fn symmetry_defect(a: &DMatrix<f64>) -> f64 {
    let mut defect = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            scale = scale.max(a[(i, j)].abs());
            if j > i {
                defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
    }
    if scale > 0.0 {
        defect / scale
    } else {
        0.0
    }
}
