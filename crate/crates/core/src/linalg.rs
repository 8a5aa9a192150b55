//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted in
/// ascending order (columns of the returned matrix follow the same order).
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let sym = symmetrize(m);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vecs = DMatrix::zeros(n, n);
    for (j, &k) in order.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    sym_eigen(m).0[0]
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues set to zero).
pub fn psd_clip(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen(m);
    let clipped = vals.map(|v| v.max(0.0));
    &vecs * DMatrix::from_diagonal(&clipped) * vecs.transpose()
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values strictly above `tol * sigma_max`.
pub fn numerical_rank(singular: &[f64], tol: f64) -> usize {
    let smax = singular.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular.iter().filter(|&&s| s > tol * smax).count()
}

/// Singular values (descending, length `min(rows, cols)`) and the complete
/// `cols x cols` orthogonal matrix of right singular vectors.
pub fn right_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (r, c) = a.shape();
    if c == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // Zero rows leave V unchanged and make the thin SVD return all of it.
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let v = DMatrix::from_fn(c, c, |i, j| vt[(order[j], i)]);
    let s = order.iter().take(r.min(c)).map(|&j| svd.singular_values[j]).collect();
    (s, v)
}

/// Orthonormal basis of the null space of `a` (columns), using the relative
/// singular-value threshold `tol`.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (s, v) = right_svd(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > tol * smax.max(f64::MIN_POSITIVE)).count();
    let c = a.ncols();
    v.columns(rank, c - rank).into_owned()
}

/// Least-squares solution of `a x = b` via SVD with relative cutoff `tol`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    if a.nrows() == 0 {
        return DVector::zeros(a.ncols());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(b, tol * smax.max(f64::MIN_POSITIVE))
        .expect("both factors were computed")
}

/// Frobenius inner product `<A, B> = Tr(A^T B)`.
pub fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_null_space() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0]);
        let (s, v) = right_svd(&a);
        assert_eq!(s.len(), 2);
        assert!((v.transpose() * &v - DMatrix::identity(3, 3)).norm() < 1e-12);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 1);
        assert!((&a * ns).norm() < 1e-12);
    }

    #[test]
    fn tall_null_space() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 0.0, 0.0]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 1);
        assert!((&a * ns).norm() < 1e-12);
    }

    #[test]
    fn rank_and_clip() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(psd_clip(&m), DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(numerical_rank(&[1.0, 1e-7, 1e-5], 1e-6), 2);
        assert_eq!(numerical_rank(&[0.0], 1e-6), 0);
    }
}
