//! Small dense linear-algebra helpers shared by the degeneracy code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Absolute drop tolerance for unit-normalized generators.
pub const DROP_TOL: f64 = 1e-10;

/// Rank-revealing modified Gram–Schmidt with one reorthogonalization pass.
///
/// Each candidate is normalized to unit length first; it is kept when the
/// norm of its component orthogonal to the current span exceeds `tol`.
pub fn extend_orthonormal(basis: &mut Vec<DVector<f64>>, candidate: &DVector<f64>, tol: f64) -> bool {
    let n0 = candidate.norm();
    if n0 == 0.0 {
        return false;
    }
    let mut v = candidate / n0;
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
    }
    let n = v.norm();
    if n <= tol {
        return false;
    }
    basis.push(v / n);
    true
}

pub fn orthonormalize<'a, I>(candidates: I, tol: f64) -> Vec<DVector<f64>>
where
    I: IntoIterator<Item = &'a DVector<f64>>,
{
    let mut basis = Vec::new();
    for c in candidates {
        extend_orthonormal(&mut basis, c, tol);
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `basis` in `ℝ^dim`.
pub fn complement(basis: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let mut all = basis.to_vec();
    let start = all.len();
    for i in 0..dim {
        let e = DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 });
        extend_orthonormal(&mut all, &e, 1e-8);
        if all.len() == dim {
            break;
        }
    }
    all.split_off(start)
}

/// Component of `v` orthogonal to the orthonormal family `basis`.
pub fn residual(v: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    let mut r = v.clone();
    for b in basis {
        let c = b.dot(&r);
        r.axpy(-c, b, 1.0);
    }
    r
}

/// Numerical rank from singular values, relative tolerance `rel_tol`.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Orthonormal basis (as columns) of the nullspace of `m`, of dimension
/// `ncols − rank`.
pub fn nullspace(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let r = rank(m, rel_tol);
    let gram = m.transpose() * m;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let cols: Vec<DVector<f64>> = order[..n - r]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}
