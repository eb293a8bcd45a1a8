//! Dense linear-algebra helpers: sorted symmetric eigendecompositions and
//! PSD projection on nalgebra, thin SVD on faer, numerical rank.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::scalar::Real;

/// Default relative tolerance for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-9;

pub fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let half = T::lit(0.5);
    (m + m.transpose()) * half
}

/// Symmetric eigendecomposition with eigenvalues sorted in decreasing order.
/// The input is symmetrized first.
pub fn sym_eigen<T: Real>(m: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Frobenius-nearest PSD matrix: drop the negative part of the spectrum.
pub fn project_psd_dense<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let n = m.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, m[(0, 0)].max(T::zero()));
    }
    if is_diagonal(m) {
        return DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                m[(i, i)].max(T::zero())
            } else {
                T::zero()
            }
        });
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut out = DMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > T::zero() {
            let q = eig.eigenvectors.column(k);
            out.ger(lambda, &q, &q, T::one());
        }
    }
    out
}

pub fn is_diagonal<T: Real>(m: &DMatrix<T>) -> bool {
    m.iter()
        .enumerate()
        .all(|(k, v)| k % m.nrows() == k / m.nrows() || *v == T::zero())
}

/// Thin SVD `m = U diag(s) Vᵀ` with singular values in decreasing order.
pub struct ThinSvd<T: Real> {
    pub u: DMatrix<T>,
    pub singular_values: DVector<T>,
    pub v: DMatrix<T>,
}

/// Computed in `f64` by faer. nalgebra's bidiagonal SVD occasionally
/// returns factors that do not reconstruct the input (errors near 1e-3 on
/// some rank-deficient inputs), which breaks every range computation built
/// on top of it.
pub fn thin_svd<T: Real>(m: &DMatrix<T>) -> ThinSvd<T> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return ThinSvd {
            u: DMatrix::zeros(rows, 0),
            singular_values: DVector::zeros(0),
            v: DMatrix::zeros(cols, 0),
        };
    }
    let a = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)].as_f64());
    let svd = a.thin_svd().expect("SVD of a finite matrix");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal));
    ThinSvd {
        u: DMatrix::from_fn(rows, k, |i, c| T::lit(u[(i, order[c])])),
        singular_values: DVector::from_iterator(k, order.iter().map(|&i| T::lit(s[i]))),
        v: DMatrix::from_fn(cols, k, |i, c| T::lit(v[(i, order[c])])),
    }
}

/// Number of values (sorted decreasingly) above `rel_tol` times the largest.
pub fn numerical_rank<T: Real>(sorted_values: &[T], rel_tol: f64) -> usize {
    let Some(&top) = sorted_values.first() else {
        return 0;
    };
    if top <= T::zero() {
        return 0;
    }
    let cut = top * T::lit(rel_tol);
    sorted_values.iter().take_while(|&&s| s > cut).count()
}

/// Orthonormal basis (as columns) of the column span of `cols`.
pub fn orthonormal_range<T: Real>(cols: &DMatrix<T>, rel_tol: f64) -> DMatrix<T> {
    let svd = thin_svd(cols);
    let r = numerical_rank(svd.singular_values.as_slice(), rel_tol);
    svd.u.columns(0, r).into_owned()
}

/// Stack vectors as the columns of a matrix.
pub fn columns<T: Real>(dim: usize, vectors: &[DVector<T>]) -> DMatrix<T> {
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        m.set_column(k, v);
    }
    m
}

pub fn max_abs<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}
