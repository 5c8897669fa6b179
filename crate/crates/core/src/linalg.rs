//! Dense complex linear algebra on bipartite spaces.
//!
//! Bipartite operators on `C^da ⊗ C^db` use the row index `i * db + j` for the
//! basis vector `|i⟩ ⊗ |j⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest deviation of `m` from Hermiticity, entrywise.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Largest eigenvalue and a unit eigenvector for it.
pub fn top_eigenpair(m: &CMatrix) -> (f64, CVector) {
    let eig = hermitian_part(m).symmetric_eigen();
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// Traces out the first factor of `C^da ⊗ C^db`, leaving a `db × db` operator.
pub fn partial_trace_first(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), da * db);
    let mut out = CMatrix::zeros(db, db);
    for i in 0..da {
        for j in 0..db {
            for jp in 0..db {
                out[(j, jp)] += m[(i * db + j, i * db + jp)];
            }
        }
    }
    out
}

/// Traces out the second factor of `C^da ⊗ C^db`, leaving a `da × da` operator.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), da * db);
    let mut out = CMatrix::zeros(da, da);
    for i in 0..da {
        for ip in 0..da {
            let mut acc = ZERO;
            for j in 0..db {
                acc += m[(i * db + j, ip * db + j)];
            }
            out[(i, ip)] = acc;
        }
    }
    out
}

/// Transposes the second tensor factor.
pub fn partial_transpose_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), da * db);
    let mut out = CMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for ip in 0..da {
            for j in 0..db {
                for jp in 0..db {
                    out[(i * db + j, ip * db + jp)] = m[(i * db + jp, ip * db + j)];
                }
            }
        }
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `|v⟩⟨v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Expectation value `⟨v|m|v⟩` (real part; `m` is assumed Hermitian).
pub fn expectation(m: &CMatrix, v: &CVector) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

/// Matrix unit `|row⟩⟨col|` of size `d × d`.
pub fn matrix_unit(d: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(row, col)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> CMatrix {
        let s = 0.5_f64.sqrt();
        let v = CVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        outer(&v)
    }

    #[test]
    fn partial_traces_of_bell_state_are_maximally_mixed() {
        let rho = bell();
        let half = CMatrix::identity(2, 2) * c(0.5, 0.0);
        assert!(max_abs_diff(&partial_trace_first(&rho, 2, 2), &half) < 1e-15);
        assert!(max_abs_diff(&partial_trace_second(&rho, 2, 2), &half) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_state_has_negative_half() {
        let pt = partial_transpose_second(&bell(), 2, 2);
        let eig = hermitian_eigenvalues(&pt);
        assert!((eig[0] + 0.5).abs() < 1e-12);
        assert!((eig[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_respects_product_structure() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let b = CMatrix::from_fn(3, 3, |i, j| c((i * j) as f64 + 1.0, 0.0));
        let ab = kron(&a, &b);
        let tb = trace(&b);
        let ta = trace(&a);
        assert!(max_abs_diff(&partial_trace_second(&ab, 2, 3), &(&a * tb)) < 1e-12);
        assert!(max_abs_diff(&partial_trace_first(&ab, 2, 3), &(&b * ta)) < 1e-12);
    }

    #[test]
    fn eigen_is_sorted_and_reconstructs() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(i as f64, 0.0)
            } else if i < j {
                c(0.3, 0.1 * (i + j) as f64)
            } else {
                c(0.3, -0.1 * (i + j) as f64)
            }
        });
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(3, vals.iter().map(|&x| c(x, 0.0))));
        let back = &vecs * diag * vecs.adjoint();
        assert!(max_abs_diff(&back, &m) < 1e-12);
    }
}
