//! Hermitian operators, the common currency for states, observables and
//! reduction gadgets.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix, CVector, C64};
use crate::{Error, Result};

/// Entrywise tolerance for `A = A†`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Tolerance for treating a matrix as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;

/// Tolerance on `Tr(ρ) = 1` for density operators.
pub const TRACE_TOL: f64 = 1e-10;

/// A square complex matrix equal to its own conjugate transpose.
///
/// Serialized as a row-major array of rows, each entry an `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Wraps `matrix`, rejecting it unless square and Hermitian within
    /// [`HERMITICITY_TOL`] per entry.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(Error::validation("operator must have positive dimension"));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITICITY_TOL {
            return Err(Error::validation(format!("matrix is not Hermitian (defect {defect:.3e})")));
        }
        Ok(Self { matrix: linalg::hermitian_part(&matrix) })
    }

    /// Hermitian part of a computed matrix. Used where rounding would otherwise
    /// leave a defect of a few ulps.
    pub fn from_hermitian_part(matrix: &CMatrix) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "square matrix required");
        Self { matrix: linalg::hermitian_part(matrix) }
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(linalg::real_to_complex(matrix))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0) }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &CVector) -> Self {
        let v = psi / C64::new(psi.norm(), 0.0);
        Self::from_hermitian_part(&linalg::outer(&v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Unit trace and positive semidefinite (within [`TRACE_TOL`] / [`PSD_TOL`]).
    pub fn is_state(&self) -> bool {
        (self.trace() - 1.0).abs() <= TRACE_TOL && self.min_eigenvalue() >= -PSD_TOL
    }

    /// Errors unless this is a density operator.
    pub fn require_state(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::validation(format!("not a state: trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::validation(format!("not a state: minimum eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Scales to unit trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.abs() < 1e-300 {
            return Err(Error::NumericIntegrity("cannot normalize a traceless operator".into()));
        }
        Ok(Self { matrix: &self.matrix / C64::new(tr, 0.0) })
    }

    /// Largest entrywise distance to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for HermitianOperator {
    type Error = Error;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
        Self::new(m)
    }
}

impl From<HermitianOperator> for Vec<Vec<[f64; 2]>> {
    fn from(op: HermitianOperator) -> Self {
        let n = op.dim();
        (0..n)
            .map(|i| (0..n).map(|j| [op.matrix[(i, j)].re, op.matrix[(i, j)].im]).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::Validation(_))));
    }

    #[test]
    fn json_is_row_major_re_im_pairs() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.0, 0.0)]);
        let op = HermitianOperator::new(m).unwrap();
        let text = serde_json::to_string(&op).unwrap();
        assert_eq!(text, "[[[1.0,0.0],[0.0,-0.5]],[[0.0,0.5],[0.0,0.0]]]");
        let back: HermitianOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, op);
        assert!(serde_json::from_str::<HermitianOperator>("[[[0,0],[1,0]],[[0,0],[0,0]]]").is_err());
    }

    #[test]
    fn maximally_mixed_is_a_state() {
        let rho = HermitianOperator::maximally_mixed(4);
        assert!(rho.is_state());
        assert!((rho.min_eigenvalue() - 0.25).abs() < 1e-15);
    }
}
