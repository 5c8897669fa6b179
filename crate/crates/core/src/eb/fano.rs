use nalgebra::DMatrix;

use crate::bloch::{self, GeneratorBasis};
use crate::linalg::{kron, partial_trace_first, partial_trace_second, CMatrix, C64};
use crate::operator::{HermitianOperator, TRACE_TOL};
use crate::{Error, Result};

/// Local Bloch vector `r^A` and correlation block `T` of a state whose
/// second marginal is maximally mixed.
#[derive(Debug, Clone, PartialEq)]
pub struct FanoVector {
    pub m_dim: usize,
    pub n_dim: usize,
    pub r_a: Vec<f64>,
    /// `(M² - 1) × (N² - 1)`.
    pub t: DMatrix<f64>,
}

impl FanoVector {
    /// `(M² - 1) N²`.
    pub fn len(&self) -> usize {
        self.r_a.len() + self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `r^A` followed by `T` row by row.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = self.r_a.clone();
        for i in 0..self.t.nrows() {
            out.extend(self.t.row(i).iter());
        }
        out
    }

    pub fn from_flat(m_dim: usize, n_dim: usize, v: &[f64]) -> Result<Self> {
        let (a, b) = (m_dim * m_dim - 1, n_dim * n_dim - 1);
        if v.len() != a * (b + 1) {
            return Err(Error::DimensionMismatch { expected: a * (b + 1), got: v.len() });
        }
        Ok(Self { m_dim, n_dim, r_a: v[..a].to_vec(), t: DMatrix::from_row_slice(a, b, &v[a..]) })
    }
}

fn bases(m: usize, n: usize) -> Result<(GeneratorBasis, GeneratorBasis)> {
    Ok((bloch::su_generators(m)?, bloch::su_generators(n)?))
}

/// `r^A_i = Tr((σ_i ⊗ I)ρ)` and `T_ij = Tr((σ_i ⊗ σ_j)ρ)`.
pub fn fano_encode(rho: &HermitianOperator, m: usize, n: usize) -> Result<FanoVector> {
    if rho.dim() != m * n {
        return Err(Error::DimensionMismatch { expected: m * n, got: rho.dim() });
    }
    let (basis_a, basis_b) = bases(m, n)?;
    let rm = rho.matrix();
    let reduced = partial_trace_first(rm, m, n);
    let target = CMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0);
    let defect = crate::linalg::max_abs_diff(&reduced, &target);
    if defect > TRACE_TOL {
        return Err(Error::validation(format!("second marginal differs from I/N by {defect:e}")));
    }
    let r_a = bloch::real_coords(&basis_a.coefficients(&partial_trace_second(rm, m, n))?)?;
    let mut t = DMatrix::zeros(basis_a.len(), basis_b.len());
    for i in 0..basis_a.len() {
        let s = basis_a.generator(i);
        let s = s.matrix();
        // Tr_A[(σ_i ⊗ I) ρ]
        let mut x = CMatrix::zeros(n, n);
        for a in 0..m {
            for ap in 0..m {
                let w = s[(a, ap)];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                x += rm.view((ap * n, a * n), (n, n)) * w;
            }
        }
        for (j, v) in bloch::real_coords(&basis_b.coefficients(&x)?)?.into_iter().enumerate() {
            t[(i, j)] = v;
        }
    }
    Ok(FanoVector { m_dim: m, n_dim: n, r_a, t })
}

/// `ρ = (1/MN)[I + (M/2) Σ r^A_i σ_i ⊗ I + (MN/4) Σ T_ij σ_i ⊗ σ_j]`.
pub fn fano_decode(v: &FanoVector) -> Result<HermitianOperator> {
    let (m, n) = (v.m_dim, v.n_dim);
    let (basis_a, basis_b) = bases(m, n)?;
    if v.r_a.len() != basis_a.len() || v.t.shape() != (basis_a.len(), basis_b.len()) {
        return Err(Error::DimensionMismatch { expected: basis_a.len() * n * n, got: v.len() });
    }
    let d = m * n;
    let mut rho = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    let local = basis_a.expand(&v.r_a)? * C64::new(0.5 / n as f64, 0.0);
    rho += kron(&local, &CMatrix::identity(n, n));
    for i in 0..basis_a.len() {
        let row: Vec<f64> = v.t.row(i).iter().copied().collect();
        if row.iter().all(|x| *x == 0.0) {
            continue;
        }
        let y = basis_b.expand(&row)? * C64::new(0.25, 0.0);
        rho += kron(basis_a.generator(i).matrix(), &y);
    }
    HermitianOperator::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eb::{ebp_reduce, ChoiOperator, KrausSet};
    use crate::random::{random_density, random_kraus_tp, rng_for};

    #[test]
    fn maximally_mixed_is_zero() {
        let v = fano_encode(&HermitianOperator::maximally_mixed(4), 2, 2).unwrap();
        assert_eq!(v.len(), 12);
        assert!(v.to_flat().iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn roundtrip_on_tp_choi_operators() {
        let mut rng = rng_for(11, 0);
        for (m, n) in [(2, 2), (3, 2), (2, 3)] {
            let set = KrausSet::new(random_kraus_tp(m, n, 3, &mut rng)).unwrap();
            let choi = ChoiOperator::from_kraus(&set).unwrap();
            let v = fano_encode(&choi.j, m, n).unwrap();
            assert_eq!(v.len(), (m * m - 1) * n * n);
            let back = fano_decode(&FanoVector::from_flat(m, n, &v.to_flat()).unwrap()).unwrap();
            assert!(back.max_abs_diff(&choi.j) < 1e-12);
        }
    }

    #[test]
    fn accepts_reduction_output_and_rejects_unbalanced_states() {
        let mut rng = rng_for(12, 0);
        let rho = random_density(4, 4, &mut rng);
        assert!(fano_encode(&rho, 2, 2).is_err());
        let out = ebp_reduce(&rho, 2, 2).unwrap();
        assert!(fano_encode(&out, 4, 2).is_ok());
    }
}
