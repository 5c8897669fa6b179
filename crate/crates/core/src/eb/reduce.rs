use serde::Serialize;

use crate::linalg::{hermitian_eigen, partial_trace_first, CMatrix, C64};
use crate::operator::{HermitianOperator, PSD_TOL};
use crate::{Error, Result};

/// Largest condition number `Υ` accepts for the reduced state.
pub const KAPPA_GUARD: f64 = 1e6;

/// `λ_max / λ_min`; infinite with `singular` set when `λ_min` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conditioning {
    pub kappa: f64,
    pub singular: bool,
}

pub fn condition_number(rho_b: &HermitianOperator) -> Result<Conditioning> {
    let values = rho_b.eigenvalues();
    let (min, max) = (values[0], values[values.len() - 1]);
    if min < -PSD_TOL * max.abs().max(1.0) {
        return Err(Error::validation(format!("operator is not PSD (eigenvalue {min:e})")));
    }
    if max <= 0.0 || min <= 1e-15 * max {
        return Ok(Conditioning { kappa: f64::INFINITY, singular: true });
    }
    Ok(Conditioning { kappa: max / min, singular: false })
}

/// `p = 1 - 1/N`.
pub fn marker_probability(n: usize) -> f64 {
    1.0 - 1.0 / n as f64
}

/// `(2N - 1)/(N - 1)`, the ceiling on `κ` of the reduced state after the
/// marker map.
pub fn kappa_bound(n: usize) -> f64 {
    let p = marker_probability(n);
    let n = n as f64;
    ((1.0 - p) + p / n) / (p / n)
}

/// `(1-p)|0⟩⟨0| ⊗ ρ + p|1⟩⟨1| ⊗ I/(MN)` on `C² ⊗ C^M ⊗ C^N`.
pub fn marker_map_phi(rho: &HermitianOperator, m: usize, n: usize) -> Result<HermitianOperator> {
    if rho.dim() != m * n {
        return Err(Error::DimensionMismatch { expected: m * n, got: rho.dim() });
    }
    if n < 2 {
        return Err(Error::validation("N must be at least 2"));
    }
    rho.require_state()?;
    let d = m * n;
    let p = marker_probability(n);
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (d, d)).copy_from(&(rho.matrix() * C64::new(1.0 - p, 0.0)));
    for k in 0..d {
        out[(d + k, d + k)] = C64::new(p / d as f64, 0.0);
    }
    Ok(HermitianOperator::from_hermitian_part(&out))
}

/// `(I ⊗ σ_B^{-1/2}) σ (I ⊗ σ_B^{-1/2})`, renormalized, for `σ` on
/// `C^{a_dim} ⊗ C^N`.
pub fn filter_map_upsilon(sigma: &HermitianOperator, a_dim: usize, n: usize) -> Result<HermitianOperator> {
    if sigma.dim() != a_dim * n {
        return Err(Error::DimensionMismatch { expected: a_dim * n, got: sigma.dim() });
    }
    let sigma_b = partial_trace_first(sigma.matrix(), a_dim, n);
    let (values, vectors) = hermitian_eigen(&sigma_b);
    let max = values[values.len() - 1];
    let min = values[0];
    if max <= 0.0 || min < 1e-12 * max {
        return Err(Error::Degenerate(format!("reduced state is rank deficient (λ_min = {min:e})")));
    }
    let kappa = max / min;
    if kappa > KAPPA_GUARD {
        return Err(Error::Degenerate(format!("reduced state has κ = {kappa:e} above {KAPPA_GUARD:e}")));
    }
    let mut inv_sqrt = CMatrix::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        let col = vectors.column(k);
        inv_sqrt += col * col.adjoint() * C64::new(1.0 / v.sqrt(), 0.0);
    }
    let mut filter = CMatrix::zeros(a_dim * n, a_dim * n);
    for a in 0..a_dim {
        filter.view_mut((a * n, a * n), (n, n)).copy_from(&inv_sqrt);
    }
    let out = &filter * sigma.matrix() * &filter;
    HermitianOperator::from_hermitian_part(&out).normalized()
}

/// `Υ(Φ(ρ))` on `(C² ⊗ C^M) ⊗ C^N`.
pub fn ebp_reduce(rho: &HermitianOperator, m: usize, n: usize) -> Result<HermitianOperator> {
    filter_map_upsilon(&marker_map_phi(rho, m, n)?, 2 * m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, CVector};
    use crate::oracles::ppt_test;
    use crate::random::{random_density, rng_for};

    #[test]
    fn kappa_examples() {
        assert_eq!(condition_number(&HermitianOperator::maximally_mixed(3)).unwrap().kappa, 1.0);
        let d = HermitianOperator::from_real(&nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            0.75, 0.25,
        ])))
        .unwrap();
        assert!((condition_number(&d).unwrap().kappa - 3.0).abs() < 1e-12);
        let s = condition_number(&HermitianOperator::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])));
        assert!(s.unwrap().singular);
        assert_eq!(kappa_bound(2), 3.0);
    }

    #[test]
    fn reduced_state_is_maximally_mixed() {
        let mut rng = rng_for(9, 0);
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            let rho = random_density(m * n, m * n, &mut rng);
            let out = ebp_reduce(&rho, m, n).unwrap();
            let target = CMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
            assert!(max_abs_diff(&partial_trace_first(out.matrix(), 2 * m, n), &target) < 1e-10);
        }
    }

    #[test]
    fn fixed_point_when_already_balanced() {
        let phi = marker_map_phi(&HermitianOperator::maximally_mixed(4), 2, 2).unwrap();
        let out = filter_map_upsilon(&phi, 4, 2).unwrap();
        assert!(out.max_abs_diff(&phi) < 1e-12);
    }

    #[test]
    fn bell_state_stays_npt() {
        let s = 1.0 / 2f64.sqrt();
        let bell = HermitianOperator::pure(&CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]));
        let out = ebp_reduce(&bell, 2, 2).unwrap();
        assert!(!ppt_test(&out, 4, 2).unwrap().passes);
    }
}
