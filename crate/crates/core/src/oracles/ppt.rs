use serde::Serialize;

use crate::bloch::{bloch_to_density, sep_set_geometry, BlochVector, GeneratorBasis};
use crate::graphs::Answer;
use crate::linalg::{min_eigenvalue, partial_transpose_second};
use crate::operator::{HermitianOperator, PSD_TOL};
use crate::{Error, Result};

use super::MembershipOracle;

pub const PPT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptVerdict {
    pub passes: bool,
    pub min_pt_eigenvalue: f64,
}

/// Minimum eigenvalue of `ρ^{T_B}`; passes iff it is at least `-PPT_TOL`.
pub fn ppt_test(rho: &HermitianOperator, m: usize, n: usize) -> Result<PptVerdict> {
    if rho.dim() != m * n {
        return Err(Error::DimensionMismatch { expected: m * n, got: rho.dim() });
    }
    rho.require_state()?;
    let min = min_eigenvalue(&partial_transpose_second(rho.matrix(), m, n));
    Ok(PptVerdict { passes: min >= -PPT_TOL, min_pt_eigenvalue: min })
}

fn exact_regime(m: usize, n: usize) -> bool {
    matches!((m, n), (2, 2) | (2, 3) | (3, 2))
}

/// Weak membership in the separable set for `(M, N)` where PPT decides
/// separability exactly. Points within `β` of the boundary may be answered
/// either way.
pub fn wmem_ppt_oracle(y: &BlochVector, beta: f64, m: usize, n: usize) -> Result<Answer> {
    PptOracle::new(m, n, beta)?.answer(y)
}

/// Membership oracle backed by the PPT test.
#[derive(Debug, Clone, Copy)]
pub struct PptOracle {
    m: usize,
    n: usize,
    beta: f64,
    outer_radius: f64,
    basis: GeneratorBasis,
}

impl PptOracle {
    pub fn new(m: usize, n: usize, beta: f64) -> Result<Self> {
        if !exact_regime(m, n) {
            return Err(Error::Unsupported(format!(
                "PPT decides separability only for (2,2), (2,3), (3,2); got ({m},{n})"
            )));
        }
        if !(beta > 0.0) {
            return Err(Error::validation("β must be positive"));
        }
        Ok(Self {
            m,
            n,
            beta,
            outer_radius: sep_set_geometry(m, n)?.outer_radius,
            basis: GeneratorBasis::structured(m * n)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn answer(&self, y: &BlochVector) -> Result<Answer> {
        if y.dim() != self.m * self.n {
            return Err(Error::DimensionMismatch { expected: self.m * self.n, got: y.dim() });
        }
        if y.norm() > self.outer_radius * (1.0 + 1e-12) {
            return Ok(Answer::No);
        }
        let rho = bloch_to_density(y, &self.basis)?;
        if rho.min_eigenvalue() < -PSD_TOL {
            return Ok(Answer::No);
        }
        let min = min_eigenvalue(&partial_transpose_second(rho.matrix(), self.m, self.n));
        Ok(if min >= -PPT_TOL { Answer::Yes } else { Answer::No })
    }
}

impl MembershipOracle for PptOracle {
    fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    fn contains(&self, y: &BlochVector) -> Result<bool> {
        Ok(self.answer(y)? == Answer::Yes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::density_to_bloch;
    use crate::linalg::{c, CVector};

    fn phi_plus() -> HermitianOperator {
        let s = 1.0 / 2f64.sqrt();
        HermitianOperator::pure(&CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]))
    }

    #[test]
    fn maximally_mixed_passes() {
        let v = ppt_test(&HermitianOperator::maximally_mixed(4), 2, 2).unwrap();
        assert!(v.passes);
        assert!((v.min_pt_eigenvalue - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bell_state_fails() {
        let v = ppt_test(&phi_plus(), 2, 2).unwrap();
        assert!(!v.passes);
        assert!((v.min_pt_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn oracle_answers() {
        let basis = GeneratorBasis::structured(4).unwrap();
        assert_eq!(wmem_ppt_oracle(&BlochVector::zeros(4), 0.05, 2, 2).unwrap(), Answer::Yes);
        let y = density_to_bloch(&phi_plus(), &basis).unwrap();
        assert_eq!(wmem_ppt_oracle(&y, 0.01, 2, 2).unwrap(), Answer::No);
        assert_eq!(wmem_ppt_oracle(&y.scaled(2.0), 0.01, 2, 2).unwrap(), Answer::No);
        assert!(matches!(wmem_ppt_oracle(&BlochVector::zeros(9), 0.01, 3, 3), Err(Error::Unsupported(_))));
    }
}
