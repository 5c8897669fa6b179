//! Seeded random states, channels and graphs for property checks.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix, CVector, C64};
use crate::operator::HermitianOperator;

/// Deterministic generator for `(seed, stream)`; streams keep parallel
/// restarts reproducible regardless of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `C^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian_complex(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Uniform unit vector in `R^d`.
pub fn random_real_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = v.norm();
    v / norm
}

/// Uniform point of the probability simplex.
pub fn random_simplex_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    let v = DVector::from_fn(d, |_, _| -(1.0 - rng.random::<f64>()).ln());
    let s = v.sum();
    v / s
}

/// Induced-measure random state `G G† / Tr(G G†)` with `G` a `d × rank`
/// Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian_complex(rng));
    let rho = &g * g.adjoint();
    HermitianOperator::from_hermitian_part(&rho).normalized().expect("non-zero Ginibre matrix")
}

pub fn random_pure_product<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> HermitianOperator {
    let a = random_unit_vector(m, rng);
    let b = random_unit_vector(n, rng);
    HermitianOperator::pure(&linalg::kron_vec(&a, &b))
}

/// Convex mixture of `terms` random pure product states with simplex weights.
pub fn random_separable<R: Rng + ?Sized>(m: usize, n: usize, terms: usize, rng: &mut R) -> HermitianOperator {
    let weights = random_simplex_point(terms, rng);
    let mut acc = CMatrix::zeros(m * n, m * n);
    for w in weights.iter() {
        acc += random_pure_product(m, n, rng).matrix() * C64::new(*w, 0.0);
    }
    HermitianOperator::from_hermitian_part(&acc)
}

/// Kraus operators `K_s: C^n -> C^m` of a random trace-preserving channel,
/// obtained by slicing a random isometry `C^n -> C^{count·m}`.
pub fn random_kraus_tp<R: Rng + ?Sized>(m: usize, n: usize, count: usize, rng: &mut R) -> Vec<CMatrix> {
    assert!(count * m >= n, "need count * m >= n for an isometry");
    let g = CMatrix::from_fn(count * m, n, |_, _| gaussian_complex(rng));
    let q = g.qr().q();
    (0..count).map(|s| q.rows(s * m, m).into_owned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_isometry_is_trace_preserving() {
        let mut rng = rng_for(3, 0);
        let ks = random_kraus_tp(3, 2, 4, &mut rng);
        let sum = ks.iter().fold(CMatrix::zeros(2, 2), |acc, k| acc + k.adjoint() * k);
        assert!(linalg::max_abs_diff(&sum, &CMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn states_are_states() {
        let mut rng = rng_for(5, 1);
        for rank in 1..5 {
            assert!(random_density(4, rank, &mut rng).is_state());
        }
        assert!(random_separable(2, 3, 5, &mut rng).is_state());
    }

    #[test]
    fn streams_are_reproducible() {
        let a: f64 = rng_for(9, 4).random();
        let b: f64 = rng_for(9, 4).random();
        let c: f64 = rng_for(9, 5).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
