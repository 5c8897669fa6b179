use rayon::prelude::*;

use super::OptimizerConfig;
use crate::graphs::{maximum_clique, Graph};
use crate::linalg::{expectation, kron_vec, top_eigenpair, CMatrix, CVector, C64, ZERO};
use crate::operator::HermitianOperator;
use crate::random::{random_unit_vector, rng_for};
use crate::{Error, Result};

pub const MAX_SEESAW_DIM: usize = 256;

/// Best product vector `a ⊗ b` found for `⟨a⊗b|C|a⊗b⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateResult {
    pub value: f64,
    pub a: CVector,
    pub b: CVector,
    pub restarts_used: usize,
    pub converged: bool,
    pub unseeded_value: f64,
}

/// `Tr_B[C (I ⊗ |b⟩⟨b|)]`, an `M × M` operator.
fn reduce_on_b(c: &CMatrix, b: &CVector, m: usize, n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(m, m);
    for i in 0..m {
        for ip in 0..m {
            let mut acc = ZERO;
            for j in 0..n {
                let bj = b[j].conj();
                if bj == ZERO {
                    continue;
                }
                for jp in 0..n {
                    acc += bj * c[(i * n + j, ip * n + jp)] * b[jp];
                }
            }
            out[(i, ip)] = acc;
        }
    }
    out
}

/// `Tr_A[C (|a⟩⟨a| ⊗ I)]`, an `N × N` operator.
fn reduce_on_a(c: &CMatrix, a: &CVector, m: usize, n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for i in 0..m {
        let ai = a[i].conj();
        if ai == ZERO {
            continue;
        }
        for ip in 0..m {
            let w = ai * a[ip];
            if w == ZERO {
                continue;
            }
            for j in 0..n {
                for jp in 0..n {
                    out[(j, jp)] += w * c[(i * n + j, ip * n + jp)];
                }
            }
        }
    }
    out
}

struct Run {
    value: f64,
    a: CVector,
    b: CVector,
    converged: bool,
}

fn alternate(c: &CMatrix, m: usize, n: usize, mut b: CVector, cfg: &OptimizerConfig) -> Result<Run> {
    let (mut value, mut a) = top_eigenpair(&reduce_on_b(c, &b, m, n));
    let slack = 1e-10 * (1.0 + value.abs());
    for _ in 0..cfg.max_iters {
        let (vb, nb) = top_eigenpair(&reduce_on_a(c, &a, m, n));
        let (va, na) = top_eigenpair(&reduce_on_b(c, &nb, m, n));
        if vb < value - slack || va < vb - slack {
            return Err(Error::NumericIntegrity(format!(
                "alternating maximization decreased: {value} -> {vb} -> {va}"
            )));
        }
        let gain = va - value;
        b = nb;
        a = na;
        value = va;
        if gain < cfg.tol {
            return Ok(Run { value, a, b, converged: true });
        }
    }
    Ok(Run { value, a, b, converged: false })
}

/// Maximum of `⟨a⊗b|C|a⊗b⟩` over unit `a ∈ C^M`, `b ∈ C^N` by alternating
/// top-eigenvector updates. Each vector in `seeds` is used as a starting `b`.
pub fn seesaw_product_max(
    c: &HermitianOperator,
    m: usize,
    n: usize,
    seeds: &[CVector],
    cfg: &OptimizerConfig,
) -> Result<ProductStateResult> {
    if m == 0 || n == 0 || c.dim() != m * n {
        return Err(Error::DimensionMismatch { expected: m * n, got: c.dim() });
    }
    if m * n > MAX_SEESAW_DIM {
        return Err(Error::Budget(format!("dimension {} exceeds {MAX_SEESAW_DIM}", m * n)));
    }
    let cm = c.matrix();

    let mut seeded: Option<Run> = None;
    for s in seeds {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.len() });
        }
        let norm = s.norm();
        if norm == 0.0 {
            return Err(Error::validation("seed vector is zero"));
        }
        let run = alternate(cm, m, n, s / C64::new(norm, 0.0), cfg)?;
        if seeded.as_ref().is_none_or(|b| run.value > b.value) {
            seeded = Some(run);
        }
    }

    let runs = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|i| alternate(cm, m, n, random_unit_vector(n, &mut rng_for(cfg.seed, i as u64)), cfg))
        .collect::<Result<Vec<_>>>()?;
    let unseeded = runs.into_iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one run");
    let unseeded_value = unseeded.value;
    let best = match seeded {
        Some(s) if s.value >= unseeded.value => s,
        _ => unseeded,
    };
    let value = expectation(cm, &kron_vec(&best.a, &best.b));
    Ok(ProductStateResult {
        value,
        a: best.a,
        b: best.b,
        restarts_used: cfg.restarts.max(1) + seeds.len(),
        converged: best.converged,
        unseeded_value,
    })
}

/// `b` for a clique gadget: uniform amplitude `1/√ω` on a maximum clique of
/// `g`, zero on the padding coordinates of `C^N`.
pub fn clique_seed_vector(g: &Graph, n_dim: usize) -> Result<CVector> {
    if n_dim < g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: n_dim });
    }
    let clique = maximum_clique(g)?;
    let amp = 1.0 / (clique.len() as f64).sqrt();
    let mut b = CVector::zeros(n_dim);
    for &v in &clique {
        b[v] = C64::new(amp, 0.0);
    }
    Ok(b)
}
