use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{OptimizerConfig, SphereOptResult};
use crate::graphs::{maximum_clique, Graph};
use crate::random::{rng_for, random_simplex_point};
use crate::{Error, Result};

pub const MAX_SIMPLEX_VERTICES: usize = 20;

/// `½ (1 - 1/ω)`.
pub fn motzkin_straus_closed_form(omega: usize) -> f64 {
    0.5 * (1.0 - 1.0 / omega as f64)
}

fn edge_form(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    0.5 * x.dot(&(a * x))
}

struct Run {
    value: f64,
    x: DVector<f64>,
    converged: bool,
}

/// Replicator iteration `x_i <- x_i (Ax)_i / xᵀAx`, which never decreases the
/// edge form on the simplex.
fn replicator(a: &DMatrix<f64>, mut x: DVector<f64>, cfg: &OptimizerConfig) -> Run {
    let mut value = edge_form(a, &x);
    for _ in 0..cfg.max_iters {
        let ax = a * &x;
        let q = x.dot(&ax);
        if q <= 0.0 {
            return Run { value, x, converged: true };
        }
        let next = x.component_mul(&ax) / q;
        let next_value = edge_form(a, &next);
        let gain = next_value - value;
        x = next;
        value = next_value;
        if gain < cfg.tol {
            return Run { value, x, converged: true };
        }
    }
    Run { value, x, converged: false }
}

/// Maximum of `Σ_{(i,j)∈G} x_i x_j` over the probability simplex.
///
/// The uniform point on a maximum clique is always among the starts, next to
/// the barycenter and `cfg.restarts` random simplex points.
pub fn motzkin_straus_max(g: &Graph, cfg: &OptimizerConfig) -> Result<SphereOptResult> {
    let n = g.n();
    if n == 0 {
        return Err(Error::validation("graph has no vertices"));
    }
    if n > MAX_SIMPLEX_VERTICES {
        return Err(Error::Budget(format!("{n} vertices exceeds {MAX_SIMPLEX_VERTICES}")));
    }
    let clique = maximum_clique(g)?;
    let omega = clique.len();
    let a = g.adjacency_matrix();

    let mut seed = DVector::zeros(n);
    for &v in &clique {
        seed[v] = 1.0 / omega as f64;
    }
    let seeded = replicator(&a, seed, cfg);

    let runs: Vec<Run> = (0..=cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                DVector::from_element(n, 1.0 / n as f64)
            } else {
                random_simplex_point(n, &mut rng_for(cfg.seed, i as u64))
            };
            replicator(&a, start, cfg)
        })
        .collect();
    let unseeded = runs.into_iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one run");
    let unseeded_value = unseeded.value;
    let best = if seeded.value >= unseeded.value { seeded } else { unseeded };
    let value = edge_form(&a, &best.x);
    Ok(SphereOptResult {
        value,
        x: best.x.iter().copied().collect(),
        restarts_used: cfg.restarts + 2,
        converged: best.converged,
        certified: Some(motzkin_straus_closed_form(omega)),
        unseeded_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let cfg = OptimizerConfig::default();
        let k3 = motzkin_straus_max(&Graph::complete(3), &cfg).unwrap();
        assert!((k3.value - 1.0 / 3.0).abs() < 1e-12);
        let edge = motzkin_straus_max(&Graph::complete(2), &cfg).unwrap();
        assert!((edge.value - 0.25).abs() < 1e-12);
        let empty = motzkin_straus_max(&Graph::empty(4), &cfg).unwrap();
        assert_eq!(empty.value, 0.0);
        assert!(empty.converged);
    }

    #[test]
    fn random_starts_reach_optimum_on_path() {
        let r = motzkin_straus_max(&Graph::path(5), &OptimizerConfig::default()).unwrap();
        assert!((r.unseeded_value - 0.25).abs() < 1e-6);
    }
}
