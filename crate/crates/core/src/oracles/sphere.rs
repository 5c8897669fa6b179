use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::OptimizerConfig;
use crate::graphs::{maximum_clique, Graph};
use crate::random::{random_real_unit_vector, rng_for};
use crate::reduction::gadget_matrices;
use crate::{Error, Result};

pub const MAX_SPHERE_SIDE: usize = 30;

/// Outcome of a multistart maximization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereOptResult {
    /// Objective re-evaluated at `x`.
    pub value: f64,
    pub x: Vec<f64>,
    pub restarts_used: usize,
    pub converged: bool,
    /// Closed-form optimum when the instance comes from a graph.
    pub certified: Option<f64>,
    /// Best value among random and generic starts only.
    pub unseeded_value: f64,
}

/// Symmetric matrix stored as upper-triangular triplets, with off-diagonal
/// weights doubled so that `xᵀBx = Σ w x_i x_j`.
struct SparseSym {
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    fn new(b: &DMatrix<f64>) -> Self {
        let mut entries = Vec::new();
        for i in 0..b.nrows() {
            for j in i..b.ncols() {
                let v = b[(i, j)];
                if v != 0.0 {
                    entries.push((i, j, if i == j { v } else { 2.0 * v }));
                }
            }
        }
        Self { entries }
    }

    fn form(&self, x: &DVector<f64>) -> f64 {
        self.entries.iter().map(|&(i, j, w)| w * x[i] * x[j]).sum()
    }

    /// `acc += scale · B x`.
    fn add_mul(&self, x: &DVector<f64>, scale: f64, acc: &mut DVector<f64>) {
        for &(i, j, w) in &self.entries {
            if i == j {
                acc[i] += scale * w * x[i];
            } else {
                acc[i] += scale * 0.5 * w * x[j];
                acc[j] += scale * 0.5 * w * x[i];
            }
        }
    }
}

struct Objective {
    parts: Vec<SparseSym>,
    l: usize,
}

impl Objective {
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.parts.iter().map(|b| b.form(x).powi(2)).sum()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut grad = DVector::zeros(self.l);
        for b in &self.parts {
            let q = b.form(x);
            if q != 0.0 {
                b.add_mul(x, 4.0 * q, &mut grad);
            }
        }
        grad
    }
}

struct Run {
    value: f64,
    x: DVector<f64>,
    converged: bool,
}

/// Projected gradient ascent with an Armijo backtracking step: the tangent
/// gradient step is renormalized onto the sphere and accepted once it gains
/// a fixed fraction of the first-order prediction.
fn ascend(obj: &Objective, mut x: DVector<f64>, cfg: &OptimizerConfig) -> Run {
    let mut value = obj.value(&x);
    let mut step = 1.0;
    for _ in 0..cfg.max_iters {
        let grad = obj.gradient(&x);
        let tangent = &grad - &x * grad.dot(&x);
        let slope = tangent.norm_squared();
        if slope < 1e-30 {
            return Run { value, x, converged: true };
        }
        let mut accepted = None;
        let mut t = step * 2.0;
        for _ in 0..80 {
            let trial = (&x + &tangent * t).normalize();
            let v = obj.value(&trial);
            if v >= value + 1e-4 * t * slope {
                accepted = Some((trial, v, t));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, v, t)) = accepted else {
            return Run { value, x, converged: true };
        };
        step = t;
        let gain = v - value;
        x = trial;
        value = v;
        if gain < cfg.tol {
            return Run { value, x, converged: true };
        }
    }
    Run { value, x, converged: false }
}

/// `Σ_i (xᵀ B_i x)²` at `x`.
pub fn g_value(bs: &[DMatrix<f64>], x: &[f64]) -> f64 {
    let x = DVector::from_column_slice(x);
    bs.iter().map(|b| x.dot(&(b * &x)).powi(2)).sum()
}

/// Maximum of `Σ_i (xᵀ B_i x)²` over the unit sphere of `R^l`, starting from
/// every vector in `seeds` and from `cfg.restarts` uniform random points.
pub fn eval_g(bs: &[DMatrix<f64>], seeds: &[Vec<f64>], cfg: &OptimizerConfig) -> Result<SphereOptResult> {
    let l = bs.first().map(|b| b.nrows()).unwrap_or(0);
    if l == 0 {
        return Err(Error::validation("need at least one non-empty matrix"));
    }
    if l > MAX_SPHERE_SIDE {
        return Err(Error::Budget(format!("side {l} exceeds {MAX_SPHERE_SIDE}")));
    }
    if bs.iter().any(|b| b.nrows() != l || b.ncols() != l) {
        return Err(Error::validation("matrices must share one square shape"));
    }
    let obj = Objective { parts: bs.iter().map(SparseSym::new).collect(), l };

    let mut seeded: Option<Run> = None;
    for s in seeds {
        if s.len() != l {
            return Err(Error::DimensionMismatch { expected: l, got: s.len() });
        }
        let x = DVector::from_column_slice(s);
        let norm = x.norm();
        if norm == 0.0 {
            return Err(Error::validation("seed vector is zero"));
        }
        let run = ascend(&obj, x / norm, cfg);
        if seeded.as_ref().is_none_or(|b| run.value > b.value) {
            seeded = Some(run);
        }
    }

    let runs: Vec<Run> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|i| ascend(&obj, random_real_unit_vector(l, &mut rng_for(cfg.seed, i as u64)), cfg))
        .collect();
    let unseeded = runs.into_iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one run");
    let unseeded_value = unseeded.value;
    let best = match seeded {
        Some(s) if s.value >= unseeded.value => s,
        _ => unseeded,
    };
    Ok(SphereOptResult {
        value: obj.value(&best.x),
        x: best.x.iter().copied().collect(),
        restarts_used: cfg.restarts.max(1) + seeds.len(),
        converged: best.converged,
        certified: None,
        unseeded_value,
    })
}

/// `eval_g` for the gadget of a graph, seeded with the square-root lift of
/// the uniform point on a maximum clique and certified against
/// `2(1 - 1/ω)`.
pub fn eval_g_for_clique(g: &Graph, cfg: &OptimizerConfig) -> Result<SphereOptResult> {
    if g.n() < 2 {
        return Err(Error::validation("need at least two vertices"));
    }
    let clique = maximum_clique(g)?;
    let omega = clique.len() as f64;
    let mut seed = vec![0.0; g.n()];
    for &v in &clique {
        seed[v] = 1.0 / omega.sqrt();
    }
    let bs: Vec<DMatrix<f64>> = gadget_matrices(g).iter().map(|b| b.to_f64()).collect();
    let mut result = eval_g(&bs, &[seed], cfg)?;
    result.certified = Some(2.0 * (1.0 - 1.0 / omega));
    Ok(result)
}
