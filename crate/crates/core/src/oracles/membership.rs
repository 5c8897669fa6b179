use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bloch::{sep_set_geometry, BlochVector};
use crate::random::rng_for;
use crate::reduction::WoptInstance;
use crate::{Error, Result};

/// Membership queries for the separable set in Bloch coordinates.
/// Implementations must be safe to call from several threads.
pub trait MembershipOracle: Sync {
    fn dims(&self) -> (usize, usize);
    fn contains(&self, y: &BlochVector) -> Result<bool>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MembershipVerdict {
    Yes,
    No,
    Inconclusive,
}

/// One line of the query log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryRecord {
    pub query: usize,
    pub radius: f64,
    pub objective: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct MembershipBudget {
    pub max_queries: usize,
    /// The search stops once its step size falls below this.
    pub sigma_stop: f64,
    /// Width at which a bisection along a ray stops.
    pub bisection_tol: f64,
    pub seed: u64,
    pub record_log: bool,
}

impl Default for MembershipBudget {
    fn default() -> Self {
        Self { max_queries: 2_000_000, sigma_stop: 1e-5, bisection_tol: 1e-11, seed: 0, record_log: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipOutcome {
    pub verdict: MembershipVerdict,
    /// `cᵀy` at a point the oracle accepted.
    pub lower_bound: f64,
    /// Estimated upper bound on the maximum: the lower bound plus a residual
    /// scaled by the final search spread.
    pub upper_estimate: f64,
    pub queries: usize,
    pub generations: usize,
    pub log: Vec<QueryRecord>,
}

struct Session<'a> {
    oracle: &'a dyn MembershipOracle,
    c: DVector<f64>,
    /// Orthonormal basis of the complement of `c`, as columns.
    chart: DMatrix<f64>,
    dim: usize,
    inner: f64,
    outer: f64,
    tol: f64,
    queries: usize,
    record: bool,
    log: Vec<QueryRecord>,
}

impl Session<'_> {
    fn query(&mut self, y: DVector<f64>) -> Result<bool> {
        let radius = y.norm();
        let objective = self.c.dot(&y);
        let inside = self.oracle.contains(&BlochVector::new(self.dim, y.iter().copied().collect())?)?;
        if self.record {
            self.log.push(QueryRecord { query: self.queries, radius, objective, inside });
        }
        self.queries += 1;
        Ok(inside)
    }

    /// Largest accepted `t` with `t·u` in the set, `u` a unit vector. The
    /// inner ball makes `t = r` acceptable without a query.
    fn radial(&mut self, u: &DVector<f64>) -> Result<f64> {
        if self.query(u * self.outer)? {
            return Ok(self.outer);
        }
        let (mut lo, mut hi) = (self.inner, self.outer);
        while hi - lo > self.tol {
            let mid = 0.5 * (lo + hi);
            if self.query(u * mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// `cᵀy` at the accepted boundary point on the ray through `c + E z`.
    fn value(&mut self, z: &DVector<f64>) -> Result<f64> {
        let v = &self.c + &self.chart * z;
        let norm = v.norm();
        Ok(self.radial(&(v / norm))? / norm)
    }
}

/// Columns spanning the orthogonal complement of the unit vector `c`, from
/// the Householder reflection that maps `c` to the first basis vector.
fn complement_basis(c: &DVector<f64>) -> DMatrix<f64> {
    let m = c.len();
    let mut v = c.clone();
    if c[0] > 0.0 {
        v[0] -= 1.0;
    } else {
        v[0] += 1.0;
    }
    let vv = v.norm_squared();
    let h = DMatrix::identity(m, m) - &v * v.transpose() * (2.0 / vv);
    h.columns(1, m - 1).into_owned()
}

/// Decides the weak optimization instance `w` using membership queries only.
///
/// Points `z` of the hyperplane chart `c + E z` are scored by the objective
/// at the boundary point of their ray, located by bisection from the inner
/// ball. In this chart the reciprocal of the score is the gauge of the
/// separable set, a convex function, which a covariance-adapting evolution
/// strategy minimizes. The first evaluation is the line search along `c`.
pub fn wopt_via_membership(
    w: &WoptInstance,
    oracle: &dyn MembershipOracle,
    budget: &MembershipBudget,
) -> Result<MembershipOutcome> {
    if oracle.dims() != (w.m_dim, w.n_dim) {
        let (m, n) = oracle.dims();
        return Err(Error::DimensionMismatch { expected: w.m_dim * w.n_dim, got: m * n });
    }
    let geo = sep_set_geometry(w.m_dim, w.n_dim)?;
    let (yes_at, no_at) = (w.gamma + w.epsilon, w.gamma - w.epsilon);
    let c = DVector::from_column_slice(&w.c);
    let mut s = Session {
        oracle,
        chart: complement_basis(&c),
        c,
        dim: w.m_dim * w.n_dim,
        inner: geo.inner_radius,
        outer: geo.outer_radius,
        tol: budget.bisection_tol,
        queries: 0,
        record: budget.record_log,
        log: Vec::new(),
    };
    let done = |verdict, lower, upper, generations, s: Session| MembershipOutcome {
        verdict,
        lower_bound: lower,
        upper_estimate: upper,
        queries: s.queries,
        generations,
        log: s.log,
    };
    // Every state satisfies cᵀy <= ‖y‖ <= R; the inner ball is separable.
    if no_at >= geo.outer_radius {
        return Ok(done(MembershipVerdict::No, geo.inner_radius, geo.outer_radius, 0, s));
    }
    if yes_at <= geo.inner_radius {
        return Ok(done(MembershipVerdict::Yes, geo.inner_radius, geo.outer_radius, 0, s));
    }

    let n = w.c.len() - 1;
    let nf = n as f64;
    let lambda = 4 + (3.0 * nf.ln()).floor() as usize;
    let mu = lambda / 2;
    let raw: Vec<f64> = (0..mu).map(|i| (mu as f64 + 0.5).ln() - ((i + 1) as f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let mu_eff = 1.0 / weights.iter().map(|x| x * x).sum::<f64>();
    let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
    let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
    let c_1 = 2.0 / ((nf + 1.3).powi(2) + mu_eff);
    let c_mu = (1.0 - c_1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff));
    let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));

    let mut rng = rng_for(budget.seed, 0);
    let mut mean = DVector::zeros(n);
    let mut best = s.value(&mean)?;
    let mut sigma = 0.5;
    let mut cov = DMatrix::<f64>::identity(n, n);
    let mut p_sigma = DVector::zeros(n);
    let mut p_c = DVector::zeros(n);
    let mut generation = 0;
    let mut spread = sigma;

    let residual = |spread: f64| geo.outer_radius * geo.outer_radius / geo.inner_radius * spread;
    while best < yes_at && spread > budget.sigma_stop && s.queries < budget.max_queries {
        generation += 1;
        let eig = cov.clone().symmetric_eigen();
        let d = eig.eigenvalues.map(|x| x.max(1e-300).sqrt());
        let b = eig.eigenvectors;
        let mut scored = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let y = &b * z.component_mul(&d);
            let x = &mean + &y * sigma;
            let v = s.value(&x)?;
            best = best.max(v);
            scored.push((v, y));
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let y_w = scored.iter().take(mu).zip(&weights).fold(DVector::zeros(n), |acc, ((_, y), wt)| acc + y * *wt);
        mean += &y_w * sigma;

        let inv_sqrt = &b * DMatrix::from_diagonal(&d.map(|x| 1.0 / x)) * b.transpose();
        p_sigma = &p_sigma * (1.0 - c_sigma) + &inv_sqrt * &y_w * (c_sigma * (2.0 - c_sigma) * mu_eff).sqrt();
        let norm_ps = p_sigma.norm();
        let h_sigma = norm_ps / (1.0 - (1.0 - c_sigma).powi(2 * generation as i32)).sqrt()
            < (1.4 + 2.0 / (nf + 1.0)) * chi_n;
        let h = if h_sigma { 1.0 } else { 0.0 };
        p_c = &p_c * (1.0 - c_c) + &y_w * (h * (c_c * (2.0 - c_c) * mu_eff).sqrt());
        let rank_mu = scored
            .iter()
            .take(mu)
            .zip(&weights)
            .fold(DMatrix::zeros(n, n), |acc, ((_, y), wt)| acc + y * y.transpose() * *wt);
        cov = &cov * (1.0 - c_1 - c_mu)
            + (&p_c * p_c.transpose() + &cov * ((1.0 - h) * c_c * (2.0 - c_c))) * c_1
            + rank_mu * c_mu;
        cov = (&cov + cov.transpose()) * 0.5;
        sigma *= ((c_sigma / d_sigma) * (norm_ps / chi_n - 1.0)).exp();
        spread = sigma * eig.eigenvalues.max().max(0.0).sqrt();
    }

    let upper = (best + residual(spread)).min(geo.outer_radius);
    let verdict = if best >= yes_at {
        MembershipVerdict::Yes
    } else if spread <= budget.sigma_stop && upper <= no_at {
        MembershipVerdict::No
    } else {
        MembershipVerdict::Inconclusive
    };
    Ok(done(verdict, best, upper, generation, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Answer, CliqueInstance, Graph};
    use crate::oracles::PptOracle;
    use crate::reduction::clique_to_wopt;

    #[test]
    fn single_edge_instance_is_yes() {
        let (_, w) = clique_to_wopt(&CliqueInstance::new(Graph::complete(2), 2).unwrap(), None).unwrap();
        let oracle = PptOracle::new(2, 2, 1e-3).unwrap();
        let out = wopt_via_membership(&w, &oracle, &MembershipBudget::default()).unwrap();
        assert_eq!(out.verdict, MembershipVerdict::Yes);
        assert_eq!(w.verdict_for(0.5f64.sqrt()), Some(Answer::Yes));
        assert!(out.queries > 0);
    }

    #[test]
    fn threshold_beyond_outer_radius_is_no() {
        let (_, mut w) = clique_to_wopt(&CliqueInstance::new(Graph::complete(2), 2).unwrap(), None).unwrap();
        w.gamma = 2.0;
        let oracle = PptOracle::new(2, 2, 1e-3).unwrap();
        let out = wopt_via_membership(&w, &oracle, &MembershipBudget::default()).unwrap();
        assert_eq!(out.verdict, MembershipVerdict::No);
        assert_eq!(out.queries, 0);
    }
}
