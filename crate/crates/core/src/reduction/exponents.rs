//! Log-domain evaluation of `β` for the worst-case clique gadget, used to read
//! off polynomial exponents without building any matrix.

use std::f64::consts::LN_2;

use serde::Serialize;

use super::sqrt_gap;
use crate::{Error, Result};

/// `⌈n/2⌉`, at least 2.
pub fn worst_case_clique_size(n: u64) -> u64 {
    n.div_ceil(2).max(2)
}

fn thresholds(c: u64) -> (f64, f64) {
    let c = c as f64;
    (2.0 - 1.0 / c - 1.0 / (c - 1.0), 1.0 / (c * (c - 1.0)))
}

fn pair_count(n: u64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

/// `ln ε` from the YES-side bound for dimension `d = MN`.
fn ln_epsilon(c: u64, c_hat_norm: f64, d: f64) -> f64 {
    let (zeta, eta) = thresholds(c);
    sqrt_gap(zeta, eta).ln() - (4.0 * c_hat_norm * (d - 1.0) + 1.0).ln()
}

/// `ln β` for total dimension `d` and `ln ε`.
fn ln_beta_from(d: f64, ln_eps: f64) -> f64 {
    let ln_r = 0.5 * (LN_2 - d.ln() - (d - 1.0).ln());
    let ln_big_r = 0.5 * (LN_2 + (-1.0 / d).ln_1p());
    let ln_m = 2.0 * d.ln() + (-1.0 / (d * d)).ln_1p();
    let sum = ln_big_r.exp() + ln_r.exp();
    3.0 * ln_r + 3.0 * ln_eps - 13.0 * LN_2 - 3.0 * 3f64.ln() - 5.0 * ln_m - 4.0 * ln_big_r - sum.ln()
}

/// Worst-case instance on `n` vertices: complete graph, `c = ⌈n/2⌉`,
/// `N = n(n-1)/2 + 1` and `M = m_dim` (defaults to `N`).
fn ln_beta_general(n: u64, m_dim: Option<f64>) -> f64 {
    let edges = pair_count(n);
    let n_dim = edges + 1.0;
    let m_dim = m_dim.unwrap_or(n_dim);
    let d = m_dim * n_dim;
    let c_hat_norm = (2.0 * edges).sqrt();
    ln_beta_from(d, ln_epsilon(worst_case_clique_size(n), c_hat_norm, d))
}

pub fn worst_case_ln_beta(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::validation("worst case needs n >= 3"));
    }
    Ok(ln_beta_general(n, None))
}

pub fn worst_case_epsilon(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::validation("worst case needs n >= 3"));
    }
    let n_dim = pair_count(n) + 1.0;
    Ok(ln_epsilon(worst_case_clique_size(n), (2.0 * pair_count(n)).sqrt(), n_dim * n_dim).exp())
}

fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::validation("need at least two sample points"));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::validation("sample points must be distinct"));
    }
    Ok(sxy / sxx)
}

fn check_increasing(values: &[u64], floor: u64) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::validation("need at least two sample points"));
    }
    if values.iter().any(|&v| v < floor) {
        return Err(Error::validation(format!("sample points must be >= {floor}")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("sample points must be strictly increasing"));
    }
    Ok(())
}

/// Least-squares slope of `ln β(n)` against `ln n` for the worst case.
pub fn hardness_exponents(n_values: &[u64]) -> Result<f64> {
    check_increasing(n_values, 10)?;
    let pts: Vec<_> = n_values.iter().map(|&n| ((n as f64).ln(), ln_beta_general(n, None))).collect();
    fit_slope(&pts)
}

/// `log₂(β(n) / β(2n))`.
pub fn log2_beta_ratio(n: u64) -> Result<f64> {
    if n < 10 {
        return Err(Error::validation("n must be >= 10"));
    }
    Ok((ln_beta_general(n, None) - ln_beta_general(2 * n, None)) / LN_2)
}

/// Slope of `ln β` in `ln M` at the fixed `N` of an `n`-vertex worst case.
pub fn m_slope(n: u64, m_values: &[u64]) -> Result<f64> {
    if n < 3 {
        return Err(Error::validation("need n >= 3"));
    }
    check_increasing(m_values, 2)?;
    if m_values.iter().any(|&m| (m as f64) < pair_count(n) + 1.0) {
        return Err(Error::validation("M must be at least k + 1"));
    }
    let pts: Vec<_> = m_values.iter().map(|&m| ((m as f64).ln(), ln_beta_general(n, Some(m as f64)))).collect();
    fit_slope(&pts)
}

/// Slope of `ln β` in `ln N` at fixed `M`, with `N` driven by the vertex count.
pub fn n_slope(m_dim: u64, n_values: &[u64]) -> Result<f64> {
    check_increasing(n_values, 3)?;
    if n_values.iter().any(|&n| pair_count(n) + 1.0 > m_dim as f64) {
        return Err(Error::validation("M must be at least k + 1 for every sample"));
    }
    let pts: Vec<_> = n_values
        .iter()
        .map(|&n| ((pair_count(n) + 1.0).ln(), ln_beta_general(n, Some(m_dim as f64))))
        .collect();
    fit_slope(&pts)
}

/// The three exponent readings at their reference scales.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub fitted_slope: f64,
    pub fit_points: Vec<u64>,
    pub log2_ratio_at: u64,
    pub log2_ratio: f64,
    pub m_slope: f64,
    pub n_slope: f64,
}

impl ExponentReport {
    pub fn reference() -> Result<Self> {
        let fit_points = vec![1_000, 2_000, 5_000, 10_000, 20_000];
        Ok(Self {
            fitted_slope: hardness_exponents(&fit_points)?,
            fit_points,
            log2_ratio_at: 10_000,
            log2_ratio: log2_beta_ratio(10_000)?,
            m_slope: m_slope(100, &[10_000, 20_000])?,
            n_slope: n_slope(1_000_000_000_000, &[10_000, 20_000])?,
        })
    }
}
