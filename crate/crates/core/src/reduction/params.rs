use serde::Serialize;

use super::WoptInstance;
use crate::bloch::sep_set_geometry;
use crate::{Error, Result};

/// Margin for the weak membership problem together with the inputs it was
/// computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WmemParams {
    pub beta: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub m: usize,
    pub epsilon: f64,
}

/// `β = r³ε³ / (2¹³ · 3³ · m⁵ · R⁴ · (R + r))`.
pub fn beta_formula(r: f64, big_r: f64, m: usize, epsilon: f64) -> f64 {
    let m = m as f64;
    let m5 = m * m * m * m * m;
    let r2 = big_r * big_r;
    let num = (r * r * r) * (epsilon * epsilon * epsilon);
    num / (8192.0 * 27.0 * m5 * (r2 * r2) * (big_r + r))
}

pub fn wopt_to_wmem_params(w: &WoptInstance) -> Result<WmemParams> {
    if !(w.epsilon > 0.0 && w.epsilon < 1.0) {
        return Err(Error::validation(format!("ε = {} outside (0, 1)", w.epsilon)));
    }
    let geo = sep_set_geometry(w.m_dim, w.n_dim)?;
    let beta = beta_formula(geo.inner_radius, geo.outer_radius, geo.m, w.epsilon);
    if !(beta > 0.0 && beta < w.epsilon) {
        return Err(Error::NumericIntegrity(format!("β = {beta:e} not in (0, ε)")));
    }
    Ok(WmemParams {
        beta,
        inner_radius: geo.inner_radius,
        outer_radius: geo.outer_radius,
        m: geo.m,
        epsilon: w.epsilon,
    })
}
