//! Instance mappings CLIQUE → RSDF → WOPT(S_{M,N}) and the parameter layer
//! towards WMEM(S_{M,N}).
//!
//! Thresholds ζ, η, the squared norms Δ² and ‖ĉ‖², and the edge count are
//! carried as exact rationals. Quantities involving square roots (γ, ε, β)
//! are doubles.

mod exponents;
pub mod io;
mod params;
mod rational;

pub use exponents::{
    hardness_exponents, log2_beta_ratio, m_slope, n_slope, worst_case_clique_size, worst_case_epsilon,
    worst_case_ln_beta, ExponentReport,
};
pub use params::{beta_formula, wopt_to_wmem_params, WmemParams};
pub use rational::RationalMatrix;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Zero};

use crate::bloch::{self, BlochVector, GeneratorBasis, GeneratorKind};
use crate::graphs::{CliqueInstance, Graph};
use crate::linalg::{CMatrix, C64};
use crate::operator::HermitianOperator;
use crate::{Error, Result};

/// Robust semidefinite feasibility instance: symmetric `l × l` matrices
/// `B_1..B_k` and thresholds `ζ >= η >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RsdfInstance {
    l: usize,
    matrices: Vec<RationalMatrix>,
    zeta: Rational64,
    eta: Rational64,
}

impl RsdfInstance {
    pub fn new(l: usize, matrices: Vec<RationalMatrix>, zeta: Rational64, eta: Rational64) -> Result<Self> {
        if l == 0 {
            return Err(Error::validation("matrix side l must be positive"));
        }
        for (i, b) in matrices.iter().enumerate() {
            if b.side() != l {
                return Err(Error::validation(format!("B_{} has side {}, expected {l}", i + 1, b.side())));
            }
            if !b.is_symmetric() {
                return Err(Error::validation(format!("B_{} is not symmetric", i + 1)));
            }
        }
        if zeta < Rational64::zero() || eta < Rational64::zero() {
            return Err(Error::validation("thresholds must be non-negative"));
        }
        if zeta < eta {
            return Err(Error::validation("need ζ - η >= 0"));
        }
        Ok(Self { l, matrices, zeta, eta })
    }

    pub fn k(&self) -> usize {
        self.matrices.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    pub fn zeta(&self) -> Rational64 {
        self.zeta
    }

    pub fn eta(&self) -> Rational64 {
        self.eta
    }

    /// `Σ_i ‖B_i‖²`, exact.
    pub fn frobenius_sq_sum(&self) -> Result<Rational64> {
        self.matrices.iter().try_fold(Rational64::zero(), |acc, b| {
            acc.checked_add(&b.frobenius_sq()?).ok_or(Error::Overflow("Σ‖B_i‖²"))
        })
    }

    /// `Δ² = 2 Σ_i ‖B_i‖²`, exact.
    pub fn delta_sq(&self) -> Result<Rational64> {
        self.frobenius_sq_sum()?.checked_mul(&Rational64::from_integer(2)).ok_or(Error::Overflow("Δ²"))
    }

    pub fn delta(&self) -> Result<f64> {
        Ok(to_f64(self.delta_sq()?).sqrt())
    }

    /// The `B_i` as dense floating-point matrices.
    pub fn matrices_f64(&self) -> Vec<nalgebra::DMatrix<f64>> {
        self.matrices.iter().map(RationalMatrix::to_f64).collect()
    }
}

pub(crate) fn to_f64(q: Rational64) -> f64 {
    q.to_f64().expect("finite rational")
}

/// `ζ = 2 - 1/c - 1/(c-1)` and `η = 1/(c(c-1))`, so that `ζ + η = 2(1 - 1/c)`
/// and `ζ - η = 2(1 - 1/(c-1))` are the values of `g` at clique numbers `c`
/// and `c - 1`.
pub fn clique_thresholds(c: usize) -> Result<(Rational64, Rational64)> {
    if c < 2 {
        return Err(Error::Degenerate(format!("clique size {c} < 2 has no RSDF gadget")));
    }
    let c = c as i64;
    let one = Rational64::from_integer(1);
    let zeta = Rational64::from_integer(2) - Rational64::new(1, c) - Rational64::new(1, c - 1);
    let eta = one / Rational64::from_integer(c * (c - 1));
    Ok((zeta, eta))
}

/// One matrix per vertex pair `(s, t)`, `s < t` lexicographic, carrying the
/// adjacency entry at `(s, t)` and `(t, s)`.
pub fn gadget_matrices(g: &Graph) -> Vec<RationalMatrix> {
    let n = g.n();
    let mut matrices = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for s in 0..n {
        for t in (s + 1)..n {
            let mut b = RationalMatrix::zeros(n);
            if g.has_edge(s, t) {
                b.set(s, t, Rational64::from_integer(1));
                b.set(t, s, Rational64::from_integer(1));
            }
            matrices.push(b);
        }
    }
    matrices
}

pub fn clique_to_rsdf(inst: &CliqueInstance) -> Result<RsdfInstance> {
    let g = inst.graph();
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("edgeless graph: clique number is 1".into()));
    }
    let (zeta, eta) = clique_thresholds(inst.c())?;
    RsdfInstance::new(g.n(), gadget_matrices(g), zeta, eta)
}

/// The block matrix
///
/// ```text
///     | 0    A_1  ...  A_{M-1} |
/// C = | A_1  0    ...  0       |
///     | ...                    |
///     | A_{M-1} 0 ...  0       |
/// ```
///
/// acting on `C^M ⊗ C^N`, where `A_i` holds `B_i` in its upper-left corner and
/// the trailing `A_i` (padding) are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CGadget {
    pub m_dim: usize,
    pub n_dim: usize,
    pub matrix: HermitianOperator,
}

pub fn build_c_matrix(inst: &RsdfInstance, m_target: Option<usize>) -> Result<CGadget> {
    let k = inst.k();
    let l = inst.l();
    let n_dim = l * (l - 1) / 2 + 1;
    let m_dim = match m_target {
        Some(m) if m < k + 1 => {
            return Err(Error::validation(format!("M_target {m} below k + 1 = {}", k + 1)));
        }
        Some(m) => m,
        None => k + 1,
    };
    if m_dim < 2 || n_dim < 2 {
        return Err(Error::Degenerate(format!("gadget dimensions ({m_dim}, {n_dim}) below 2")));
    }
    let d = m_dim * n_dim;
    if d > bloch::MAX_STRUCTURED_DIM {
        return Err(Error::Budget(format!(
            "gadget dimension M·N = {d} exceeds {}",
            bloch::MAX_STRUCTURED_DIM
        )));
    }
    let mut c = CMatrix::zeros(d, d);
    for (i, b) in inst.matrices().iter().enumerate() {
        let block = (i + 1) * n_dim;
        for s in 0..l {
            for t in 0..l {
                let v = to_f64(b.get(s, t));
                if v != 0.0 {
                    c[(s, block + t)] = C64::new(v, 0.0);
                    c[(block + s, t)] = C64::new(v, 0.0);
                }
            }
        }
    }
    Ok(CGadget { m_dim, n_dim, matrix: HermitianOperator::new(c)? })
}

/// Exact companions of a WOPT instance built from an RSDF instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactLayer {
    pub zeta: Rational64,
    pub eta: Rational64,
    pub delta_sq: Rational64,
    pub c_hat_norm_sq: Rational64,
}

/// Weak optimization instance over the separable set in Bloch coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WoptInstance {
    pub m_dim: usize,
    pub n_dim: usize,
    /// Ambient dimension `M²N² - 1`.
    pub m: usize,
    pub c_hat: Vec<f64>,
    pub c: Vec<f64>,
    pub c_hat_norm: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c_matrix: Option<HermitianOperator>,
    pub exact: Option<ExactLayer>,
    pub edge_count: Option<usize>,
}

/// Gap `√(ζ+η) - √(ζ-η)` evaluated as `2η / (√(ζ+η) + √(ζ-η))`.
pub fn sqrt_gap(zeta: f64, eta: f64) -> f64 {
    let sum = (zeta + eta).sqrt() + (zeta - eta).max(0.0).sqrt();
    if sum == 0.0 {
        0.0
    } else {
        2.0 * eta / sum
    }
}

/// `ε` bound that makes YES instances of RSDF YES instances of WOPT.
pub fn epsilon_case1(gap: f64, c_hat_norm: f64, mn: usize) -> f64 {
    gap / (4.0 * c_hat_norm * (mn as f64 - 1.0) + 1.0)
}

/// `ε` bound that makes NO instances of RSDF NO instances of WOPT.
pub fn epsilon_case2(gap: f64, c_hat_norm: f64) -> f64 {
    gap / (2.0 * c_hat_norm + 2.0)
}

pub fn rsdf_to_wopt(inst: &RsdfInstance, m_target: Option<usize>) -> Result<WoptInstance> {
    let gadget = build_c_matrix(inst, m_target)?;
    let d = gadget.m_dim * gadget.n_dim;
    let basis = GeneratorBasis::structured(d)?;
    let coeffs = basis.coefficients(gadget.matrix.matrix())?;
    let c_hat: Vec<f64> = bloch::real_coords(&coeffs)?.into_iter().map(|x| 0.5 * x).collect();
    let c_hat_norm_numeric = c_hat.iter().map(|x| x * x).sum::<f64>().sqrt();
    if c_hat_norm_numeric == 0.0 {
        return Err(Error::Degenerate("gadget C is the zero matrix".into()));
    }

    let c_hat_norm_sq = inst.frobenius_sq_sum()?;
    let delta_sq = inst.delta_sq()?;
    let c_hat_norm = to_f64(c_hat_norm_sq).sqrt();
    if (c_hat_norm - c_hat_norm_numeric).abs() > 1e-10 * c_hat_norm.max(1.0) {
        return Err(Error::NumericIntegrity(format!(
            "‖ĉ‖ = {c_hat_norm_numeric} disagrees with exact {c_hat_norm}"
        )));
    }

    let (zeta, eta) = (to_f64(inst.zeta()), to_f64(inst.eta()));
    let gap = sqrt_gap(zeta, eta);
    if gap <= 0.0 {
        return Err(Error::Degenerate("η = 0 leaves no gap between YES and NO".into()));
    }
    let gamma = ((zeta + eta).sqrt() + (zeta - eta).sqrt()) / (2.0 * c_hat_norm);
    // Both cases must hold; the first binds whenever ‖ĉ‖(4MN - 6) > 1, which
    // includes every gadget built from a graph.
    let epsilon = epsilon_case1(gap, c_hat_norm, d).min(epsilon_case2(gap, c_hat_norm));

    let c = c_hat.iter().map(|x| x / c_hat_norm_numeric).collect();
    Ok(WoptInstance {
        m_dim: gadget.m_dim,
        n_dim: gadget.n_dim,
        m: basis.len(),
        c_hat,
        c,
        c_hat_norm,
        gamma,
        epsilon,
        delta: to_f64(delta_sq).sqrt(),
        c_matrix: Some(gadget.matrix),
        exact: Some(ExactLayer { zeta: inst.zeta(), eta: inst.eta(), delta_sq, c_hat_norm_sq }),
        edge_count: None,
    })
}

/// Full CLIQUE → WOPT pipeline; records the edge count.
pub fn clique_to_wopt(inst: &CliqueInstance, m_target: Option<usize>) -> Result<(RsdfInstance, WoptInstance)> {
    let rsdf = clique_to_rsdf(inst)?;
    let mut wopt = rsdf_to_wopt(&rsdf, m_target)?;
    wopt.edge_count = Some(inst.graph().edge_count());
    Ok((rsdf, wopt))
}

impl WoptInstance {
    /// WOPT instance with objective `r ↦ ĉ·r / ‖ĉ‖`, `ĉ_i = ½ Tr(C σ_i)`, for an
    /// arbitrary Hermitian `C` on `C^M ⊗ C^N`.
    pub fn from_objective(
        c_matrix: &HermitianOperator,
        m_dim: usize,
        n_dim: usize,
        gamma: f64,
        epsilon: f64,
    ) -> Result<Self> {
        let d = m_dim * n_dim;
        if c_matrix.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: c_matrix.dim() });
        }
        if epsilon <= 0.0 {
            return Err(Error::validation("ε must be positive"));
        }
        let basis = GeneratorBasis::structured(d)?;
        let coeffs = basis.coefficients(c_matrix.matrix())?;
        let c_hat: Vec<f64> = bloch::real_coords(&coeffs)?.into_iter().map(|x| 0.5 * x).collect();
        let norm = c_hat.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Degenerate("objective has no traceless part".into()));
        }
        Ok(Self {
            m_dim,
            n_dim,
            m: basis.len(),
            c: c_hat.iter().map(|x| x / norm).collect(),
            c_hat,
            c_hat_norm: norm,
            gamma,
            epsilon,
            delta: c_matrix.frobenius_norm(),
            c_matrix: Some(c_matrix.clone()),
            exact: None,
            edge_count: None,
        })
    }

    /// `f(r) = c·r`.
    pub fn objective(&self, r: &BlochVector) -> f64 {
        r.dot(&self.c)
    }

    /// Indices of nonzero `ĉ` components together with their generator kinds.
    pub fn support(&self) -> Vec<(usize, GeneratorKind)> {
        let basis = GeneratorBasis::structured(self.m_dim * self.n_dim).expect("dimension validated at construction");
        self.c_hat
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(i, _)| (i, basis.kind(i)))
            .collect()
    }

    /// The separable maximum `f_max` mapped back to WOPT's verdict, or `None`
    /// inside the promise gap.
    pub fn verdict_for(&self, f_max: f64) -> Option<crate::graphs::Answer> {
        if f_max >= self.gamma + self.epsilon {
            Some(crate::graphs::Answer::Yes)
        } else if f_max <= self.gamma - self.epsilon {
            Some(crate::graphs::Answer::No)
        } else {
            None
        }
    }
}
