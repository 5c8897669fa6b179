use crate::linalg::{self, hermitian_eigen, kron, matrix_unit, partial_trace_first, CMatrix, C64};
use crate::operator::{HermitianOperator, PSD_TOL, TRACE_TOL};
use crate::random::{gaussian_complex, rng_for};
use crate::{Error, Result};

/// `J(Φ) = (Φ ⊗ id)(|φ⁺⟩⟨φ⁺|)` for `Φ: C^{N×N} -> C^{M×M}`, stored on
/// `C^M ⊗ C^N`, with its CP and TP flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    pub m_dim: usize,
    pub n_dim: usize,
    pub j: HermitianOperator,
    pub cp: bool,
    pub tp: bool,
    pub min_eigenvalue: f64,
    /// `max |Tr_A J - I/N|`, entrywise.
    pub tp_defect: f64,
}

impl ChoiOperator {
    pub fn from_matrix(j: HermitianOperator, m_dim: usize, n_dim: usize) -> Result<Self> {
        if j.dim() != m_dim * n_dim {
            return Err(Error::DimensionMismatch { expected: m_dim * n_dim, got: j.dim() });
        }
        let min_eigenvalue = j.min_eigenvalue();
        let scale = linalg::hermitian_eigenvalues(j.matrix()).iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let reduced = partial_trace_first(j.matrix(), m_dim, n_dim);
        let target = CMatrix::identity(n_dim, n_dim) * C64::new(1.0 / n_dim as f64, 0.0);
        let tp_defect = linalg::max_abs_diff(&reduced, &target);
        Ok(Self {
            m_dim,
            n_dim,
            cp: min_eigenvalue >= -PSD_TOL * scale,
            tp: tp_defect <= TRACE_TOL,
            min_eigenvalue,
            tp_defect,
            j,
        })
    }

    pub fn from_kraus(kraus: &KrausSet) -> Result<Self> {
        let (m, n) = kraus.shape()?;
        jamiolkowski(|x| Ok(kraus.apply(x)), m, n)
    }

    /// `Φ(X) = N · Tr_B[J (I ⊗ Xᵀ)]`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let (m, n) = (self.m_dim, self.n_dim);
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
        }
        let j = self.j.matrix();
        let mut out = CMatrix::zeros(m, m);
        for i in 0..m {
            for ip in 0..m {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    for l in 0..n {
                        acc += j[(i * n + k, ip * n + l)] * x[(k, l)];
                    }
                }
                out[(i, ip)] = acc * C64::new(n as f64, 0.0);
            }
        }
        Ok(out)
    }
}

/// Kraus operators `K_s: C^N -> C^M` of a CP map `X ↦ Σ K_s X K_s†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let set = Self { operators };
        set.shape()?;
        Ok(set)
    }

    /// `(M, N)` shared by all operators.
    pub fn shape(&self) -> Result<(usize, usize)> {
        let first = self.operators.first().ok_or_else(|| Error::validation("empty Kraus set"))?;
        let shape = first.shape();
        if self.operators.iter().any(|k| k.shape() != shape) {
            return Err(Error::validation("Kraus operators differ in shape"));
        }
        Ok(shape)
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let (m, _) = self.operators[0].shape();
        self.operators.iter().fold(CMatrix::zeros(m, m), |acc, k| acc + k * x * k.adjoint())
    }

    /// `max |Σ K_s† K_s - I|`, entrywise.
    pub fn completeness_defect(&self) -> f64 {
        let (_, n) = self.operators[0].shape();
        let sum = self.operators.iter().fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * k);
        linalg::max_abs_diff(&sum, &CMatrix::identity(n, n))
    }
}

/// Builds `J(Φ) = (1/N) Σ_{kl} Φ(E_kl) ⊗ E_kl` from the action of `Φ` on the
/// matrix units of `C^{N×N}`. The action is also probed on two random inputs
/// to reject descriptions that are not linear.
pub fn jamiolkowski<F>(channel: F, m: usize, n: usize) -> Result<ChoiOperator>
where
    F: Fn(&CMatrix) -> Result<CMatrix>,
{
    if m == 0 || n == 0 {
        return Err(Error::validation("channel dimensions must be positive"));
    }
    let mut images = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let img = channel(&matrix_unit(n, k, l))?;
            if img.shape() != (m, m) {
                return Err(Error::DimensionMismatch { expected: m, got: img.nrows() });
            }
            images.push(img);
        }
    }
    let mut rng = rng_for(0x6a6d, 0);
    for _ in 0..2 {
        let x = CMatrix::from_fn(n, n, |_, _| gaussian_complex(&mut rng));
        let direct = channel(&x)?;
        let mut linear = CMatrix::zeros(m, m);
        for k in 0..n {
            for l in 0..n {
                linear += &images[k * n + l] * x[(k, l)];
            }
        }
        let scale = 1.0 + linear.norm();
        if direct.shape() != (m, m) || linalg::max_abs_diff(&direct, &linear) > 1e-9 * scale {
            return Err(Error::validation("channel action is not linear"));
        }
    }
    let mut j = CMatrix::zeros(m * n, m * n);
    for k in 0..n {
        for l in 0..n {
            j += kron(&images[k * n + l], &matrix_unit(n, k, l));
        }
    }
    j *= C64::new(1.0 / n as f64, 0.0);
    ChoiOperator::from_matrix(HermitianOperator::new(j)?, m, n)
}

/// Kraus operators from the eigenvectors of `J`: each `√λ v` is reshaped
/// row-major over `(i, k)` and scaled by `√N`.
pub fn kraus_from_choi(choi: &ChoiOperator) -> Result<KrausSet> {
    if !choi.cp {
        return Err(Error::validation(format!(
            "Jamiołkowski operator has eigenvalue {:e}; map is not CP",
            choi.min_eigenvalue
        )));
    }
    let (m, n) = (choi.m_dim, choi.n_dim);
    let (values, vectors) = hermitian_eigen(choi.j.matrix());
    let top = values.iter().fold(0.0f64, |a, &v| a.max(v));
    let floor = 1e-14 * top.max(f64::MIN_POSITIVE);
    let operators: Vec<CMatrix> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > floor)
        .map(|(s, &v)| {
            let scale = C64::new((n as f64 * v).sqrt(), 0.0);
            CMatrix::from_fn(m, n, |i, k| vectors[(i * n + k, s)] * scale)
        })
        .collect();
    if operators.is_empty() {
        return Ok(KrausSet { operators: vec![CMatrix::zeros(m, n)] });
    }
    Ok(KrausSet { operators })
}

pub fn identity_channel(n: usize) -> impl Fn(&CMatrix) -> Result<CMatrix> {
    move |x| {
        if x.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
        }
        Ok(x.clone())
    }
}

/// `X ↦ Tr(X) I/M`.
pub fn depolarizing_channel(m: usize) -> impl Fn(&CMatrix) -> Result<CMatrix> {
    move |x| Ok(CMatrix::identity(m, m) * (linalg::trace(x) / C64::new(m as f64, 0.0)))
}

pub fn transpose_map() -> impl Fn(&CMatrix) -> Result<CMatrix> {
    |x| Ok(x.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector};
    use crate::random::random_kraus_tp;

    #[test]
    fn identity_gives_bell_projector() {
        let choi = jamiolkowski(identity_channel(2), 2, 2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let phi = HermitianOperator::pure(&CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]));
        assert!(choi.j.max_abs_diff(&phi) < 1e-12);
        assert!(choi.cp && choi.tp);
        let k = kraus_from_choi(&choi).unwrap();
        assert_eq!(k.operators.len(), 1);
        // Eigenvectors carry an arbitrary phase.
        let k0 = &k.operators[0];
        let phase = k0[(0, 0)];
        assert!(linalg::max_abs_diff(&(k0 / phase), &CMatrix::identity(2, 2)) < 1e-12);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_gives_maximally_mixed() {
        let choi = jamiolkowski(depolarizing_channel(3), 3, 2).unwrap();
        assert!(choi.j.max_abs_diff(&HermitianOperator::maximally_mixed(6)) < 1e-12);
        assert_eq!(kraus_from_choi(&choi).unwrap().operators.len(), 6);
    }

    #[test]
    fn transpose_is_not_cp() {
        let choi = jamiolkowski(transpose_map(), 2, 2).unwrap();
        assert!(!choi.cp);
        assert!((choi.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(kraus_from_choi(&choi).is_err());
    }

    #[test]
    fn rejects_nonlinear_action() {
        let r = jamiolkowski(|x: &CMatrix| Ok(x.component_mul(x)), 2, 2);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn kraus_roundtrip() {
        let mut rng = rng_for(3, 0);
        let set = KrausSet::new(random_kraus_tp(3, 2, 2, &mut rng)).unwrap();
        let choi = ChoiOperator::from_kraus(&set).unwrap();
        assert!(choi.cp && choi.tp);
        let back = kraus_from_choi(&choi).unwrap();
        assert!(back.completeness_defect() < 1e-9);
        for k in 0..2 {
            for l in 0..2 {
                let e = matrix_unit(2, k, l);
                assert!(linalg::max_abs_diff(&set.apply(&e), &back.apply(&e)) < 1e-10);
                assert!(linalg::max_abs_diff(&set.apply(&e), &choi.apply(&e).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn subnormalized_set_is_not_tp() {
        let mut rng = rng_for(4, 0);
        let ops: Vec<CMatrix> = random_kraus_tp(2, 2, 2, &mut rng).into_iter().map(|k| k * c(0.9, 0.0)).collect();
        let choi = ChoiOperator::from_kraus(&KrausSet::new(ops).unwrap()).unwrap();
        assert!(choi.cp && !choi.tp);
    }
}
