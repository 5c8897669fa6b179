//! Generalized Gell-Mann basis of SU(d) and the Bloch-vector representation
//!
//! ```text
//! ρ = I/d + ½ Σ_i r_i σ_i,     r_i = Tr(ρ σ_i),     Tr(σ_i σ_j) = 2 δ_ij
//! ```
//!
//! Generators are ordered as all `U_pq` (p < q, lexicographic), then all
//! `V_pq` in the same order, then `W_1 .. W_{d-1}`. Coordinates are computed
//! from closed forms per generator kind, so a basis never has to be
//! materialized to convert between representations.

use serde::{Deserialize, Serialize};

use crate::linalg::{CMatrix, C64, ZERO};
use crate::operator::{HermitianOperator, TRACE_TOL};
use crate::{Error, Result};

/// Largest dimension for which [`su_generators`] materializes matrices.
pub const MAX_MATERIALIZED_DIM: usize = 64;

/// Largest dimension for structured (closed-form) coordinate work.
pub const MAX_STRUCTURED_DIM: usize = 1024;

/// Imaginary residue above which `Tr(ρ σ_i)` is considered corrupted.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

/// One generator of SU(d), vertices 0-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `|p⟩⟨q| + |q⟩⟨p|`
    U { p: usize, q: usize },
    /// `-i|p⟩⟨q| + i|q⟩⟨p|`
    V { p: usize, q: usize },
    /// `sqrt(2/(r(r+1))) (Σ_{k<r} |k⟩⟨k| - r |r⟩⟨r|)` for `1 <= r < d`
    W { r: usize },
}

/// Ordered list of the `d² - 1` traceless Hermitian generators of SU(d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorBasis {
    dim: usize,
}

/// Generators for `2 <= d <= 64`.
pub fn su_generators(d: usize) -> Result<GeneratorBasis> {
    if !(2..=MAX_MATERIALIZED_DIM).contains(&d) {
        return Err(Error::validation(format!(
            "generator dimension {d} outside [2, {MAX_MATERIALIZED_DIM}]"
        )));
    }
    Ok(GeneratorBasis { dim: d })
}

impl GeneratorBasis {
    /// Basis used only through closed-form coordinates, for `2 <= d <= 1024`.
    pub fn structured(d: usize) -> Result<Self> {
        if !(2..=MAX_STRUCTURED_DIM).contains(&d) {
            return Err(Error::Budget(format!(
                "structured generator dimension {d} outside [2, {MAX_STRUCTURED_DIM}]"
            )));
        }
        Ok(Self { dim: d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d² - 1`.
    pub fn len(&self) -> usize {
        self.dim * self.dim - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn pair_count(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    fn pair_offset(&self, p: usize, q: usize) -> usize {
        debug_assert!(p < q && q < self.dim);
        p * (2 * self.dim - p - 1) / 2 + (q - p - 1)
    }

    fn pair_at(&self, mut idx: usize) -> (usize, usize) {
        let d = self.dim;
        let mut p = 0;
        while idx >= d - 1 - p {
            idx -= d - 1 - p;
            p += 1;
        }
        (p, p + 1 + idx)
    }

    pub fn kind(&self, i: usize) -> GeneratorKind {
        assert!(i < self.len(), "generator index {i} out of range");
        let pairs = self.pair_count();
        if i < pairs {
            let (p, q) = self.pair_at(i);
            GeneratorKind::U { p, q }
        } else if i < 2 * pairs {
            let (p, q) = self.pair_at(i - pairs);
            GeneratorKind::V { p, q }
        } else {
            GeneratorKind::W { r: i - 2 * pairs + 1 }
        }
    }

    pub fn index_of(&self, kind: GeneratorKind) -> usize {
        match kind {
            GeneratorKind::U { p, q } => self.pair_offset(p, q),
            GeneratorKind::V { p, q } => self.pair_count() + self.pair_offset(p, q),
            GeneratorKind::W { r } => 2 * self.pair_count() + r - 1,
        }
    }

    /// Materializes generator `i` as a dense matrix.
    pub fn generator(&self, i: usize) -> HermitianOperator {
        let d = self.dim;
        let mut m = CMatrix::zeros(d, d);
        match self.kind(i) {
            GeneratorKind::U { p, q } => {
                m[(p, q)] = C64::new(1.0, 0.0);
                m[(q, p)] = C64::new(1.0, 0.0);
            }
            GeneratorKind::V { p, q } => {
                m[(p, q)] = C64::new(0.0, -1.0);
                m[(q, p)] = C64::new(0.0, 1.0);
            }
            GeneratorKind::W { r } => {
                let s = w_scale(r);
                for k in 0..r {
                    m[(k, k)] = C64::new(s, 0.0);
                }
                m[(r, r)] = C64::new(-(r as f64) * s, 0.0);
            }
        }
        HermitianOperator::new(m).expect("generators are Hermitian")
    }

    /// All generators in basis order. Only available for `d <= 64`.
    pub fn generators(&self) -> Result<Vec<HermitianOperator>> {
        if self.dim > MAX_MATERIALIZED_DIM {
            return Err(Error::Budget(format!(
                "refusing to materialize {} generators of dimension {}",
                self.len(),
                self.dim
            )));
        }
        Ok((0..self.len()).map(|i| self.generator(i)).collect())
    }

    /// `Tr(X σ_i)` for every generator, computed entrywise from `X`.
    pub fn coefficients(&self, x: &CMatrix) -> Result<Vec<C64>> {
        let d = self.dim;
        if x.nrows() != d || x.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: x.nrows() });
        }
        let pairs = self.pair_count();
        let mut out = vec![ZERO; self.len()];
        let mut idx = 0;
        for p in 0..d {
            for q in (p + 1)..d {
                // Tr(X |p⟩⟨q|) = X[q, p]
                out[idx] = x[(q, p)] + x[(p, q)];
                out[pairs + idx] = C64::new(0.0, -1.0) * x[(q, p)] + C64::new(0.0, 1.0) * x[(p, q)];
                idx += 1;
            }
        }
        let mut partial = ZERO;
        for r in 1..d {
            partial += x[(r - 1, r - 1)];
            out[2 * pairs + r - 1] = (partial - x[(r, r)] * (r as f64)) * w_scale(r);
        }
        Ok(out)
    }

    /// `Σ_i coords_i σ_i`.
    pub fn expand(&self, coords: &[f64]) -> Result<CMatrix> {
        if coords.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: coords.len() });
        }
        let d = self.dim;
        let pairs = self.pair_count();
        let mut m = CMatrix::zeros(d, d);
        let mut idx = 0;
        for p in 0..d {
            for q in (p + 1)..d {
                let (u, v) = (coords[idx], coords[pairs + idx]);
                m[(p, q)] = C64::new(u, -v);
                m[(q, p)] = C64::new(u, v);
                idx += 1;
            }
        }
        // Diagonal: entry k collects +s_r v_r for r > k and -r s_r v_r for r = k.
        let mut tail = 0.0;
        let mut diag = vec![0.0; d];
        for r in (1..d).rev() {
            let w = coords[2 * pairs + r - 1] * w_scale(r);
            diag[r] = tail - (r as f64) * w;
            tail += w;
        }
        diag[0] = tail;
        for (k, val) in diag.into_iter().enumerate() {
            m[(k, k)] = C64::new(val, 0.0);
        }
        Ok(m)
    }
}

fn w_scale(r: usize) -> f64 {
    (2.0 / (r * (r + 1)) as f64).sqrt()
}

/// Real coordinates of a state or direction in `R^{d² - 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlochVectorDoc")]
pub struct BlochVector {
    dim: usize,
    coords: Vec<f64>,
}

#[derive(Deserialize)]
struct BlochVectorDoc {
    dim: usize,
    coords: Vec<f64>,
}

impl TryFrom<BlochVectorDoc> for BlochVector {
    type Error = Error;
    fn try_from(doc: BlochVectorDoc) -> Result<Self> {
        Self::new(doc.dim, doc.coords)
    }
}

impl BlochVector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::validation(format!("Bloch vector dimension {dim} < 2")));
        }
        if coords.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch { expected: dim * dim - 1, got: coords.len() });
        }
        Ok(Self { dim, coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, coords: vec![0.0; dim * dim - 1] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self { dim: self.dim, coords: self.coords.iter().map(|x| x * t).collect() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

fn check_dims(op: &HermitianOperator, basis: &GeneratorBasis) -> Result<()> {
    if op.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: op.dim() });
    }
    Ok(())
}

/// `r_i = Tr(ρ σ_i)`; requires unit trace.
pub fn density_to_bloch(rho: &HermitianOperator, basis: &GeneratorBasis) -> Result<BlochVector> {
    check_dims(rho, basis)?;
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::validation(format!("density operator has trace {tr}")));
    }
    let coeffs = basis.coefficients(rho.matrix())?;
    real_coords(&coeffs).map(|coords| BlochVector { dim: basis.dim(), coords })
}

pub(crate) fn real_coords(coeffs: &[C64]) -> Result<Vec<f64>> {
    let worst = coeffs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > IMAGINARY_RESIDUE_TOL {
        return Err(Error::NumericIntegrity(format!("imaginary residue {worst:.3e} in Bloch coordinates")));
    }
    Ok(coeffs.iter().map(|z| z.re).collect())
}

/// `I/d + ½ Σ v_i σ_i`. Positivity is not checked: points outside the state
/// body are representable on purpose.
pub fn bloch_to_density(v: &BlochVector, basis: &GeneratorBasis) -> Result<HermitianOperator> {
    if v.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: v.dim() });
    }
    let d = basis.dim();
    let mut m = basis.expand(v.coords())? * C64::new(0.5, 0.0);
    for k in 0..d {
        m[(k, k)] += C64::new(1.0 / d as f64, 0.0);
    }
    HermitianOperator::new(m)
}

/// Inner and outer radii of the separable set in Bloch coordinates, both
/// centred at the maximally mixed state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SepSetGeometry {
    pub m_dim: usize,
    pub n_dim: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Ambient dimension `M²N² - 1`.
    pub m: usize,
    #[serde(skip)]
    pub center: BlochVector,
}

pub fn sep_set_geometry(m_dim: usize, n_dim: usize) -> Result<SepSetGeometry> {
    if m_dim < 2 || n_dim < 2 {
        return Err(Error::validation(format!("subsystem dimensions ({m_dim}, {n_dim}) must be >= 2")));
    }
    let d = (m_dim * n_dim) as f64;
    Ok(SepSetGeometry {
        m_dim,
        n_dim,
        inner_radius: (2.0 / (d * (d - 1.0))).sqrt(),
        outer_radius: (2.0 * (d - 1.0) / d).sqrt(),
        m: m_dim * m_dim * n_dim * n_dim - 1,
        center: BlochVector::zeros(m_dim * n_dim),
    })
}

/// Frobenius distance of two states and Euclidean distance of their Bloch
/// vectors; the second is always `√2` times the first.
pub fn bloch_distance_pair(
    rho1: &HermitianOperator,
    rho2: &HermitianOperator,
    basis: &GeneratorBasis,
) -> Result<(f64, f64)> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch { expected: rho1.dim(), got: rho2.dim() });
    }
    let a = density_to_bloch(rho1, basis)?;
    let b = density_to_bloch(rho2, basis)?;
    let frob = (rho1.matrix() - rho2.matrix()).norm();
    Ok((frob, a.distance(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, trace};

    #[test]
    fn qubit_generators_are_paulis() {
        let b = su_generators(2).unwrap();
        let g = b.generators().unwrap();
        let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].matrix(), &x);
        assert_eq!(g[1].matrix(), &y);
        assert_eq!(g[2].matrix(), &z);
    }

    #[test]
    fn qutrit_diagonal_generators() {
        let b = su_generators(3).unwrap();
        let g = b.generators().unwrap();
        assert_eq!(g.len(), 8);
        let w1: Vec<f64> = (0..3).map(|k| g[6].matrix()[(k, k)].re).collect();
        let w2: Vec<f64> = (0..3).map(|k| g[7].matrix()[(k, k)].re).collect();
        assert_eq!(w1, vec![1.0, -1.0, 0.0]);
        let s = 1.0 / 3.0_f64.sqrt();
        for (got, want) in w2.iter().zip([s, s, -2.0 * s]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn index_round_trip() {
        for d in 2..9 {
            let b = GeneratorBasis::structured(d).unwrap();
            for i in 0..b.len() {
                assert_eq!(b.index_of(b.kind(i)), i);
            }
        }
    }

    #[test]
    fn closed_form_coefficients_match_explicit_traces() {
        let b = su_generators(4).unwrap();
        let x = CMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.07));
        let fast = b.coefficients(&x).unwrap();
        for (i, g) in b.generators().unwrap().iter().enumerate() {
            let slow = trace(&(&x * g.matrix()));
            assert!((slow - fast[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_zero_state_bloch_vector() {
        let b = su_generators(2).unwrap();
        let rho = HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)],
        ))
        .unwrap();
        let v = density_to_bloch(&rho, &b).unwrap();
        assert_eq!(v.coords(), &[0.0, 0.0, 1.0]);
        let back = bloch_to_density(&v, &b).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn maximally_mixed_maps_to_origin() {
        for d in [2, 3, 4, 6] {
            let b = su_generators(d).unwrap();
            let v = density_to_bloch(&HermitianOperator::maximally_mixed(d), &b).unwrap();
            assert!(v.coords().iter().all(|&x| x == 0.0));
        }
        let b = su_generators(4).unwrap();
        let rho = bloch_to_density(&BlochVector::zeros(4), &b).unwrap();
        assert!(rho.max_abs_diff(&HermitianOperator::maximally_mixed(4)) < 1e-16);
    }

    #[test]
    fn long_bloch_vector_is_not_a_state() {
        let b = su_generators(2).unwrap();
        let rho = bloch_to_density(&BlochVector::new(2, vec![0.0, 0.0, 3.0]).unwrap(), &b).unwrap();
        let eig = rho.eigenvalues();
        assert!((eig[0] + 1.0).abs() < 1e-15 && (eig[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(su_generators(1).is_err());
        assert!(su_generators(65).is_err());
        let b = su_generators(2).unwrap();
        let rho3 = HermitianOperator::maximally_mixed(3);
        assert!(matches!(density_to_bloch(&rho3, &b), Err(Error::DimensionMismatch { .. })));
        let not_unit = HermitianOperator::identity(2);
        assert!(matches!(density_to_bloch(&not_unit, &b), Err(Error::Validation(_))));
        assert!(BlochVector::new(2, vec![0.0; 4]).is_err());
        assert!(sep_set_geometry(1, 3).is_err());
    }

    #[test]
    fn geometry_closed_forms() {
        let g = sep_set_geometry(2, 2).unwrap();
        assert!((g.outer_radius - 1.5_f64.sqrt()).abs() < 1e-15);
        assert!((g.inner_radius - (1.0_f64 / 6.0).sqrt()).abs() < 1e-15);
        assert_eq!(g.m, 15);
        let g = sep_set_geometry(2, 3).unwrap();
        assert!((g.outer_radius - (5.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((g.inner_radius - (1.0_f64 / 15.0).sqrt()).abs() < 1e-15);
        assert_eq!(g.m, 35);
        for (m, n) in [(2, 2), (3, 4), (7, 7), (2, 9)] {
            let g = sep_set_geometry(m, n).unwrap();
            assert!(g.inner_radius < g.outer_radius);
            assert!((g.inner_radius * g.outer_radius - 2.0 / (m * n) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_basis_distance() {
        let b = su_generators(2).unwrap();
        let zero = HermitianOperator::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)])).unwrap();
        let one = HermitianOperator::new(CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])).unwrap();
        let (f, bl) = bloch_distance_pair(&zero, &one, &b).unwrap();
        assert!((f - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((bl - 2.0).abs() < 1e-15);
        assert_eq!(bloch_distance_pair(&zero, &zero, &b).unwrap(), (0.0, 0.0));
    }
}
