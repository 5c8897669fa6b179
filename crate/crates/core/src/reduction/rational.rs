use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, Zero};

use crate::{Error, Result};

/// Square matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    side: usize,
    entries: Vec<Rational64>,
}

impl RationalMatrix {
    pub fn zeros(side: usize) -> Self {
        Self { side, entries: vec![Rational64::zero(); side * side] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational64>>) -> Result<Self> {
        let side = rows.len();
        if rows.iter().any(|r| r.len() != side) {
            return Err(Error::validation("rational matrix must be square"));
        }
        Ok(Self { side, entries: rows.into_iter().flatten().collect() })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize) -> Rational64 {
        self.entries[i * self.side + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational64) {
        self.entries[i * self.side + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational64>> {
        self.entries.chunks(self.side.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.side).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    /// Squared Frobenius norm, exact.
    pub fn frobenius_sq(&self) -> Result<Rational64> {
        self.entries.iter().try_fold(Rational64::zero(), |acc, x| {
            x.checked_mul(x).and_then(|sq| acc.checked_add(&sq)).ok_or(Error::Overflow("‖B‖²"))
        })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.side, self.side, |i, j| super::to_f64(self.get(i, j)))
    }
}
