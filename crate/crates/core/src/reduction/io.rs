//! JSON instance documents. Rationals are `{"num", "den"}` objects and reals
//! are decimal strings with 17 significant digits, which round-trip doubles
//! exactly.

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactLayer, RationalMatrix, RsdfInstance, WmemParams, WoptInstance};
use crate::bloch::{self, GeneratorBasis};
use crate::operator::HermitianOperator;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Double written as a 17-significant-digit decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_real(self.0))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Real(x)),
            Raw::Text(t) => t
                .trim()
                .parse::<f64>()
                .map(Real)
                .map_err(|e| serde::de::Error::custom(format!("bad real {t:?}: {e}"))),
        }
    }
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

fn unreal(xs: &[Real]) -> Vec<f64> {
    xs.iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational64> for RationalJson {
    fn from(q: Rational64) -> Self {
        Self { num: *q.numer(), den: *q.denom() }
    }
}

impl TryFrom<RationalJson> for Rational64 {
    type Error = Error;
    fn try_from(r: RationalJson) -> Result<Self> {
        if r.den == 0 {
            return Err(Error::validation("rational with zero denominator"));
        }
        Ok(Rational64::new(r.num, r.den))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceGraph {
    pub n: usize,
    pub c: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsdfDocument {
    pub schema_version: u32,
    pub k: usize,
    pub l: usize,
    #[serde(rename = "B")]
    pub matrices: Vec<Vec<Vec<RationalJson>>>,
    pub zeta: RationalJson,
    pub eta: RationalJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceGraph>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactJson {
    pub zeta: RationalJson,
    pub eta: RationalJson,
    pub delta_sq: RationalJson,
    pub c_hat_norm_sq: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WoptDocument {
    pub schema_version: u32,
    #[serde(rename = "M")]
    pub m_dim: usize,
    #[serde(rename = "N")]
    pub n_dim: usize,
    pub m: usize,
    pub c_hat: Vec<Real>,
    pub c: Vec<Real>,
    pub c_hat_norm: Real,
    pub gamma: Real,
    pub epsilon: Real,
    pub delta: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_matrix: Option<HermitianOperator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmemSource {
    pub r: Real,
    #[serde(rename = "R")]
    pub big_r: Real,
    pub m: usize,
    pub epsilon: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmemDocument {
    pub schema_version: u32,
    pub beta: Real,
    pub source: WmemSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceDocument {
    Rsdf(RsdfDocument),
    Wopt(WoptDocument),
    WmemParams(WmemDocument),
}

impl InstanceDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Rsdf(_) => "rsdf",
            Self::Wopt(_) => "wopt",
            Self::WmemParams(_) => "wmem_params",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn parse_document(text: &str) -> Result<InstanceDocument> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    let version = match &doc {
        InstanceDocument::Rsdf(d) => d.schema_version,
        InstanceDocument::Wopt(d) => d.schema_version,
        InstanceDocument::WmemParams(d) => d.schema_version,
    };
    if version != SCHEMA_VERSION {
        return Err(Error::Unsupported(format!("schema_version {version}")));
    }
    Ok(doc)
}

impl RsdfInstance {
    pub fn to_document(&self, source: Option<SourceGraph>) -> RsdfDocument {
        RsdfDocument {
            schema_version: SCHEMA_VERSION,
            k: self.k(),
            l: self.l(),
            matrices: self
                .matrices()
                .iter()
                .map(|b| b.rows().into_iter().map(|row| row.into_iter().map(Into::into).collect()).collect())
                .collect(),
            zeta: self.zeta().into(),
            eta: self.eta().into(),
            source,
        }
    }

    pub fn from_document(doc: &RsdfDocument) -> Result<Self> {
        if doc.matrices.len() != doc.k {
            return Err(Error::validation(format!("k = {} but {} matrices given", doc.k, doc.matrices.len())));
        }
        let matrices = doc
            .matrices
            .iter()
            .map(|rows| {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(|&q| Rational64::try_from(q)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                RationalMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.l, matrices, doc.zeta.try_into()?, doc.eta.try_into()?)
    }
}

impl WoptInstance {
    pub fn to_document(&self, include_matrix: bool) -> WoptDocument {
        WoptDocument {
            schema_version: SCHEMA_VERSION,
            m_dim: self.m_dim,
            n_dim: self.n_dim,
            m: self.m,
            c_hat: reals(&self.c_hat),
            c: reals(&self.c),
            c_hat_norm: Real(self.c_hat_norm),
            gamma: Real(self.gamma),
            epsilon: Real(self.epsilon),
            delta: Real(self.delta),
            c_matrix: if include_matrix { self.c_matrix.clone() } else { None },
            exact: self.exact.map(|e| ExactJson {
                zeta: e.zeta.into(),
                eta: e.eta.into(),
                delta_sq: e.delta_sq.into(),
                c_hat_norm_sq: e.c_hat_norm_sq.into(),
            }),
            edge_count: self.edge_count,
        }
    }

    pub fn from_document(doc: &WoptDocument) -> Result<Self> {
        let d = doc.m_dim * doc.n_dim;
        if doc.m_dim < 2 || doc.n_dim < 2 {
            return Err(Error::validation("M and N must be at least 2"));
        }
        if doc.m != d * d - 1 || doc.c_hat.len() != doc.m || doc.c.len() != doc.m {
            return Err(Error::validation(format!(
                "vector lengths ({}, {}) and m = {} inconsistent with M·N = {d}",
                doc.c_hat.len(),
                doc.c.len(),
                doc.m
            )));
        }
        let c = unreal(&doc.c);
        let c_norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (c_norm - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!("‖c‖ = {c_norm}, expected 1")));
        }
        if doc.epsilon.0 <= 0.0 {
            return Err(Error::validation("ε must be positive"));
        }
        let c_hat = unreal(&doc.c_hat);
        if let Some(op) = &doc.c_matrix {
            if op.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: op.dim() });
            }
            let basis = GeneratorBasis::structured(d)?;
            let coeffs = bloch::real_coords(&basis.coefficients(op.matrix())?)?;
            let worst = coeffs.iter().zip(&c_hat).map(|(a, b)| (0.5 * a - b).abs()).fold(0.0, f64::max);
            if worst > 1e-12 {
                return Err(Error::NumericIntegrity(format!("ĉ disagrees with ½Tr(Cσ_i) by {worst:e}")));
            }
        }
        let exact = doc
            .exact
            .as_ref()
            .map(|e| -> Result<ExactLayer> {
                Ok(ExactLayer {
                    zeta: e.zeta.try_into()?,
                    eta: e.eta.try_into()?,
                    delta_sq: e.delta_sq.try_into()?,
                    c_hat_norm_sq: e.c_hat_norm_sq.try_into()?,
                })
            })
            .transpose()?;
        Ok(Self {
            m_dim: doc.m_dim,
            n_dim: doc.n_dim,
            m: doc.m,
            c_hat,
            c,
            c_hat_norm: doc.c_hat_norm.0,
            gamma: doc.gamma.0,
            epsilon: doc.epsilon.0,
            delta: doc.delta.0,
            c_matrix: doc.c_matrix.clone(),
            exact,
            edge_count: doc.edge_count,
        })
    }
}

impl WmemParams {
    pub fn to_document(&self) -> WmemDocument {
        WmemDocument {
            schema_version: SCHEMA_VERSION,
            beta: Real(self.beta),
            source: WmemSource {
                r: Real(self.inner_radius),
                big_r: Real(self.outer_radius),
                m: self.m,
                epsilon: Real(self.epsilon),
            },
        }
    }

    pub fn from_document(doc: &WmemDocument) -> Result<Self> {
        if doc.beta.0 <= 0.0 {
            return Err(Error::validation("β must be positive"));
        }
        Ok(Self {
            beta: doc.beta.0,
            inner_radius: doc.source.r.0,
            outer_radius: doc.source.big_r.0,
            m: doc.source.m,
            epsilon: doc.source.epsilon.0,
        })
    }
}
