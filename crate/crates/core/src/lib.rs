//! Constructive reduction chain from CLIQUE to weak membership over the set of
//! separable bipartite states, with the geometric facts, numerical oracles and
//! entanglement-breaking channel machinery needed to check every link at desk
//! scale.
//!
//! The chain is
//!
//! ```text
//! CLIQUE  ->  RSDF  ->  WOPT(S_{M,N})  ->  WMEM(S_{M,N})
//! ```
//!
//! * [`graphs`] parses graphs and computes exact clique numbers.
//! * [`bloch`] builds the SU(d) generator basis and the Bloch-vector picture.
//! * [`reduction`] maps instances along the chain and evaluates the error
//!   parameters.
//! * [`oracles`] holds the independent numerical optimizers used to certify the
//!   identities the chain rests on.
//! * [`eb`] covers Choi operators, Kraus extraction and the reduction to the
//!   trace-preserving slice.
//! * [`verify`] bundles the corpus-level checks used by the CLI and the
//!   acceptance suite.

pub mod bloch;
pub mod eb;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod operator;
pub mod oracles;
pub mod random;
pub mod reduction;
pub mod verify;

pub use error::{Error, Result};
pub use operator::HermitianOperator;
