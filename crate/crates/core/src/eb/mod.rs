//! Channels through their Jamiołkowski operators, Kraus extraction, and the
//! reduction from separability of states to entanglement breaking of
//! trace-preserving channels.

mod choi;
mod fano;
mod reduce;

pub use choi::{
    depolarizing_channel, identity_channel, jamiolkowski, kraus_from_choi, transpose_map, ChoiOperator, KrausSet,
};
pub use fano::{fano_decode, fano_encode, FanoVector};
pub use reduce::{
    condition_number, ebp_reduce, filter_map_upsilon, kappa_bound, marker_map_phi, marker_probability, Conditioning,
    KAPPA_GUARD,
};
