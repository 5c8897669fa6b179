//! Independent numerical oracles: simplex and sphere maximization, the
//! alternating product-state optimizer, PPT membership, and a weak
//! optimization loop that sees the separable set only through membership
//! queries.

mod config;
mod membership;
mod motzkin_straus;
mod ppt;
mod seesaw;
mod sphere;

pub use config::OptimizerConfig;
pub use membership::{
    wopt_via_membership, MembershipBudget, MembershipOracle, MembershipOutcome, MembershipVerdict, QueryRecord,
};
pub use motzkin_straus::{motzkin_straus_closed_form, motzkin_straus_max, MAX_SIMPLEX_VERTICES};
pub use ppt::{ppt_test, wmem_ppt_oracle, PptOracle, PptVerdict, PPT_TOL};
pub use seesaw::{clique_seed_vector, seesaw_product_max, ProductStateResult, MAX_SEESAW_DIM};
pub use sphere::{eval_g, eval_g_for_clique, g_value, SphereOptResult, MAX_SPHERE_SIDE};
