pub mod build;
pub mod choose;
pub mod extends;
pub mod reduction;

pub use build::{
    build_complete_lptree, is_k_lexico_compatible, top_p_lexcompat, BuildOutcome,
    DEFAULT_NODE_BUDGET,
};
pub use choose::{choose_attribute, phi_at_node, relevant, CandidateLabel, ForcedPairGraph};
pub use extends::extends_check;
pub use reduction::{gen_3sat_reduction, Cnf};
