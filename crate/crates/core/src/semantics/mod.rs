pub mod dominance;
pub mod preorder;
pub mod queries;
pub mod swaps;

pub use dominance::{compare, dominates, Bounded, SearchBudget};
pub use preorder::{universe_within_cap, BitMatrix, ExplicitPreorder, RelationLabel, DEFAULT_CAP};
pub use queries::{
    equivalent, geq_cut_extract, linearisable, optimum_check, optimum_exists, satisfies_top_p,
    top_p_by, top_p_general, undominated_check, OptimalityKind,
};
pub use swaps::{closure_oracle, sanctions, swap_graph, worsening_successors};
