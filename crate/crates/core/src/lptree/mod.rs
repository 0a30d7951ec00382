pub mod ops;
pub mod tree;

pub use ops::{
    compare_lptree, cut_by_enumeration, cut_extract_lptree, decide, is_complete,
    is_linearisable_lptree, lptree_relation, lptree_to_statements, strict_cut_count, top_p_lptree,
};
pub use tree::{Chain, Children, Link, LpNode, LpTree, NodeContext, Rule, Violation};
