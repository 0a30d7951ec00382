mod common;
pub mod data;
pub mod lexer;
pub mod theory;
pub mod tree;

pub use data::{
    parse_alternative, parse_alternative_set, parse_dimacs, serialize_dimacs, serialize_preorder,
};
pub use lexer::{is_identifier, Diagnostic, Pos};
pub use theory::{parse_theory, serialize_theory};
pub use tree::{parse_lptree, serialize_lptree};
