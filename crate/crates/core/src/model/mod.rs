pub mod classify;
pub mod cpnet;
pub mod extension;
pub mod formula;
pub mod schema;
pub mod statement;

pub use classify::{classify, dependency_graph, DependencyGraph, LanguageProfile};
pub use cpnet::{CpNet, CpTable};
pub use extension::preorder_to_cp;
pub use formula::{consistent_with, Formula};
pub use schema::{
    Alternative, AttrSet, Attribute, Instantiation, Schema, Subspace, MAX_ATTRIBUTES,
};
pub use statement::{CpStatement, CpTheory};
