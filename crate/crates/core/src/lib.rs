//! Conditional preference statements, their worsening-swap semantics, and
//! lexicographic preference trees.
//!
//! Alternatives are total assignments over a finite [`Schema`]; a
//! [`CpTheory`] induces a preorder over them, which can be queried by bounded
//! search or computed exactly with [`closure_oracle`] on small schemas.

pub mod error;
pub mod lexcompat;
pub mod lptree;
pub mod model;
pub mod semantics;
pub mod textio;

pub use error::{Error, Result};
pub use lexcompat::*;
pub use lptree::*;
pub use model::*;
pub use semantics::*;
