//! Restricted Lie algebras in odd characteristic and their twisted central
//! extensions, with exact arithmetic over finite fields.

pub mod blocks;
pub mod classical;
pub mod env;
pub mod error;
pub mod extension;
pub mod field;
pub mod geom;
pub mod hopf;
pub mod liealg;
pub mod matrix;
pub mod meataxe;
pub mod module;
pub mod nielsen;
pub mod poly;
pub mod radical;
pub mod repn;
pub mod report;
pub mod sparse;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElement, FieldSpec};
pub use matrix::{solve_linear, Matrix};
pub use poly::Poly;
pub use subspace::{subspace_ops, Subspace, SubspaceOps};
pub use report::{Check, CheckReport};
