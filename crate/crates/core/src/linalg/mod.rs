//! Exact linear algebra: GF(2) ranks, integer normal forms and symmetric forms.

mod form;
mod gf2;
mod snf;

pub use form::{determinant, signature};
pub use gf2::{rank_sparse, BitMatrix};
pub use snf::{smith_invariants, SnfError};
