//! Rank-metric codes represented as spaces of linearized `q`-polynomials.
//!
//! The tower `F_p ⊆ F_q ⊆ F_{q^n}` lives in a [`gf::FieldContext`]; codes are
//! `F_q`- or `F_{q^n}`-subspaces of `L_n = {Σ a_i x^{q^i}}` with the rank of
//! the associated `F_q`-linear map as the weight.

pub mod arith;
pub mod codes;
pub mod error;
pub mod families;
pub mod gf;
pub mod invariants;
pub mod linalg;
pub mod linpoly;
pub mod par;
pub mod table;

pub use error::{Error, Result};
pub use gf::{FieldContext, FieldElement, Gf};
pub use linpoly::LinearizedPoly;
pub use codes::{MrdStatus, RankDistribution, RdCode, Scalars, Search};
pub use par::Exec;
