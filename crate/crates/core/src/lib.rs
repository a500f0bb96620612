//! Constacyclic codes of repeated-root length over F_{p^m} + uF_{p^m}, u² = 0.
//!
//! A code of length N = n·p^s with constant λ is an ideal of
//! R[x]/(x^N − λ). The ring splits into local chain rings
//! (F_q[x]/(f_j^{p^s})) + u(F_q[x]/(f_j^{p^s})), one per irreducible factor of
//! x^n − λ0, and each ideal is a tuple of per-factor ideals drawn from five
//! families.

pub mod chain;
pub mod cli;
pub mod decomp;
pub mod dual;
pub mod error;
pub mod gf;
pub mod ideals;
pub mod json;
pub mod oracle;
pub mod poly;

pub use chain::{ChainCtx, ChainElem};
pub use decomp::{AmbientElem, AmbientParams, FactorData};
pub use dual::{count_self_dual, dual_code, enumerate_self_dual, is_self_dual, DualCodeSpec};
pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem};
pub use ideals::{
    count_codes, count_ideals, enumerate_codes, enumerate_ideals, CodeSpec, IdealCase, IdealSpec,
};
pub use poly::Poly;
