//! Truncated-precision arithmetic in `O_K` for
//! `K = Q_q(zeta_{p^{j+1}})[x]/(g)` and the unit-reduction oracle computing
//! the field jump set, with exact valuations below the precision ceiling.

pub mod base;
pub mod oracle;
pub mod tower;
pub mod zq;

pub use base::{BaseElem, BaseRing};
pub use oracle::{
    default_precision, field_jump_set, ramification_newton, sample_eisenstein, substitute_power,
};
pub use tower::{RingElement, Tower};
pub use zq::{FqElem, Zq, ZqElem};
