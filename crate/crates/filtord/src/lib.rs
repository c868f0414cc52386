//! Jump sets of local fields, computed three ways.
//!
//! A shift map `rho` and its complement set `T` organize the filtration of
//! the principal units of a local field. This crate implements:
//!
//! - the combinatorics of jump sets for a shift ([`jumpset`], [`shift`]);
//! - the orbit invariant of vectors in free filtered modules ([`filtered`]);
//! - the classification of character jump sets over quasi-free modules
//!   ([`characters`]);
//! - the shooting-game Markov process, its exact rational distribution, and
//!   the matching Haar-side mass formula ([`shooting`]);
//! - jump sets read off Eisenstein polynomial coefficients, ramification
//!   polygons, realization of admissible jump sets, and transforms under
//!   field extensions ([`eisenstein`]);
//! - truncated-precision arithmetic in towers `Q_q(zeta_{p^{j+1}})[x]/(g)`
//!   with the unit-reduction oracle computing the true field jump set
//!   ([`padic`]).
//!
//! The `filtord` binary exposes all of it; `verify` runs the acceptance
//! suite.

pub mod characters;
pub mod eisenstein;
pub mod error;
pub mod filtered;
pub mod jumpset;
pub mod padic;
pub mod seed;
pub mod shift;
pub mod shooting;
pub mod verify;

pub use error::{Error, Result};
