//! Interpolation error analysis on tetrahedra.
//!
//! The crate computes the projected circumradius `R_K` and the classical
//! quality measures of arbitrary tetrahedra, builds degree-`k` Lagrange
//! interpolants on the principal lattice, evaluates Sobolev seminorms of
//! polynomial interpolation errors exactly, and runs sweeps that compare the
//! error against `R_K^m h_K^{k+1-2m} |v|_{k+1,p,K}` on degenerating element
//! families.

// negated comparisons are used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod interp;
pub mod norms;
pub mod par;
pub mod projection;
pub mod simplex;
pub mod verify;

pub use error::{Error, Result};
pub use interp::{MultiIndex4, MultiPolynomial};
pub use norms::{PExponent, SeminormSpec};
pub use simplex::{Tetrahedron, Vec3};
