//! Exact verification kernel and numerical transport engine for the Dunkl
//! operators of the rational Calogero model.
//!
//! * [`exactalg`]: rationals, coupling polynomials, sparse multivariate
//!   polynomials, sections with pair-difference denominators and the
//!   symmetric-group action on them.
//! * [`dunkl`]: the Dunkl operators, the Calogero Hamiltonian and exact
//!   identity suites (zero curvature, intertwining, sum of squares,
//!   symmetric/antisymmetric restriction).
//! * [`symbolcalc`]: shift-exponential realizations of coordinate swaps,
//!   their normal-ordered series and operator symbols.
//! * [`transport`]: the `N!`-component local system equivalent to the Dunkl
//!   eigenproblem, its exact flatness check, and path-ordered transport.
//! * [`laxdyn`]: the Lax matrix, trace integrals and a classical simulator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dunkl;
pub mod error;
pub mod exactalg;
pub mod laxdyn;
pub mod symbolcalc;
pub mod transport;

pub use error::{Error, Result};
