//! Desk-scale laboratory for information loss in quantum communication
//! protocols.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmat`] dense complex linear algebra over labeled qubit registers;
//! * [`metrics`] distances and information functionals;
//! * [`purify`] purifications and local (Uhlmann) transitions;
//! * [`protocol`] safe k-round protocols, exact simulation and the
//!   conditional information loss;
//! * [`reductions`] embedding/collapsing, the disjointness-to-AND
//!   derivation, the round-elimination auditor and related demos;
//! * [`suite`] the seeded invariant suite behind `qcc-lab verify`;
//! * [`cli`] the command-line front end.

pub mod cli;
pub mod error;
pub mod metrics;
pub mod protocol;
pub mod purify;
pub mod qmat;
pub mod reductions;
pub mod suite;
pub mod tol;

pub use error::{Error, Result};
pub use tol::{Tolerances, TOL};
