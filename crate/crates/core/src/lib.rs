//! Exact sexagesimal arithmetic, a straight-line interpreter for scribal
//! procedures, and the Susa problem corpus solved both the scribes' way and
//! with modern exact algebra.
//!
//! Start with [`numeral`] for numbers, [`scribal`] for procedures and traces,
//! [`equations`] for the solvers and [`corpus`] for the problems themselves.
//! The `examples/` directory has one runnable program per capability.

// errors carry the exact values involved; they are not boxed
#![allow(clippy::result_large_err)]

pub mod numeral;
pub mod numtheory;
pub mod scribal;
pub mod equations;
pub mod document;
pub mod corpus;
pub mod cli;
