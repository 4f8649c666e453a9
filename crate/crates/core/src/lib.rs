//! Exact lattice and finite-quadratic-form computations for Enriques
//! surfaces and their K3 covers.

#![allow(clippy::needless_range_loop)]

pub mod enriques;
pub mod error;
pub mod exact_linalg;
pub mod expr;
pub mod fqf;
pub mod kummer;
pub mod lattice;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
