//! Radial Skyrme hedgehog evolution with ε = 1, the nonlocal field transform
//! `g ↦ Φ`, and a harness that numerically certifies the identities and
//! inequalities the global regularity argument rests on.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
