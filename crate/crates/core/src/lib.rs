//! Exact distribution and waiting-time computations for unified multi-state
//! run patterns in i.i.d. trials.

#[cfg(feature = "cli")]
pub mod cli;
pub mod dna;
pub mod error;
pub mod exactdist;
pub mod oracle;
pub mod par;
pub mod pattern;
pub mod polyalg;
pub mod transfer;
pub mod verify;
pub mod waiting;

pub use error::{Error, Result};
