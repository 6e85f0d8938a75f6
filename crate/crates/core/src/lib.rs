//! Exact small-instance simulation of quantum determinant estimation.
//!
//! The library prepares the completely antisymmetric state of `N` slots,
//! kicks `det U` back onto a phase register with controlled slot-wise powers
//! of `U`, and reads the phase out with an inverse QFT. Every estimate can
//! be checked against the classical determinant oracles in [`linalg`].

pub mod antisym;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod qde;
pub mod simulator;

pub use error::{Error, ErrorKind, Result};
