//! Wigner-positive states of a single bosonic mode in a truncated Fock basis.
//!
//! The crate covers operator algebra, the polyanalytic description of Fock-bounded Wigner
//! functions, the loss/amplification channels and the Vertigo map built from them, a library
//! of named states, positivity certification, extreme-point tools and file formats.

pub mod channels;
pub mod cli_io;
pub mod error;
pub mod extremes;
pub mod fock_core;
pub mod phase_space;
pub mod polynomials;
pub mod positivity;
pub mod special;
pub mod state_zoo;

pub use error::{Result, WigxError};
pub use fock_core::{CMatrix, FockOperator, Spectrum, C64};
