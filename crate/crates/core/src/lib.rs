//! Process POVMs for measurements of quantum channels.
//!
//! ```
//! use ppovm_core::quantum::{choi_of_channel, make_standard, StandardChannel};
//! use ppovm_core::{schemes, tomo};
//!
//! let pp = schemes::pauli_probe();
//! let ch = make_standard(&StandardChannel::Depolarizing(0.25), 2)?;
//! let omega = choi_of_channel(&ch)?;
//! let probs = pp.probabilities(&omega)?;
//! let result = tomo::linear_inversion(&pp, &probs)?;
//! assert!(tomo::reconstruction_error(&result, &omega)? < 1e-7);
//! # Ok::<(), ppovm_core::Error>(())
//! ```

#![no_std]

extern crate alloc;

pub mod discrim;
pub mod error;
pub mod matrix;
pub mod ppovm;
pub mod quantum;
pub mod random;
pub mod schemes;
pub mod tomo;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
