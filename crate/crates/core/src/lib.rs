//! Verification of stoquastic Hamiltonian ground energies with classical
//! reversible circuits and product-state measurements.

pub mod error;
pub mod fixed;
pub mod hamiltonian;
pub mod kitaev;
pub mod multiprover;
pub mod harness;
pub mod oracle;
pub mod statevector;
pub mod swap;
pub mod verifier;

pub use error::{Error, Result};
pub use fixed::{FixedPoint, Sign};
