//! Phase-space localization and entanglement measures for systems of
//! distinguishable spins 1/2.
//!
//! The second moment `P = 3^N ∫dμ H(μ)²` of the spin Husimi function is
//! computed by three independent routes (doubled-space projectors,
//! subsystem purities, and direct integration over the Bloch spheres) and
//! related to the concurrence family of entanglement measures. The
//! [`ising`] module applies it to ground states of the Ising chain in a
//! tilted field.

pub mod cli;
pub mod entanglement;
mod error;
pub mod hilbert;
pub mod ising;
pub mod phase_space;
pub mod random;

pub use error::{Error, Result};
pub use hilbert::{C64, DensityOperator, PauliAxis, PureState, StateRef, SubsetMask};
pub use phase_space::{Method, PhasePoint, SecondMomentReport};
