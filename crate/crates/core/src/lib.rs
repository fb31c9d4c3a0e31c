//! Entropic complexity `S_C = S − R₂` of quantum states and spectra.
//!
//! The crate covers four families of systems:
//!
//! * [`channels`]: n-qubit GHZ states under depolarizing and dephasing noise,
//!   evaluated in closed form up to 63 qubits;
//! * [`ensembles`]: deformed GOE, deformed two-body random ensembles and the
//!   disordered Heisenberg chain, diagonalized exactly;
//! * [`dynamics`]: survival-probability models and unitary evolution of basis
//!   states;
//! * [`analysis`]: peak finding, power-law fits and data-collapse scores.
//!
//! All entropies are natural-log based.

pub mod analysis;
pub mod channels;
pub mod dynamics;
pub mod ensembles;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod seed;

pub use entropy::{
    entropic_complexity, renyi2_entropy, shannon_entropy, EntropyTriple, ProbabilityVector, Spectrum,
};
pub use error::{Error, Result};
