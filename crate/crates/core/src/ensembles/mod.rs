//! Random Hamiltonians, exact diagonalization and disorder-averaged statistics.

pub mod fock;
pub mod heisenberg;
pub mod operator;
pub mod random_matrix;
pub mod stats;
pub mod sweep;
pub mod tbre;

pub use fock::FockBasis;
pub use operator::{deformed_hamiltonian, CsrMatrix, ManyBodyHamiltonian, Sector, Storage};
pub use stats::{SpectralSample, diagonalize};
pub use sweep::{ensemble_sweep, EnsembleConfig, EnsembleKind, EnsembleStatRecord, MeanError};
