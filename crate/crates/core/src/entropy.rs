//! Shannon, Rényi-2 and entropic-complexity functionals.
//!
//! All entropies are in nats. The complexity `S_C = S − R₂` vanishes for a
//! point mass and for any distribution that is uniform on its support, and is
//! positive otherwise.

use faer::MatRef;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Weights in `[-NEGATIVE_TOLERANCE, 0)` are treated as round-off and clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the total weight from one.
pub const SUM_TOLERANCE: f64 = 1e-10;

/// A list of `(value, multiplicity)` levels summing to one.
///
/// Implemented by plain probability vectors (every multiplicity is one) and by
/// the compressed spectra of the qubit channels, whose degeneracy can reach 2⁶³.
pub trait Spectrum {
    fn levels(&self) -> impl Iterator<Item = (f64, f64)> + '_;

    /// Natural log of the full dimension, including implicit zero levels.
    fn ln_dimension(&self) -> f64;
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates, clamps round-off negatives and renormalizes.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("probability vector is empty"));
        }
        let mut total = 0.0;
        for (i, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(Error::validation(format!("weight {i} is not finite")));
            }
            if *w < 0.0 {
                if *w < -NEGATIVE_TOLERANCE {
                    return Err(Error::validation(format!("weight {i} is negative ({w:e})")));
                }
                *w = 0.0;
            }
            total += *w;
        }
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::validation(format!("weights sum to {total}, expected 1")));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { weights })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("dimension must be positive"));
        }
        Ok(Self {
            weights: vec![1.0 / dim as f64; dim],
        })
    }

    /// Squared amplitudes `v_i² / Σ v_j²` of a real vector.
    pub fn from_amplitudes(v: &[f64]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if !norm2.is_finite() {
            return Err(Error::validation("amplitude vector is not finite"));
        }
        if norm2 == 0.0 {
            return Err(Error::validation("amplitude vector is zero"));
        }
        Ok(Self {
            weights: v.iter().map(|x| x * x / norm2).collect(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.weights
    }
}

impl Spectrum for ProbabilityVector {
    fn levels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights.iter().map(|&w| (w, 1.0))
    }

    fn ln_dimension(&self) -> f64 {
        (self.weights.len() as f64).ln()
    }
}

/// The three entropies of one spectrum, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTriple {
    pub shannon: f64,
    pub renyi2: f64,
    pub complexity: f64,
    /// `ln d`, when the dimension is known.
    pub normalizer: Option<f64>,
}

impl EntropyTriple {
    pub fn from_parts(shannon: f64, renyi2: f64, normalizer: Option<f64>) -> Self {
        Self {
            shannon,
            renyi2,
            complexity: shannon - renyi2,
            normalizer,
        }
    }

    /// All three quantities divided by `ln d`. `None` when `d ≤ 1` or unknown.
    pub fn normalized(&self) -> Option<EntropyTriple> {
        let z = self.normalizer.filter(|z| *z > 0.0)?;
        Some(EntropyTriple {
            shannon: self.shannon / z,
            renyi2: self.renyi2 / z,
            complexity: self.complexity / z,
            normalizer: Some(1.0),
        })
    }
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `−Σ w ln w` with `0 ln 0 = 0`.
pub fn shannon_entropy<S: Spectrum + ?Sized>(p: &S) -> f64 {
    -p.levels().map(|(w, mult)| mult * xlnx(w)).sum::<f64>()
}

/// `Σ w²`.
pub fn purity<S: Spectrum + ?Sized>(p: &S) -> f64 {
    p.levels().map(|(w, mult)| mult * w * w).sum()
}

/// `−ln Σ w²`.
pub fn renyi2_entropy<S: Spectrum + ?Sized>(p: &S) -> f64 {
    -purity(p).ln()
}

pub fn entropic_complexity<S: Spectrum + ?Sized>(p: &S) -> EntropyTriple {
    EntropyTriple::from_parts(shannon_entropy(p), renyi2_entropy(p), Some(p.ln_dimension()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumSource {
    ClosedForm,
    NumericEigendecomposition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixSpectrum {
    pub source: SpectrumSource,
    /// Sorted descending, so the dominant eigenvalue sits at index 0.
    pub spectrum: ProbabilityVector,
}

/// Eigenvalues of a real symmetric unit-trace matrix as a probability vector.
///
/// Eigenvalues are clamped to `[0, 1]` and renormalized; anything below
/// `-SUM_TOLERANCE` means the input was not a density matrix.
pub fn spectrum_of_density_matrix(rho: MatRef<'_, f64>) -> Result<DensityMatrixSpectrum> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(Error::validation("density matrix must be square and nonempty"));
    }
    let defect = linalg::symmetry_defect(rho);
    if defect > 1e-10 {
        return Err(Error::validation(format!("density matrix is not symmetric (defect {defect:e})")));
    }
    let trace: f64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
    if (trace - 1.0).abs() > 1e-10 {
        return Err(Error::validation(format!("density matrix has trace {trace}, expected 1")));
    }
    let mut values = linalg::symmetric_eigenvalues(rho)?;
    if let Some(&lowest) = values.first() {
        if lowest < -SUM_TOLERANCE {
            return Err(Error::validation(format!(
                "density matrix is not positive semidefinite (eigenvalue {lowest:e})"
            )));
        }
    }
    for v in &mut values {
        *v = v.clamp(0.0, 1.0);
    }
    let total: f64 = values.iter().sum();
    for v in &mut values {
        *v /= total;
    }
    values.reverse();
    Ok(DensityMatrixSpectrum {
        source: SpectrumSource::NumericEigendecomposition,
        spectrum: ProbabilityVector::new(values)?,
    })
}
