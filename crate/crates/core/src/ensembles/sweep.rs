//! Disorder-averaged sweeps over a control parameter.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fock::{binomial, FockBasis};
use super::heisenberg::heisenberg_mbl_hamiltonian;
use super::operator::{deformed_hamiltonian, ManyBodyHamiltonian};
use super::random_matrix::{sample_diagonal, sample_goe};
use super::stats::{
    diagonalize, eigenstate_entropy_stats, gap_ratio_stats, DEFAULT_EIGENSTATE_WINDOW, DEFAULT_SPECTRAL_WINDOW,
};
use super::tbre::tbre_hamiltonian;
use crate::error::{Error, Result};
use crate::seed;

const H0_STREAM: u64 = 0;
const H1_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Random diagonal plus α times a GOE matrix; control is α.
    DeformedGoe { size: usize },
    /// One-body diagonal plus α times the two-body random interaction; control is α.
    DeformedTbre { orbitals: u32, particles: u32 },
    /// Disordered Heisenberg chain; control is the field strength h.
    Heisenberg { sites: u32 },
}

impl EnsembleKind {
    pub fn dimension(&self) -> u128 {
        match *self {
            EnsembleKind::DeformedGoe { size } => size as u128,
            EnsembleKind::DeformedTbre { orbitals, particles } => binomial(orbitals, particles),
            EnsembleKind::Heisenberg { sites } => binomial(sites, sites / 2),
        }
    }

    /// Assembles the Hamiltonian of one realization at control value `x`.
    pub fn hamiltonian(&self, x: f64, seed: u64) -> Result<ManyBodyHamiltonian> {
        match *self {
            EnsembleKind::DeformedGoe { size } => {
                let h0 = sample_diagonal(size, seed::substream(seed, H0_STREAM))?;
                let h1 = sample_goe(size, seed::substream(seed, H1_STREAM))?;
                deformed_hamiltonian(&h0, &h1, x)
            }
            EnsembleKind::DeformedTbre { orbitals, particles } => {
                let basis = FockBasis::new(orbitals, particles)?;
                let (h0, h1) = tbre_hamiltonian(&basis, seed)?;
                deformed_hamiltonian(&h0, &h1, x)
            }
            EnsembleKind::Heisenberg { sites } => heisenberg_mbl_hamiltonian(sites, x, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub realizations: usize,
    pub base_seed: u64,
    /// Central fraction of the spectrum used for gap ratios.
    pub spectral_window: f64,
    /// Central fraction of eigenstates used for entropy averages.
    pub eigenstate_window: f64,
    /// Skip eigenvectors (and eigenstate entropies) when false.
    pub eigenvectors: bool,
}

impl EnsembleConfig {
    pub fn new(kind: EnsembleKind, realizations: usize, base_seed: u64) -> Self {
        Self {
            kind,
            realizations,
            base_seed,
            spectral_window: DEFAULT_SPECTRAL_WINDOW,
            eigenstate_window: DEFAULT_EIGENSTATE_WINDOW,
            eigenvectors: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::validation("at least one realization is required"));
        }
        for (name, w) in [("spectral", self.spectral_window), ("eigenstate", self.eigenstate_window)] {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::validation(format!("{name} window must lie in (0, 1], got {w}")));
            }
        }
        match self.kind {
            EnsembleKind::DeformedGoe { size } if size < 2 => {
                Err(Error::validation(format!("GOE size must be at least 2, got {size}")))
            }
            EnsembleKind::DeformedTbre { orbitals, particles } => {
                FockBasis::new(orbitals, particles).map(|_| ())
            }
            EnsembleKind::Heisenberg { sites } if sites % 2 == 1 || !(2..=16).contains(&sites) => Err(
                Error::validation(format!("chain length must be even and in 2..=16, got {sites}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Mean and standard error of the mean. The error is NaN for a single sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanError {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanError {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let stderr = if xs.len() < 2 {
            f64::NAN
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
        };
        Self { mean, stderr }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStatRecord {
    pub control: f64,
    pub gap_ratio: MeanError,
    /// Eigenstate entropies; absent when eigenvectors were skipped.
    pub shannon: Option<MeanError>,
    pub renyi2: Option<MeanError>,
    pub complexity: Option<MeanError>,
    pub realizations: usize,
}

#[derive(Debug, Clone, Copy)]
struct RealizationStats {
    r: f64,
    entropies: Option<(f64, f64, f64)>,
}

fn run_realization(config: &EnsembleConfig, x: f64, seed: u64) -> Result<RealizationStats> {
    let h = config.kind.hamiltonian(x, seed)?;
    let sample = diagonalize(&h, config.eigenvectors, seed)?;
    let r = gap_ratio_stats(&sample, config.spectral_window)?;
    let entropies = if config.eigenvectors {
        let t = eigenstate_entropy_stats(&sample, config.eigenstate_window)?;
        Some((t.shannon, t.renyi2, t.complexity))
    } else {
        None
    };
    Ok(RealizationStats { r, entropies })
}

/// One record per control value, realizations averaged.
///
/// Work items are independent and seeded by their grid position, so the result
/// does not depend on the thread count. The first failing item in grid order
/// aborts the sweep and reports its seed.
pub fn ensemble_sweep(config: &EnsembleConfig, controls: &[f64]) -> Result<Vec<EnsembleStatRecord>> {
    config.validate()?;
    if controls.is_empty() {
        return Err(Error::validation("control grid is empty"));
    }
    if let Some(x) = controls.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::validation(format!("control values must be finite and nonnegative, got {x}")));
    }
    let reps = config.realizations;
    let results: Vec<(u64, Result<RealizationStats>)> = (0..controls.len() * reps)
        .into_par_iter()
        .map(|item| {
            let (c, r) = (item / reps, item % reps);
            let s = seed::realization_seed(config.base_seed, c, r);
            (s, run_realization(config, controls[c], s))
        })
        .collect();

    let mut stats = Vec::with_capacity(results.len());
    for (seed, res) in results {
        match res {
            Ok(s) => stats.push(s),
            Err(e) => return Err(Error::Realization { seed, source: Box::new(e) }),
        }
    }
    Ok(controls
        .iter()
        .zip(stats.chunks(reps))
        .map(|(&control, chunk)| {
            let pick = |f: fn(&(f64, f64, f64)) -> f64| -> Option<MeanError> {
                let xs: Option<Vec<f64>> = chunk.iter().map(|s| s.entropies.as_ref().map(f)).collect();
                xs.map(|xs| MeanError::from_samples(&xs))
            };
            let r: Vec<f64> = chunk.iter().map(|s| s.r).collect();
            EnsembleStatRecord {
                control,
                gap_ratio: MeanError::from_samples(&r),
                shannon: pick(|e| e.0),
                renyi2: pick(|e| e.1),
                complexity: pick(|e| e.2),
                realizations: reps,
            }
        })
        .collect())
}
