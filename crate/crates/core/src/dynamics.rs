//! Survival probability of an initial state and the entropies of its spreading.
//!
//! Two modes are kept separate. Analytic models give only `W₀(t)`; the rest of
//! the weight is spread uniformly over `N` bath states. Exact evolution uses
//! the full weight vector `W_j(t) = |⟨j|e^{−iHt}|j₀⟩|²`.

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{collapse_residual, parabolic_peak, restrict_curve};
use crate::ensembles::fock::FockBasis;
use crate::ensembles::operator::{deformed_hamiltonian, ManyBodyHamiltonian};
use crate::ensembles::stats::{central_window, DEFAULT_EIGENSTATE_WINDOW};
use crate::ensembles::tbre::tbre_hamiltonian;
use crate::entropy::EntropyTriple;
use crate::error::{Error, Result};
use crate::linalg::{self, Eigensystem};
use crate::seed;

pub const DEFAULT_TIME_POINTS: usize = 400;
pub const DEFAULT_INITIAL_STATES: usize = 10;
/// Below this the complexity trace is treated as identically zero.
const FLAT_TRACE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SurvivalModel {
    /// `exp(−t/T)`
    Exponential { t: f64 },
    /// `exp(−(t/T)²)`
    Gaussian { t: f64 },
    /// `exp(−(t/T) tanh(t/T))`: Gaussian at short times, exponential at long times.
    TanhInterp { t: f64 },
    /// `exp(Γ²/2Δ² − √(Γ⁴/4Δ⁴ + (Γt)²))`
    Flambaum { gamma: f64, delta: f64 },
}

impl SurvivalModel {
    /// Flambaum form with `Δ` fixed by the ratio `Γ²/Δ²`.
    pub fn flambaum_with_ratio(gamma: f64, gamma2_over_delta2: f64) -> Result<Self> {
        if !(gamma2_over_delta2 > 0.0 && gamma2_over_delta2.is_finite()) {
            return Err(Error::validation(format!(
                "Γ²/Δ² must be positive and finite, got {gamma2_over_delta2}"
            )));
        }
        let m = SurvivalModel::Flambaum { gamma, delta: gamma / gamma2_over_delta2.sqrt() };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let params: &[(&str, f64)] = match self {
            SurvivalModel::Exponential { t } | SurvivalModel::Gaussian { t } | SurvivalModel::TanhInterp { t } => {
                &[("T", *t)]
            }
            SurvivalModel::Flambaum { gamma, delta } => &[("Γ", *gamma), ("Δ", *delta)],
        };
        for &(name, v) in params {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Natural time unit of the model: `T`, or `1/Γ` for the Flambaum form.
    pub fn time_scale(&self) -> f64 {
        match *self {
            SurvivalModel::Exponential { t } | SurvivalModel::Gaussian { t } | SurvivalModel::TanhInterp { t } => t,
            SurvivalModel::Flambaum { gamma, .. } => 1.0 / gamma,
        }
    }

    pub fn survival_probability(&self, time: f64) -> Result<f64> {
        self.validate()?;
        if !(time >= 0.0) {
            return Err(Error::validation(format!("time must be nonnegative, got {time}")));
        }
        let w = match *self {
            SurvivalModel::Exponential { t } => (-time / t).exp(),
            SurvivalModel::Gaussian { t } => (-(time / t).powi(2)).exp(),
            SurvivalModel::TanhInterp { t } => {
                let x = time / t;
                (-x * x.tanh()).exp()
            }
            SurvivalModel::Flambaum { gamma, delta } => {
                let a = gamma * gamma / (2.0 * delta * delta);
                let x = gamma * time;
                // a − √(a² + x²) rewritten to avoid cancellation at small x.
                (-x * x / (a + a.hypot(x))).exp()
            }
        };
        Ok(w)
    }
}

/// Entropies of `{W₀, (1−W₀)/N, …, (1−W₀)/N}`.
pub fn thermalized_entropies(w0: f64, n_states: usize) -> Result<EntropyTriple> {
    if !(0.0..=1.0).contains(&w0) {
        return Err(Error::validation(format!("W₀ must lie in [0, 1], got {w0}")));
    }
    if n_states == 0 {
        return Err(Error::validation("the bath needs at least one state"));
    }
    let n = n_states as f64;
    let rest = 1.0 - w0;
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let shannon = -xlnx(w0) - xlnx(rest) + rest * n.ln();
    let renyi2 = -(w0 * w0 + rest * rest / n).ln();
    Ok(EntropyTriple::from_parts(shannon, renyi2, Some((n + 1.0).ln())))
}

/// `t = 0` followed by `points` log-spaced times over `[1e−2, 1e2]·scale`.
pub fn default_time_grid(scale: f64, points: usize) -> Result<Vec<f64>> {
    if !(scale > 0.0 && scale.is_finite()) || points < 2 {
        return Err(Error::validation("time grid needs a positive scale and at least 2 points"));
    }
    let (lo, hi) = (-2.0f64, 2.0f64);
    let step = (hi - lo) / (points - 1) as f64;
    Ok(std::iter::once(0.0)
        .chain((0..points).map(|i| scale * 10f64.powf(lo + step * i as f64)))
        .collect())
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::validation("time grid is empty"));
    }
    if !(times[0] >= 0.0) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::validation("times must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("time grid must be strictly ascending"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    Grid,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakTime {
    pub t_star: f64,
    pub sc_max: f64,
    pub refinement: Refinement,
}

/// Peak of a complexity trace: grid argmax refined by a parabola in `ln t`.
pub fn peak_time(times: &[f64], complexity: &[f64]) -> Result<PeakTime> {
    let (lo, hi) = complexity
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    if hi <= FLAT_TRACE {
        return Err(Error::DegenerateCurve { spread: hi - lo });
    }
    let start = times.iter().position(|&t| t > 0.0).unwrap_or(times.len());
    let p = parabolic_peak(&times[start..], &complexity[start..], true)?;
    Ok(PeakTime {
        t_star: p.x,
        sc_max: p.value,
        refinement: if p.parabolic { Refinement::Parabolic } else { Refinement::Grid },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalTrace {
    pub times: Vec<f64>,
    pub w0: Vec<f64>,
    /// Number of states other than the initial one.
    pub n_states: usize,
    /// Full weight vectors `[time][state]`, exact evolution only.
    pub weights: Option<Vec<Vec<f64>>>,
    pub shannon: Vec<f64>,
    pub renyi2: Vec<f64>,
    pub complexity: Vec<f64>,
}

impl SurvivalTrace {
    pub fn peak(&self) -> Result<PeakTime> {
        peak_time(&self.times, &self.complexity)
    }
}

/// Applies the thermalization ansatz pointwise to a given `W₀(t)`.
pub fn ansatz_trace(times: &[f64], w0: Vec<f64>, n_states: usize) -> Result<SurvivalTrace> {
    check_grid(times)?;
    if w0.len() != times.len() {
        return Err(Error::validation("W₀ and time grid differ in length"));
    }
    let mut trace = SurvivalTrace {
        times: times.to_vec(),
        w0: Vec::with_capacity(times.len()),
        n_states,
        weights: None,
        shannon: Vec::with_capacity(times.len()),
        renyi2: Vec::with_capacity(times.len()),
        complexity: Vec::with_capacity(times.len()),
    };
    for w in w0 {
        let e = thermalized_entropies(w.clamp(0.0, 1.0), n_states)?;
        trace.w0.push(w);
        trace.shannon.push(e.shannon);
        trace.renyi2.push(e.renyi2);
        trace.complexity.push(e.complexity);
    }
    Ok(trace)
}

pub fn analytic_complexity_trace(model: &SurvivalModel, n_states: usize, times: &[f64]) -> Result<SurvivalTrace> {
    model.validate()?;
    check_grid(times)?;
    let w0 = times.iter().map(|&t| model.survival_probability(t)).collect::<Result<Vec<_>>>()?;
    ansatz_trace(times, w0, n_states)
}

/// `|Σ_k Q_jk Q_{j₀k} e^{−iλ_k t}|²` for every `j` and every time, as `[time][j]`.
fn evolved_weights(eig: &Eigensystem, initial: usize, times: &[f64]) -> Vec<Vec<f64>> {
    let q = &eig.vectors;
    let n = eig.dimension();
    let nt = times.len();
    let c: Vec<f64> = (0..n).map(|k| q[(initial, k)]).collect();
    let cos = Mat::from_fn(n, nt, |k, t| c[k] * (eig.values[k] * times[t]).cos());
    let sin = Mat::from_fn(n, nt, |k, t| c[k] * (eig.values[k] * times[t]).sin());
    let re = q * &cos;
    let im = q * &sin;
    (0..nt)
        .map(|t| (0..n).map(|j| re[(j, t)].powi(2) + im[(j, t)].powi(2)).collect())
        .collect()
}

/// Exact evolution of basis state `initial` given the eigensystem of `H`.
pub fn evolve_from_eigensystem(
    eig: &Eigensystem,
    initial: usize,
    times: &[f64],
    keep_weights: bool,
) -> Result<SurvivalTrace> {
    check_grid(times)?;
    let n = eig.dimension();
    if initial >= n {
        return Err(Error::validation(format!("initial state {initial} outside a {n}-dimensional space")));
    }
    let weights = evolved_weights(eig, initial, times);
    let mut trace = SurvivalTrace {
        times: times.to_vec(),
        w0: Vec::with_capacity(times.len()),
        n_states: n - 1,
        weights: None,
        shannon: Vec::with_capacity(times.len()),
        renyi2: Vec::with_capacity(times.len()),
        complexity: Vec::with_capacity(times.len()),
    };
    for w in &weights {
        let (mut s, mut purity) = (0.0, 0.0);
        for &x in w {
            if x > 0.0 {
                s -= x * x.ln();
                purity += x * x;
            }
        }
        let r2 = -purity.ln();
        trace.w0.push(w[initial]);
        trace.shannon.push(s);
        trace.renyi2.push(r2);
        trace.complexity.push(s - r2);
    }
    if keep_weights {
        trace.weights = Some(weights);
    }
    Ok(trace)
}

pub fn evolve_basis_state(h: &ManyBodyHamiltonian, initial: usize, times: &[f64]) -> Result<SurvivalTrace> {
    if initial >= h.dimension() {
        return Err(Error::validation(format!(
            "initial state {initial} outside a {}-dimensional space",
            h.dimension()
        )));
    }
    let eig = linalg::symmetric_eigen(h.to_dense().as_ref())?;
    evolve_from_eigensystem(&eig, initial, times, true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TbreDynamicsConfig {
    pub orbitals: u32,
    pub particles: u32,
    pub alpha: f64,
    pub realizations: usize,
    pub initial_states: usize,
    /// Central fraction of the unperturbed spectrum that initial states are drawn from.
    pub window: f64,
    pub base_seed: u64,
}

impl TbreDynamicsConfig {
    pub fn new(orbitals: u32, particles: u32, alpha: f64, realizations: usize, base_seed: u64) -> Self {
        Self {
            orbitals,
            particles,
            alpha,
            realizations,
            initial_states: DEFAULT_INITIAL_STATES,
            window: DEFAULT_EIGENSTATE_WINDOW,
            base_seed,
        }
    }

    fn validate(&self) -> Result<FockBasis> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::validation(format!("α must be finite and nonnegative, got {}", self.alpha)));
        }
        if self.realizations == 0 || self.initial_states == 0 {
            return Err(Error::validation("need at least one realization and one initial state"));
        }
        FockBasis::new(self.orbitals, self.particles)
    }
}

/// Realization- and state-averaged exact dynamics in the deformed TBRE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TbreSurvival {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub w0: Vec<f64>,
    pub shannon: Vec<f64>,
    pub renyi2: Vec<f64>,
    pub complexity: Vec<f64>,
    /// `None` when the averaged complexity is identically zero (α = 0).
    pub peak: Option<PeakTime>,
    pub samples: usize,
}

/// `count` indices spread evenly over the central `window` of `energies`, by rank.
pub fn select_initial_states(energies: &[f64], window: f64, count: usize) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let range = central_window(energies.len(), window)?;
    if count > range.len() {
        return Err(Error::validation(format!(
            "{count} initial states requested but the window holds only {}",
            range.len()
        )));
    }
    let span = range.len() - 1;
    Ok((0..count)
        .map(|i| {
            let offset = if count == 1 { span / 2 } else { (i * span + (count - 1) / 2) / (count - 1) };
            order[range.start + offset]
        })
        .collect())
}

/// The same disorder realizations are used for every α, which keeps `t*(α)` smooth.
pub fn tbre_survival_ensemble(config: &TbreDynamicsConfig, times: &[f64]) -> Result<TbreSurvival> {
    let basis = config.validate()?;
    check_grid(times)?;
    let nt = times.len();
    let per_realization: Vec<(u64, Result<[Vec<f64>; 4]>)> = (0..config.realizations)
        .into_par_iter()
        .map(|r| {
            let s = seed::realization_seed(config.base_seed, 0, r);
            let run = || -> Result<[Vec<f64>; 4]> {
                let (h0, h1) = tbre_hamiltonian(&basis, s)?;
                let diag: Vec<f64> = (0..h0.dimension()).map(|i| h0.get(i, i)).collect();
                let starts = select_initial_states(&diag, config.window, config.initial_states)?;
                let h = deformed_hamiltonian(&h0, &h1, config.alpha)?;
                let eig = linalg::symmetric_eigen(h.to_dense().as_ref())?;
                let mut acc = [vec![0.0; nt], vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]];
                for j0 in starts {
                    let tr = evolve_from_eigensystem(&eig, j0, times, false)?;
                    for (a, src) in acc.iter_mut().zip([&tr.w0, &tr.shannon, &tr.renyi2, &tr.complexity]) {
                        a.iter_mut().zip(src).for_each(|(x, y)| *x += y);
                    }
                }
                Ok(acc)
            };
            (s, run())
        })
        .collect();

    let mut total = [vec![0.0; nt], vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]];
    for (s, res) in per_realization {
        let acc = res.map_err(|e| Error::Realization { seed: s, source: Box::new(e) })?;
        for (t, a) in total.iter_mut().zip(acc) {
            t.iter_mut().zip(a).for_each(|(x, y)| *x += y);
        }
    }
    let samples = config.realizations * config.initial_states;
    for t in total.iter_mut() {
        t.iter_mut().for_each(|x| *x /= samples as f64);
    }
    let [w0, shannon, renyi2, complexity] = total;
    let peak = match peak_time(times, &complexity) {
        Ok(p) => Some(p),
        Err(Error::DegenerateCurve { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TbreSurvival { alpha: config.alpha, times: times.to_vec(), w0, shannon, renyi2, complexity, peak, samples })
}

/// Spread of averaged complexity curves plotted against `t/t*`, over `lo ≤ t/t* ≤ hi`.
///
/// Curves are compared on a logarithmic time axis, matching the grid spacing.
pub fn time_collapse(runs: &[TbreSurvival], lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::validation(format!("collapse window {lo}..{hi} is invalid")));
    }
    let curves = runs
        .iter()
        .map(|r| {
            let peak = r.peak.ok_or_else(|| Error::validation(format!("run at α = {} has no peak", r.alpha)))?;
            Ok(r.times
                .iter()
                .zip(&r.complexity)
                .filter(|(t, _)| **t > 0.0)
                .map(|(t, c)| ((t / peak.t_star).ln(), *c))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = (lo.ln(), hi.ln());
    let clipped = curves
        .iter()
        .map(|c| {
            let r = restrict_curve(c, a, b);
            match (r.first(), r.last()) {
                (Some(f), Some(l)) if f.0 == a && l.0 == b => Ok(r),
                _ => Err(Error::validation("time grid does not cover the collapse window")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    collapse_residual(&clipped)
}

/// Least-squares `T` of `W₀ ≈ exp(−(t/T)²)` on `0 ≤ t ≤ t_max`, with the RMS residual in `W₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub t: f64,
    pub rms_residual: f64,
    pub points: usize,
}

pub fn fit_gaussian_decay(times: &[f64], w0: &[f64], t_max: f64) -> Result<GaussianFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(w0)
        .filter(|(t, w)| **t > 0.0 && **t <= t_max && **w > 0.0)
        .map(|(t, w)| (*t, *w))
        .collect();
    if pts.len() < 2 {
        return Err(Error::validation("Gaussian fit needs at least 2 points with t > 0"));
    }
    // ln W₀ = −t²/T², a one-parameter fit through the origin in t².
    let num: f64 = pts.iter().map(|(t, w)| -t * t * w.ln()).sum();
    let den: f64 = pts.iter().map(|(t, _)| t.powi(4)).sum();
    if !(num > 0.0) {
        return Err(Error::Numeric("W₀ does not decay on the fit window".into()));
    }
    let tau = (den / num).sqrt();
    let rms = (pts.iter().map(|(t, w)| (w - (-(t / tau).powi(2)).exp()).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
    Ok(GaussianFit { t: tau, rms_residual: rms, points: pts.len() })
}
