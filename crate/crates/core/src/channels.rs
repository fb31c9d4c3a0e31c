//! Depolarizing (generalized Werner) and dephasing channels acting on the
//! n-qubit GHZ state `(|0…0⟩ + |1…1⟩)/√2`.
//!
//! Both post-channel density matrices have a handful of distinct eigenvalues,
//! so everything is evaluated on compressed `(value, multiplicity)` spectra and
//! `d = 2ⁿ` is never materialized. That keeps `n = 63` as cheap as `n = 1`.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::golden_section_maximize;
use crate::entropy::Spectrum;
use crate::error::{Error, Result};

/// Largest qubit count accepted by peak scans.
pub const MAX_SERIES_QUBITS: u32 = 63;
/// Beyond this `2^-n` underflows.
pub const MAX_QUBITS: u32 = 1000;
/// Largest qubit count for which the dense `2ⁿ × 2ⁿ` matrix may be assembled.
pub const MAX_DENSE_QUBITS: u32 = 12;

/// Bracket width at which the peak search stops.
pub const PEAK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Depolarize,
    Dephase,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Depolarize => "depolarize",
            Channel::Dephase => "dephase",
        })
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarize" | "depolarizing" | "werner" => Ok(Channel::Depolarize),
            "dephase" | "dephasing" => Ok(Channel::Dephase),
            other => Err(Error::validation(format!("unknown channel '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    n: u32,
    p: f64,
}

impl ChannelConfig {
    pub fn new(n: u32, p: f64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::validation(format!("qubit count must be in 1..={MAX_QUBITS}, got {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("probability must be in [0, 1], got {p}")));
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `2ⁿ` when it fits a signed 64-bit integer.
    pub fn dimension(&self) -> Option<u64> {
        (self.n <= 62).then(|| 1u64 << self.n)
    }

    pub fn ln_dimension(&self) -> f64 {
        f64::from(self.n) * LN_2
    }

    /// `1/d`, exact as a power of two.
    pub fn inv_dimension(&self) -> f64 {
        2f64.powi(-(self.n as i32))
    }
}

/// One eigenvalue together with how often it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: f64,
}

/// Eigenvalues listed once per distinct value; levels not listed are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressedSpectrum {
    levels: Vec<Level>,
    ln_dim: f64,
}

impl CompressedSpectrum {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Expands to one entry per eigenvalue, zeros included. Only for small `d`.
    pub fn expand(&self) -> Result<Vec<f64>> {
        let dim = self.ln_dim.exp().round();
        if dim > (1u64 << 24) as f64 {
            return Err(Error::validation("spectrum too large to expand"));
        }
        let mut out = Vec::with_capacity(dim as usize);
        for l in &self.levels {
            out.extend(std::iter::repeat(l.value).take(l.multiplicity.round() as usize));
        }
        out.resize(dim as usize, 0.0);
        Ok(out)
    }
}

impl Spectrum for CompressedSpectrum {
    fn levels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.levels.iter().map(|l| (l.value, l.multiplicity))
    }

    fn ln_dimension(&self) -> f64 {
        self.ln_dim
    }
}

/// `{(1 − (d−1)p/d, 1), (p/d, d−1)}`.
pub fn depolarized_spectrum(cfg: &ChannelConfig) -> CompressedSpectrum {
    let inv_d = cfg.inv_dimension();
    let p = cfg.p;
    CompressedSpectrum {
        levels: vec![
            Level { value: (1.0 - p) + p * inv_d, multiplicity: 1.0 },
            Level { value: p * inv_d, multiplicity: 1.0 / inv_d - 1.0 },
        ],
        ln_dim: cfg.ln_dimension(),
    }
}

/// `{1/2 + (1−p)ⁿ/2, 1/2 − (1−p)ⁿ/2}`; the other `d − 2` eigenvalues vanish.
pub fn dephased_spectrum(cfg: &ChannelConfig) -> CompressedSpectrum {
    let c = coherence(cfg);
    CompressedSpectrum {
        levels: vec![
            Level { value: 0.5 + 0.5 * c, multiplicity: 1.0 },
            Level { value: 0.5 - 0.5 * c, multiplicity: 1.0 },
        ],
        ln_dim: cfg.ln_dimension(),
    }
}

fn coherence(cfg: &ChannelConfig) -> f64 {
    (1.0 - cfg.p).powi(cfg.n as i32)
}

pub fn spectrum(channel: Channel, cfg: &ChannelConfig) -> CompressedSpectrum {
    match channel {
        Channel::Depolarize => depolarized_spectrum(cfg),
        Channel::Dephase => dephased_spectrum(cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSweepRecord {
    pub n: u32,
    pub p: f64,
    pub shannon: f64,
    pub renyi2: f64,
    pub complexity_raw: f64,
    /// `complexity_raw / (n ln 2)`.
    pub complexity_normalized: f64,
}

impl ChannelSweepRecord {
    fn new(cfg: &ChannelConfig, shannon: f64, purity: f64) -> Self {
        let renyi2 = -purity.ln();
        let complexity_raw = shannon - renyi2;
        Self {
            n: cfg.n,
            p: cfg.p,
            shannon,
            renyi2,
            complexity_raw,
            complexity_normalized: complexity_raw / cfg.ln_dimension(),
        }
    }
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Closed-form entropies of the depolarized GHZ state.
pub fn depolarized_complexity(cfg: &ChannelConfig) -> ChannelSweepRecord {
    let inv_d = cfg.inv_dimension();
    let p = cfg.p;
    let prominent = (1.0 - p) + p * inv_d;
    // Total weight of the (d−1)-fold level, each copy worth p/d.
    let bulk = p * (1.0 - inv_d);
    let mut shannon = -xlnx(prominent);
    if p > 0.0 {
        shannon -= bulk * (p.ln() - cfg.ln_dimension());
    }
    let purity = prominent * prominent + bulk * p * inv_d;
    ChannelSweepRecord::new(cfg, shannon, purity)
}

/// Closed-form entropies of the dephased GHZ state.
pub fn dephased_complexity(cfg: &ChannelConfig) -> ChannelSweepRecord {
    let c = coherence(cfg);
    let shannon = -xlnx(0.5 + 0.5 * c) - xlnx(0.5 - 0.5 * c);
    let purity = 0.5 * (1.0 + c * c);
    ChannelSweepRecord::new(cfg, shannon, purity)
}

pub fn channel_complexity(channel: Channel, cfg: &ChannelConfig) -> ChannelSweepRecord {
    match channel {
        Channel::Depolarize => depolarized_complexity(cfg),
        Channel::Dephase => dephased_complexity(cfg),
    }
}

/// `points` equally spaced values of `p` on `[0, 1]`, both ends included.
pub fn sweep_curve(channel: Channel, n: u32, points: usize) -> Result<Vec<ChannelSweepRecord>> {
    if points < 2 {
        return Err(Error::validation("a sweep needs at least two grid points"));
    }
    (0..points)
        .map(|i| {
            let p = if i == points - 1 { 1.0 } else { i as f64 / (points - 1) as f64 };
            Ok(channel_complexity(channel, &ChannelConfig::new(n, p)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub n: u32,
    pub p_star: f64,
    pub sc_star_raw: f64,
    pub sc_star_normalized: f64,
}

/// Location and height of the complexity maximum over `p ∈ [0, 1]`.
pub fn channel_peak(channel: Channel, n: u32) -> Result<PeakRecord> {
    ChannelConfig::new(n, 0.0)?;
    let curve = |p: f64| channel_complexity(channel, &ChannelConfig { n, p }).complexity_raw;
    let max = golden_section_maximize(curve, 0.0, 1.0, PEAK_TOLERANCE)?;
    Ok(PeakRecord {
        n,
        p_star: max.x,
        sc_star_raw: max.value,
        sc_star_normalized: max.value / (f64::from(n) * LN_2),
    })
}

/// Peaks for each qubit count; `n_values` must be strictly ascending and at most 63.
pub fn peak_scaling_series(channel: Channel, n_values: &[u32]) -> Result<Vec<PeakRecord>> {
    if n_values.is_empty() {
        return Err(Error::validation("no qubit counts given"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("qubit counts must be strictly ascending"));
    }
    if n_values[0] == 0 || *n_values.last().unwrap() > MAX_SERIES_QUBITS {
        return Err(Error::validation(format!(
            "qubit counts must lie in 1..={MAX_SERIES_QUBITS}"
        )));
    }
    n_values.par_iter().map(|&n| channel_peak(channel, n)).collect()
}

fn check_dense(n: u32, p: f64) -> Result<usize> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::validation(format!(
            "dense density matrices are limited to n <= {MAX_DENSE_QUBITS}"
        )));
    }
    ChannelConfig::new(n, p)?;
    Ok(1usize << n)
}

/// `(1−p)|GHZ⟩⟨GHZ| + p·I/d` as a dense matrix.
pub fn depolarized_density_matrix(n: u32, p: f64) -> Result<Mat<f64>> {
    let d = check_dense(n, p)?;
    let corner = |i: usize| i == 0 || i == d - 1;
    Ok(Mat::from_fn(d, d, |i, j| {
        let ghz = if corner(i) && corner(j) { 0.5 } else { 0.0 };
        (1.0 - p) * ghz + if i == j { p / d as f64 } else { 0.0 }
    }))
}

/// The dephased GHZ state: populations 1/2 on `|0…0⟩`, `|1…1⟩` and
/// coherence `(1−p)ⁿ/2` between them.
pub fn dephased_density_matrix(n: u32, p: f64) -> Result<Mat<f64>> {
    let d = check_dense(n, p)?;
    let c = (1.0 - p).powi(n as i32);
    Ok(Mat::from_fn(d, d, |i, j| match (i == 0 || i == d - 1, j == 0 || j == d - 1) {
        (true, true) if i == j => 0.5,
        (true, true) => 0.5 * c,
        _ => 0.0,
    }))
}

pub fn density_matrix(channel: Channel, n: u32, p: f64) -> Result<Mat<f64>> {
    match channel {
        Channel::Depolarize => depolarized_density_matrix(n, p),
        Channel::Dephase => dephased_density_matrix(n, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{entropic_complexity, spectrum_of_density_matrix};
    use approx::assert_abs_diff_eq;

    // Two-level optimum of −x ln x − (1−x) ln(1−x) + ln(x² + (1−x)²), mpmath.
    const TWO_LEVEL_MAX: f64 = 0.129_954_125_594_483_8;

    fn cfg(n: u32, p: f64) -> ChannelConfig {
        ChannelConfig::new(n, p).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(ChannelConfig::new(0, 0.5).unwrap_err().is_validation());
        assert!(ChannelConfig::new(2, 1.5).unwrap_err().is_validation());
        assert!(ChannelConfig::new(2, f64::NAN).unwrap_err().is_validation());
        assert_eq!(cfg(62, 0.1).dimension(), Some(1 << 62));
        assert_eq!(cfg(63, 0.1).dimension(), None);
    }

    #[test]
    fn depolarized_spectrum_examples() {
        let s = depolarized_spectrum(&cfg(2, 0.5));
        assert_eq!(s.levels()[0], Level { value: 0.625, multiplicity: 1.0 });
        assert_eq!(s.levels()[1], Level { value: 0.125, multiplicity: 3.0 });
        let s = depolarized_spectrum(&cfg(3, 0.0));
        assert_eq!(s.expand().unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let s = depolarized_spectrum(&cfg(1, 1.0));
        assert_eq!(s.expand().unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn dephased_spectrum_examples() {
        for n in [1, 5, 40] {
            let s = dephased_spectrum(&cfg(n, 0.0));
            assert_eq!((s.levels()[0].value, s.levels()[1].value), (1.0, 0.0));
        }
        let s = dephased_spectrum(&cfg(2, 0.5));
        assert_eq!((s.levels()[0].value, s.levels()[1].value), (0.625, 0.375));
        for p in [0.0, 0.1, 0.37, 0.9, 1.0] {
            let a = dephased_spectrum(&cfg(1, p)).expand().unwrap();
            let b = depolarized_spectrum(&cfg(1, p)).expand().unwrap();
            assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-15);
            assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(depolarized_complexity(&cfg(2, 0.0)).complexity_raw, 0.0);
        assert_abs_diff_eq!(depolarized_complexity(&cfg(2, 1.0)).complexity_raw, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            depolarized_complexity(&cfg(2, 0.5)).complexity_raw,
            0.246_864_273_224_055_26,
            epsilon = 1e-14
        );
        assert_eq!(dephased_complexity(&cfg(3, 0.0)).complexity_raw, 0.0);
        assert_abs_diff_eq!(dephased_complexity(&cfg(3, 1.0)).complexity_raw, 0.0, epsilon = 1e-15);
        // λ₁ = 0.8715 at n = 4.
        let p = 1.0 - (2.0f64 * 0.8715 - 1.0).powf(0.25);
        assert_abs_diff_eq!(
            dephased_complexity(&cfg(4, p)).complexity_raw,
            0.129_954_101_329_988_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn endpoints_vanish_for_all_n() {
        for n in 1..=MAX_SERIES_QUBITS {
            for channel in [Channel::Depolarize, Channel::Dephase] {
                for p in [0.0, 1.0] {
                    let r = channel_complexity(channel, &cfg(n, p));
                    assert!(r.complexity_raw.abs() < 1e-12, "{channel} n={n} p={p}: {}", r.complexity_raw);
                    assert!(r.complexity_normalized.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_compressed_spectrum() {
        for n in [1, 2, 7, 30, 63] {
            for i in 0..=20 {
                let c = cfg(n, i as f64 / 20.0);
                for channel in [Channel::Depolarize, Channel::Dephase] {
                    let a = channel_complexity(channel, &c);
                    let b = entropic_complexity(&spectrum(channel, &c));
                    assert_abs_diff_eq!(a.shannon, b.shannon, epsilon = 1e-12);
                    assert_abs_diff_eq!(a.renyi2, b.renyi2, epsilon = 1e-12);
                    assert_abs_diff_eq!(a.complexity_raw, b.complexity, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_dense_eigensolver() {
        for n in 1..=4 {
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                for channel in [Channel::Depolarize, Channel::Dephase] {
                    let rho = density_matrix(channel, n, p).unwrap();
                    let numeric = entropic_complexity(&spectrum_of_density_matrix(rho.as_ref()).unwrap().spectrum);
                    let closed = channel_complexity(channel, &cfg(n, p));
                    assert_abs_diff_eq!(numeric.complexity, closed.complexity_raw, epsilon = 1e-10);
                }
            }
        }
        assert!(depolarized_density_matrix(13, 0.5).unwrap_err().is_validation());
    }

    #[test]
    fn reduces_to_one_and_two_qubit_formulas() {
        let one = |p: f64| {
            let a = p / 2.0;
            let b = 1.0 - p / 2.0;
            -xlnx(a) - xlnx(b) + (1.0 - p + p * p / 2.0).ln()
        };
        let two = |p: f64| {
            let a = 1.0 - 0.75 * p;
            -xlnx(a) - 3.0 * xlnx(p / 4.0) + (1.0 - 1.5 * p + 0.75 * p * p).ln()
        };
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            assert_abs_diff_eq!(depolarized_complexity(&cfg(1, p)).complexity_raw, one(p), epsilon = 1e-14);
            assert_abs_diff_eq!(depolarized_complexity(&cfg(2, p)).complexity_raw, two(p), epsilon = 1e-14);
        }
    }

    #[test]
    fn single_qubit_peak() {
        // Independent oracle: brute-force 1e-6 grid over the one-qubit formula.
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 0..=1_000_000 {
            let p = i as f64 * 1e-6;
            let v = -xlnx(p / 2.0) - xlnx(1.0 - p / 2.0) + (1.0 - p + p * p / 2.0).ln();
            if v > best.1 {
                best = (p, v);
            }
        }
        let dep = channel_peak(Channel::Depolarize, 1).unwrap();
        assert_abs_diff_eq!(dep.p_star, best.0, epsilon = 2e-6);
        assert_abs_diff_eq!(dep.sc_star_raw, best.1, epsilon = 1e-12);
        assert_abs_diff_eq!(dep.p_star, 0.2569, epsilon = 1e-4);
        let deph = channel_peak(Channel::Dephase, 1).unwrap();
        assert_abs_diff_eq!(dep.p_star, deph.p_star, epsilon = 1e-8);
        assert_abs_diff_eq!(dep.sc_star_raw, deph.sc_star_raw, epsilon = 1e-15);
    }

    #[test]
    fn dephasing_peak_height_is_universal() {
        for n in [1, 2, 5, 17, 63] {
            let peak = channel_peak(Channel::Dephase, n).unwrap();
            assert_abs_diff_eq!(peak.sc_star_raw, TWO_LEVEL_MAX, epsilon = 1e-12);
        }
    }

    #[test]
    fn dephasing_peak_position() {
        // x* = 0.8715807313..., p* = 1 − (2x* − 1)^(1/n).
        let x_star: f64 = 0.871_580_731_339_874_4;
        let series = peak_scaling_series(Channel::Dephase, &[4, 8, 16, 32]).unwrap();
        for r in &series {
            let oracle = 1.0 - (2.0 * x_star - 1.0).powf(1.0 / f64::from(r.n));
            assert_abs_diff_eq!(r.p_star, oracle, epsilon = 1e-6);
            if r.n >= 16 {
                let np = f64::from(r.n) * r.p_star;
                assert!((np / 0.2979 - 1.0).abs() < 0.02, "n p* = {np}");
            }
        }
    }

    #[test]
    fn depolarization_peak_approaches_one() {
        let ns: Vec<u32> = (1..=MAX_SERIES_QUBITS).collect();
        let series = peak_scaling_series(Channel::Depolarize, &ns).unwrap();
        for w in series.windows(2) {
            assert!(1.0 - w[1].p_star < 1.0 - w[0].p_star);
        }
    }

    #[test]
    fn series_validation() {
        assert!(peak_scaling_series(Channel::Dephase, &[]).unwrap_err().is_validation());
        assert!(peak_scaling_series(Channel::Dephase, &[3, 2]).unwrap_err().is_validation());
        assert!(peak_scaling_series(Channel::Dephase, &[1, 64]).unwrap_err().is_validation());
    }

    #[test]
    fn channel_names_round_trip() {
        for c in [Channel::Depolarize, Channel::Dephase] {
            assert_eq!(c.to_string().parse::<Channel>().unwrap(), c);
        }
        assert!("amplitude".parse::<Channel>().is_err());
    }
}
