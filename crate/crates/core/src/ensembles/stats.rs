//! Level statistics and eigenstate entropies of one diagonalized realization.

use std::ops::Range;

use faer::Mat;

use super::operator::{ManyBodyHamiltonian, Storage};
use crate::entropy::EntropyTriple;
use crate::error::{Error, Result};
use crate::linalg;

/// Assembled Hamiltonians must be symmetric to this tolerance.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SPECTRAL_WINDOW: f64 = 0.5;
pub const DEFAULT_EIGENSTATE_WINDOW: f64 = 1.0 / 3.0;

#[derive(Debug, Clone)]
pub struct SpectralSample {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors in the Hamiltonian's basis.
    pub eigenvectors: Option<Mat<f64>>,
    pub seed: u64,
}

impl SpectralSample {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Full exact diagonalization; eigenvectors only when asked for.
pub fn diagonalize(h: &ManyBodyHamiltonian, eigenvectors: bool, seed: u64) -> Result<SpectralSample> {
    let defect = h.symmetry_defect();
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::Numeric(format!("Hamiltonian asymmetric by {defect:e}")));
    }
    if let Storage::Diagonal(d) = h.storage() {
        let mut order: Vec<usize> = (0..d.len()).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let eigenvalues = order.iter().map(|&i| d[i]).collect();
        let vectors = eigenvectors
            .then(|| Mat::from_fn(d.len(), d.len(), |i, k| if order[k] == i { 1.0 } else { 0.0 }));
        return Ok(SpectralSample { eigenvalues, eigenvectors: vectors, seed });
    }
    let dense = h.to_dense();
    if eigenvectors {
        let eig = linalg::symmetric_eigen(dense.as_ref())?;
        Ok(SpectralSample { eigenvalues: eig.values, eigenvectors: Some(eig.vectors), seed })
    } else {
        let eigenvalues = linalg::symmetric_eigenvalues(dense.as_ref())?;
        Ok(SpectralSample { eigenvalues, eigenvectors: None, seed })
    }
}

/// Index range of the central `fraction` of `len` sorted items.
pub fn central_window(len: usize, fraction: f64) -> Result<Range<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::validation(format!("window fraction must lie in (0, 1], got {fraction}")));
    }
    let count = ((fraction * len as f64).round() as usize).clamp(len.min(1), len);
    let lo = (len - count) / 2;
    Ok(lo..lo + count)
}

/// `min(s_k, s_{k-1}) / max(s_k, s_{k-1})`, zero when both spacings vanish.
pub fn gap_ratios(levels: &[f64]) -> Vec<f64> {
    let spacings: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    spacings
        .windows(2)
        .map(|s| {
            let (a, b) = (s[0].abs(), s[1].abs());
            let hi = a.max(b);
            if hi == 0.0 {
                0.0
            } else {
                a.min(b) / hi
            }
        })
        .collect()
}

/// Mean adjacent gap ratio over the central `window` fraction of sorted levels.
pub fn mean_gap_ratio(sorted_levels: &[f64], window: f64) -> Result<f64> {
    let range = central_window(sorted_levels.len(), window)?;
    if range.len() < 3 {
        return Err(Error::validation(format!(
            "gap ratios need at least 3 levels in the window, got {}",
            range.len()
        )));
    }
    let r = gap_ratios(&sorted_levels[range]);
    Ok(r.iter().sum::<f64>() / r.len() as f64)
}

pub fn gap_ratio_stats(sample: &SpectralSample, window: f64) -> Result<f64> {
    mean_gap_ratio(&sample.eigenvalues, window)
}

/// Entropies of the weights `|v_i|²` of a single unit vector.
pub fn amplitude_entropies(v: &[f64]) -> EntropyTriple {
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    let mut shannon = 0.0;
    let mut purity = 0.0;
    for x in v {
        let w = x * x / norm2;
        if w > 0.0 {
            shannon -= w * w.ln();
            purity += w * w;
        }
    }
    EntropyTriple::from_parts(shannon, -purity.ln(), None)
}

/// Mean `(S, R₂, S_C)` over eigenvectors in the central `window` fraction of the spectrum.
pub fn eigenstate_entropy_stats(sample: &SpectralSample, window: f64) -> Result<EntropyTriple> {
    let vectors = sample
        .eigenvectors
        .as_ref()
        .ok_or_else(|| Error::validation("eigenstate statistics need eigenvectors"))?;
    let range = central_window(sample.dimension(), window)?;
    let count = range.len() as f64;
    let (mut s, mut r) = (0.0, 0.0);
    for k in range {
        let col = vectors.col(k);
        let v: Vec<f64> = col.iter().copied().collect();
        let t = amplitude_entropies(&v);
        s += t.shannon;
        r += t.renyi2;
    }
    Ok(EntropyTriple::from_parts(s / count, r / count, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::random_matrix::{poisson_levels, sample_goe};
    use crate::seed;
    use proptest::prelude::*;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn windows() {
        assert_eq!(central_window(100, 0.5).unwrap(), 25..75);
        assert_eq!(central_window(9, 1.0 / 3.0).unwrap(), 3..6);
        assert_eq!(central_window(10, 1.0).unwrap(), 0..10);
        assert_eq!(central_window(3, 0.01).unwrap(), 1..2);
        assert!(central_window(10, 0.0).unwrap_err().is_validation());
        assert!(central_window(10, 1.5).unwrap_err().is_validation());
    }

    #[test]
    fn equally_spaced_levels_have_unit_ratio() {
        let levels: Vec<f64> = (0..50).map(|i| i as f64 * 0.3).collect();
        assert!((mean_gap_ratio(&levels, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(gap_ratios(&[1.0, 1.0, 1.0]), vec![0.0]);
        assert!(mean_gap_ratio(&[0.0, 1.0], 1.0).unwrap_err().is_validation());
    }

    #[test]
    fn poisson_and_goe_constants() {
        let poisson: f64 = (0..20)
            .map(|r| mean_gap_ratio(&poisson_levels(2000, r).unwrap(), 0.5).unwrap())
            .sum::<f64>()
            / 20.0;
        assert!((poisson - (2.0 * 2f64.ln() - 1.0)).abs() < 0.01, "{poisson}");
        let h = sample_goe(1024, 77).unwrap();
        let s = diagonalize(&h, false, 77).unwrap();
        let goe = gap_ratio_stats(&s, 0.5).unwrap();
        assert!((goe - 0.5307).abs() < 0.02, "{goe}");
    }

    #[test]
    fn porter_thomas_complexity() {
        let mut rng = seed::rng(5);
        let n = 4096;
        let mut total = 0.0;
        let trials = 20;
        for _ in 0..trials {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            total += amplitude_entropies(&v).complexity;
        }
        let mean = total / trials as f64;
        // ln 3 − (2 − ln 2 − γ_E)
        let exact = 3f64.ln() - (2.0 - 2f64.ln() - 0.577_215_664_901_532_9);
        assert!((exact - 0.3689751341295879).abs() < 1e-15);
        assert!((mean - exact).abs() < 0.01, "{mean}");
    }

    #[test]
    fn basis_and_uniform_vectors_have_zero_complexity() {
        assert_eq!(amplitude_entropies(&[0.0, 1.0, 0.0]).complexity, 0.0);
        assert!(amplitude_entropies(&[0.5; 4]).complexity.abs() < 1e-15);
    }

    #[test]
    fn diagonal_hamiltonian_eigenvectors_are_basis_states() {
        let h = ManyBodyHamiltonian::diagonal(vec![3.0, -1.0, 2.0]).unwrap();
        let s = diagonalize(&h, true, 0).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 3.0]);
        let t = eigenstate_entropy_stats(&s, 1.0).unwrap();
        assert_eq!(t.complexity, 0.0);
        let v = s.eigenvectors.unwrap();
        assert_eq!(v[(1, 0)], 1.0);
        assert_eq!(v[(0, 2)], 1.0);
        let no_vectors = diagonalize(&h, false, 0).unwrap();
        assert!(eigenstate_entropy_stats(&no_vectors, 1.0).unwrap_err().is_validation());
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let h = sample_goe(64, 2).unwrap();
        let s = diagonalize(&h, true, 2).unwrap();
        let v = s.eigenvectors.unwrap();
        let g = v.transpose() * &v;
        for i in 0..64 {
            for j in 0..64 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - expected).abs() < 1e-8);
            }
        }
    }

    proptest! {
        #[test]
        fn gap_ratios_lie_in_unit_interval(mut levels in proptest::collection::vec(-1e3f64..1e3, 3..60)) {
            levels.sort_by(f64::total_cmp);
            for r in gap_ratios(&levels) {
                prop_assert!((0.0..=1.0).contains(&r));
            }
        }

        #[test]
        fn gap_ratio_is_affine_invariant(
            mut levels in proptest::collection::vec(-10f64..10.0, 5..40),
            scale in 0.1f64..10.0,
            shift in -5f64..5.0,
        ) {
            levels.sort_by(f64::total_cmp);
            levels.dedup();
            prop_assume!(levels.len() >= 5);
            let moved: Vec<f64> = levels.iter().map(|x| scale * x + shift).collect();
            let a = mean_gap_ratio(&levels, 1.0).unwrap();
            let b = mean_gap_ratio(&moved, 1.0).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
