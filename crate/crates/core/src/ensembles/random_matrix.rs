//! Gaussian random matrices for the deformed ensemble `H0 + α H1`.

use faer::Mat;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::operator::ManyBodyHamiltonian;
use crate::error::{Error, Result};
use crate::seed;

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::validation(format!("matrix size must be at least 2, got {n}")));
    }
    Ok(())
}

/// Diagonal matrix with iid standard normal entries.
pub fn sample_diagonal(n: usize, seed: u64) -> Result<ManyBodyHamiltonian> {
    check_size(n)?;
    let mut rng = seed::rng(seed);
    let d = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    ManyBodyHamiltonian::diagonal(d)
}

/// GOE matrix with off-diagonal variance `1/n` and diagonal variance `2/n`,
/// so the semicircle has radius 2.
pub fn sample_goe(n: usize, seed: u64) -> Result<ManyBodyHamiltonian> {
    check_size(n)?;
    let mut rng = seed::rng(seed);
    let sigma = (1.0 / n as f64).sqrt();
    let mut m = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        let x: f64 = StandardNormal.sample(&mut rng);
        m[(j, j)] = std::f64::consts::SQRT_2 * sigma * x;
        for i in j + 1..n {
            let x: f64 = StandardNormal.sample(&mut rng);
            m[(i, j)] = sigma * x;
            m[(j, i)] = sigma * x;
        }
    }
    ManyBodyHamiltonian::dense(m)
}

/// Sorted iid uniform levels on `[0, 1)`, the Poisson reference spectrum.
pub fn poisson_levels(n: usize, seed: u64) -> Result<Vec<f64>> {
    check_size(n)?;
    let mut rng = seed::rng(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}
