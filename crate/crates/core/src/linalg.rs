//! Thin wrappers over the dense symmetric eigensolver.

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl Eigensystem {
    pub fn dimension(&self) -> usize {
        self.values.len()
    }
}

fn check_square(a: MatRef<'_, f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::validation(format!(
            "matrix is {}x{}, expected square",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() == 0 {
        return Err(Error::validation("matrix is empty"));
    }
    Ok(())
}

/// Largest absolute difference between mirrored entries.
pub fn symmetry_defect(a: MatRef<'_, f64>) -> f64 {
    let n = a.nrows().min(a.ncols());
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetric_eigen(a: MatRef<'_, f64>) -> Result<Eigensystem> {
    check_square(a)?;
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numeric(format!("symmetric eigensolver failed: {e:?}")))?;
    let diag = evd.S().column_vector();
    let values: Vec<f64> = (0..a.nrows()).map(|i| diag[i]).collect();
    let vectors = evd.U().to_owned();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("eigensolver returned non-finite eigenvalues".into()));
    }
    // faer returns ascending order; keep the contract explicit in case that changes.
    if values.windows(2).all(|w| w[0] <= w[1]) {
        Ok(Eigensystem { values, vectors })
    } else {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let sorted = order.iter().map(|&i| values[i]).collect();
        let vectors = Mat::from_fn(a.nrows(), a.ncols(), |i, j| vectors[(i, order[j])]);
        Ok(Eigensystem { values: sorted, vectors })
    }
}

/// Eigenvalues only, ascending. Roughly half the cost of [`symmetric_eigen`].
pub fn symmetric_eigenvalues(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    check_square(a)?;
    let mut values = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numeric(format!("symmetric eigensolver failed: {e:?}")))?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("eigensolver returned non-finite eigenvalues".into()));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest residual `‖A v − λ v‖₂` over all eigenpairs.
pub fn max_residual(a: MatRef<'_, f64>, eig: &Eigensystem) -> f64 {
    let av = a * eig.vectors.as_ref();
    let n = a.nrows();
    (0..eig.dimension())
        .map(|k| {
            (0..n)
                .map(|i| {
                    let d = av[(i, k)] - eig.values[k] * eig.vectors[(i, k)];
                    d * d
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.0 });
        let eig = symmetric_eigen(a.as_ref()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(max_residual(a.as_ref(), &eig) < 1e-14);
        let vals = symmetric_eigenvalues(a.as_ref()).unwrap();
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square() {
        let a = Mat::<f64>::zeros(2, 3);
        assert!(symmetric_eigen(a.as_ref()).unwrap_err().is_validation());
    }

    #[test]
    fn symmetry_defect_detects_skew() {
        let mut a = Mat::<f64>::identity(3, 3);
        a[(0, 2)] = 0.5;
        assert_eq!(symmetry_defect(a.as_ref()), 0.5);
    }
}
