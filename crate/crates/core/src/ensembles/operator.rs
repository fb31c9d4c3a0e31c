//! Storage for real symmetric many-body Hamiltonians.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Row-compressed sparse matrix. Column indices are sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a `dim × dim` matrix, summing duplicate entries and dropping exact zeros.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|t| t.0 >= dim || t.1 >= dim) {
            return Err(Error::validation(format!("entry ({i}, {j}) outside a {dim}x{dim} matrix")));
        }
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        let mut row_ptr = vec![0usize; dim + 1];
        for &(i, _, _) in &merged {
            row_ptr[i + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|t| t.1).collect();
        let vals = merged.iter().map(|t| t.2).collect();
        Ok(Self { dim, row_ptr, cols, vals })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.cols[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }

    /// Nonzero entries as `(row, column, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k]))
        })
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        let triplets = self
            .iter()
            .flat_map(|(i, j, v)| [(i, j, 0.5 * v), (j, i, 0.5 * v)])
            .collect();
        Self::from_triplets(self.dim, triplets).expect("indices already validated")
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.iter().map(|(i, j, v)| (v - self.get(j, i)).abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, j, v) in self.iter() {
            m[(i, j)] += v;
        }
        m
    }
}

#[derive(Debug, Clone)]
pub enum Storage {
    Diagonal(Vec<f64>),
    Dense(Mat<f64>),
    Sparse(CsrMatrix),
}

/// Which symmetry sector the basis spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    /// No conserved quantity is tracked.
    Unrestricted,
    ParticleNumber { orbitals: u32, particles: u32 },
    /// Total `S_z`, stored doubled so it stays integral.
    Magnetization { sites: u32, twice_sz: i32 },
}

#[derive(Debug, Clone)]
pub struct ManyBodyHamiltonian {
    storage: Storage,
    basis: Option<Vec<u64>>,
    sector: Sector,
}

impl ManyBodyHamiltonian {
    pub fn new(storage: Storage, basis: Option<Vec<u64>>, sector: Sector) -> Result<Self> {
        let dim = match &storage {
            Storage::Diagonal(d) => d.len(),
            Storage::Dense(m) => {
                if m.nrows() != m.ncols() {
                    return Err(Error::validation("dense Hamiltonian must be square"));
                }
                m.nrows()
            }
            Storage::Sparse(s) => s.dimension(),
        };
        if dim == 0 {
            return Err(Error::validation("Hamiltonian has dimension zero"));
        }
        if let Some(b) = &basis {
            if b.len() != dim {
                return Err(Error::validation(format!(
                    "basis has {} labels for a {dim}-dimensional matrix",
                    b.len()
                )));
            }
        }
        Ok(Self { storage, basis, sector })
    }

    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        Self::new(Storage::Diagonal(values), None, Sector::Unrestricted)
    }

    pub fn dense(matrix: Mat<f64>) -> Result<Self> {
        Self::new(Storage::Dense(matrix), None, Sector::Unrestricted)
    }

    pub fn dimension(&self) -> usize {
        match &self.storage {
            Storage::Diagonal(d) => d.len(),
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(s) => s.dimension(),
        }
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn basis(&self) -> Option<&[u64]> {
        self.basis.as_deref()
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    0.0
                }
            }
            Storage::Dense(m) => m[(i, j)],
            Storage::Sparse(s) => s.get(i, j),
        }
    }

    pub fn to_dense(&self) -> Mat<f64> {
        match &self.storage {
            Storage::Diagonal(d) => Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 }),
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(s) => s.to_dense(),
        }
    }

    pub fn symmetry_defect(&self) -> f64 {
        match &self.storage {
            Storage::Diagonal(_) => 0.0,
            Storage::Dense(m) => linalg::symmetry_defect(m.as_ref()),
            Storage::Sparse(s) => s.symmetry_defect(),
        }
    }

    /// Nonzero entries as `(row, column, value)`.
    pub fn nonzeros(&self) -> Vec<(usize, usize, f64)> {
        match &self.storage {
            Storage::Diagonal(d) => d.iter().enumerate().filter(|p| *p.1 != 0.0).map(|(i, &v)| (i, i, v)).collect(),
            Storage::Dense(m) => (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                .filter_map(|(i, j)| (m[(i, j)] != 0.0).then(|| (i, j, m[(i, j)])))
                .collect(),
            Storage::Sparse(s) => s.iter().collect(),
        }
    }

    /// True when every nonzero entry connects basis states of equal popcount.
    /// Hamiltonians without basis labels trivially conserve nothing and pass.
    pub fn conserves_sector(&self) -> bool {
        match &self.basis {
            None => true,
            Some(b) => self
                .nonzeros()
                .iter()
                .all(|&(i, j, _)| b[i].count_ones() == b[j].count_ones()),
        }
    }
}

/// `H0 + α H1`.
pub fn deformed_hamiltonian(
    h0: &ManyBodyHamiltonian,
    h1: &ManyBodyHamiltonian,
    alpha: f64,
) -> Result<ManyBodyHamiltonian> {
    let dim = h0.dimension();
    if h1.dimension() != dim {
        return Err(Error::validation(format!(
            "cannot add a {}-dimensional perturbation to a {dim}-dimensional Hamiltonian",
            h1.dimension()
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::validation("deformation strength must be finite"));
    }
    if let (Some(a), Some(b)) = (h0.basis(), h1.basis()) {
        if a != b {
            return Err(Error::validation("Hamiltonians are written in different bases"));
        }
    }
    let basis = h0.basis.clone().or_else(|| h1.basis.clone());
    let sector = if h0.sector == Sector::Unrestricted { h1.sector } else { h0.sector };
    let storage = match (&h0.storage, &h1.storage) {
        (Storage::Diagonal(a), Storage::Diagonal(b)) => {
            Storage::Diagonal(a.iter().zip(b).map(|(x, y)| x + alpha * y).collect())
        }
        (Storage::Sparse(_), _) | (_, Storage::Sparse(_))
            if !matches!(h0.storage, Storage::Dense(_)) && !matches!(h1.storage, Storage::Dense(_)) =>
        {
            let triplets = h0
                .nonzeros()
                .into_iter()
                .chain(h1.nonzeros().into_iter().map(|(i, j, v)| (i, j, alpha * v)))
                .collect();
            Storage::Sparse(CsrMatrix::from_triplets(dim, triplets)?)
        }
        _ => {
            let mut m = h0.to_dense();
            for (i, j, v) in h1.nonzeros() {
                m[(i, j)] += alpha * v;
            }
            Storage::Dense(m)
        }
    };
    ManyBodyHamiltonian::new(storage, basis, sector)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_sums_duplicates_and_drops_zeros() {
        let m = CsrMatrix::from_triplets(3, vec![(0, 1, 1.0), (2, 2, 3.0), (0, 1, 2.0), (1, 0, 0.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.symmetry_defect(), 3.0);
        let s = m.symmetrized();
        assert_eq!(s.get(1, 0), 1.5);
        assert_eq!(s.symmetry_defect(), 0.0);
        assert!(CsrMatrix::from_triplets(2, vec![(2, 0, 1.0)]).unwrap_err().is_validation());
    }

    #[test]
    fn deformation_is_linear() {
        let h0 = ManyBodyHamiltonian::diagonal(vec![1.0, 2.0, 3.0]).unwrap();
        let h1 = ManyBodyHamiltonian::dense(Mat::from_fn(3, 3, |i, j| (i + j) as f64)).unwrap();
        let a = deformed_hamiltonian(&h0, &h1, 0.0).unwrap().to_dense();
        assert_eq!(a, h0.to_dense());
        let alpha = 0.7;
        let x = deformed_hamiltonian(&h0, &h1, 2.0 * alpha).unwrap().to_dense();
        let y = deformed_hamiltonian(&h0, &h1, alpha).unwrap().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert!((x[(i, j)] - y[(i, j)] - alpha * h1.get(i, j)).abs() < 1e-15);
            }
        }
        let bad = ManyBodyHamiltonian::diagonal(vec![1.0]).unwrap();
        assert!(deformed_hamiltonian(&h0, &bad, 1.0).unwrap_err().is_validation());
    }

    #[test]
    fn diagonal_plus_sparse_stays_sparse() {
        let h0 = ManyBodyHamiltonian::diagonal(vec![1.0, 2.0]).unwrap();
        let s = CsrMatrix::from_triplets(2, vec![(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let h1 = ManyBodyHamiltonian::new(Storage::Sparse(s), None, Sector::Unrestricted).unwrap();
        let h = deformed_hamiltonian(&h0, &h1, 0.5).unwrap();
        assert!(matches!(h.storage(), Storage::Sparse(_)));
        assert_eq!(h.get(0, 1), 0.5);
        assert_eq!(h.get(1, 1), 2.0);
    }
}
