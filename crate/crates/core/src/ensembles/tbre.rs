//! Two-body random ensemble of spinless fermions.

use rand_distr::{Distribution, StandardNormal};

use super::fock::{annihilate, create, FockBasis};
use super::operator::{CsrMatrix, ManyBodyHamiltonian, Sector, Storage};
use crate::error::{Error, Result};
use crate::seed;

const ENERGY_STREAM: u64 = 0;
const INTERACTION_STREAM: u64 = 1;

/// Single-particle energies and the symmetric two-body matrix `V[(i,j),(k,l)]`
/// over ordered pairs `i < j`, `k < l`.
#[derive(Debug, Clone)]
pub struct TwoBodyInteraction {
    pub energies: Vec<f64>,
    pub pairs: Vec<(u32, u32)>,
    /// Row-major `pairs.len() × pairs.len()`, symmetric.
    pub couplings: Vec<f64>,
}

impl TwoBodyInteraction {
    pub fn sample(orbitals: u32, seed: u64) -> Self {
        let mut rng = seed::rng(seed::substream(seed, ENERGY_STREAM));
        let energies = (0..orbitals).map(|_| StandardNormal.sample(&mut rng)).collect();
        let pairs: Vec<(u32, u32)> =
            (0..orbitals).flat_map(|i| (i + 1..orbitals).map(move |j| (i, j))).collect();
        let p = pairs.len();
        let mut rng = seed::rng(seed::substream(seed, INTERACTION_STREAM));
        let mut couplings = vec![0.0; p * p];
        for a in 0..p {
            for b in a..p {
                let v: f64 = StandardNormal.sample(&mut rng);
                couplings[a * p + b] = v;
                couplings[b * p + a] = v;
            }
        }
        Self { energies, pairs, couplings }
    }

    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.couplings[a * self.pairs.len() + b]
    }
}

/// `Σ ε_i n_i` on each basis state.
pub fn one_body_diagonal(basis: &FockBasis, energies: &[f64]) -> Vec<f64> {
    basis
        .states()
        .iter()
        .map(|&s| {
            (0..basis.orbitals())
                .filter(|q| s >> q & 1 == 1)
                .map(|q| energies[q as usize])
                .sum()
        })
        .collect()
}

/// `Σ V_ijkl c†_i c†_j c_k c_l` restricted to the basis, as sparse symmetric storage.
pub fn two_body_matrix(basis: &FockBasis, v: &TwoBodyInteraction) -> Result<CsrMatrix> {
    let dim = basis.dimension();
    let mut triplets = Vec::new();
    if basis.particles() >= 2 {
        for (col, &s) in basis.states().iter().enumerate() {
            for (b, &(k, l)) in v.pairs.iter().enumerate() {
                let Some((t, s1)) = annihilate(s, l) else { continue };
                let Some((t, s2)) = annihilate(t, k) else { continue };
                for (a, &(i, j)) in v.pairs.iter().enumerate() {
                    let Some((u, s3)) = create(t, j) else { continue };
                    let Some((u, s4)) = create(u, i) else { continue };
                    let row = basis.index_of(u).ok_or_else(|| {
                        Error::Internal(format!("state {u:#b} missing from the Fock basis"))
                    })?;
                    triplets.push((row, col, v.coupling(a, b) * s1 * s2 * s3 * s4));
                }
            }
        }
    }
    // Symmetric by construction up to summation order; symmetrize to make it exact.
    Ok(CsrMatrix::from_triplets(dim, triplets)?.symmetrized())
}

/// Returns `(H0, H1)`: the diagonal one-body part and the two-body perturbation.
pub fn tbre_hamiltonian(
    basis: &FockBasis,
    seed: u64,
) -> Result<(ManyBodyHamiltonian, ManyBodyHamiltonian)> {
    let v = TwoBodyInteraction::sample(basis.orbitals(), seed);
    let sector = Sector::ParticleNumber { orbitals: basis.orbitals(), particles: basis.particles() };
    let labels = basis.states().to_vec();
    let h0 = ManyBodyHamiltonian::new(
        Storage::Diagonal(one_body_diagonal(basis, &v.energies)),
        Some(labels.clone()),
        sector,
    )?;
    let h1 = ManyBodyHamiltonian::new(Storage::Sparse(two_body_matrix(basis, &v)?), Some(labels), sector)?;
    Ok((h0, h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;

    fn kron(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
        let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
        Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
    }

    /// `c_q = Z ⊗ … ⊗ Z ⊗ σ⁻ ⊗ I ⊗ … ⊗ I` with orbital 0 as the leftmost factor
    /// and |1⟩ meaning occupied.
    fn jw_annihilator(m: u32, q: u32) -> Mat<f64> {
        let id = Mat::<f64>::identity(2, 2);
        let z = Mat::from_fn(2, 2, |i, j| if i != j { 0.0 } else if i == 0 { 1.0 } else { -1.0 });
        let lower = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 });
        let mut op = Mat::<f64>::identity(1, 1);
        for p in 0..m {
            let f = if p < q { &z } else if p == q { &lower } else { &id };
            op = kron(&op, f);
        }
        op
    }

    /// Dense index of a mask when orbital 0 is the most significant factor.
    fn dense_index(mask: u64, m: u32) -> usize {
        (0..m).fold(0usize, |acc, q| acc << 1 | (mask >> q & 1) as usize)
    }

    fn oracle(basis: &FockBasis, v: &TwoBodyInteraction) -> Mat<f64> {
        let m = basis.orbitals();
        let c: Vec<Mat<f64>> = (0..m).map(|q| jw_annihilator(m, q)).collect();
        let cd: Vec<Mat<f64>> = c.iter().map(|x| x.transpose().to_owned()).collect();
        let full = 1usize << m;
        let mut h = Mat::<f64>::zeros(full, full);
        for (a, &(i, j)) in v.pairs.iter().enumerate() {
            let create_pair = &cd[i as usize] * &cd[j as usize];
            for (b, &(k, l)) in v.pairs.iter().enumerate() {
                let term = &create_pair * (&c[k as usize] * &c[l as usize]);
                h += faer::Scale(v.coupling(a, b)) * term;
            }
        }
        let idx: Vec<usize> = basis.states().iter().map(|&s| dense_index(s, m)).collect();
        Mat::from_fn(idx.len(), idx.len(), |r, s| h[(idx[r], idx[s])])
    }

    #[test]
    fn matches_jordan_wigner_oracle() {
        for m in 2..=6u32 {
            for n in 0..=m {
                let basis = FockBasis::new(m, n).unwrap();
                let v = TwoBodyInteraction::sample(m, 100 + m as u64 * 10 + n as u64);
                let fast = two_body_matrix(&basis, &v).unwrap().to_dense();
                let slow = oracle(&basis, &v);
                for r in 0..basis.dimension() {
                    for s in 0..basis.dimension() {
                        assert!(
                            (fast[(r, s)] - slow[(r, s)]).abs() < 1e-12,
                            "m={m} n={n} ({r},{s}): {} vs {}",
                            fast[(r, s)],
                            slow[(r, s)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn one_particle_has_no_interaction() {
        let basis = FockBasis::new(6, 1).unwrap();
        let (h0, h1) = tbre_hamiltonian(&basis, 5).unwrap();
        assert!(h1.nonzeros().is_empty());
        assert_eq!(h0.dimension(), 6);
    }

    #[test]
    fn conserves_particle_number_and_symmetry() {
        let basis = FockBasis::new(8, 3).unwrap();
        let (h0, h1) = tbre_hamiltonian(&basis, 9).unwrap();
        assert!(h1.conserves_sector());
        assert_eq!(h1.symmetry_defect(), 0.0);
        assert!(h1.nonzeros().len() > basis.dimension());
        let energies = TwoBodyInteraction::sample(8, 9).energies;
        let s = basis.states()[17];
        let expected: f64 = (0..8).filter(|q| s >> q & 1 == 1).map(|q| energies[q]).sum();
        assert!((h0.get(17, 17) - expected).abs() < 1e-15);
    }
}
