//! Open spin-1/2 Heisenberg chain in a random longitudinal field, `S_z = 0` sector.

use rand::Rng;

use super::fock::FockBasis;
use super::operator::{CsrMatrix, ManyBodyHamiltonian, Sector, Storage};
use crate::error::{Error, Result};
use crate::seed;

pub const MAX_SITES: u32 = 16;
/// Exchange constant, the unit of energy.
pub const J: f64 = 1.0;

fn spin(mask: u64, site: usize) -> f64 {
    if mask >> site & 1 == 1 {
        0.5
    } else {
        -0.5
    }
}

/// Chain Hamiltonian for given site fields. Bit `i` set means spin up at site `i`.
pub fn heisenberg_chain(fields: &[f64]) -> Result<ManyBodyHamiltonian> {
    let l = fields.len() as u32;
    if l < 2 || l > MAX_SITES || l % 2 == 1 {
        return Err(Error::validation(format!(
            "chain length must be even and in 2..={MAX_SITES}, got {l}"
        )));
    }
    if fields.iter().any(|h| !h.is_finite()) {
        return Err(Error::validation("fields must be finite"));
    }
    let basis = FockBasis::new(l, l / 2)?;
    let mut triplets = Vec::new();
    for (col, &s) in basis.states().iter().enumerate() {
        let mut diag: f64 = fields.iter().enumerate().map(|(i, h)| h * spin(s, i)).sum();
        for i in 0..l as usize - 1 {
            diag += J * spin(s, i) * spin(s, i + 1);
            if (s >> i ^ s >> (i + 1)) & 1 == 1 {
                let flipped = s ^ (0b11 << i);
                let row = basis
                    .index_of(flipped)
                    .ok_or_else(|| Error::Internal(format!("state {flipped:#b} outside the sector")))?;
                triplets.push((row, col, 0.5 * J));
            }
        }
        triplets.push((col, col, diag));
    }
    ManyBodyHamiltonian::new(
        Storage::Sparse(CsrMatrix::from_triplets(basis.dimension(), triplets)?),
        Some(basis.states().to_vec()),
        Sector::Magnetization { sites: l, twice_sz: 0 },
    )
}

/// Fields iid uniform on `[-h, h]`.
pub fn sample_fields(sites: u32, h: f64, seed: u64) -> Result<Vec<f64>> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::validation(format!("disorder strength must be finite and nonnegative, got {h}")));
    }
    let mut rng = seed::rng(seed);
    Ok((0..sites).map(|_| h * (2.0 * rng.random::<f64>() - 1.0)).collect())
}

pub fn heisenberg_mbl_hamiltonian(sites: u32, h: f64, seed: u64) -> Result<ManyBodyHamiltonian> {
    if sites % 2 == 1 {
        return Err(Error::validation(format!("chain length must be even, got {sites}")));
    }
    heisenberg_chain(&sample_fields(sites, h, seed)?)
}
