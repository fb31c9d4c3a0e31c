//! Occupation-number bases stored as bitmasks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Masks are `u64`, so at most 62 orbitals (one bit of headroom for shifts).
pub const MAX_ORBITALS: u32 = 62;
/// Refuse to enumerate bases larger than this.
pub const MAX_BASIS_DIMENSION: u128 = 1 << 26;

pub fn binomial(m: u32, n: u32) -> u128 {
    if n > m {
        return 0;
    }
    let k = n.min(m - n) as u128;
    let m = m as u128;
    (0..k).fold(1u128, |acc, i| acc * (m - i) / (i + 1))
}

/// All `m`-bit masks with exactly `n` bits set, in increasing order.
///
/// Bit `i` set means orbital (or site) `i` is occupied. Positions are found by
/// binary search since the masks are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    orbitals: u32,
    particles: u32,
    states: Vec<u64>,
}

impl FockBasis {
    pub fn new(orbitals: u32, particles: u32) -> Result<Self> {
        if orbitals > MAX_ORBITALS {
            return Err(Error::validation(format!(
                "at most {MAX_ORBITALS} orbitals are supported, got {orbitals}"
            )));
        }
        if particles > orbitals {
            return Err(Error::validation(format!(
                "{particles} particles do not fit into {orbitals} orbitals"
            )));
        }
        let dim = binomial(orbitals, particles);
        if dim > MAX_BASIS_DIMENSION {
            return Err(Error::validation(format!("basis dimension {dim} is too large")));
        }
        let mut states = Vec::with_capacity(dim as usize);
        if particles == 0 {
            states.push(0);
        } else {
            let limit = 1u64 << orbitals;
            let mut s = (1u64 << particles) - 1;
            while s < limit {
                states.push(s);
                // Gosper's hack: next larger integer with the same popcount.
                let c = s & s.wrapping_neg();
                let r = s + c;
                s = (((r ^ s) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(states.len() as u128, dim);
        Ok(Self { orbitals, particles, states })
    }

    pub fn orbitals(&self) -> u32 {
        self.orbitals
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.states.binary_search(&mask).ok()
    }
}

/// `(−1)^(number of occupied orbitals below q)`, the Jordan–Wigner string.
#[inline]
pub fn fermion_sign(mask: u64, q: u32) -> f64 {
    if (mask & ((1u64 << q) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Applies `c_q` to a basis mask; `None` when orbital `q` is empty.
#[inline]
pub fn annihilate(mask: u64, q: u32) -> Option<(u64, f64)> {
    (mask >> q & 1 == 1).then(|| (mask ^ (1u64 << q), fermion_sign(mask, q)))
}

/// Applies `c†_q` to a basis mask; `None` when orbital `q` is occupied.
#[inline]
pub fn create(mask: u64, q: u32) -> Option<(u64, f64)> {
    (mask >> q & 1 == 0).then(|| (mask | (1u64 << q), fermion_sign(mask, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_choose_two() {
        let b = FockBasis::new(4, 2).unwrap();
        assert_eq!(b.states(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(b.index_of(0b1001), Some(3));
        assert_eq!(b.index_of(0b0111), None);
    }

    #[test]
    fn dimensions() {
        assert_eq!(FockBasis::new(14, 4).unwrap().dimension(), 1001);
        assert_eq!(FockBasis::new(12, 6).unwrap().dimension(), 924);
        assert_eq!(FockBasis::new(3, 0).unwrap().states(), &[0]);
        assert_eq!(FockBasis::new(5, 5).unwrap().states(), &[0b11111]);
        assert_eq!(binomial(62, 31), 465_428_353_255_261_088);
    }

    #[test]
    fn masks_are_sorted_with_fixed_popcount() {
        let b = FockBasis::new(16, 7).unwrap();
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        assert!(b.states().iter().all(|s| s.count_ones() == 7 && *s < 1 << 16));
    }

    #[test]
    fn invalid_bases() {
        assert!(FockBasis::new(3, 4).unwrap_err().is_validation());
        assert!(FockBasis::new(63, 1).unwrap_err().is_validation());
        assert!(FockBasis::new(62, 31).unwrap_err().is_validation());
    }

    #[test]
    fn operators_pick_up_string_signs() {
        assert_eq!(annihilate(0b101, 2), Some((0b001, -1.0)));
        assert_eq!(annihilate(0b101, 0), Some((0b100, 1.0)));
        assert_eq!(annihilate(0b101, 1), None);
        assert_eq!(create(0b101, 1), Some((0b111, -1.0)));
        assert_eq!(create(0b101, 2), None);
    }
}
