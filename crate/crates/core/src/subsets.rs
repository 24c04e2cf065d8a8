//! Binomial coefficients, colex ranking and subset enumeration over `u64` masks.
//!
//! A `k`-subset of `[0, n)` is stored as a bitmask. The integer order of masks
//! with equal popcount is exactly colexicographic order, so Gosper's hack walks
//! subsets in colex rank order and extending `n` never perturbs existing ranks.

use crate::error::{Error, Result};

/// Largest supported vertex count; a vertex set fits one machine word.
pub const MAX_VERTICES: usize = 64;

const BINOMIAL: [[u64; MAX_VERTICES + 1]; MAX_VERTICES + 1] = {
    let mut table = [[0u64; MAX_VERTICES + 1]; MAX_VERTICES + 1];
    let mut n = 0;
    while n <= MAX_VERTICES {
        table[n][0] = 1;
        let mut k = 1;
        while k <= n {
            table[n][k] = table[n - 1][k - 1] + if k < n { table[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    table
};

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > MAX_VERTICES {
        return 0;
    }
    BINOMIAL[n][k]
}

/// Colex rank of the subset `mask` among subsets of the same size.
#[inline]
pub fn colex_rank_mask(mask: u64) -> u64 {
    let mut rank = 0;
    let mut rest = mask;
    let mut i = 1;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rank += binomial(v, i);
        rest &= rest - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank_mask`] for subsets of `[0, n)` of size `k`.
pub fn colex_unrank_mask(mut index: u64, n: usize, k: usize) -> Result<u64> {
    if n > MAX_VERTICES || k > n {
        return Err(Error::InvalidInput(format!("no {k}-subsets of a {n}-set")));
    }
    if index >= binomial(n, k) {
        return Err(Error::InvalidInput(format!(
            "colex index {index} out of range for C({n},{k}) = {}",
            binomial(n, k)
        )));
    }
    let mut mask = 0u64;
    let mut top = n;
    for i in (1..=k).rev() {
        // largest v < top with C(v, i) <= index
        let mut v = top - 1;
        while binomial(v, i) > index {
            v -= 1;
        }
        index -= binomial(v, i);
        mask |= 1 << v;
        top = v;
    }
    Ok(mask)
}

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All `size`-subsets of `[0, n)` in colex order.
pub fn subsets(n: usize, size: usize) -> Gosper {
    Gosper::new(n, size)
}

/// Gosper's hack over `n` bits.
#[derive(Clone, Debug)]
pub struct Gosper {
    next: Option<u64>,
    limit: u64,
}

impl Gosper {
    fn new(n: usize, size: usize) -> Self {
        let next = if size > n { None } else { Some(low_bits(size)) };
        Gosper {
            next,
            limit: low_bits(n),
        }
    }
}

impl Iterator for Gosper {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt & !self.limit == 0).then_some(nxt)
            }
        };
        Some(cur)
    }
}

/// All `size`-subsets of the bits of `within`, in colex order.
pub fn subsets_of(within: u64, size: usize) -> SubsetsOf {
    let positions: Vec<u8> = BitIter(within).map(|v| v as u8).collect();
    SubsetsOf {
        inner: Gosper::new(positions.len(), size),
        positions,
    }
}

#[derive(Clone, Debug)]
pub struct SubsetsOf {
    positions: Vec<u8>,
    inner: Gosper,
}

impl Iterator for SubsetsOf {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let local = self.inner.next()?;
        Some(
            BitIter(local)
                .map(|j| 1u64 << self.positions[j])
                .fold(0, |acc, b| acc | b),
        )
    }
}

/// Ascending iterator over the set bits of a mask.
#[derive(Clone, Copy, Debug)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for BitIter {}

/// The `count` smallest elements of `mask`.
pub fn smallest_bits(mask: u64, count: usize) -> u64 {
    BitIter(mask).take(count).fold(0, |acc, v| acc | (1 << v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(20, 3), 1140);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn gosper_is_colex_order() {
        let all: Vec<u64> = subsets(5, 3).collect();
        assert_eq!(all.len(), 10);
        for (rank, mask) in all.iter().enumerate() {
            assert_eq!(colex_rank_mask(*mask), rank as u64);
        }
        assert_eq!(subsets(64, 64).count(), 1);
        assert_eq!(subsets(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets(2, 3).count(), 0);
    }

    #[test]
    fn subsets_of_mask() {
        let got: Vec<u64> = subsets_of(0b1011_0100, 2).collect();
        assert_eq!(got, vec![0b0001_0100, 0b0010_0100, 0b0011_0000, 0b1000_0100, 0b1001_0000, 0b1010_0000]);
    }

    #[test]
    fn unrank_rejects_out_of_range() {
        assert!(colex_unrank_mask(10, 5, 3).is_err());
        assert_eq!(colex_unrank_mask(9, 5, 3).unwrap(), 0b11100);
    }
}
