//! Linear matroid of a weight system over Q.
//!
//! Weights are read as rational lines: only linear (in)dependence matters,
//! never magnitudes. All ranks are tabulated once at construction, indexed by
//! subset bitmask, so every query afterwards is a table lookup.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{self, small};
use crate::weights::WeightSystem;

/// Largest ground set the rank table supports.
pub const MAX_GROUND: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("index {index} out of range for ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("{size} weights exceed the supported maximum of {MAX_GROUND}")]
    TooLarge { size: usize },
    #[error("vector {0} is zero")]
    ZeroVector(usize),
}

/// A flat with its rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub flat_rank: usize,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMatroid {
    size: usize,
    rank: usize,
    ranks: Vec<u8>,
}

pub(crate) fn mask_to_vec(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

struct RankOracle<'a> {
    dim: usize,
    big: &'a [Vec<BigInt>],
    small: Option<Vec<Vec<i64>>>,
}

impl RankOracle<'_> {
    fn rank(&self, mask: u32) -> usize {
        if let Some(small) = &self.small {
            let mut rows: [&[i64]; MAX_GROUND] = [&[]; MAX_GROUND];
            let mut n = 0;
            for (i, row) in small.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    rows[n] = row;
                    n += 1;
                }
            }
            if let Some(r) = small::rank_checked(&rows[..n], self.dim) {
                return r;
            }
        }
        linalg::bareiss_rank(
            mask_to_vec(mask)
                .iter()
                .map(|&i| self.big[i].clone())
                .collect(),
        )
    }
}

impl LinearMatroid {
    pub fn from_weights(ws: &WeightSystem) -> Result<Self, MatroidError> {
        Self::from_vectors(ws.lattice_rank(), ws.weights())
    }

    /// Vectors must be nonzero (the matroid has no loops).
    pub fn from_vectors(dim: usize, vectors: &[Vec<BigInt>]) -> Result<Self, MatroidError> {
        let size = vectors.len();
        if size > MAX_GROUND {
            return Err(MatroidError::TooLarge { size });
        }
        if let Some(i) = vectors.iter().position(|v| v.iter().all(Zero::is_zero)) {
            return Err(MatroidError::ZeroVector(i));
        }
        let small: Option<Vec<Vec<i64>>> = vectors
            .iter()
            .map(|v| v.iter().map(ToPrimitive::to_i64).collect())
            .collect();
        let oracle = RankOracle {
            dim,
            big: vectors,
            small,
        };

        // ranks[S] from ranks[S \ top]: if the rest is dependent, swap it for
        // its greedy basis, which is a smaller mask already tabulated.
        let total = 1usize << size;
        let mut ranks = vec![0u8; total];
        let mut basis = vec![0u32; total];
        for mask in 1..total as u32 {
            let top = 31 - mask.leading_zeros();
            let bit = 1u32 << top;
            let rest = mask ^ bit;
            let rest_rank = ranks[rest as usize] as usize;
            let grows = if rest == 0 {
                // no loops
                true
            } else if rest_rank == dim {
                false
            } else if rest_rank == rest.count_ones() as usize {
                oracle.rank(mask) > rest_rank
            } else {
                let probe = basis[rest as usize] | bit;
                ranks[probe as usize] as usize > rest_rank
            };
            if grows {
                ranks[mask as usize] = (rest_rank + 1) as u8;
                basis[mask as usize] = basis[rest as usize] | bit;
            } else {
                ranks[mask as usize] = rest_rank as u8;
                basis[mask as usize] = basis[rest as usize];
            }
        }
        let rank = ranks[total - 1] as usize;
        Ok(LinearMatroid { size, rank, ranks })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Rank of the whole ground set.
    pub fn rank(&self) -> usize {
        self.rank
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.size) - 1) as u32
    }

    pub(crate) fn mask_of(&self, s: &[usize]) -> Result<u32, MatroidError> {
        s.iter().try_fold(0u32, |acc, &i| {
            if i >= self.size {
                Err(MatroidError::IndexOutOfRange {
                    index: i,
                    size: self.size,
                })
            } else {
                Ok(acc | 1 << i)
            }
        })
    }

    pub(crate) fn rank_mask(&self, mask: u32) -> usize {
        self.ranks[mask as usize] as usize
    }

    pub(crate) fn is_independent_mask(&self, mask: u32) -> bool {
        self.rank_mask(mask) == mask.count_ones() as usize
    }

    pub(crate) fn closure_mask(&self, mask: u32) -> u32 {
        let r = self.rank_mask(mask);
        (0..self.size)
            .map(|i| 1u32 << i)
            .filter(|&b| mask & b != 0 || self.rank_mask(mask | b) == r)
            .fold(0, |acc, b| acc | b)
    }

    pub fn is_independent(&self, s: &[usize]) -> Result<bool, MatroidError> {
        let mask = self.mask_of(s)?;
        // a repeated index is never independent
        let distinct: BTreeSet<_> = s.iter().collect();
        Ok(distinct.len() == s.len() && self.is_independent_mask(mask))
    }

    pub fn matroid_rank(&self, s: &[usize]) -> Result<usize, MatroidError> {
        Ok(self.rank_mask(self.mask_of(s)?))
    }

    /// All indices whose vectors lie in the span of `s`.
    pub fn closure(&self, s: &[usize]) -> Result<Vec<usize>, MatroidError> {
        Ok(mask_to_vec(self.closure_mask(self.mask_of(s)?)))
    }

    /// Bases, each sorted, in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..=self.full_mask())
            .filter(|&m| m.count_ones() as usize == self.rank && self.is_independent_mask(m))
            .map(mask_to_vec)
            .collect();
        out.sort();
        out
    }

    pub(crate) fn circuit_masks(&self) -> Vec<u32> {
        (1..=self.full_mask())
            .filter(|&m| self.is_circuit_mask(m))
            .collect()
    }

    /// Minimal dependent subsets, each sorted, in lexicographic order.
    pub fn circuits(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.circuit_masks().into_iter().map(mask_to_vec).collect();
        out.sort();
        out
    }

    /// Every flat, ordered by rank and then lexicographically.
    pub fn flats(&self) -> Vec<Flat> {
        let closures: BTreeSet<u32> = (0..=self.full_mask())
            .filter(|&m| self.is_independent_mask(m))
            .map(|m| self.closure_mask(m))
            .collect();
        let mut out: Vec<Flat> = closures
            .into_iter()
            .map(|m| Flat {
                flat_rank: self.rank_mask(m),
                indices: mask_to_vec(m),
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_flat(&self, s: &[usize]) -> Result<bool, MatroidError> {
        let mask = self.mask_of(s)?;
        Ok(self.closure_mask(mask) == mask)
    }

    /// Finest direct-sum decomposition: elements sharing a circuit are joined
    /// transitively; coloops end up as singletons. Parts are sorted by their
    /// smallest element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for c in self.circuit_masks() {
            let first = c.trailing_zeros() as usize;
            let mut rest = c & (c - 1);
            while rest != 0 {
                let m = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let a = find(&mut parent, first);
                let b = find(&mut parent, m);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut root_of = vec![usize::MAX; self.size];
        for i in 0..self.size {
            let r = find(&mut parent, i);
            if root_of[r] == usize::MAX {
                root_of[r] = parts.len();
                parts.push(Vec::new());
            }
            parts[root_of[r]].push(i);
        }
        parts
    }

    /// Whether the elements of `m` form a circuit.
    pub(crate) fn is_circuit_mask(&self, m: u32) -> bool {
        let n = m.count_ones() as usize;
        n >= 1
            && self.rank_mask(m) == n - 1
            && (0..self.size)
                .filter(|i| m >> i & 1 == 1)
                .all(|i| self.is_independent_mask(m ^ 1 << i))
    }
}
