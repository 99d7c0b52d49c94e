//! Permutations of `{0, .., n-1}` and the shared per-size tables.
//!
//! A permutation `σ` is identified with the permutation matrix `P` that has
//! `P[i][σ(i)] = 1`, so left multiplication `P·A` moves row `σ(i)` of `A` to
//! row `i`, and right multiplication `A·P` moves column `j` to `σ(j)`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{RcmsError, Result};

/// Largest dimension handled anywhere in the crate.
pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its zero-based one-line notation.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(RcmsError::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &image in &map {
            if image >= n || seen[image] {
                return Err(RcmsError::InvalidPermutation(format!(
                    "{map:?} is not a bijection on 0..{n}"
                )));
            }
            seen[image] = true;
        }
        Ok(Self { map })
    }

    /// Builds a permutation from one-based one-line notation, as written in
    /// matrix listings (`[3 4 2 1]`).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(RcmsError::InvalidPermutation(
                "one-based images must be >= 1".into(),
            ));
        }
        Self::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Swaps `a` and `b`, fixing everything else.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(RcmsError::InvalidPermutation(format!(
                "transposition ({a} {b}) out of range for size {n}"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Ok(Self { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// `self` followed by `other`: `i -> other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        Self {
            map: self.map.iter().map(|&i| other.map[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Number of points fixed in common with `other`, i.e. the shared nonzero
    /// positions of the two permutation matrices.
    pub fn overlap(&self, other: &Permutation) -> usize {
        self.map
            .iter()
            .zip(&other.map)
            .filter(|(a, b)| a == b)
            .count()
    }

    /// Dense row-major permutation matrix.
    pub fn to_matrix(&self) -> Vec<u8> {
        let n = self.map.len();
        let mut out = vec![0u8; n * n];
        for (i, &j) in self.map.iter().enumerate() {
            out[i * n + j] = 1;
        }
        out
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Permutation {
    /// One-based one-line notation, e.g. `[3 4 2 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, &j) in self.map.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "]")
    }
}

/// All permutations of size `n` in lexicographic order of their one-line
/// notation. Computed once per size and shared.
pub fn permutations(n: usize) -> &'static [Permutation] {
    static TABLES: [OnceLock<Vec<Permutation>>; MAX_DIM + 1] =
        [const { OnceLock::new() }; MAX_DIM + 1];
    assert!(
        (1..=MAX_DIM).contains(&n),
        "permutation size {n} out of range"
    );
    TABLES[n].get_or_init(|| {
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(factorial(n) as usize);
        loop {
            out.push(Permutation {
                map: current.clone(),
            });
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    })
}

/// Advances `v` to its lexicographic successor; returns false after the last.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn tables_have_factorial_size_and_are_sorted() {
        for n in 1..=6 {
            let table = permutations(n);
            assert_eq!(table.len() as u64, factorial(n));
            assert!(table.windows(2).all(|w| w[0] < w[1]));
            assert!(table[0].is_identity());
        }
    }

    #[test]
    fn inverse_and_composition() {
        let p = Permutation::from_one_based(&[3, 4, 2, 1]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.to_string(), "[3 4 2 1]");
        assert_eq!(p.cycle_type(), vec![4]);
        let t = Permutation::transposition(4, 1, 2).unwrap();
        assert_eq!(t.cycle_type(), vec![2, 1, 1]);
    }

    #[test]
    fn overlap_counts_shared_positions() {
        let id = Permutation::identity(3);
        let swap = Permutation::transposition(3, 1, 2).unwrap();
        let cycle = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(id.overlap(&swap), 1);
        assert_eq!(id.overlap(&cycle), 0);
        assert_eq!(id.overlap(&id), 3);
    }
}
