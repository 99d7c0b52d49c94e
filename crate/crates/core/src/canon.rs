//! Canonical forms of small integer grids under independent row and column
//! permutations.
//!
//! The canonical representative of an `n x m` grid is the lexicographically
//! greatest image in row-major order. [`canonical_grid`] finds it by
//! backtracking over which row goes next while refining an ordered partition
//! of the columns; [`canonical_grid_scan`] is the literal scan over all
//! `n! * m!` images and is kept as the reference.

use std::cmp::Ordering;

use crate::perm::{factorial, permutations};

pub(crate) fn canonical_grid(n: usize, m: usize, entries: &[u8]) -> Vec<u8> {
    debug_assert_eq!(entries.len(), n * m);
    let mut refiner = Refiner {
        m,
        entries,
        prefix: Vec::with_capacity(n * m),
        best: Vec::new(),
    };
    let mut remaining: Vec<usize> = (0..n).collect();
    let order: Vec<usize> = (0..m).collect();
    let bounds = vec![0, m];
    refiner.search(&mut remaining, &order, &bounds);
    refiner.best
}

struct Refiner<'a> {
    m: usize,
    entries: &'a [u8],
    prefix: Vec<u8>,
    best: Vec<u8>,
}

impl Refiner<'_> {
    #[inline]
    fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.m..(r + 1) * self.m]
    }

    /// Row `r` laid out in the current cell order, each cell sorted
    /// descending: the greatest the row can look under the constraints.
    fn row_key(&self, r: usize, order: &[usize], bounds: &[usize], out: &mut Vec<u8>) {
        out.clear();
        let row = self.row(r);
        for cell in bounds.windows(2) {
            let start = out.len();
            out.extend(order[cell[0]..cell[1]].iter().map(|&c| row[c]));
            out[start..].sort_unstable_by(|a, b| b.cmp(a));
        }
    }

    /// Splits every cell by the values of row `r`, larger values first.
    fn refine(&self, r: usize, order: &[usize], bounds: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let row = self.row(r);
        let mut new_order = order.to_vec();
        let mut new_bounds = Vec::with_capacity(self.m + 1);
        for cell in bounds.windows(2) {
            let slice = &mut new_order[cell[0]..cell[1]];
            slice.sort_by(|&a, &b| row[b].cmp(&row[a]));
            new_bounds.push(cell[0]);
            for k in cell[0] + 1..cell[1] {
                if row[new_order[k]] != row[new_order[k - 1]] {
                    new_bounds.push(k);
                }
            }
        }
        new_bounds.push(self.m);
        (new_order, new_bounds)
    }

    fn search(&mut self, remaining: &mut Vec<usize>, order: &[usize], bounds: &[usize]) {
        if remaining.is_empty() {
            if self.best.is_empty() || self.prefix > self.best {
                self.best.clone_from(&self.prefix);
            }
            return;
        }
        let m = self.m;
        let lo = self.prefix.len();

        let mut keys: Vec<Vec<u8>> = Vec::with_capacity(remaining.len());
        let mut scratch = Vec::with_capacity(m);
        for &r in remaining.iter() {
            self.row_key(r, order, bounds, &mut scratch);
            keys.push(scratch.clone());
        }
        let top = keys.iter().max().expect("non-empty").clone();

        if !self.best.is_empty() {
            match self.prefix[..].cmp(&self.best[..lo]) {
                Ordering::Less => return,
                Ordering::Equal => {
                    if top[..] < self.best[lo..lo + m] {
                        return;
                    }
                }
                Ordering::Greater => {}
            }
        }

        let candidates: Vec<usize> = remaining
            .iter()
            .zip(&keys)
            .filter(|(_, k)| **k == top)
            .map(|(&r, _)| r)
            .collect();
        let mut tried: Vec<usize> = Vec::with_capacity(candidates.len());
        for r in candidates {
            // Identical rows lead to identical subtrees.
            if tried.iter().any(|&t| self.row(t) == self.row(r)) {
                continue;
            }
            tried.push(r);
            let (new_order, new_bounds) = self.refine(r, order, bounds);
            let pos = remaining.iter().position(|&x| x == r).expect("present");
            remaining.remove(pos);
            self.prefix.extend_from_slice(&top);
            self.search(remaining, &new_order, &new_bounds);
            self.prefix.truncate(lo);
            remaining.insert(pos, r);
        }
    }
}

/// Reference canonical form: maximum over every row and column permutation.
pub(crate) fn canonical_grid_scan(n: usize, m: usize, entries: &[u8]) -> Vec<u8> {
    let mut best: Vec<u8> = Vec::new();
    let mut image = vec![0u8; n * m];
    for rows in permutations(n) {
        for cols in permutations(m) {
            for i in 0..n {
                let src = rows.image(i);
                for j in 0..m {
                    image[i * m + j] = entries[src * m + cols.image(j)];
                }
            }
            if image > best {
                best.clone_from(&image);
            }
        }
    }
    best
}

/// Number of pairs `(σ, τ)` with `P_σ · A · P_τ = A`.
///
/// For a column permutation `τ` the number of matching row permutations is
/// either zero or the product of the factorials of the row multiplicities,
/// so only the `m!` column permutations need to be visited.
pub(crate) fn stabilizer_order(n: usize, m: usize, entries: &[u8]) -> u64 {
    let mut base: Vec<&[u8]> = entries.chunks(m).collect();
    base.sort_unstable();
    let mut row_automorphisms = 1u64;
    let mut run = 1usize;
    for k in 1..=n {
        if k < n && base[k] == base[k - 1] {
            run += 1;
        } else {
            row_automorphisms *= factorial(run);
            run = 1;
        }
    }

    let base_flat: Vec<u8> = base.concat();
    let mut rows: Vec<Vec<u8>> = vec![vec![0u8; m]; n];
    let mut flat = Vec::with_capacity(n * m);
    let mut column_matches = 0u64;
    for cols in permutations(m) {
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..m {
                row[j] = entries[i * m + cols.image(j)];
            }
        }
        rows.sort_unstable();
        flat.clear();
        for row in &rows {
            flat.extend_from_slice(row);
        }
        if flat == base_flat {
            column_matches += 1;
        }
    }
    column_matches * row_automorphisms
}

/// Size of the orbit of the grid under `S_n x S_m`.
pub(crate) fn orbit_size(n: usize, m: usize, entries: &[u8]) -> u64 {
    factorial(n) * factorial(m) / stabilizer_order(n, m, entries)
}
