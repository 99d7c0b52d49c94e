//! Number of equivalence classes of RC-magic squares via Burnside's lemma.
//!
//! Two routes are provided. The direct one tests every enumerated matrix
//! against every `(σ, τ)`; it is only feasible for small orders. The other
//! groups the group elements by the cycle types of `σ` and `τ` and counts the
//! fixed matrices of one representative pair with a small dynamic program.

use std::collections::HashMap;

use crate::error::{RcmsError, Result};
use crate::matrix::{for_each_rc_matrix, RcMatrix};
use crate::perm::{factorial, permutations, Permutation, MAX_DIM};

/// Largest order for which the direct route is used by default.
pub const DIRECT_ORDER_LIMIT: usize = 4;

/// `n(i, j)`: number of matrices fixed by `(P_i, P_j)`, indexed by the
/// lexicographic position of each permutation in [`permutations`].
pub fn fixed_point_table(m: usize, d: u8) -> Result<Vec<Vec<u64>>> {
    let perms = permutations(m);
    let mut table = vec![vec![0u64; perms.len()]; perms.len()];
    for_each_rc_matrix(m, d, |a| {
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                if is_fixed(a, p, q) {
                    table[i][j] += 1;
                }
            }
        }
    })?;
    Ok(table)
}

fn is_fixed(a: &RcMatrix, rows: &Permutation, cols: &Permutation) -> bool {
    let m = a.order();
    (0..m).all(|i| {
        let src = rows.image(i);
        (0..m).all(|k| a.get(i, cols.image(k)) == a.get(src, k))
    })
}

fn average_over_group(m: usize, total: u128) -> Result<u64> {
    let group = (factorial(m) as u128).pow(2);
    if !total.is_multiple_of(group) {
        return Err(RcmsError::Invariant(format!(
            "fixed-point total {total} not divisible by group order {group}"
        )));
    }
    Ok((total / group) as u64)
}

pub fn burnside_class_count_direct(m: usize, d: u8) -> Result<u64> {
    if m > DIRECT_ORDER_LIMIT {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!("direct fixed-point scan limited to m <= {DIRECT_ORDER_LIMIT}"),
        });
    }
    let table = fixed_point_table(m, d)?;
    let total: u128 = table.iter().flatten().map(|&x| x as u128).sum();
    average_over_group(m, total)
}

/// Integer partitions of `n` in non-increasing part order.
pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=left.min(max)).rev() {
            cur.push(part);
            go(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of permutations of `n = Σ parts` with the given cycle type.
pub(crate) fn conjugacy_class_size(cycle_type: &[usize]) -> u64 {
    let n: usize = cycle_type.iter().sum();
    let mut denom = 1u64;
    let mut k = 0;
    while k < cycle_type.len() {
        let len = cycle_type[k];
        let run = cycle_type[k..].iter().take_while(|&&x| x == len).count();
        denom *= (len as u64).pow(run as u32) * factorial(run);
        k += run;
    }
    factorial(n) / denom
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of matrices fixed by a pair of permutations with the given cycle
/// types (rows and columns).
///
/// A fixed matrix is constant on the orbits of cells. A row cycle of length
/// `a` and a column cycle of length `b` carry `gcd(a, b)` cell orbits; each
/// orbit puts `b / g` cells in every row of the row cycle and `a / g` cells in
/// every column of the column cycle. Only the total `y` carried by the
/// orbits of a block matters for the margins, and it can be split among the
/// `g` orbits in `C(y + g - 1, g - 1)` ways.
pub fn fixed_count_for_cycle_types(row_type: &[usize], col_type: &[usize], d: u8) -> u128 {
    let blocks: Vec<Vec<(usize, usize, usize)>> = row_type
        .iter()
        .map(|&a| {
            col_type
                .iter()
                .map(|&b| {
                    let g = gcd(a, b);
                    (g, b / g, a / g)
                })
                .collect()
        })
        .collect();
    let mut memo: HashMap<(usize, Vec<u8>), u128> = HashMap::new();
    let residual = vec![d; col_type.len()];
    count_rows(&blocks, 0, &residual, d, &mut memo)
}

fn count_rows(
    blocks: &[Vec<(usize, usize, usize)>],
    r: usize,
    residual: &[u8],
    d: u8,
    memo: &mut HashMap<(usize, Vec<u8>), u128>,
) -> u128 {
    if r == blocks.len() {
        return u128::from(residual.iter().all(|&x| x == 0));
    }
    let key = (r, residual.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0u128;
    let mut next = residual.to_vec();
    fill_block(blocks, r, 0, d as usize, 1, &mut next, d, memo, &mut total);
    memo.insert(key, total);
    total
}

#[allow(clippy::too_many_arguments)]
fn fill_block(
    blocks: &[Vec<(usize, usize, usize)>],
    r: usize,
    c: usize,
    row_left: usize,
    weight: u128,
    residual: &mut Vec<u8>,
    d: u8,
    memo: &mut HashMap<(usize, Vec<u8>), u128>,
    total: &mut u128,
) {
    let row = &blocks[r];
    if c == row.len() {
        if row_left == 0 {
            let rest = count_rows(blocks, r + 1, residual, d, memo);
            *total += weight * rest;
        }
        return;
    }
    let (g, per_row, per_col) = row[c];
    let mut y = 0usize;
    while y * per_row <= row_left && y * per_col <= residual[c] as usize {
        let ways = binomial((y + g - 1) as u64, (g - 1) as u64);
        residual[c] -= (y * per_col) as u8;
        fill_block(
            blocks,
            r,
            c + 1,
            row_left - y * per_row,
            weight * ways,
            residual,
            d,
            memo,
            total,
        );
        residual[c] += (y * per_col) as u8;
        y += 1;
    }
}

pub fn burnside_class_count_by_cycle_types(m: usize, d: u8) -> Result<u64> {
    if m == 0 || m > MAX_DIM {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!("order must be in 1..={MAX_DIM}"),
        });
    }
    let types = partitions(m);
    let mut total = 0u128;
    for rt in &types {
        for ct in &types {
            let weight = conjugacy_class_size(rt) as u128 * conjugacy_class_size(ct) as u128;
            total += weight * fixed_count_for_cycle_types(rt, ct, d);
        }
    }
    average_over_group(m, total)
}

/// Class count, by the direct scan for `m <= 4` and by cycle types above.
pub fn burnside_class_count(m: usize, d: u8) -> Result<u64> {
    if m <= DIRECT_ORDER_LIMIT {
        burnside_class_count_direct(m, d)
    } else {
        burnside_class_count_by_cycle_types(m, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_fixed_points() {
        let table = fixed_point_table(2, 4).unwrap();
        assert_eq!(table, vec![vec![5, 1], vec![1, 5]]);
        assert_eq!(burnside_class_count(2, 4).unwrap(), 3);
    }

    #[test]
    fn order_one_is_trivial() {
        for d in 1..=6 {
            assert_eq!(burnside_class_count(1, d).unwrap(), 1);
            assert_eq!(burnside_class_count_by_cycle_types(1, d).unwrap(), 1);
        }
    }

    #[test]
    fn cycle_type_counts_match_direct_per_pair() {
        for m in 1..=3 {
            let perms = permutations(m);
            let table = fixed_point_table(m, 4).unwrap();
            for (i, p) in perms.iter().enumerate() {
                for (j, q) in perms.iter().enumerate() {
                    assert_eq!(
                        table[i][j] as u128,
                        fixed_count_for_cycle_types(&p.cycle_type(), &q.cycle_type(), 4),
                        "m={m} pair ({p}, {q})"
                    );
                }
            }
        }
    }

    #[test]
    fn routes_agree_up_to_four() {
        for m in 1..=4 {
            for d in [2u8, 3, 4] {
                assert_eq!(
                    burnside_class_count_direct(m, d).unwrap(),
                    burnside_class_count_by_cycle_types(m, d).unwrap(),
                    "m={m} d={d}"
                );
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 1..=7 {
            let total: u64 = partitions(n).iter().map(|t| conjugacy_class_size(t)).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn identity_pair_counts_everything() {
        assert_eq!(fixed_count_for_cycle_types(&[1; 4], &[1; 4], 4), 10147);
    }
}
