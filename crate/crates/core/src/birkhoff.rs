//! Decompositions of RC-magic squares into sums of permutation matrices,
//! their overlap signatures, and the one-sided inequivalence test built on
//! them.
//!
//! A square with margin `d` is a `d`-regular bipartite multigraph between
//! rows and columns; peeling off perfect matchings one at a time yields
//! every way of writing it as `Σ d_j P_j` with `Σ d_j = d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{RcmsError, Result};
use crate::matrix::RcMatrix;
use crate::perm::{permutations, Permutation};

/// Distinct permutations with positive repeat counts, sorted by permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    m: usize,
    terms: Vec<(Permutation, u8)>,
}

impl Decomposition {
    /// Groups a list of permutations (with repetition) into terms.
    pub fn from_permutations(m: usize, mut perms: Vec<Permutation>) -> Result<Self> {
        if perms.iter().any(|p| p.size() != m) {
            return Err(RcmsError::InvalidPermutation(format!(
                "all terms must have size {m}"
            )));
        }
        perms.sort();
        let mut terms: Vec<(Permutation, u8)> = Vec::new();
        for p in perms {
            match terms.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => terms.push((p, 1)),
            }
        }
        Ok(Self { m, terms })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[(Permutation, u8)] {
        &self.terms
    }

    /// `Σ d_j`.
    pub fn total(&self) -> u32 {
        self.terms.iter().map(|&(_, c)| c as u32).sum()
    }

    /// Repeat counts in non-increasing order, e.g. `[2, 1, 1]`.
    pub fn count_pattern(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.terms.iter().map(|&(_, c)| c).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }

    /// `Σ d_j P_j` as row-major entries.
    pub fn reconstruct(&self) -> Vec<u8> {
        let m = self.m;
        let mut out = vec![0u8; m * m];
        for (p, c) in &self.terms {
            for i in 0..m {
                out[i * m + p.image(i)] += c;
            }
        }
        out
    }

    /// Applies `P_rows · (·) · P_cols` to every term.
    pub fn permuted(&self, rows: &Permutation, cols: &Permutation) -> Result<Self> {
        let mut perms = Vec::new();
        for (p, c) in &self.terms {
            let q = rows.then(p).then(cols);
            perms.extend(std::iter::repeat_n(q, *c as usize));
        }
        Self::from_permutations(self.m, perms)
    }
}

impl fmt::Display for Decomposition {
    /// `2·[1 3 2] + 1·[2 1 3]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{p}")?;
        }
        Ok(())
    }
}

/// All `σ` with `entries[i][σ(i)] >= 1` for every row, in lexicographic
/// order.
pub fn support_matchings(m: usize, entries: &[u8]) -> Vec<Permutation> {
    fn go(
        m: usize,
        entries: &[u8],
        i: usize,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Permutation>,
    ) {
        if i == m {
            out.push(Permutation::new(cur.clone()).expect("bijection by construction"));
            return;
        }
        for j in 0..m {
            if !used[j] && entries[i * m + j] > 0 {
                used[j] = true;
                cur.push(j);
                go(m, entries, i + 1, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(
        m,
        entries,
        0,
        &mut vec![false; m],
        &mut Vec::with_capacity(m),
        &mut out,
    );
    out
}

pub fn matchings(a: &RcMatrix) -> Vec<Permutation> {
    support_matchings(a.order(), a.entries())
}

/// Every distinct decomposition of `a`.
///
/// Matchings are peeled in non-decreasing lexicographic order, so each
/// multiset of permutations is produced exactly once.
pub fn decompositions(a: &RcMatrix) -> Result<Vec<Decomposition>> {
    let m = a.order();
    let mut residual = a.entries().to_vec();
    let mut chosen: Vec<Permutation> = Vec::new();
    let mut out = Vec::new();
    peel(m, a.margin(), &mut residual, None, &mut chosen, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn peel(
    m: usize,
    left: u8,
    residual: &mut [u8],
    floor: Option<&Permutation>,
    chosen: &mut Vec<Permutation>,
    out: &mut Vec<Decomposition>,
) -> Result<()> {
    if left == 0 {
        out.push(Decomposition::from_permutations(m, chosen.clone())?);
        return Ok(());
    }
    let all = support_matchings(m, residual);
    if all.is_empty() {
        return Err(RcmsError::Invariant(format!(
            "residual with row sums {left} has no perfect matching"
        )));
    }
    for p in all.into_iter().filter(|p| floor.is_none_or(|f| p >= f)) {
        for i in 0..m {
            residual[i * m + p.image(i)] -= 1;
        }
        chosen.push(p.clone());
        peel(m, left - 1, residual, Some(&p), chosen, out)?;
        chosen.pop();
        for i in 0..m {
            residual[i * m + p.image(i)] += 1;
        }
    }
    Ok(())
}

/// Repeat counts of the terms together with the pairwise numbers of shared
/// nonzero positions, minimized over relabelings of the terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecompSignature {
    /// Repeat counts in the canonical term order.
    pub counts: Vec<u8>,
    /// Upper triangle of the overlap matrix, row-major, in the same order.
    pub overlaps: Vec<u8>,
}

impl fmt::Display for DecompSignature {
    /// `counts=2,1,1 overlaps=0,1,0`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "counts={} overlaps={}",
            join(&self.counts),
            join(&self.overlaps)
        )
    }
}

pub fn signature(d: &Decomposition) -> DecompSignature {
    let k = d.terms.len();
    let overlap = |i: usize, j: usize| d.terms[i].0.overlap(&d.terms[j].0) as u8;
    permutations(k)
        .iter()
        .map(|relabel| {
            let counts: Vec<u8> = (0..k).map(|i| d.terms[relabel.image(i)].1).collect();
            let mut overlaps = Vec::with_capacity(k * (k - 1) / 2);
            for i in 0..k {
                for j in i + 1..k {
                    overlaps.push(overlap(relabel.image(i), relabel.image(j)));
                }
            }
            DecompSignature { counts, overlaps }
        })
        .min()
        .expect("at least one term")
}

/// Sorted signatures of all decompositions of `a`.
pub fn signature_multiset(a: &RcMatrix) -> Result<Vec<DecompSignature>> {
    let mut sigs: Vec<DecompSignature> = decompositions(a)?.iter().map(signature).collect();
    sigs.sort();
    Ok(sigs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The signature multisets differ, so the squares are not equivalent.
    Inequivalent,
    /// The test cannot tell; equivalence is not implied.
    Inconclusive,
}

pub fn non_equivalence_test(a: &RcMatrix, b: &RcMatrix) -> Result<Verdict> {
    if a.order() != b.order() || a.margin() != b.margin() {
        return Err(RcmsError::DimensionMismatch {
            expected: a.order(),
            found: b.order(),
        });
    }
    Ok(if signature_multiset(a)? == signature_multiset(b)? {
        Verdict::Inconclusive
    } else {
        Verdict::Inequivalent
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermReport {
    pub permutation: String,
    pub count: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub terms: Vec<TermReport>,
    pub signature: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub label: String,
    pub rows: Vec<Vec<u8>>,
    pub decompositions: Vec<DecompositionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub first: String,
    pub second: String,
    pub verdict: Verdict,
    pub equivalent: bool,
}

/// JSON report over one or more squares of the same order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirkhoffReport {
    pub schema_version: u32,
    pub matrices: Vec<MatrixReport>,
    pub pairs: Vec<PairVerdict>,
}

pub fn matrix_report(label: &str, a: &RcMatrix) -> Result<MatrixReport> {
    let decompositions = decompositions(a)?
        .iter()
        .map(|d| DecompositionReport {
            terms: d
                .terms()
                .iter()
                .map(|(p, c)| TermReport {
                    permutation: p.to_string(),
                    count: *c,
                })
                .collect(),
            signature: signature(d).to_string(),
        })
        .collect();
    Ok(MatrixReport {
        label: label.to_string(),
        rows: a.to_rows(),
        decompositions,
    })
}

pub fn birkhoff_report(matrices: &[(String, RcMatrix)]) -> Result<BirkhoffReport> {
    let reports = matrices
        .iter()
        .map(|(label, a)| matrix_report(label, a))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (i, (la, a)) in matrices.iter().enumerate() {
        for (lb, b) in &matrices[i + 1..] {
            pairs.push(PairVerdict {
                first: la.clone(),
                second: lb.clone(),
                verdict: non_equivalence_test(a, b)?,
                equivalent: a.is_equivalent(b)?,
            });
        }
    }
    Ok(BirkhoffReport {
        schema_version: crate::SCHEMA_VERSION,
        matrices: reports,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(one_based: &[usize]) -> Permutation {
        Permutation::from_one_based(one_based).unwrap()
    }

    #[test]
    fn diagonal_has_identity_only() {
        let a = RcMatrix::diagonal(3, 4).unwrap();
        assert_eq!(matchings(&a), vec![Permutation::identity(3)]);
        let ds = decompositions(&a).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].terms(), &[(Permutation::identity(3), 4)]);
        let sig = signature(&ds[0]);
        assert_eq!(sig.counts, vec![4]);
        assert!(sig.overlaps.is_empty());
    }

    #[test]
    fn full_support_has_all_matchings() {
        let a = RcMatrix::from_rows(&[[1, 2, 1], [2, 1, 1], [1, 1, 2]]).unwrap();
        assert_eq!(matchings(&a).len(), 6);
        let ds = decompositions(&a).unwrap();
        assert_eq!(ds.len(), 2);
        let mut patterns: Vec<Vec<u8>> = ds.iter().map(Decomposition::count_pattern).collect();
        patterns.sort();
        assert_eq!(patterns, vec![vec![1, 1, 1, 1], vec![2, 1, 1]]);
    }

    #[test]
    fn overlap_distinguishes_two_term_sums() {
        // 3·P1 + P2 versus 3·P1 + P4
        let a = RcMatrix::from_rows(&[[4, 0, 0], [0, 3, 1], [0, 1, 3]]).unwrap();
        let b = RcMatrix::from_rows(&[[3, 1, 0], [0, 3, 1], [1, 0, 3]]).unwrap();
        let sa = signature_multiset(&a).unwrap();
        let sb = signature_multiset(&b).unwrap();
        assert_eq!(sa.len(), 1);
        assert_eq!(sa[0].overlaps, vec![1]);
        assert_eq!(sb[0].overlaps, vec![0]);
        assert_eq!(non_equivalence_test(&a, &b).unwrap(), Verdict::Inequivalent);
        assert_eq!(non_equivalence_test(&a, &a).unwrap(), Verdict::Inconclusive);
    }

    #[test]
    fn unique_decomposition_of_four_by_four() {
        let a =
            RcMatrix::from_rows(&[[2, 1, 1, 0], [0, 0, 2, 2], [0, 2, 0, 2], [2, 1, 1, 0]]).unwrap();
        let ds = decompositions(&a).unwrap();
        assert_eq!(ds.len(), 1);
        let expected = Decomposition::from_permutations(
            4,
            vec![
                p(&[3, 4, 2, 1]),
                p(&[2, 3, 4, 1]),
                p(&[1, 4, 2, 3]),
                p(&[1, 3, 4, 2]),
            ],
        )
        .unwrap();
        assert_eq!(ds[0], expected);
        for (perm, _) in expected.terms() {
            assert!(matchings(&a).contains(perm));
        }
    }

    #[test]
    fn equivariance() {
        let a = RcMatrix::from_rows(&[[2, 2, 0], [1, 1, 2], [1, 1, 2]]).unwrap();
        let rows = p(&[2, 3, 1]);
        let cols = p(&[1, 3, 2]);
        let b = a.permuted(&rows, &cols).unwrap();
        let mut moved: Vec<Decomposition> = decompositions(&a)
            .unwrap()
            .iter()
            .map(|d| d.permuted(&rows, &cols).unwrap())
            .collect();
        moved.sort();
        assert_eq!(moved, decompositions(&b).unwrap());
        for d in &moved {
            assert_eq!(d.reconstruct(), b.entries());
        }
    }

    #[test]
    fn display_formats() {
        let d =
            Decomposition::from_permutations(3, vec![p(&[1, 3, 2]), p(&[1, 3, 2]), p(&[2, 1, 3])])
                .unwrap();
        assert_eq!(d.to_string(), "2·[1 3 2] + 1·[2 1 3]");
        assert_eq!(signature(&d).to_string(), "counts=1,2 overlaps=0");
    }
}
