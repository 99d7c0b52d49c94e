//! Independent ground truth at small order: every Wick pairing of the
//! `4m` half-edges, and classes found by scanning every square.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::class_representatives;
use crate::error::{RcmsError, Result};
use crate::expand::{assemble_classes, mult_factor};
use crate::graph::{merge, total_pairings, VacGraph};
use crate::matrix::{for_each_rc_matrix, ClassRep, RcMatrix, QUARTIC_MARGIN};

/// Largest order the pairing oracle accepts.
pub const WICK_ORDER_LIMIT: usize = 5;
/// Largest order the brute-force class scan accepts.
pub const BRUTE_FORCE_ORDER_LIMIT: usize = 4;

const BITS: u32 = 3;

/// Bit offset of adjacency cell `(i, j)`, `i <= j`, in a packed key.
fn cell(m: usize, i: usize, j: usize) -> u32 {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    (BITS as usize * (i * m - i * (i + 1) / 2 + j)) as u32
}

fn unpack(m: usize, key: u64) -> VacGraph {
    let mut adj = vec![0u8; m * m];
    for i in 0..m {
        for j in i..m {
            let x = ((key >> cell(m, i, j)) & ((1 << BITS) - 1)) as u8;
            adj[i * m + j] = x;
            adj[j * m + i] = x;
        }
    }
    VacGraph::from_parts_unchecked(m, adj)
}

/// Pairs the lowest free half-edge with every later free one.
fn pair(m: usize, free: u32, key: u64, counts: &mut HashMap<u64, u64>) {
    if free == 0 {
        *counts.entry(key).or_default() += 1;
        return;
    }
    let a = free.trailing_zeros() as usize;
    let rest = free & !(1 << a);
    let mut others = rest;
    while others != 0 {
        let b = others.trailing_zeros() as usize;
        others &= others - 1;
        let (u, v) = (a / 4, b / 4);
        let inc = if u == v { 2u64 } else { 1 };
        pair(m, rest & !(1 << b), key + (inc << cell(m, u, v)), counts);
    }
}

/// Number of Wick pairings producing each graph, sorted by canonical graph.
/// The counts are the Kleinert multiplicities and sum to `(4m - 1)!!`.
pub fn wick_multiplicities(m: usize) -> Result<Vec<(VacGraph, u64)>> {
    if m == 0 || m > WICK_ORDER_LIMIT {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!(
                "the pairing oracle visits (4m-1)!! = {} pairings; limit is order {WICK_ORDER_LIMIT}",
                total_pairings(m)
            ),
        });
    }
    let full: u32 = (1u32 << (4 * m)) - 1;
    let rest = full & !1;
    let branches: Vec<usize> = (1..4 * m).collect();
    let labeled = branches
        .into_par_iter()
        .map(|b| {
            let mut counts = HashMap::new();
            let v = b / 4;
            let inc = if v == 0 { 2u64 } else { 1 };
            pair(m, rest & !(1 << b), inc << cell(m, 0, v), &mut counts);
            counts
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    let mut merged: BTreeMap<VacGraph, u64> = BTreeMap::new();
    for (key, c) in labeled {
        *merged.entry(unpack(m, key).canonical_form()).or_default() += c;
    }
    Ok(merged.into_iter().collect())
}

/// Classes found by visiting every square and grouping by the canonical
/// form of the full group scan; class sizes are the group sizes.
pub fn brute_force_classes(m: usize, d: u8) -> Result<Vec<ClassRep>> {
    if m > BRUTE_FORCE_ORDER_LIMIT {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!("brute-force class scan is limited to order {BRUTE_FORCE_ORDER_LIMIT}"),
        });
    }
    let mut groups: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for_each_rc_matrix(m, d, |a| {
        *groups
            .entry(a.canonical_form_scan().entries().to_vec())
            .or_default() += 1;
    })?;
    groups
        .into_iter()
        .rev()
        .map(|(entries, count)| {
            let rep = RcMatrix::new(m, d, entries)?;
            Ok(ClassRep {
                mult_factor: mult_factor(&rep)?,
                rep,
                orbit_size: count,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub order: usize,
    /// `None` when the order is beyond the brute-force scan.
    pub classes_match: Option<bool>,
    pub pipeline_classes: usize,
    pub brute_force_classes: Option<usize>,
    pub graphs_match: bool,
    pub pipeline_graphs: usize,
    pub oracle_graphs: usize,
    pub pairing_total: String,
    pub pairing_total_match: bool,
    pub first_divergence: Option<String>,
    pub passed: bool,
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "MISMATCH" };
        writeln!(f, "order {}", self.order)?;
        match (self.classes_match, self.brute_force_classes) {
            (Some(ok), Some(n)) => writeln!(
                f,
                "  classes: pipeline {} vs brute force {n} .. {}",
                self.pipeline_classes,
                mark(ok)
            )?,
            _ => writeln!(
                f,
                "  classes: pipeline {} (brute force skipped)",
                self.pipeline_classes
            )?,
        }
        writeln!(
            f,
            "  graphs: pipeline {} vs pairings {} .. {}",
            self.pipeline_graphs,
            self.oracle_graphs,
            mark(self.graphs_match)
        )?;
        writeln!(
            f,
            "  sum of M_K = {} .. {}",
            self.pairing_total,
            mark(self.pairing_total_match)
        )?;
        if let Some(d) = &self.first_divergence {
            writeln!(f, "  first divergence: {d}")?;
        }
        write!(f, "  {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Compares enumeration against the brute-force scan and per-graph `M_K`
/// against the pairing oracle.
pub fn cross_check(m: usize) -> Result<CrossCheckReport> {
    let oracle = wick_multiplicities(m)?;
    let reps = class_representatives(m, QUARTIC_MARGIN)?;
    let mut first_divergence = None;

    let (classes_match, brute_count) = if m <= BRUTE_FORCE_ORDER_LIMIT {
        let brute = brute_force_classes(m, QUARTIC_MARGIN)?;
        let ok = brute == reps;
        if !ok {
            first_divergence = brute
                .iter()
                .zip(&reps)
                .find(|(a, b)| a != b)
                .map(|(a, b)| {
                    format!(
                        "class {} vs {}",
                        a.rep.to_text().trim(),
                        b.rep.to_text().trim()
                    )
                })
                .or_else(|| Some("class lists differ in length".into()));
        }
        (Some(ok), Some(brute.len()))
    } else {
        (None, None)
    };

    let records = merge(&[assemble_classes(&reps)?])?;
    let pipeline: BTreeMap<&VacGraph, &BigUint> =
        records.iter().map(|r| (&r.graph, &r.m_kleinert)).collect();
    let mut graphs_match = pipeline.len() == oracle.len();
    for (g, c) in &oracle {
        if pipeline.get(g).copied() != Some(&BigUint::from(*c)) {
            graphs_match = false;
            if first_divergence.is_none() {
                first_divergence = Some(format!(
                    "graph {}: pairings {c}, pipeline {}",
                    g.adjacency_string(),
                    pipeline
                        .get(g)
                        .map_or("absent".to_string(), |x| x.to_string())
                ));
            }
        }
    }
    let sum: BigUint = records.iter().map(|r| &r.m_kleinert).sum();
    let expected = total_pairings(m);
    let oracle_sum: u64 = oracle.iter().map(|(_, c)| c).sum();
    let pairing_total_match = sum == expected && BigUint::from(oracle_sum) == expected;
    let passed = classes_match.unwrap_or(true) && graphs_match && pairing_total_match;
    Ok(CrossCheckReport {
        order: m,
        classes_match,
        pipeline_classes: reps.len(),
        brute_force_classes: brute_count,
        graphs_match,
        pipeline_graphs: records.len(),
        oracle_graphs: oracle.len(),
        pairing_total: sum.to_string(),
        pairing_total_match,
        first_divergence,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_has_three_pairings() {
        let w = wick_multiplicities(1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].1, 3);
        assert_eq!(w[0].0.loops(0), 2);
    }

    #[test]
    fn totals_are_double_factorials() {
        for (m, total) in [(1, 3u64), (2, 105), (3, 10395)] {
            let sum: u64 = wick_multiplicities(m).unwrap().iter().map(|(_, c)| c).sum();
            assert_eq!(sum, total);
        }
    }

    #[test]
    fn refuses_large_orders() {
        let err = wick_multiplicities(6).unwrap_err().to_string();
        assert!(err.contains("pairings"), "{err}");
    }

    #[test]
    fn brute_force_small() {
        let c = brute_force_classes(2, 4).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().map(|r| r.orbit_size).sum::<u64>(), 5);
        assert_eq!(brute_force_classes(1, 4).unwrap().len(), 1);
        assert!(brute_force_classes(5, 4).is_err());
    }

    #[test]
    fn cross_check_small_orders() {
        for m in 1..=3 {
            let r = cross_check(m).unwrap();
            assert!(r.passed, "{r}");
        }
    }
}
