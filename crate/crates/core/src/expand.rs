//! Expansion of RC-magic squares into weighted vacuum graphs.
//!
//! Each row of a square describes four functional derivatives acting on one
//! `(J Δ J)^2` factor. The three pairings of the four slots give weight-8
//! propagator pairs; merged by their adjacency increment they form the
//! row's blocks. Multiplying the blocks of all rows is the same as choosing
//! one block per row, multiplying weights and adding increments.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::class_representatives;
use crate::error::{RcmsError, Result};
use crate::graph::VacGraph;
use crate::matrix::{ClassRep, RcMatrix, QUARTIC_MARGIN};
use crate::perm::factorial;

/// Weight of a single slot pairing.
pub const PAIRING_WEIGHT: u64 = 8;

/// The three perfect matchings of four slots.
const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBlock {
    pub weight: u64,
    /// Symmetric `m x m` increment; loops add 2 on the diagonal.
    pub increment: Vec<u8>,
}

/// Blocks of one row (entries summing to 4), in order of first appearance
/// among the pairings `(12)(34)`, `(13)(24)`, `(14)(23)`.
pub fn row_blocks(row: &[u8]) -> Result<Vec<EdgeBlock>> {
    let sum: u32 = row.iter().map(|&x| x as u32).sum();
    if sum != QUARTIC_MARGIN as u32 {
        return Err(RcmsError::InvalidMatrix(format!(
            "row {row:?} sums to {sum}, expected {QUARTIC_MARGIN}"
        )));
    }
    let m = row.len();
    let slots: Vec<usize> = row
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
        .collect();

    let mut blocks: Vec<EdgeBlock> = Vec::with_capacity(3);
    for pairing in PAIRINGS {
        let mut inc = vec![0u8; m * m];
        for (a, b) in pairing {
            let (u, v) = (slots[a], slots[b]);
            if u == v {
                inc[u * m + u] += 2;
            } else {
                inc[u * m + v] += 1;
                inc[v * m + u] += 1;
            }
        }
        match blocks.iter_mut().find(|b| b.increment == inc) {
            Some(b) => b.weight += PAIRING_WEIGHT,
            None => blocks.push(EdgeBlock {
                weight: PAIRING_WEIGHT,
                increment: inc,
            }),
        }
    }
    Ok(blocks)
}

/// `∏_i d! / (a_i1! ··· a_im!)`: the number of derivative orderings that
/// produce the same square.
pub fn mult_factor(a: &RcMatrix) -> Result<u64> {
    let d = factorial(a.margin() as usize);
    a.rows().try_fold(1u64, |acc, row| {
        let denom: u64 = row.iter().map(|&x| factorial(x as usize)).product();
        acc.checked_mul(d / denom)
            .ok_or_else(|| RcmsError::Invariant("multiplicity factor overflows u64".into()))
    })
}

fn require_quartic(a: &RcMatrix) -> Result<()> {
    if a.margin() != QUARTIC_MARGIN {
        return Err(RcmsError::InvalidMatrix(format!(
            "graph expansion needs margin {QUARTIC_MARGIN}, found {}",
            a.margin()
        )));
    }
    Ok(())
}

/// Block weight with its increment as `(flat index, delta)` pairs.
type SparseBlock = (u64, Vec<(usize, u8)>);

/// Labeled adjacency matrices produced by the square, with summed weights.
/// Graphs are not identified up to relabeling here.
pub fn expand_labeled(a: &RcMatrix) -> Result<HashMap<Vec<u8>, u64>> {
    require_quartic(a)?;
    let m = a.order();
    let per_row: Vec<Vec<SparseBlock>> = a
        .rows()
        .map(|row| {
            Ok(row_blocks(row)?
                .into_iter()
                .map(|b| {
                    let sparse = b
                        .increment
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x > 0)
                        .map(|(k, &x)| (k, x))
                        .collect();
                    (b.weight, sparse)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut out = HashMap::new();
    let mut adj = vec![0u8; m * m];
    descend(&per_row, 0, 1, &mut adj, &mut out);
    Ok(out)
}

fn descend(
    rows: &[Vec<SparseBlock>],
    r: usize,
    weight: u64,
    adj: &mut Vec<u8>,
    out: &mut HashMap<Vec<u8>, u64>,
) {
    if r == rows.len() {
        *out.entry(adj.clone()).or_default() += weight;
        return;
    }
    for (w, inc) in &rows[r] {
        for &(k, x) in inc {
            adj[k] += x;
        }
        descend(rows, r + 1, weight * w, adj, out);
        for &(k, x) in inc {
            adj[k] -= x;
        }
    }
}

/// Canonical vacuum graphs with exact integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraphSet {
    m: usize,
    entries: BTreeMap<VacGraph, BigUint>,
}

impl WeightedGraphSet {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            entries: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `weight` to the canonical form of `graph`; zero weights are
    /// ignored.
    pub fn add(&mut self, graph: &VacGraph, weight: BigUint) -> Result<()> {
        if graph.order() != self.m {
            return Err(RcmsError::DimensionMismatch {
                expected: self.m,
                found: graph.order(),
            });
        }
        if weight != BigUint::ZERO {
            *self.entries.entry(graph.canonical_form()).or_default() += weight;
        }
        Ok(())
    }

    pub fn get(&self, graph: &VacGraph) -> Option<&BigUint> {
        self.entries.get(&graph.canonical_form())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VacGraph, &BigUint)> {
        self.entries.iter()
    }

    pub fn weights(&self) -> impl Iterator<Item = &BigUint> {
        self.entries.values()
    }

    pub fn total_weight(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn scaled(&self, factor: &BigUint) -> Self {
        Self {
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(g, w)| (g.clone(), w * factor))
                .collect(),
        }
    }

    /// Canonicalizes a labeled map, visiting each distinct labeling once.
    fn from_labeled<W: Into<BigUint> + Copy + Sync>(
        m: usize,
        labeled: &HashMap<Vec<u8>, W>,
    ) -> Self {
        let keys: Vec<&Vec<u8>> = labeled.keys().collect();
        let canon: Vec<(VacGraph, BigUint)> = keys
            .par_iter()
            .map(|k| {
                let g = VacGraph::from_parts_unchecked(m, (*k).clone()).canonical_form();
                (g, labeled[*k].into())
            })
            .collect();
        let mut entries: BTreeMap<VacGraph, BigUint> = BTreeMap::new();
        for (g, w) in canon {
            *entries.entry(g).or_default() += w;
        }
        Self { m, entries }
    }
}

pub fn expand_representative(a: &RcMatrix) -> Result<WeightedGraphSet> {
    let labeled = expand_labeled(a)?;
    Ok(WeightedGraphSet::from_labeled(a.order(), &labeled))
}

/// Sums `orbit size × multiplicity factor × expansion` over the classes.
pub fn assemble_classes(classes: &[ClassRep]) -> Result<WeightedGraphSet> {
    let Some(first) = classes.first() else {
        return Err(RcmsError::InvalidMatrix("no classes to assemble".into()));
    };
    let m = first.rep.order();
    let labeled: HashMap<Vec<u8>, u128> = classes
        .par_iter()
        .map(|c| -> Result<HashMap<Vec<u8>, u128>> {
            if c.rep.order() != m {
                return Err(RcmsError::DimensionMismatch {
                    expected: m,
                    found: c.rep.order(),
                });
            }
            let scale = c.orbit_size as u128 * c.mult_factor as u128;
            Ok(expand_labeled(&c.rep)?
                .into_iter()
                .map(|(k, w)| (k, w as u128 * scale))
                .collect())
        })
        .try_reduce(HashMap::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            for (k, w) in b {
                *a.entry(k).or_default() += w;
            }
            Ok(a)
        })?;
    Ok(WeightedGraphSet::from_labeled(m, &labeled))
}

/// Total multiplicities `M_T` of every vacuum graph of order `m`.
pub fn assemble_order(m: usize) -> Result<WeightedGraphSet> {
    assemble_classes(&class_representatives(m, QUARTIC_MARGIN)?)
}
