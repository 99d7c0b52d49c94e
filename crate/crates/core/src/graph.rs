//! Four-regular multigraphs with loops (vacuum graphs), their canonical
//! labeling, connectivity, and the normalization of total multiplicities
//! into Kleinert multiplicities and symmetry factors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{RcmsError, Result};
use crate::expand::WeightedGraphSet;
use crate::perm::{factorial, permutations, Permutation, MAX_DIM};

pub const VERTEX_DEGREE: u32 = 4;

/// Symmetric adjacency matrix; the diagonal stores twice the loop count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VacGraph {
    m: usize,
    adj: Vec<u8>,
}

impl VacGraph {
    pub fn new(m: usize, adj: Vec<u8>) -> Result<Self> {
        if m == 0 || m > MAX_DIM {
            return Err(RcmsError::InvalidGraph(format!(
                "vertex count {m} outside 1..={MAX_DIM}"
            )));
        }
        if adj.len() != m * m {
            return Err(RcmsError::DimensionMismatch {
                expected: m * m,
                found: adj.len(),
            });
        }
        for i in 0..m {
            if !adj[i * m + i].is_multiple_of(2) {
                return Err(RcmsError::InvalidGraph(format!(
                    "odd diagonal entry at vertex {}",
                    i + 1
                )));
            }
            for j in 0..i {
                if adj[i * m + j] != adj[j * m + i] {
                    return Err(RcmsError::InvalidGraph(format!(
                        "asymmetric entry ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
            let degree: u32 = adj[i * m..(i + 1) * m].iter().map(|&x| x as u32).sum();
            if degree != VERTEX_DEGREE {
                return Err(RcmsError::InvalidGraph(format!(
                    "vertex {} has degree {degree}",
                    i + 1
                )));
            }
        }
        Ok(Self { m, adj })
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let mut adj = Vec::with_capacity(m * m);
        for row in rows {
            let row = row.as_ref();
            if row.len() != m {
                return Err(RcmsError::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            adj.extend_from_slice(row);
        }
        Self::new(m, adj)
    }

    pub(crate) fn from_parts_unchecked(m: usize, adj: Vec<u8>) -> Self {
        Self { m, adj }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn adjacency(&self) -> &[u8] {
        &self.adj
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.adj[i * self.m + j]
    }

    pub fn loops(&self, i: usize) -> u8 {
        self.get(i, i) / 2
    }

    /// `P · G · P⁻¹`: vertex `i` of the result is vertex `p(i)` of `self`.
    pub fn conjugated(&self, p: &Permutation) -> Result<Self> {
        if p.size() != self.m {
            return Err(RcmsError::DimensionMismatch {
                expected: self.m,
                found: p.size(),
            });
        }
        Ok(Self {
            m: self.m,
            adj: relabel(self.m, &self.adj, p.as_slice()),
        })
    }

    /// Smallest adjacency matrix (row-major) over all relabelings.
    ///
    /// Rows are fixed one at a time: the vertex placed next must minimize
    /// its row, and the vertices still unplaced are then kept in ordered
    /// cells of equal adjacency to everything placed so far, so only ties
    /// branch. Agrees with [`VacGraph::canonical_form_full_scan`].
    pub fn canonical_form(&self) -> Self {
        let mut best = None;
        let cells = vec![(0..self.m).collect::<Vec<usize>>()];
        lex_min_search(
            self.m,
            &self.adj,
            &mut Vec::with_capacity(self.m),
            &cells,
            &mut Vec::new(),
            &mut best,
        );
        Self {
            m: self.m,
            adj: best.expect("at least one labeling"),
        }
    }

    /// Smallest adjacency matrix over all `m!` relabelings.
    pub fn canonical_form_full_scan(&self) -> Self {
        let best = permutations(self.m)
            .iter()
            .map(|p| relabel(self.m, &self.adj, p.as_slice()))
            .min()
            .expect("at least one permutation");
        Self {
            m: self.m,
            adj: best,
        }
    }

    pub fn is_isomorphic(&self, other: &VacGraph) -> bool {
        self.m == other.m && self.canonical_form() == other.canonical_form()
    }

    fn component_labels(&self) -> (usize, Vec<usize>) {
        let m = self.m;
        let mut label = vec![usize::MAX; m];
        let mut count = 0;
        for start in 0..m {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = count;
            while let Some(v) = stack.pop() {
                for (w, lw) in label.iter_mut().enumerate() {
                    if w != v && self.adj[v * m + w] > 0 && *lw == usize::MAX {
                        *lw = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().0 == 1
    }

    /// Connected components, each re-indexed from zero in increasing order of
    /// its vertices, listed by smallest vertex.
    pub fn connected_components(&self) -> Vec<VacGraph> {
        let (count, label) = self.component_labels();
        (0..count)
            .map(|c| {
                let verts: Vec<usize> = (0..self.m).filter(|&v| label[v] == c).collect();
                VacGraph {
                    m: verts.len(),
                    adj: relabel(self.m, &self.adj, &verts),
                }
            })
            .collect()
    }

    /// Canonical components with their repetition counts.
    pub fn component_classes(&self) -> Vec<(VacGraph, u32)> {
        let mut counts: BTreeMap<VacGraph, u32> = BTreeMap::new();
        for c in self.connected_components() {
            *counts.entry(c.canonical_form()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Number of vertex permutations preserving the adjacency matrix.
    pub fn vertex_automorphisms(&self) -> u64 {
        permutations(self.m)
            .iter()
            .filter(|p| relabel(self.m, &self.adj, p.as_slice()) == self.adj)
            .count() as u64
    }

    /// Symmetry factor from the automorphism group: vertex automorphisms
    /// times `2^l · l!` per vertex with `l` loops times `k!` per bundle of
    /// `k` parallel edges.
    pub fn symmetry_factor_by_automorphisms(&self) -> u64 {
        let mut s = self.vertex_automorphisms();
        for i in 0..self.m {
            let l = self.loops(i) as u32;
            s *= 2u64.pow(l) * factorial(l as usize);
            for j in i + 1..self.m {
                s *= factorial(self.get(i, j) as usize);
            }
        }
        s
    }

    /// Rows separated by `;`, entries by spaces.
    pub fn adjacency_string(&self) -> String {
        self.adj
            .chunks(self.m)
            .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// DOT multigraph: one `--` line per edge, loops repeated per loop.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for i in 0..self.m {
            let _ = writeln!(out, "  v{};", i + 1);
        }
        for i in 0..self.m {
            for _ in 0..self.loops(i) {
                let _ = writeln!(out, "  v{} -- v{};", i + 1, i + 1);
            }
            for j in i + 1..self.m {
                for _ in 0..self.get(i, j) {
                    let _ = writeln!(out, "  v{} -- v{};", i + 1, j + 1);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn relabel(m: usize, adj: &[u8], order: &[usize]) -> Vec<u8> {
    let k = order.len();
    let mut out = vec![0u8; k * k];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            out[i * k + j] = adj[a * m + b];
        }
    }
    out
}

/// Row of vertex `v` when placed after `placed`, with every remaining
/// cell listed in ascending order of adjacency to `v`.
fn best_row(m: usize, adj: &[u8], placed: &[usize], cells: &[Vec<usize>], v: usize) -> Vec<u8> {
    let mut row: Vec<u8> = placed.iter().map(|&p| adj[v * m + p]).collect();
    row.push(adj[v * m + v]);
    for cell in cells {
        let start = row.len();
        row.extend(cell.iter().filter(|&&w| w != v).map(|&w| adj[v * m + w]));
        row[start..].sort_unstable();
    }
    row
}

fn lex_min_search(
    m: usize,
    adj: &[u8],
    placed: &mut Vec<usize>,
    cells: &[Vec<usize>],
    prefix: &mut Vec<u8>,
    best: &mut Option<Vec<u8>>,
) {
    if let Some(b) = best.as_ref() {
        if prefix.as_slice() > &b[..prefix.len()] {
            return;
        }
    }
    if placed.len() == m {
        if best.as_ref().is_none_or(|b| *prefix < *b) {
            *best = Some(prefix.clone());
        }
        return;
    }
    let rows: Vec<(usize, Vec<u8>)> = cells[0]
        .iter()
        .map(|&v| (v, best_row(m, adj, placed, cells, v)))
        .collect();
    let min = rows
        .iter()
        .map(|(_, r)| r)
        .min()
        .expect("nonempty cell")
        .clone();
    for (v, _) in rows.iter().filter(|(_, r)| *r == min) {
        let mut next = Vec::with_capacity(cells.len() + 4);
        for cell in cells {
            let mut rest: Vec<usize> = cell.iter().copied().filter(|&w| w != *v).collect();
            rest.sort_by_key(|&w| adj[*v * m + w]);
            for group in rest.chunk_by(|&a, &b| adj[*v * m + a] == adj[*v * m + b]) {
                next.push(group.to_vec());
            }
        }
        let len = prefix.len();
        prefix.extend_from_slice(&min);
        placed.push(*v);
        lex_min_search(m, adj, placed, &next, prefix, best);
        placed.pop();
        prefix.truncate(len);
    }
}

/// `(2m)! · 2^(2m)`: divides a total multiplicity into a Kleinert
/// multiplicity.
pub fn kleinert_divisor(m: usize) -> BigUint {
    let f: BigUint = (1..=2 * m as u64).product();
    f << (2 * m)
}

/// `(4!)^m · m! · (2m)! · 2^(2m)`: divided by the total multiplicity it gives
/// the symmetry factor.
pub fn symmetry_numerator(m: usize) -> BigUint {
    BigUint::from(24u32).pow(m as u32) * BigUint::from(factorial(m)) * kleinert_divisor(m)
}

/// `(4m - 1)!!`, the number of pairings of `4m` half-edges.
pub fn total_pairings(m: usize) -> BigUint {
    (1..4 * m as u64).step_by(2).map(BigUint::from).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRecord {
    pub graph: VacGraph,
    pub m_total: BigUint,
    pub m_kleinert: BigUint,
    pub sym_factor: u64,
    pub connected: bool,
}

impl MultiplicityRecord {
    /// Normalizes a total multiplicity; both divisions must be exact.
    pub fn from_total(graph: VacGraph, m_total: BigUint) -> Result<Self> {
        let m = graph.order();
        if m_total.is_zero() {
            return Err(RcmsError::Invariant("zero multiplicity".into()));
        }
        let div = kleinert_divisor(m);
        if !(&m_total % &div).is_zero() {
            return Err(RcmsError::Invariant(format!(
                "M_T = {m_total} not divisible by (2m)! 2^(2m) = {div}"
            )));
        }
        let num = symmetry_numerator(m);
        if !(&num % &m_total).is_zero() {
            return Err(RcmsError::Invariant(format!(
                "M_T = {m_total} does not divide {num}"
            )));
        }
        let sym_factor = (&num / &m_total)
            .to_u64()
            .ok_or_else(|| RcmsError::Invariant("symmetry factor overflows u64".into()))?;
        Ok(Self {
            connected: graph.is_connected(),
            m_kleinert: &m_total / &div,
            graph,
            m_total,
            sym_factor,
        })
    }
}

/// Sums multiplicities per canonical graph across the sets and normalizes.
/// Records are sorted connected first, then by canonical adjacency.
pub fn merge(sets: &[WeightedGraphSet]) -> Result<Vec<MultiplicityRecord>> {
    let Some(first) = sets.first() else {
        return Ok(Vec::new());
    };
    let m = first.order();
    let mut total: BTreeMap<VacGraph, BigUint> = BTreeMap::new();
    for set in sets {
        if set.order() != m {
            return Err(RcmsError::DimensionMismatch {
                expected: m,
                found: set.order(),
            });
        }
        for (g, w) in set.iter() {
            *total.entry(g.canonical_form()).or_default() += w;
        }
    }
    let mut records = total
        .into_iter()
        .map(|(g, w)| MultiplicityRecord::from_total(g, w))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (!a.connected, &a.graph).cmp(&(!b.connected, &b.graph)));
    Ok(records)
}

/// `n_1! ··· n_r! · s_1^n_1 ··· s_r^n_r` for distinct components with
/// symmetry factors `s_i` repeated `n_i` times.
pub fn disconnected_sym_factor(components: &[(u64, u32)]) -> u64 {
    components
        .iter()
        .map(|&(s, n)| factorial(n as usize) * s.pow(n))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_eight() -> VacGraph {
        VacGraph::from_rows(&[[4]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(VacGraph::from_rows(&[[2, 2], [2, 2]]).is_ok());
        assert!(VacGraph::from_rows(&[[1, 3], [3, 1]]).is_err());
        assert!(VacGraph::from_rows(&[[2, 2], [1, 3]]).is_err());
        assert!(VacGraph::from_rows(&[[2, 1], [1, 2]]).is_err());
    }

    #[test]
    fn canonical_form_of_swapped_labels() {
        let a = VacGraph::from_rows(&[[2, 2, 0], [2, 0, 2], [0, 2, 2]]).unwrap();
        let b = VacGraph::from_rows(&[[0, 2, 2], [2, 2, 0], [2, 0, 2]]).unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
        let c = a.canonical_form();
        assert_eq!(c.canonical_form(), c);
        let pair =
            VacGraph::from_rows(&[[2, 2, 0, 0], [2, 2, 0, 0], [0, 0, 0, 4], [0, 0, 4, 0]]).unwrap();
        let swapped = pair
            .conjugated(&Permutation::from_one_based(&[3, 4, 1, 2]).unwrap())
            .unwrap();
        assert_eq!(pair.canonical_form(), swapped.canonical_form());
    }

    #[test]
    fn components() {
        let triple = VacGraph::from_rows(&[[4, 0, 0], [0, 4, 0], [0, 0, 4]]).unwrap();
        let comps = triple.connected_components();
        assert_eq!(comps, vec![figure_eight(); 3]);
        assert_eq!(triple.component_classes(), vec![(figure_eight(), 3)]);

        let two_bubbles =
            VacGraph::from_rows(&[[2, 2, 0, 0], [2, 2, 0, 0], [0, 0, 2, 2], [0, 0, 2, 2]]).unwrap();
        let comps = two_bubbles.connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].is_isomorphic(&comps[1]));

        let sunset = VacGraph::from_rows(&[[0, 4], [4, 0]]).unwrap();
        assert!(sunset.is_connected());
        assert_eq!(sunset.connected_components(), vec![sunset]);
    }

    #[test]
    fn automorphism_symmetry_factors() {
        assert_eq!(figure_eight().symmetry_factor_by_automorphisms(), 8);
        let sunset = VacGraph::from_rows(&[[0, 4], [4, 0]]).unwrap();
        assert_eq!(sunset.symmetry_factor_by_automorphisms(), 48);
        let eye = VacGraph::from_rows(&[[2, 2], [2, 2]]).unwrap();
        assert_eq!(eye.symmetry_factor_by_automorphisms(), 16);
    }

    #[test]
    fn disconnected_rule() {
        assert_eq!(disconnected_sym_factor(&[(8, 3)]), 3072);
        assert_eq!(disconnected_sym_factor(&[(8, 1), (16, 1)]), 128);
        assert_eq!(disconnected_sym_factor(&[(48, 1)]), 48);
    }

    #[test]
    fn normalization_constants() {
        assert_eq!(kleinert_divisor(3), BigUint::from(720u32 * 64));
        assert_eq!(total_pairings(3), BigUint::from(10395u32));
        let rec = MultiplicityRecord::from_total(
            VacGraph::from_rows(&[[4, 0, 0], [0, 4, 0], [0, 0, 4]]).unwrap(),
            BigUint::from(1244160u32),
        )
        .unwrap();
        assert_eq!(rec.m_kleinert, BigUint::from(27u32));
        assert_eq!(rec.sym_factor, 3072);
        assert!(!rec.connected);
        assert!(MultiplicityRecord::from_total(figure_eight(), BigUint::from(7u32)).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = figure_eight().to_dot("g1_1");
        assert_eq!(dot, "graph g1_1 {\n  v1;\n  v1 -- v1;\n  v1 -- v1;\n}\n");
        let sunset = VacGraph::from_rows(&[[0, 4], [4, 0]]).unwrap();
        assert_eq!(sunset.to_dot("s").matches("v1 -- v2;").count(), 4);
    }
}
