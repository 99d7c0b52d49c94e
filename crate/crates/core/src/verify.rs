//! Replays the published tables for one order and reports every check.
//!
//! The report holds no timings or thread-dependent data, so its JSON is
//! byte-identical across runs and worker counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::birkhoff::{decompositions, non_equivalence_test, signature, Decomposition, Verdict};
use crate::burnside::{burnside_class_count, fixed_point_table};
use crate::enumerate::{class_representatives_with, count_total};
use crate::error::{RcmsError, Result};
use crate::expand::{assemble_classes, expand_representative, mult_factor};
use crate::graph::{disconnected_sym_factor, merge, total_pairings, MultiplicityRecord, VacGraph};
use crate::matrix::{ClassRep, RcMatrix, QUARTIC_MARGIN};
use crate::oracle::{cross_check, WICK_ORDER_LIMIT};
use crate::perm::{factorial, Permutation};
use crate::reference as r;

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Compare against the pairing oracle (orders 1 to 4).
    pub oracle: bool,
    /// Also allow the oracle at order 5, which visits ~6.5e8 pairings.
    pub slow_oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub order: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, found: T) {
        self.0.push(Check {
            name: name.to_string(),
            passed: expected == found,
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        });
    }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn triples(records: &[&MultiplicityRecord]) -> Vec<(u64, u64, u64)> {
    sorted(
        records
            .iter()
            .map(|rec| {
                (
                    rec.m_total.to_u64().unwrap_or(u64::MAX),
                    rec.m_kleinert.to_u64().unwrap_or(u64::MAX),
                    rec.sym_factor,
                )
            })
            .collect(),
    )
}

/// Merged records for an order, through the full pipeline.
pub fn order_records(m: usize) -> Result<Vec<MultiplicityRecord>> {
    let reps = class_representatives_with(m, QUARTIC_MARGIN, None, |_, _| {})?;
    merge(&[assemble_classes(&reps)?])
}

pub fn verify_order(m: usize, options: &VerifyOptions) -> Result<VerifyReport> {
    if m == 0 || m > r::TOTAL_COUNTS.len() {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!(
                "published tables cover orders 1..={}",
                r::TOTAL_COUNTS.len()
            ),
        });
    }
    if options.oracle && (m > WICK_ORDER_LIMIT || (m == WICK_ORDER_LIMIT && !options.slow_oracle)) {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!(
                "the pairing oracle visits {} pairings here; it runs up to order 4, or order 5 with the slow-oracle flag",
                total_pairings(m)
            ),
        });
    }
    let mut c = Checks::default();
    let idx = m - 1;

    let total = count_total(m, QUARTIC_MARGIN)?;
    c.eq(
        "total_count",
        BigUint::from(r::TOTAL_COUNTS[idx]),
        total.clone(),
    );

    let mut stages = Vec::new();
    let reps = class_representatives_with(m, QUARTIC_MARGIN, None, |_, n| stages.push(n))?;
    c.eq("class_count", r::CLASS_COUNTS[idx], reps.len() as u64);
    let orbit_sum: u64 = reps.iter().map(|x| x.orbit_size).sum();
    c.eq("orbit_size_sum", total, BigUint::from(orbit_sum));
    c.eq(
        "representatives_canonical",
        true,
        reps.iter().all(|x| x.rep.is_canonical()),
    );
    c.eq(
        "burnside_class_count",
        reps.len() as u64,
        burnside_class_count(m, QUARTIC_MARGIN)?,
    );
    if m == 2 {
        let table = fixed_point_table(2, QUARTIC_MARGIN)?;
        c.eq(
            "burnside_fixed_points",
            r::ORDER2_FIXED_POINTS.map(|row| row.to_vec()).to_vec(),
            table,
        );
    }
    if m == 5 {
        c.eq(
            "augmentation_stage_counts",
            r::ORDER5_STAGE_COUNTS.to_vec(),
            stages,
        );
    }

    let mut weights_ok = true;
    let mut expansions = Vec::with_capacity(reps.len());
    let target = BigUint::from(24u32).pow(m as u32);
    for rep in &reps {
        let set = expand_representative(&rep.rep)?;
        weights_ok &= set.total_weight() == target;
        expansions.push(set);
    }
    c.eq("representative_weight_sums", true, weights_ok);

    if m == 3 {
        third_order_reps(&mut c, &reps, &expansions)?;
    }
    if m == 4 {
        let a = RcMatrix::from_rows(&r::EXAMPLE4_ROWS)?;
        c.eq("example_mult_factor", r::EXAMPLE4_FACTOR, mult_factor(&a)?);
        let set = expand_representative(&a)?;
        let w: Vec<u64> = set
            .weights()
            .map(|x| x.to_u64().unwrap_or(u64::MAX))
            .collect();
        c.eq(
            "example_weights",
            sorted(r::EXAMPLE4_WEIGHTS.to_vec()),
            sorted(w),
        );
        c.eq(
            "example_weight_sum",
            BigUint::from(r::EXAMPLE4_WEIGHT_SUM),
            set.total_weight(),
        );
    }

    let records = merge(&[assemble_classes(&reps)?])?;
    let connected: Vec<&MultiplicityRecord> = records.iter().filter(|x| x.connected).collect();
    let (all_count, connected_count) = r::graph_counts(m);
    if let Some(n) = all_count {
        c.eq("graph_count", n, records.len());
    }
    if m == 4 {
        c.eq(
            "graph_count_regression",
            r::ORDER4_GRAPH_COUNT_REGRESSION,
            records.len(),
        );
    }
    if let Some(n) = connected_count {
        c.eq("connected_graph_count", n, connected.len());
    }
    match m {
        3 => c.eq(
            "records",
            sorted(r::ORDER3_RECORDS.to_vec()),
            triples(&records.iter().collect::<Vec<_>>()),
        ),
        4 => c.eq(
            "connected_records",
            sorted(r::ORDER4_CONNECTED.to_vec()),
            triples(&connected),
        ),
        5 => c.eq(
            "connected_records",
            sorted(r::ORDER5_CONNECTED.to_vec()),
            triples(&connected),
        ),
        _ => {}
    }

    let sum_k: BigUint = records.iter().map(|x| &x.m_kleinert).sum();
    c.eq("kleinert_sum", total_pairings(m), sum_k);
    let product = BigUint::from(24u32).pow(m as u32) * factorial(m);
    c.eq(
        "kleinert_times_symmetry",
        true,
        records
            .iter()
            .all(|x| &x.m_kleinert * x.sym_factor == product),
    );
    c.eq(
        "symmetry_from_automorphisms",
        true,
        records
            .iter()
            .all(|x| x.graph.symmetry_factor_by_automorphisms() == x.sym_factor),
    );
    disconnected_rule(&mut c, m, &records)?;

    if m == 3 {
        birkhoff_third_order(&mut c)?;
    }
    if m == 4 {
        birkhoff_fourth_order(&mut c)?;
    }

    if options.oracle {
        let report = cross_check(m)?;
        c.eq(
            "oracle_classes",
            Some(true),
            report.classes_match.or(Some(true)),
        );
        c.eq("oracle_graphs", true, report.graphs_match);
        c.eq("oracle_pairing_total", true, report.pairing_total_match);
    }

    let passed = c.0.iter().all(|x| x.passed);
    Ok(VerifyReport {
        schema_version: crate::SCHEMA_VERSION,
        order: m,
        checks: c.0,
        passed,
    })
}

fn third_order_reps(
    c: &mut Checks,
    reps: &[ClassRep],
    expansions: &[crate::expand::WeightedGraphSet],
) -> Result<()> {
    let by_canon: HashMap<&RcMatrix, usize> =
        reps.iter().enumerate().map(|(i, x)| (&x.rep, i)).collect();
    let mut orbits = Vec::new();
    let mut factors = Vec::new();
    let mut weights_ok = true;
    for published in &r::ORDER3_REPS {
        let a = RcMatrix::from_rows(&published.rows)?;
        let Some(&i) = by_canon.get(&a.canonical_form()) else {
            orbits.push(0);
            factors.push(0);
            weights_ok = false;
            continue;
        };
        orbits.push(reps[i].orbit_size);
        factors.push(reps[i].mult_factor);
        let found: Vec<u64> = expansions[i]
            .weights()
            .map(|x| x.to_u64().unwrap_or(0))
            .collect();
        weights_ok &= sorted(found) == sorted(published.weights.to_vec());
    }
    c.eq(
        "third_order_orbit_sizes",
        r::ORDER3_REPS
            .iter()
            .map(|x| x.orbit_size)
            .collect::<Vec<_>>(),
        orbits,
    );
    c.eq(
        "third_order_mult_factors",
        r::ORDER3_REPS
            .iter()
            .map(|x| x.mult_factor)
            .collect::<Vec<_>>(),
        factors,
    );
    c.eq("third_order_expansion_weights", true, weights_ok);
    Ok(())
}

/// Symmetry factors of disconnected graphs from their components, whose
/// factors come from the records of the lower orders.
fn disconnected_rule(c: &mut Checks, m: usize, records: &[MultiplicityRecord]) -> Result<()> {
    let disconnected: Vec<&MultiplicityRecord> = records.iter().filter(|x| !x.connected).collect();
    if disconnected.is_empty() {
        return Ok(());
    }
    let mut lower: BTreeMap<VacGraph, u64> = BTreeMap::new();
    for k in 1..m {
        for rec in order_records(k)?.into_iter().filter(|x| x.connected) {
            lower.insert(rec.graph, rec.sym_factor);
        }
    }
    let mut ok = true;
    for rec in disconnected {
        let parts: Option<Vec<(u64, u32)>> = rec
            .graph
            .component_classes()
            .into_iter()
            .map(|(g, n)| lower.get(&g).map(|&s| (s, n)))
            .collect();
        ok &= parts.is_some_and(|p| disconnected_sym_factor(&p) == rec.sym_factor);
    }
    c.eq("disconnected_symmetry_rule", true, ok);
    Ok(())
}

fn birkhoff_third_order(c: &mut Checks) -> Result<()> {
    let diag = RcMatrix::diagonal(3, QUARTIC_MARGIN)?;
    let expected = Decomposition::from_permutations(3, vec![Permutation::identity(3); 4])?;
    c.eq(
        "diagonal_decomposition",
        vec![expected],
        decompositions(&diag)?,
    );
    let two = RcMatrix::from_rows(&r::TWO_DECOMPOSITIONS)?;
    c.eq("two_decompositions", 2, decompositions(&two)?.len());
    let swap = RcMatrix::from_rows(&r::IDENTITY_PLUS_SWAP)?;
    c.eq(
        "diagonal_vs_identity_plus_swap",
        Verdict::Inequivalent,
        non_equivalence_test(&diag, &swap)?,
    );
    Ok(())
}

fn birkhoff_fourth_order(c: &mut Checks) -> Result<()> {
    let a = RcMatrix::from_rows(&r::SAME_SIGNATURE_A)?;
    let b = RcMatrix::from_rows(&r::SAME_SIGNATURE_B)?;
    let da = decompositions(&a)?;
    let db = decompositions(&b)?;
    let terms = |t: &[[usize; 4]; 4]| -> Result<Decomposition> {
        let perms = t
            .iter()
            .map(|p| Permutation::from_one_based(p))
            .collect::<Result<Vec<_>>>()?;
        Decomposition::from_permutations(4, perms)
    };
    c.eq(
        "unique_decomposition_a",
        vec![terms(&r::SAME_SIGNATURE_A_TERMS)?],
        da.clone(),
    );
    c.eq(
        "unique_decomposition_b",
        vec![terms(&r::SAME_SIGNATURE_B_TERMS)?],
        db.clone(),
    );
    c.eq(
        "same_signatures",
        true,
        da.len() == 1 && db.len() == 1 && signature(&da[0]) == signature(&db[0]),
    );
    c.eq(
        "signature_test_inconclusive",
        Verdict::Inconclusive,
        non_equivalence_test(&a, &b)?,
    );
    c.eq("not_equivalent", false, a.is_equivalent(&b)?);
    Ok(())
}
