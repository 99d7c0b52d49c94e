//! Row-by-row construction of one representative per equivalence class,
//! plus an independent count of all RC-magic squares.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::{canonical_grid, orbit_size};
use crate::error::{RcmsError, Result};
use crate::expand::mult_factor;
use crate::matrix::{ClassRep, PartialRcMatrix, RcMatrix};
use crate::perm::MAX_DIM;

/// Orders above this are refused by [`class_representatives`].
pub const MAX_ENUMERATION_ORDER: usize = 7;

fn check_order(m: usize, d: u8, limit: usize) -> Result<()> {
    if m == 0 {
        return Err(RcmsError::InvalidMatrix("order must be positive".into()));
    }
    if m > limit {
        return Err(RcmsError::Unsupported {
            order: m,
            reason: format!("order must be in 1..={limit}"),
        });
    }
    if d == 0 {
        return Err(RcmsError::InvalidMatrix("margin must be positive".into()));
    }
    Ok(())
}

/// All vectors of length `caps.len()` summing to `total` with entry `j` at
/// most `caps[j]`, in descending lexicographic order.
pub(crate) fn bounded_compositions(total: u8, caps: &[u8]) -> Vec<Vec<u8>> {
    fn go(total: u8, caps: &[u8], j: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if j == caps.len() {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: u32 = caps[j + 1..].iter().map(|&c| c as u32).sum();
        let hi = total.min(caps[j]);
        for v in (0..=hi).rev() {
            if (total - v) as u32 > room {
                break;
            }
            cur.push(v);
            go(total - v, caps, j + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(
        total,
        caps,
        0,
        &mut Vec::with_capacity(caps.len()),
        &mut out,
    );
    out
}

/// One `1 x m` row per partition of `d` into at most `m` parts, parts in
/// non-increasing order, padded with zeros.
pub fn initial_rows(m: usize, d: u8) -> Result<Vec<PartialRcMatrix>> {
    check_order(m, d, MAX_DIM)?;
    Ok(bounded_compositions(d, &vec![d; m])
        .into_iter()
        .filter(|row| row.windows(2).all(|w| w[0] >= w[1]))
        .map(|row| PartialRcMatrix::from_parts_unchecked(1, m, d, row))
        .collect())
}

/// Extends every representative by one row in all admissible ways and keeps
/// one canonical representative per class of `(n+1) x m` matrices.
pub fn augment(reps: &[PartialRcMatrix]) -> Result<Vec<PartialRcMatrix>> {
    let Some(first) = reps.first() else {
        return Ok(Vec::new());
    };
    let (n, m, d) = (first.rows_len(), first.order(), first.margin());
    if n >= m {
        return Err(RcmsError::InvalidMatrix(format!(
            "cannot add a row to a complete {m} x {m} matrix"
        )));
    }
    for rep in reps {
        if (rep.rows_len(), rep.order(), rep.margin()) != (n, m, d) {
            return Err(RcmsError::DimensionMismatch {
                expected: n * m,
                found: rep.rows_len() * rep.order(),
            });
        }
    }

    let children: HashSet<Vec<u8>> = reps
        .par_iter()
        .fold(HashSet::new, |mut acc, parent| {
            let mut grid = Vec::with_capacity((n + 1) * m);
            for row in bounded_compositions(d, &parent.residual_capacities()) {
                grid.clear();
                grid.extend_from_slice(parent.entries());
                grid.extend_from_slice(&row);
                acc.insert(canonical_grid(n + 1, m, &grid));
            }
            acc
        })
        .reduce(HashSet::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        });

    let mut out: Vec<Vec<u8>> = children.into_iter().collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out
        .into_iter()
        .map(|e| PartialRcMatrix::from_parts_unchecked(n + 1, m, d, e))
        .collect())
}

/// Attaches class sizes and multinomial factors to complete representatives.
pub fn finish_classes(reps: Vec<PartialRcMatrix>) -> Result<Vec<ClassRep>> {
    reps.into_par_iter()
        .map(|p| {
            let rep = p.into_complete()?;
            let orbit = orbit_size(rep.order(), rep.order(), rep.entries());
            let factor = mult_factor(&rep)?;
            Ok(ClassRep {
                rep,
                orbit_size: orbit,
                mult_factor: factor,
            })
        })
        .collect()
}

pub fn class_representatives(m: usize, d: u8) -> Result<Vec<ClassRep>> {
    class_representatives_with(m, d, None, |_, _| {})
}

/// Like [`class_representatives`], optionally resuming from and writing to a
/// checkpoint file after every completed stage. `progress` receives
/// `(rows, representatives)` after each stage.
pub fn class_representatives_with(
    m: usize,
    d: u8,
    checkpoint: Option<&Path>,
    mut progress: impl FnMut(usize, usize),
) -> Result<Vec<ClassRep>> {
    check_order(m, d, MAX_ENUMERATION_ORDER)?;
    let mut reps = match checkpoint.filter(|p| p.exists()) {
        Some(path) => {
            let ckpt = Checkpoint::load(path)?;
            if ckpt.order != m || ckpt.margin != d {
                return Err(RcmsError::Checkpoint(format!(
                    "{} holds m={} d={}, requested m={m} d={d}",
                    path.display(),
                    ckpt.order,
                    ckpt.margin
                )));
            }
            ckpt.reps
        }
        None => initial_rows(m, d)?,
    };
    progress(reps[0].rows_len(), reps.len());
    while reps[0].rows_len() < m {
        reps = augment(&reps)?;
        progress(reps[0].rows_len(), reps.len());
        if let Some(path) = checkpoint {
            Checkpoint {
                order: m,
                margin: d,
                reps: reps.clone(),
            }
            .save(path)?;
        }
    }
    finish_classes(reps)
}

/// Number of `m x m` matrices with all margins `d`.
///
/// Rows are placed one at a time; the state is the multiset of remaining
/// column capacities, which determines the number of completions.
pub fn count_total(m: usize, d: u8) -> Result<BigUint> {
    check_order(m, d, MAX_DIM)?;
    let mut memo: HashMap<Vec<u8>, BigUint> = HashMap::new();
    Ok(completions(&vec![d; m], d, &mut memo))
}

fn completions(caps: &[u8], d: u8, memo: &mut HashMap<Vec<u8>, BigUint>) -> BigUint {
    if caps.iter().all(|&c| c == 0) {
        return BigUint::one();
    }
    if let Some(v) = memo.get(caps) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for row in bounded_compositions(d, caps) {
        let mut next: Vec<u8> = caps.iter().zip(&row).map(|(c, r)| c - r).collect();
        next.sort_unstable();
        total += completions(&next, d, memo);
    }
    memo.insert(caps.to_vec(), total.clone());
    total
}

/// A completed enumeration stage on disk.
///
/// The first line is a header
/// `rcms-checkpoint version=<v> m=<m> d=<d> stage=<n> count=<k>`, followed by
/// one representative per line with rows separated by `|` and entries by
/// spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub order: usize,
    pub margin: u8,
    pub reps: Vec<PartialRcMatrix>,
}

const CHECKPOINT_MAGIC: &str = "rcms-checkpoint";

impl Checkpoint {
    pub fn stage(&self) -> usize {
        self.reps.first().map_or(0, PartialRcMatrix::rows_len)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{CHECKPOINT_MAGIC} version={} m={} d={} stage={} count={}\n",
            env!("CARGO_PKG_VERSION"),
            self.order,
            self.margin,
            self.stage(),
            self.reps.len()
        );
        for rep in &self.reps {
            let rows: Vec<String> = rep
                .entries()
                .chunks(self.order)
                .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            out.push_str(&rows.join("|"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| RcmsError::Checkpoint("empty file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some(CHECKPOINT_MAGIC) {
            return Err(RcmsError::Checkpoint("missing header".into()));
        }
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| RcmsError::Checkpoint(format!("bad header field `{f}`")))?;
            kv.insert(k, v);
        }
        let get = |k: &str| -> Result<&str> {
            kv.get(k)
                .copied()
                .ok_or_else(|| RcmsError::Checkpoint(format!("header lacks `{k}`")))
        };
        let version = get("version")?;
        if version != env!("CARGO_PKG_VERSION") {
            return Err(RcmsError::Checkpoint(format!(
                "written by version {version}, this is {}",
                env!("CARGO_PKG_VERSION")
            )));
        }
        let num = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| RcmsError::Checkpoint(format!("header field `{k}` not a number")))
        };
        let (m, d, stage, count) = (num("m")?, num("d")?, num("stage")?, num("count")?);
        let d = u8::try_from(d).map_err(|_| RcmsError::Checkpoint("margin too large".into()))?;

        let mut reps = Vec::with_capacity(count);
        for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut entries = Vec::with_capacity(stage * m);
            for tok in line.split(['|', ' ']).filter(|t| !t.is_empty()) {
                entries.push(tok.parse::<u8>().map_err(|_| RcmsError::Parse {
                    line: k + 2,
                    message: format!("`{tok}` is not an entry"),
                })?);
            }
            let rep = PartialRcMatrix::new(stage, m, d, entries).map_err(|e| RcmsError::Parse {
                line: k + 2,
                message: e.to_string(),
            })?;
            reps.push(rep);
        }
        if reps.len() != count || reps.is_empty() {
            return Err(RcmsError::Checkpoint(format!(
                "header announces {count} representatives, found {}",
                reps.len()
            )));
        }
        Ok(Self {
            order: m,
            margin: d,
            reps,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

/// Convenience: the canonical complete matrices of order `m` as plain
/// [`RcMatrix`] values.
pub fn representative_matrices(m: usize, d: u8) -> Result<Vec<RcMatrix>> {
    Ok(class_representatives(m, d)?
        .into_iter()
        .map(|c| c.rep)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(reps: &[PartialRcMatrix]) -> Vec<Vec<u8>> {
        reps.iter().map(|r| r.entries().to_vec()).collect()
    }

    #[test]
    fn initial_rows_are_partitions() {
        assert_eq!(
            rows(&initial_rows(5, 4).unwrap()),
            vec![
                vec![4, 0, 0, 0, 0],
                vec![3, 1, 0, 0, 0],
                vec![2, 2, 0, 0, 0],
                vec![2, 1, 1, 0, 0],
                vec![1, 1, 1, 1, 0],
            ]
        );
        assert_eq!(
            rows(&initial_rows(2, 4).unwrap()),
            vec![vec![4, 0], vec![3, 1], vec![2, 2]]
        );
        assert_eq!(rows(&initial_rows(1, 4).unwrap()), vec![vec![4]]);
    }

    #[test]
    fn compositions_respect_caps() {
        let all = bounded_compositions(4, &[4, 1, 0]);
        assert_eq!(all, vec![vec![4, 0, 0], vec![3, 1, 0]]);
        assert!(bounded_compositions(4, &[1, 1]).is_empty());
    }

    #[test]
    fn augment_stays_partial() {
        let mut reps = initial_rows(4, 4).unwrap();
        while reps[0].rows_len() < 4 {
            reps = augment(&reps).unwrap();
            for r in &reps {
                assert!(r.column_sums().iter().all(|&s| s <= 4));
                assert_eq!(r.canonical_form(), *r);
            }
        }
        assert_eq!(reps.len(), 43);
    }

    #[test]
    fn order_one() {
        let classes = class_representatives(1, 4).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].rep.entries(), &[4]);
        assert_eq!(classes[0].orbit_size, 1);
    }

    #[test]
    fn dp_counts() {
        let expected = [1u64, 5, 120, 10147, 2224955];
        for (k, &n) in expected.iter().enumerate() {
            assert_eq!(count_total(k + 1, 4).unwrap(), BigUint::from(n));
        }
        // 2x2 with margin d has d+1 members.
        assert_eq!(count_total(2, 7).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn checkpoint_round_trip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m4.ckpt");
        let stage2 = augment(&initial_rows(4, 4).unwrap()).unwrap();
        let ckpt = Checkpoint {
            order: 4,
            margin: 4,
            reps: stage2,
        };
        ckpt.save(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap(), ckpt);

        let mut stages = Vec::new();
        let resumed =
            class_representatives_with(4, 4, Some(&path), |n, k| stages.push((n, k))).unwrap();
        assert_eq!(stages.first().unwrap().0, 2);
        assert_eq!(resumed, class_representatives(4, 4).unwrap());
        assert_eq!(Checkpoint::load(&path).unwrap().stage(), 4);

        assert!(class_representatives_with(5, 4, Some(&path), |_, _| {}).is_err());
    }

    #[test]
    fn checkpoint_rejects_other_versions() {
        let text = "rcms-checkpoint version=0.0.0-old m=2 d=4 stage=1 count=1\n4 0\n";
        let err = Checkpoint::parse(text).unwrap_err();
        assert!(err.to_string().contains("version"), "{err}");
        let text = format!(
            "rcms-checkpoint version={} m=2 d=4 stage=1 count=2\n4 0\n",
            env!("CARGO_PKG_VERSION")
        );
        assert!(Checkpoint::parse(&text).is_err());
    }
}
