//! RC-magic squares: square matrices of small non-negative integers whose
//! rows and columns all sum to the same margin `d`, together with the action
//! of independent row and column permutations on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon;
use crate::error::{RcmsError, Result};
use crate::perm::{Permutation, MAX_DIM};

/// Margin used throughout for quartic interactions.
pub const QUARTIC_MARGIN: u8 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RcMatrix {
    m: usize,
    d: u8,
    entries: Vec<u8>,
}

impl RcMatrix {
    /// Validates margins and builds an `m x m` matrix from row-major entries.
    pub fn new(m: usize, d: u8, entries: Vec<u8>) -> Result<Self> {
        check_dims(m, d)?;
        if entries.len() != m * m {
            return Err(RcmsError::DimensionMismatch {
                expected: m * m,
                found: entries.len(),
            });
        }
        check_rows(m, d, &entries)?;
        for (j, sum) in column_sums(m, &entries).into_iter().enumerate() {
            if sum != d as u32 {
                return Err(RcmsError::InvalidMatrix(format!(
                    "column {} sums to {sum}, expected {d}",
                    j + 1
                )));
            }
        }
        Ok(Self { m, d, entries })
    }

    /// Builds a matrix from its rows; the margin is taken from the first row.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(RcmsError::InvalidMatrix("no rows".into()));
        }
        let d: u32 = rows[0].as_ref().iter().map(|&x| x as u32).sum();
        let d = u8::try_from(d)
            .map_err(|_| RcmsError::InvalidMatrix(format!("margin {d} too large")))?;
        let mut entries = Vec::with_capacity(m * m);
        for row in rows {
            let row = row.as_ref();
            if row.len() != m {
                return Err(RcmsError::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(m, d, entries)
    }

    /// `d` on the diagonal, zero elsewhere.
    pub fn diagonal(m: usize, d: u8) -> Result<Self> {
        let mut entries = vec![0u8; m * m];
        for i in 0..m {
            entries[i * m + i] = d;
        }
        Self::new(m, d, entries)
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn margin(&self) -> u8 {
        self.d
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.m)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows().map(<[u8]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.rows()
            .map(|r| r.iter().map(|&x| x as u32).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<u32> {
        column_sums(self.m, &self.entries)
    }

    /// `P_rows · A · P_cols`.
    pub fn permuted(&self, rows: &Permutation, cols: &Permutation) -> Result<Self> {
        for p in [rows, cols] {
            if p.size() != self.m {
                return Err(RcmsError::DimensionMismatch {
                    expected: self.m,
                    found: p.size(),
                });
            }
        }
        let m = self.m;
        let mut entries = vec![0u8; m * m];
        for i in 0..m {
            let src = rows.image(i);
            for k in 0..m {
                entries[i * m + cols.image(k)] = self.entries[src * m + k];
            }
        }
        Ok(Self {
            m,
            d: self.d,
            entries,
        })
    }

    /// Lexicographically greatest member (row-major order) of the orbit
    /// under independent row and column permutations.
    pub fn canonical_form(&self) -> Self {
        Self {
            m: self.m,
            d: self.d,
            entries: canon::canonical_grid(self.m, self.m, &self.entries),
        }
    }

    /// Same result as [`RcMatrix::canonical_form`], by visiting all
    /// `(m!)^2` images.
    pub fn canonical_form_scan(&self) -> Self {
        Self {
            m: self.m,
            d: self.d,
            entries: canon::canonical_grid_scan(self.m, self.m, &self.entries),
        }
    }

    pub fn is_canonical(&self) -> bool {
        canon::canonical_grid(self.m, self.m, &self.entries) == self.entries
    }

    /// Number of distinct matrices `P_i · A · P_j`.
    pub fn orbit_size(&self) -> u64 {
        canon::orbit_size(self.m, self.m, &self.entries)
    }

    /// Order of the subgroup of `S_m x S_m` fixing this matrix.
    pub fn stabilizer_order(&self) -> u64 {
        canon::stabilizer_order(self.m, self.m, &self.entries)
    }

    pub fn is_equivalent(&self, other: &RcMatrix) -> Result<bool> {
        if self.m != other.m {
            return Err(RcmsError::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        if self.d != other.d {
            return Err(RcmsError::InvalidMatrix(format!(
                "margins differ: {} vs {}",
                self.d, other.d
            )));
        }
        Ok(self.canonical_form() == other.canonical_form())
    }

    /// Reads the plain-text matrix format: a header line `m d`, then `m`
    /// lines of `m` space-separated integers. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(RcmsError::Parse {
            line: 1,
            message: "missing header `m d`".into(),
        })?;
        let fields = parse_numbers(header_line, header)?;
        let [m, d] = fields[..] else {
            return Err(RcmsError::Parse {
                line: header_line,
                message: format!("header must be `m d`, found {} fields", fields.len()),
            });
        };
        let m = m as usize;
        if m == 0 || m > MAX_DIM {
            return Err(RcmsError::Parse {
                line: header_line,
                message: format!("order {m} outside 1..={MAX_DIM}"),
            });
        }
        let d = u8::try_from(d).map_err(|_| RcmsError::Parse {
            line: header_line,
            message: format!("margin {d} too large"),
        })?;

        let mut entries = Vec::with_capacity(m * m);
        let mut last_line = header_line;
        for _ in 0..m {
            let (line, text) = lines.next().ok_or(RcmsError::Parse {
                line: last_line + 1,
                message: format!("expected {m} rows"),
            })?;
            last_line = line;
            let row = parse_numbers(line, text)?;
            if row.len() != m {
                return Err(RcmsError::Parse {
                    line,
                    message: format!("expected {m} entries, found {}", row.len()),
                });
            }
            let sum: u64 = row.iter().sum();
            if sum != d as u64 {
                return Err(RcmsError::Parse {
                    line,
                    message: format!("row sums to {sum}, expected {d}"),
                });
            }
            entries.extend(row.into_iter().map(|x| x as u8));
        }
        if let Some((line, _)) = lines.next() {
            return Err(RcmsError::Parse {
                line,
                message: "trailing content after matrix".into(),
            });
        }
        Self::new(m, d, entries).map_err(|e| RcmsError::Parse {
            line: last_line,
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        format!("{} {}\n{self}", self.m, self.d)
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| RcmsError::Parse {
                line,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

impl fmt::Display for RcMatrix {
    /// One row per line, entries separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, self.m, &self.entries)
    }
}

impl FromStr for RcMatrix {
    type Err = RcmsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

fn fmt_rows(f: &mut fmt::Formatter<'_>, m: usize, entries: &[u8]) -> fmt::Result {
    for row in entries.chunks(m) {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        writeln!(f, "{}", line.join(" "))?;
    }
    Ok(())
}

/// An `n x m` matrix whose rows sum to `d` and whose columns sum to at most
/// `d`: the intermediate object of row-by-row construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialRcMatrix {
    n: usize,
    m: usize,
    d: u8,
    entries: Vec<u8>,
}

impl PartialRcMatrix {
    pub fn new(n: usize, m: usize, d: u8, entries: Vec<u8>) -> Result<Self> {
        check_dims(m, d)?;
        if n == 0 || n > m {
            return Err(RcmsError::InvalidMatrix(format!(
                "row count {n} outside 1..={m}"
            )));
        }
        if entries.len() != n * m {
            return Err(RcmsError::DimensionMismatch {
                expected: n * m,
                found: entries.len(),
            });
        }
        check_rows(m, d, &entries)?;
        for (j, sum) in column_sums(m, &entries).into_iter().enumerate() {
            if sum > d as u32 {
                return Err(RcmsError::InvalidMatrix(format!(
                    "column {} sums to {sum}, exceeding {d}",
                    j + 1
                )));
            }
        }
        Ok(Self { n, m, d, entries })
    }

    pub(crate) fn from_parts_unchecked(n: usize, m: usize, d: u8, entries: Vec<u8>) -> Self {
        Self { n, m, d, entries }
    }

    pub fn rows_len(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn margin(&self) -> u8 {
        self.d
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn column_sums(&self) -> Vec<u32> {
        column_sums(self.m, &self.entries)
    }

    /// Remaining room in each column before it reaches the margin.
    pub fn residual_capacities(&self) -> Vec<u8> {
        self.column_sums()
            .into_iter()
            .map(|s| self.d - s as u8)
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.n == self.m
    }

    pub fn canonical_form(&self) -> Self {
        Self {
            entries: canon::canonical_grid(self.n, self.m, &self.entries),
            ..self.clone()
        }
    }

    pub fn orbit_size(&self) -> u64 {
        canon::orbit_size(self.n, self.m, &self.entries)
    }

    /// Converts a completed partial matrix into an [`RcMatrix`].
    pub fn into_complete(self) -> Result<RcMatrix> {
        if self.n != self.m {
            return Err(RcmsError::InvalidMatrix(format!(
                "only {} of {} rows present",
                self.n, self.m
            )));
        }
        RcMatrix::new(self.m, self.d, self.entries)
    }
}

impl fmt::Display for PartialRcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, self.m, &self.entries)
    }
}

/// One equivalence class: its canonical member, the class size and the
/// per-matrix multinomial factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRep {
    pub rep: RcMatrix,
    pub orbit_size: u64,
    pub mult_factor: u64,
}

fn check_dims(m: usize, d: u8) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(RcmsError::InvalidMatrix(format!(
            "order {m} outside 1..={MAX_DIM}"
        )));
    }
    if d == 0 {
        return Err(RcmsError::InvalidMatrix("margin must be positive".into()));
    }
    Ok(())
}

fn check_rows(m: usize, d: u8, entries: &[u8]) -> Result<()> {
    for (i, row) in entries.chunks(m).enumerate() {
        let sum: u32 = row.iter().map(|&x| x as u32).sum();
        if sum != d as u32 {
            return Err(RcmsError::InvalidMatrix(format!(
                "row {} sums to {sum}, expected {d}",
                i + 1
            )));
        }
    }
    Ok(())
}

fn column_sums(m: usize, entries: &[u8]) -> Vec<u32> {
    let mut sums = vec![0u32; m];
    for row in entries.chunks(m) {
        for (s, &x) in sums.iter_mut().zip(row) {
            *s += x as u32;
        }
    }
    sums
}

/// Calls `f` on every `m x m` matrix with all margins equal to `d`, by
/// plain nested loops over rows. Intended for small orders only.
pub fn for_each_rc_matrix(m: usize, d: u8, mut f: impl FnMut(&RcMatrix)) -> Result<()> {
    check_dims(m, d)?;
    let mut entries = vec![0u8; m * m];
    let mut caps = vec![d; m];
    let mut scratch = RcMatrix {
        m,
        d,
        entries: Vec::new(),
    };
    fill_row(m, d, 0, 0, d, &mut entries, &mut caps, &mut |e| {
        scratch.entries.clear();
        scratch.entries.extend_from_slice(e);
        f(&scratch);
    });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    m: usize,
    d: u8,
    row: usize,
    col: usize,
    left: u8,
    entries: &mut [u8],
    caps: &mut [u8],
    f: &mut impl FnMut(&[u8]),
) {
    if row == m {
        f(entries);
        return;
    }
    if col == m - 1 {
        if left <= caps[col] {
            entries[row * m + col] = left;
            caps[col] -= left;
            fill_row(m, d, row + 1, 0, d, entries, caps, f);
            caps[col] += left;
        }
        return;
    }
    for v in 0..=left.min(caps[col]) {
        entries[row * m + col] = v;
        caps[col] -= v;
        fill_row(m, d, row, col + 1, left - v, entries, caps, f);
        caps[col] += v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::permutations;

    fn worked_example() -> RcMatrix {
        RcMatrix::from_rows(&[[1, 1, 1, 1], [3, 1, 0, 0], [0, 2, 1, 1], [0, 0, 2, 2]]).unwrap()
    }

    #[test]
    fn rejects_bad_margins() {
        assert!(RcMatrix::from_rows(&[[4, 0], [1, 3]]).is_err());
        assert!(RcMatrix::from_rows(&[vec![4, 0, 0], vec![0, 4]]).is_err());
        assert!(RcMatrix::new(2, 4, vec![4, 0, 0]).is_err());
        assert!(PartialRcMatrix::new(2, 3, 4, vec![4, 0, 0, 4, 0, 0]).is_err());
        assert!(PartialRcMatrix::new(1, 3, 4, vec![2, 1, 1]).is_ok());
    }

    #[test]
    fn identity_action_is_trivial() {
        let a = worked_example();
        let id = Permutation::identity(4);
        assert_eq!(a.permuted(&id, &id).unwrap(), a);
    }

    #[test]
    fn permutation_matches_matrix_product() {
        let a = worked_example();
        let p = Permutation::from_one_based(&[2, 1, 3, 4]).unwrap();
        let q = Permutation::from_one_based(&[1, 2, 4, 3]).unwrap();
        let b = a.permuted(&p, &q).unwrap();
        let (pm, qm) = (p.to_matrix(), q.to_matrix());
        let mul = |x: &[u8], y: &[u8]| -> Vec<u8> {
            let mut out = vec![0u8; 16];
            for i in 0..4 {
                for j in 0..4 {
                    out[i * 4 + j] = (0..4).map(|k| x[i * 4 + k] * y[k * 4 + j]).sum();
                }
            }
            out
        };
        assert_eq!(b.entries(), &mul(&mul(&pm, a.entries()), &qm)[..]);
        assert_eq!(b.row_sums(), vec![4; 4]);
        assert_eq!(b.column_sums(), vec![4; 4]);
    }

    #[test]
    fn swapping_rows_of_diagonal() {
        let a = RcMatrix::diagonal(3, 4).unwrap();
        let swap = Permutation::transposition(3, 1, 2).unwrap();
        let b = a.permuted(&swap, &Permutation::identity(3)).unwrap();
        assert_eq!(
            b.to_rows(),
            vec![vec![4, 0, 0], vec![0, 0, 4], vec![0, 4, 0]]
        );
        assert!(a.is_equivalent(&b).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = worked_example();
        let p3 = Permutation::identity(3);
        assert!(a.permuted(&p3, &Permutation::identity(4)).is_err());
        assert!(a.is_equivalent(&RcMatrix::diagonal(3, 4).unwrap()).is_err());
    }

    #[test]
    fn diagonal_is_canonical() {
        let a = RcMatrix::diagonal(3, 4).unwrap();
        assert_eq!(a.canonical_form(), a);
        assert_eq!(a.orbit_size(), 6);
        assert_eq!(RcMatrix::diagonal(1, 4).unwrap().orbit_size(), 1);
    }

    #[test]
    fn canonical_form_constant_on_orbit() {
        let a = worked_example();
        let c = a.canonical_form();
        for p in permutations(4).iter().step_by(5) {
            for q in permutations(4).iter().step_by(7) {
                assert_eq!(a.permuted(p, q).unwrap().canonical_form(), c);
            }
        }
        assert_eq!(c.canonical_form(), c);
        assert_eq!(c, a.canonical_form_scan());
    }

    #[test]
    fn enumerates_all_small_matrices() {
        for (m, expected) in [(1usize, 1usize), (2, 5), (3, 120), (4, 10147)] {
            let mut count = 0;
            for_each_rc_matrix(m, 4, |a| {
                assert_eq!(a.column_sums(), vec![4; m]);
                count += 1;
            })
            .unwrap();
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn parses_text_format() {
        let a: RcMatrix = "# eq 9\n4 4\n1 1 1 1\n3 1 0 0\n\n0 2 1 1\n0 0 2 2\n"
            .parse()
            .unwrap();
        assert_eq!(a, worked_example());
        assert_eq!(RcMatrix::parse_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = RcMatrix::parse_text("2 4\n4 0\n1 x\n").unwrap_err();
        assert!(matches!(err, RcmsError::Parse { line: 3, .. }), "{err}");
        let err = RcMatrix::parse_text("2 4\n4 0\n1 2\n").unwrap_err();
        assert!(matches!(err, RcmsError::Parse { line: 3, .. }), "{err}");
        let err = RcMatrix::parse_text("2 4\n4 0\n").unwrap_err();
        assert!(matches!(err, RcmsError::Parse { line: 3, .. }), "{err}");
        let err = RcMatrix::parse_text("2 4\n3 1\n0 4\n").unwrap_err();
        assert!(matches!(err, RcmsError::Parse { .. }), "{err}");
        let err = RcMatrix::parse_text("2\n").unwrap_err();
        assert!(matches!(err, RcmsError::Parse { line: 1, .. }), "{err}");
    }
}
