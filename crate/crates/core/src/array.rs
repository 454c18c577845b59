//! The covering-array value type and its primitive predicates.
//!
//! Rows and columns are 0-based internally. Everything that takes a column
//! index from a user (selectors, metrics, witnesses, CLI output) is 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bits::BitColumn;
use crate::error::{Error, Result};

/// An `m x n` matrix over `{0, .., q-1}`.
///
/// For `q = 2` a bit-vector view of every column is kept alongside the
/// symbol grid; weight, distance and coverage kernels run on it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoveringArray {
    m: usize,
    n: usize,
    q: u8,
    entries: Vec<u8>,
    columns: Vec<BitColumn>,
}

impl CoveringArray {
    /// Validates and copies an `m x n` grid of symbols.
    pub fn new(m: usize, n: usize, q: u8, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "expected {m} rows, got {}",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(m * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for (c, &s) in row.iter().enumerate() {
                if s < 0 || s >= q as i64 {
                    return Err(Error::SymbolOutOfRange {
                        row: r + 1,
                        col: c + 1,
                        symbol: s,
                        q,
                    });
                }
                entries.push(s as u8);
            }
        }
        Self::from_flat(m, n, q, entries)
    }

    /// Builds from a row-major buffer of `m * n` symbols.
    pub fn from_flat(m: usize, n: usize, q: u8, entries: Vec<u8>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch(format!(
                "array must have at least one row and one column (got {m} x {n})"
            )));
        }
        if q < 2 {
            return Err(Error::DimensionMismatch(format!("alphabet order {q} < 2")));
        }
        if entries.len() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {m} x {n} array",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&s| s >= q) {
            return Err(Error::SymbolOutOfRange {
                row: pos / n + 1,
                col: pos % n + 1,
                symbol: entries[pos] as i64,
                q,
            });
        }
        let columns = if q == 2 {
            (0..n)
                .map(|c| BitColumn::from_bools((0..m).map(|r| entries[r * n + c] == 1)))
                .collect()
        } else {
            Vec::new()
        };
        Ok(CoveringArray {
            m,
            n,
            q,
            entries,
            columns,
        })
    }

    /// Binary array from digit strings, one per row (`"0110"`).
    pub fn from_binary_rows(rows: &[&str]) -> Result<Self> {
        Self::from_digit_rows(2, rows)
    }

    pub fn from_digit_rows(q: u8, rows: &[&str]) -> Result<Self> {
        let grid: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(|d| d as i64).unwrap_or(-1))
                    .collect()
            })
            .collect();
        let n = grid.first().map_or(0, Vec::len);
        Self::new(grid.len(), n, q, &grid)
    }

    /// Binary array from bit columns.
    pub fn from_columns(columns: &[BitColumn]) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, BitColumn::len);
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut entries = vec![0u8; m * n];
        for (c, col) in columns.iter().enumerate() {
            for r in 0..m {
                entries[r * n + c] = col.get(r) as u8;
            }
        }
        Self::from_flat(m, n, 2, entries)
    }

    /// Binary array from `u64` column masks (bit `r` = row `r`), `m <= 64`.
    pub fn from_column_masks(m: usize, masks: &[u64]) -> Result<Self> {
        let cols: Vec<BitColumn> = masks.iter().map(|&w| BitColumn::from_u64(m, w)).collect();
        Self::from_columns(&cols)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    /// Row-major symbols.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.n)
    }

    pub fn column(&self, col: usize) -> Vec<u8> {
        (0..self.m).map(|r| self.get(r, col)).collect()
    }

    /// Bit view of a column (0-based); `None` unless `q = 2`.
    pub fn bit_column(&self, col: usize) -> Option<&BitColumn> {
        self.columns.get(col)
    }

    pub fn bit_columns(&self) -> &[BitColumn] {
        &self.columns
    }

    /// Column masks as single words; requires `q = 2` and `m <= 64`.
    pub fn column_masks(&self) -> Option<Vec<u64>> {
        if self.q != 2 || self.m > 64 {
            return None;
        }
        Some(self.columns.iter().map(BitColumn::as_u64).collect())
    }

    /// Replaces every entry `e` by `1 - e`.
    pub fn complement(&self) -> Result<Self> {
        if self.q != 2 {
            return Err(Error::NotBinary(self.q));
        }
        let entries = self.entries.iter().map(|&e| 1 - e).collect();
        Self::from_flat(self.m, self.n, 2, entries)
    }

    /// Keeps the listed columns (0-based), in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.n) {
            return Err(Error::DimensionMismatch(format!("column {} out of range", bad + 1)));
        }
        let mut entries = Vec::with_capacity(self.m * cols.len());
        for r in 0..self.m {
            entries.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Self::from_flat(self.m, cols.len(), self.q, entries)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::DimensionMismatch("vstack of incompatible arrays".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::from_flat(self.m + other.m, self.n, self.q, entries)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.m != other.m || self.q != other.q {
            return Err(Error::DimensionMismatch("hstack of incompatible arrays".into()));
        }
        let n = self.n + other.n;
        let mut entries = Vec::with_capacity(self.m * n);
        for r in 0..self.m {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Self::from_flat(self.m, n, self.q, entries)
    }

    /// Weight, support and (for `q = 2`) complement of column `i` (1-based).
    pub fn column_metrics(&self, i: usize) -> Result<ColumnMetrics> {
        let c = self.col_index(i)?;
        let support: BTreeSet<usize> = (0..self.m)
            .filter(|&r| self.get(r, c) != 0)
            .map(|r| r + 1)
            .collect();
        Ok(ColumnMetrics {
            weight: support.len(),
            support,
        })
    }

    /// The complement of column `i` (1-based).
    pub fn complement_column(&self, i: usize) -> Result<BitColumn> {
        let c = self.col_index(i)?;
        if self.q != 2 {
            return Err(Error::NotBinary(self.q));
        }
        Ok(self.columns[c].complement())
    }

    pub fn column_weight(&self, col: usize) -> usize {
        match self.columns.get(col) {
            Some(bits) => bits.weight(),
            None => (0..self.m).filter(|&r| self.get(r, col) != 0).count(),
        }
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n).map(|c| self.column_weight(c)).collect()
    }

    /// Hamming distance between two columns (0-based).
    pub fn column_distance(&self, a: usize, b: usize) -> usize {
        if self.q == 2 {
            self.columns[a].distance(&self.columns[b])
        } else {
            (0..self.m).filter(|&r| self.get(r, a) != self.get(r, b)).count()
        }
    }

    /// The row distance structure: one vector per row counting the other
    /// rows at each Hamming distance `0..=n` (slot 0 counts duplicates).
    pub fn row_distance_structure(&self) -> RowDistanceStructure {
        let mut vectors = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let mut v = vec![0usize; self.n + 1];
            for k in 0..self.m {
                if k != i {
                    let d = row_distance(self.row(i), self.row(k));
                    v[d] += 1;
                }
            }
            vectors.push(v);
        }
        vectors.sort();
        RowDistanceStructure { vectors }
    }

    /// `Res(C; c^{i1} = v1, ...)`: rows matching every assignment, with the
    /// assigned columns deleted. Row order follows the parent.
    pub fn residual(&self, sel: &ResidualSelector) -> Result<Matrix> {
        let mut seen = BTreeSet::new();
        for &(col, sym) in &sel.assignments {
            if col == 0 || col > self.n {
                return Err(Error::BadSelector(format!("column {col} out of range 1..={}", self.n)));
            }
            if !seen.insert(col) {
                return Err(Error::BadSelector(format!("column {col} assigned twice")));
            }
            if sym >= self.q {
                return Err(Error::BadSelector(format!("symbol {sym} not below q = {}", self.q)));
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|c| !seen.contains(&(c + 1))).collect();
        let mut entries = Vec::new();
        let mut rows = 0;
        for r in 0..self.m {
            if sel
                .assignments
                .iter()
                .all(|&(col, sym)| self.get(r, col - 1) == sym)
            {
                rows += 1;
                entries.extend(keep.iter().map(|&c| self.get(r, c)));
            }
        }
        Ok(Matrix {
            rows,
            cols: keep.len(),
            q: self.q,
            entries,
        })
    }

    /// Serializes to the `.ca` text format.
    pub fn to_ca_string(&self) -> String {
        let mut s = String::with_capacity(self.m * (self.n + 1) + 16);
        s.push_str(&format!("{} {} {}\n", self.m, self.n, self.q));
        for row in self.rows() {
            for &e in row {
                s.push(char::from(b'0' + e));
            }
            s.push('\n');
        }
        s
    }

    /// Parses the `.ca` text format: a header `m n q`, then `m` rows of `n`
    /// digits. Whitespace between digits and blank lines are ignored.
    pub fn parse_ca(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: hline,
                    msg: format!("bad header token `{t}`"),
                })
            })
            .collect::<Result<_>>()?;
        let [m, n, q] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `m n q`".into(),
            });
        };
        if !(2..=10).contains(&q) {
            return Err(Error::Parse {
                line: hline,
                msg: format!("alphabet order {q} not in 2..=10"),
            });
        }
        let mut grid = Vec::with_capacity(m);
        for (ln, line) in lines {
            let row: Vec<i64> = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    c.to_digit(10).map(|d| d as i64).ok_or(Error::Parse {
                        line: ln,
                        msg: format!("non-digit `{c}`"),
                    })
                })
                .collect::<Result<_>>()?;
            grid.push(row);
        }
        Self::new(m, n, q as u8, &grid)
    }

    fn col_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::DimensionMismatch(format!(
                "column {i} out of range 1..={}",
                self.n
            )));
        }
        Ok(i - 1)
    }
}

impl FromStr for CoveringArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_ca(s)
    }
}

impl fmt::Display for CoveringArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ca_string())
    }
}

impl fmt::Debug for CoveringArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CoveringArray {}x{} over B_{}", self.m, self.n, self.q)?;
        for row in self.rows() {
            let s: String = row.iter().map(|&e| char::from(b'0' + e)).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMetrics {
    pub weight: usize,
    /// 1-based row indices of nonzero entries.
    pub support: BTreeSet<usize>,
}

/// Column/symbol assignments selecting the rows of a residual matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResidualSelector {
    /// `(column, symbol)` pairs; columns are 1-based.
    pub assignments: Vec<(usize, u8)>,
}

impl ResidualSelector {
    pub fn new(assignments: &[(usize, u8)]) -> Self {
        ResidualSelector {
            assignments: assignments.to_vec(),
        }
    }
}

/// A plain symbol grid with no size restrictions. Residuals can be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub q: u8,
    pub entries: Vec<u8>,
}

impl Matrix {
    pub fn to_array(&self) -> Result<CoveringArray> {
        CoveringArray::from_flat(self.rows, self.cols, self.q, self.entries.clone())
    }
}

impl From<&CoveringArray> for Matrix {
    fn from(a: &CoveringArray) -> Self {
        Matrix {
            rows: a.m(),
            cols: a.n(),
            q: a.q(),
            entries: a.entries().to_vec(),
        }
    }
}

/// The multiset `R(C)`, stored sorted. Each vector has `n + 1` slots; slot
/// `j` counts the other rows at distance `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowDistanceStructure {
    pub vectors: Vec<Vec<usize>>,
}

impl fmt::Display for RowDistanceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vectors {
            let parts: Vec<String> = v.iter().map(usize::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// `d(u, v)`: positions where two equal-length vectors differ.
pub fn hamming_distance(u: &[u8], v: &[u8]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(row_distance(u, v))
}

#[inline]
fn row_distance(u: &[u8], v: &[u8]) -> usize {
    u.iter().zip(v).filter(|(a, b)| a != b).count()
}
