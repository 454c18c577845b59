//! Explicit arrays: standard maximal strength-2 arrays, the Johnson–Entringer
//! strength-`(n-2)` family, the order-12 Hadamard array, and a handful of
//! fixed small matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::array::CoveringArray;
use crate::bounds::binom_u64;
use crate::error::{Error, Result};

/// `m x C(m-1, floor(m/2)-1)`: an all-ones first row over every column whose
/// remaining `m-1` entries hold exactly `floor(m/2)-1` ones. Columns are in
/// lexicographic order.
pub fn standard_maximal_2ca(m: usize) -> Result<CoveringArray> {
    if m < 4 {
        return Err(Error::SizeTooSmall(m as u64));
    }
    if m > 64 {
        return Err(Error::ParamOutOfRange(format!("size {m} > 64")));
    }
    let k = m / 2 - 1;
    let mut cols: Vec<String> = Vec::new();
    for_each_subset(m - 1, k, &mut |set| {
        let mut s = String::with_capacity(m);
        s.push('1');
        for r in 0..m - 1 {
            s.push(if set & (1 << r) != 0 { '1' } else { '0' });
        }
        cols.push(s);
    });
    cols.sort();
    let n = cols.len();
    let mut entries = vec![0u8; m * n];
    for (c, col) in cols.iter().enumerate() {
        for (r, b) in col.bytes().enumerate() {
            entries[r * n + c] = b - b'0';
        }
    }
    CoveringArray::from_flat(m, n, 2, entries)
}

/// Calls `f` with every `k`-subset of `0..n` as a bit mask.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(start: usize, n: usize, k: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, acc | 1 << i, f);
        }
    }
    if k <= n {
        rec(0, n, k, 0, f);
    }
}

/// `r_n` indexed by `n mod 6`: the unique `r` in `{0,1,2}` with
/// `n ≡ 2r` or `n ≡ 2r - 1 (mod 6)`.
pub const R_TABLE: [u32; 6] = [0, 1, 1, 2, 2, 0];

pub fn r_n(n: u32) -> u32 {
    R_TABLE[(n % 6) as usize]
}

/// Rows: every binary `n`-tuple whose weight is `≡ r_n + 1 (mod 3)`, in
/// lexicographic order. Strength `n-2` with `floor(2^n / 3)` rows.
pub fn johnson_entringer(n: usize) -> Result<CoveringArray> {
    if n < 4 {
        return Err(Error::DegreeTooSmall(n as u64));
    }
    if n > 20 {
        return Err(Error::ParamOutOfRange(format!("degree {n} > 20")));
    }
    let residue = (r_n(n as u32) + 1) % 3;
    let rows: Vec<u64> = lex_vertices(n)
        .filter(|v| v.count_ones() % 3 == residue)
        .collect();
    let mut entries = Vec::with_capacity(rows.len() * n);
    for v in &rows {
        entries.extend(tuple_bits(*v, n));
    }
    CoveringArray::from_flat(rows.len(), n, 2, entries)
}

/// Tuples are stored with coordinate 1 in the most significant of the low `n`
/// bits, so numeric order is lexicographic order.
fn lex_vertices(n: usize) -> impl Iterator<Item = u64> {
    0..(1u64 << n)
}

fn tuple_bits(v: u64, n: usize) -> impl Iterator<Item = u8> {
    (0..n).map(move |i| (v >> (n - 1 - i) & 1) as u8)
}

const H12: [&str; 12] = [
    "++++++++++++",
    "+--+---+++-+",
    "++--+---+++-",
    "+-+--+---+++",
    "++-+--+---++",
    "+++-+--+---+",
    "++++-+--+---",
    "+-+++-+--+--",
    "+--+++-+--+-",
    "+---+++-+--+",
    "++---+++-+--",
    "+-+---+++-+-",
];

/// A normalized Hadamard matrix of order 12 with its first column removed
/// and `-1` written as `0`.
pub fn hadamard_3ca_12x11() -> CoveringArray {
    let rows: Vec<String> = H12
        .iter()
        .map(|r| r[1..].chars().map(|c| if c == '+' { '1' } else { '0' }).collect())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    CoveringArray::from_binary_rows(&refs).expect("stored constant")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedMatrix {
    A,
    B1,
    B2,
    D,
    E,
    Ca5x4,
    Ca10x5,
}

impl FixedMatrix {
    pub const ALL: [FixedMatrix; 7] = [
        FixedMatrix::A,
        FixedMatrix::B1,
        FixedMatrix::B2,
        FixedMatrix::D,
        FixedMatrix::E,
        FixedMatrix::Ca5x4,
        FixedMatrix::Ca10x5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixedMatrix::A => "A",
            FixedMatrix::B1 => "B1",
            FixedMatrix::B2 => "B2",
            FixedMatrix::D => "D",
            FixedMatrix::E => "E",
            FixedMatrix::Ca5x4 => "CA5x4",
            FixedMatrix::Ca10x5 => "CA10x5",
        }
    }

    fn rows(self) -> &'static [&'static str] {
        match self {
            FixedMatrix::A => &[
                "1111111111",
                "1111000000",
                "1000111000",
                "0100100110",
                "0010010101",
                "0001001011",
            ],
            FixedMatrix::B1 => &[
                "1100001101",
                "1010100011",
                "1001010110",
                "0110011010",
                "0101110001",
                "0011101100",
            ],
            FixedMatrix::B2 => &[
                "1100010011",
                "1010001110",
                "1001100101",
                "0110101001",
                "0101011100",
                "0011110010",
            ],
            FixedMatrix::D => &["1100", "1010", "1001", "0110", "0101", "0011"],
            FixedMatrix::E => &["0000", "0000", "0111", "1011", "1101", "1110"],
            FixedMatrix::Ca5x4 => &["0000", "0111", "1011", "1101", "1110"],
            FixedMatrix::Ca10x5 => &[
                "10000", "10111", "11011", "11101", "11110", "01000", "00100", "00010",
                "00001", "01111",
            ],
        }
    }
}

impl FromStr for FixedMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixedMatrix::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

impl fmt::Display for FixedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The named matrix, entry for entry.
pub fn fixed_matrix(which: FixedMatrix) -> CoveringArray {
    CoveringArray::from_binary_rows(which.rows()).expect("stored constant")
}

pub fn fixed_matrix_by_name(name: &str) -> Result<CoveringArray> {
    Ok(fixed_matrix(name.parse()?))
}

/// A 24 x 12 strength-4 array built as `[11|A; 10|B1; 01|B2; 00|Ā]`.
pub fn witness_24x12() -> CoveringArray {
    let a = fixed_matrix(FixedMatrix::A);
    let blocks = [
        ("11", a.clone()),
        ("10", fixed_matrix(FixedMatrix::B1)),
        ("01", fixed_matrix(FixedMatrix::B2)),
        ("00", a.complement().expect("binary")),
    ];
    let mut rows = Vec::with_capacity(24);
    for (prefix, block) in &blocks {
        for r in block.rows() {
            let mut s = prefix.to_string();
            s.extend(r.iter().map(|&b| char::from(b'0' + b)));
            rows.push(s);
        }
    }
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    CoveringArray::from_binary_rows(&refs).expect("well-formed")
}

/// A set of hypercube vertices. Vertex bits follow [`johnson_entringer`]:
/// coordinate 1 is the most significant of the low `n` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeSubset {
    pub n: usize,
    pub members: BTreeSet<u64>,
}

impl HypercubeSubset {
    pub fn new(n: usize, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > 63 {
            return Err(Error::ParamOutOfRange(format!("dimension {n} > 63")));
        }
        let members: BTreeSet<u64> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v >> n != 0) {
            return Err(Error::ParamOutOfRange(format!("vertex {v:#b} outside Q_{n}")));
        }
        Ok(HypercubeSubset { n, members })
    }

    pub fn full(n: usize) -> Self {
        HypercubeSubset {
            n,
            members: (0..1u64 << n).collect(),
        }
    }

    /// The layer `V_n^j`: vertices of weight `≡ j (mod 3)`.
    pub fn residue_layer(n: usize, j: u32) -> Self {
        HypercubeSubset {
            n,
            members: (0..1u64 << n).filter(|v| v.count_ones() % 3 == j % 3).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.members.contains(&v)
    }

    /// `S + c` under coordinatewise addition mod 2.
    pub fn translate(&self, c: u64) -> Self {
        HypercubeSubset {
            n: self.n,
            members: self.members.iter().map(|v| v ^ c).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        HypercubeSubset {
            n: self.n,
            members: self.members.union(&other.members).copied().collect(),
        }
    }
}

/// `S_n = V_n^{r_n} ∪ V_n^{r_n - 1}`.
pub fn s_n_set(n: usize) -> Result<HypercubeSubset> {
    if n == 0 {
        return Err(Error::DegreeTooSmall(0));
    }
    if n > 24 {
        return Err(Error::ParamOutOfRange(format!("dimension {n} > 24")));
    }
    let r = r_n(n as u32);
    Ok(HypercubeSubset::residue_layer(n, r).union(&HypercubeSubset::residue_layer(n, r + 2)))
}

/// Whether the induced subgraph of `Q_n` on `s` contains a 4-cycle: two
/// members at distance 2 whose two common neighbours are also members.
pub fn hypercube_c4_check(s: &HypercubeSubset) -> bool {
    for &a in &s.members {
        for i in 0..s.n {
            let ai = a ^ 1 << i;
            if !s.contains(ai) {
                continue;
            }
            for j in i + 1..s.n {
                let aj = a ^ 1 << j;
                if s.contains(aj) && s.contains(ai ^ 1 << j) {
                    return true;
                }
            }
        }
    }
    false
}

/// `floor(2^n / 3)`, the row count of [`johnson_entringer`].
pub fn johnson_entringer_size(n: u32) -> u64 {
    (1u64 << n) / 3
}

/// `C(m-1, floor(m/2)-1)`, the column count of [`standard_maximal_2ca`].
pub fn standard_maximal_degree(m: usize) -> u64 {
    binom_u64(m as u64 - 1, m as u64 / 2 - 1)
}
