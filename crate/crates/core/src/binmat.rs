//! 0/1 matrices with prescribed row and column weights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmatrix::{split_text, Cell};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    m: usize,
    n: usize,
    bits: Vec<bool>,
}

/// Why a pair of weight sequences cannot be realized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibilityViolation {
    SumMismatch { row_sum: usize, col_sum: usize },
    RowTooLarge { row: usize, weight: usize, cols: usize },
    ColTooLarge { col: usize, weight: usize, rows: usize },
    /// `Σ min(h_i, u) < Σ_{j≤u} k'_j` at this `u` (1-based).
    Dominance { u: usize, lhs: usize, rhs: usize },
}

impl fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SumMismatch { row_sum, col_sum } => {
                write!(f, "row weights sum to {row_sum} but column weights sum to {col_sum}")
            }
            Self::RowTooLarge { row, weight, cols } => {
                write!(f, "row {row} has weight {weight} > {cols} columns")
            }
            Self::ColTooLarge { col, weight, rows } => {
                write!(f, "column {col} has weight {weight} > {rows} rows")
            }
            Self::Dominance { u, lhs, rhs } => {
                write!(f, "dominance fails at u = {u}: {lhs} < {rhs}")
            }
        }
    }
}

/// Gale–Ryser test for a 0/1 matrix with row weights `h` and column weights `k`.
pub fn gale_ryser_check(h: &[usize], k: &[usize]) -> std::result::Result<(), FeasibilityViolation> {
    let (m, n) = (h.len(), k.len());
    let row_sum: usize = h.iter().sum();
    let col_sum: usize = k.iter().sum();
    if row_sum != col_sum {
        return Err(FeasibilityViolation::SumMismatch { row_sum, col_sum });
    }
    if let Some((row, &weight)) = h.iter().enumerate().find(|(_, &w)| w > n) {
        return Err(FeasibilityViolation::RowTooLarge { row, weight, cols: n });
    }
    if let Some((col, &weight)) = k.iter().enumerate().find(|(_, &w)| w > m) {
        return Err(FeasibilityViolation::ColTooLarge { col, weight, rows: m });
    }
    let mut sorted = k.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut rhs = 0;
    for u in 1..=n {
        rhs += sorted[u - 1];
        let lhs: usize = h.iter().map(|&x| x.min(u)).sum();
        if lhs < rhs {
            return Err(FeasibilityViolation::Dominance { u, lhs, rhs });
        }
    }
    Ok(())
}

pub fn is_realizable(h: &[usize], k: &[usize]) -> bool {
    gale_ryser_check(h, k).is_ok()
}

/// Greedy Ryser fill: each row, in order, takes the columns with the largest
/// remaining demand, ties going to the smaller column index.
pub fn gale_ryser_construct(h: &[usize], k: &[usize]) -> Result<BinMatrix> {
    gale_ryser_check(h, k).map_err(Error::Infeasible)?;
    let (m, n) = (h.len(), k.len());
    let mut demand = k.to_vec();
    let mut out = BinMatrix::zeros(m, n);
    let mut order: Vec<usize> = (0..n).collect();
    for (i, &hi) in h.iter().enumerate() {
        order.sort_by(|&a, &b| demand[b].cmp(&demand[a]).then(a.cmp(&b)));
        for &j in &order[..hi] {
            if demand[j] == 0 {
                return Err(Error::Invariant(format!("greedy fill ran out of demand in row {i}")));
            }
            demand[j] -= 1;
            out.set((i, j), true);
        }
    }
    if out.row_weights() != h || out.col_weights() != k {
        return Err(Error::Invariant("greedy fill produced wrong weights".into()));
    }
    Ok(out)
}

impl BinMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        BinMatrix { m, n, bits: vec![false; m * n] }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("0/1 matrix must be rectangular and nonempty".into()));
        }
        let mut bits = Vec::with_capacity(m * n);
        for r in rows {
            for &x in r {
                match x {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    _ => return Err(Error::Matrix(format!("entry {x} is not 0 or 1"))),
                }
            }
        }
        Ok(BinMatrix { m, n, bits })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, (i, j): Cell) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, (i, j): Cell, value: bool) {
        self.bits[i * self.n + j] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| u8::from(self.get((i, j)))).collect())
            .collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.m).map(|i| (0..self.n).filter(|&j| self.get((i, j))).count()).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        (0..self.n).map(|j| (0..self.m).filter(|&i| self.get((i, j))).count()).collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Cells holding a 1, in lexicographic order.
    pub fn cells(&self) -> Vec<Cell> {
        (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&c| self.get(c))
            .collect()
    }

    /// Cyclically shifts rows up by `k`: new row `i` is old row `(i + k) mod m`.
    pub fn rotate_rows(&self, k: usize) -> Self {
        let mut out = BinMatrix::zeros(self.m, self.n);
        for i in 0..self.m {
            let src = (i + k) % self.m;
            for j in 0..self.n {
                out.set((i, j), self.get((src, j)));
            }
        }
        out
    }

    /// Plain-text form with the group descriptor `Z:2`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} Z:2\n", self.m, self.n);
        for row in self.to_rows() {
            let row: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (m, n, _desc, tokens) = split_text(text)?;
        let vals = tokens
            .iter()
            .map(|t| t.parse::<u8>().map_err(|_| Error::Matrix(format!("bad entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<u8>> = vals.chunks(n.max(1)).map(<[u8]>::to_vec).collect();
        if rows.len() != m {
            return Err(Error::Dimension("row count mismatch".into()));
        }
        Self::from_rows(&rows)
    }
}

impl Serialize for BinMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        BinMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
