//! Near alternating sign matrices: `{-1, 0, 1}` matrices whose nonzero entries
//! alternate in sign along every row and every column.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::binmat::{gale_ryser_construct, BinMatrix};
use crate::error::{Error, Result};
use crate::gmatrix::{split_text, Cell, Line, WeightData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    m: usize,
    n: usize,
    entries: Vec<i8>,
}

/// First and last nonzero entry of every row (`left`, `right`) and column
/// (`up`, `down`); `0` for an empty line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub left: Vec<i8>,
    pub right: Vec<i8>,
    pub up: Vec<i8>,
    pub down: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NasmCheck {
    pub is_nasm: bool,
    pub weights: WeightData,
    /// The first line whose nonzero entries fail to alternate.
    pub first_violation: Option<Line>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JoinFailure {
    NotNasm { which: usize },
    Dimension { left: usize, right: usize },
    /// Boundary entries at this 0-based index do not cancel.
    Frame { index: usize },
}

impl std::fmt::Display for JoinFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JoinFailure::NotNasm { which } => write!(f, "operand {which} is not a NASM"),
            JoinFailure::Dimension { left, right } => {
                write!(f, "shared dimension differs ({left} vs {right})")
            }
            JoinFailure::Frame { index } => write!(f, "frames do not cancel at index {index}"),
        }
    }
}

impl SignMatrix {
    pub fn new(m: usize, n: usize, entries: Vec<i8>) -> Result<Self> {
        if m == 0 || n == 0 || entries.len() != m * n {
            return Err(Error::Dimension(format!("{m}x{n} sign matrix with {} entries", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::Matrix(format!("sign entry {bad} not in {{-1, 0, 1}}")));
        }
        Ok(SignMatrix { m, n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(m, n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SignMatrix { m: n, n, entries }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, (i, j): Cell) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.n).map(<[i8]>::to_vec).collect()
    }

    pub fn scaled(&self, sign: i8) -> Self {
        SignMatrix {
            m: self.m,
            n: self.n,
            entries: self.entries.iter().map(|&e| e * sign).collect(),
        }
    }

    pub fn weights(&self) -> WeightData {
        let rows: Vec<usize> = (0..self.m).map(|i| self.line(Line::Row(i)).len()).collect();
        let cols: Vec<usize> = (0..self.n).map(|j| self.line(Line::Col(j)).len()).collect();
        let total = rows.iter().sum();
        WeightData { rows, cols, total }
    }

    /// The reduced line: its nonzero entries in reading order.
    pub fn line(&self, line: Line) -> Vec<i8> {
        match line {
            Line::Row(i) => (0..self.n).map(|j| self.get((i, j))).filter(|&e| e != 0).collect(),
            Line::Col(j) => (0..self.m).map(|i| self.get((i, j))).filter(|&e| e != 0).collect(),
        }
    }

    /// Nonzero cells of row `i`, left to right.
    pub fn row_cells(&self, i: usize) -> Vec<Cell> {
        (0..self.n).map(|j| (i, j)).filter(|&c| self.get(c) != 0).collect()
    }

    pub fn verify(&self) -> NasmCheck {
        let lines = (0..self.m).map(Line::Row).chain((0..self.n).map(Line::Col));
        let first_violation = lines
            .into_iter()
            .find(|&l| self.line(l).windows(2).any(|w| w[0] == w[1]));
        NasmCheck {
            is_nasm: first_violation.is_none(),
            weights: self.weights(),
            first_violation,
        }
    }

    pub fn is_nasm(&self) -> bool {
        self.verify().is_nasm
    }

    pub fn frame(&self) -> Result<Frame> {
        if let Some(line) = self.verify().first_violation {
            return Err(Error::NotNasm(format!("{line:?} does not alternate")));
        }
        let ends = |line: Line| {
            let l = self.line(line);
            (l.first().copied().unwrap_or(0), l.last().copied().unwrap_or(0))
        };
        let (left, right) = (0..self.m).map(|i| ends(Line::Row(i))).unzip();
        let (up, down) = (0..self.n).map(|j| ends(Line::Col(j))).unzip();
        Ok(Frame { left, right, up, down })
    }

    /// Whether `[a b]` (horizontal) or `[a; b]` (vertical) is again a NASM,
    /// judged from the frames: the touching boundary entries must cancel.
    pub fn join_check(a: &SignMatrix, b: &SignMatrix, axis: Axis) -> std::result::Result<(), JoinFailure> {
        let fa = a.frame().map_err(|_| JoinFailure::NotNasm { which: 0 })?;
        let fb = b.frame().map_err(|_| JoinFailure::NotNasm { which: 1 })?;
        let (x, y) = match axis {
            Axis::Horizontal => (fa.right, fb.left),
            Axis::Vertical => (fa.down, fb.up),
        };
        if x.len() != y.len() {
            return Err(JoinFailure::Dimension { left: x.len(), right: y.len() });
        }
        match x.iter().zip(&y).position(|(&p, &q)| p != 0 && q != 0 && p != -q) {
            Some(index) => Err(JoinFailure::Frame { index }),
            None => Ok(()),
        }
    }

    /// Concatenation, refused unless the frames allow it.
    pub fn join(a: &SignMatrix, b: &SignMatrix, axis: Axis) -> Result<SignMatrix> {
        Self::join_check(a, b, axis).map_err(|f| Error::NotNasm(f.to_string()))?;
        Ok(match axis {
            Axis::Horizontal => Self::block(&[vec![a.clone(), b.clone()]])?,
            Axis::Vertical => Self::block(&[vec![a.clone()], vec![b.clone()]])?,
        })
    }

    /// Assembles a block matrix; blocks in a block row share a height and
    /// blocks in a block column share a width.
    pub fn block(blocks: &[Vec<SignMatrix>]) -> Result<SignMatrix> {
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].m).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.n).collect();
        for row in blocks {
            if row.len() != widths.len() {
                return Err(Error::Dimension("ragged block rows".into()));
            }
            for (b, &w) in row.iter().zip(&widths) {
                if b.n != w || b.m != row[0].m {
                    return Err(Error::Dimension("incompatible block sizes".into()));
                }
            }
        }
        let (m, n) = (heights.iter().sum(), widths.iter().sum());
        let mut entries = Vec::with_capacity(m * n);
        for row in blocks {
            for i in 0..row[0].m {
                for b in row {
                    entries.extend_from_slice(&b.entries[i * b.n..(i + 1) * b.n]);
                }
            }
        }
        SignMatrix::new(m, n, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} sign\n", self.m, self.n);
        for row in self.to_rows() {
            let row: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (m, n, desc, tokens) = split_text(text)?;
        if desc != "sign" {
            return Err(Error::Matrix(format!("expected group descriptor `sign`, found `{desc}`")));
        }
        let entries = tokens
            .iter()
            .map(|t| t.parse::<i8>().map_err(|_| Error::Matrix(format!("bad entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct SignRepr {
    m: usize,
    n: usize,
    rows: Vec<Vec<i8>>,
}

impl Serialize for SignMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignRepr { m: self.m, n: self.n, rows: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SignRepr::deserialize(d)?;
        if r.rows.len() != r.m || r.rows.iter().any(|row| row.len() != r.n) {
            return Err(serde::de::Error::custom("rows do not match the stated dimensions"));
        }
        SignMatrix::from_rows(r.rows).map_err(serde::de::Error::custom)
    }
}

/// The `ℓ×ℓ` NASM with every row and column of weight `d`.
pub fn base_matrix(ell: usize, d: usize) -> Result<SignMatrix> {
    if d == 0 || d > ell {
        return Err(Error::params(format!("need 1 <= d <= l, got d = {d}, l = {ell}")));
    }
    let (l, d) = (ell as i64, d as i64);
    let sign = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    let mut entries = Vec::with_capacity(ell * ell);
    for i in 1..=l {
        for j in 1..=l {
            let wrap = i <= j + d - l - 1;
            let e = if (j <= i && i <= l.min(j + d - 1)) || (wrap && (l - d) % 2 == 0) {
                sign(i + j)
            } else if wrap {
                sign(i + j + 1)
            } else {
                0
            };
            entries.push(e);
        }
    }
    SignMatrix::new(ell, ell, entries)
}

/// A NASM with `m` rows of weight `h` and `n` columns of weight `k`.
pub fn build_uniform_nasm(m: usize, n: usize, h: usize, k: usize) -> Result<SignMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::params("dimensions must be positive"));
    }
    if !(1..=n).contains(&h) || !(1..=m).contains(&k) {
        return Err(Error::params(format!("weights out of range: h = {h}, k = {k} for {m}x{n}")));
    }
    if m * h != n * k {
        return Err(Error::params(format!("mh = {} differs from nk = {}", m * h, n * k)));
    }
    let f = m.gcd(&k);
    let g = n.gcd(&h);
    let ell = m / f;
    let d = h / g;
    if n / g != ell || k / f != d {
        return Err(Error::Invariant("block parameters disagree".into()));
    }
    let a = base_matrix(ell, d)?;
    let neg = a.scaled(-1);
    let blocks: Vec<Vec<SignMatrix>> = (0..f)
        .map(|bi| {
            (0..g)
                .map(|bj| if d % 2 == 1 && (bi + bj) % 2 == 1 { neg.clone() } else { a.clone() })
                .collect()
        })
        .collect();
    SignMatrix::block(&blocks)
}

/// Inflates a 0/1 matrix: `0` becomes a `2×2` zero block and `1` becomes
/// `[[1, -1], [-1, 1]]`.
pub fn inflate(a: &BinMatrix) -> SignMatrix {
    let (m, n) = (2 * a.rows(), 2 * a.cols());
    let mut entries = vec![0i8; m * n];
    for (i, j) in a.cells() {
        for (di, dj, e) in [(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)] {
            entries[(2 * i + di) * n + 2 * j + dj] = e;
        }
    }
    SignMatrix { m, n, entries }
}

/// A NASM with row weights `2(h_1, h_1, ..., h_m, h_m)` and column weights
/// `2(k_1, k_1, ..., k_n, k_n)`, from a 0/1 realization of `(h, k)`.
pub fn build_doubled_nasm(h: &[usize], k: &[usize]) -> Result<SignMatrix> {
    if h.is_empty() || k.is_empty() {
        return Err(Error::params("weight sequences must be nonempty"));
    }
    Ok(inflate(&gale_ryser_construct(h, k)?))
}

/// The weights `build_doubled_nasm(h, k)` produces.
pub fn doubled_weights(h: &[usize], k: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let dbl = |s: &[usize]| s.iter().flat_map(|&x| [2 * x, 2 * x]).collect();
    (dbl(h), dbl(k))
}
