//! Group-valued matrices with empty cells, orderings of their lines, and the
//! partial-sum calculus on sequences.
//!
//! Cells are 0-based `(row, column)` pairs. The zero element of the group
//! marks an empty cell.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, Group};

pub type Cell = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMatrix {
    group: Group,
    m: usize,
    n: usize,
    entries: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightData {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub total: usize,
}

/// A row or column of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl GMatrix {
    pub fn new(group: Group, m: usize, n: usize, entries: Vec<Elem>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!("{m}x{n} matrix")));
        }
        if entries.len() != m * n {
            return Err(Error::Dimension(format!(
                "{m}x{n} matrix needs {} entries, got {}",
                m * n,
                entries.len()
            )));
        }
        for &e in &entries {
            group.check(e)?;
        }
        Ok(GMatrix { group, m, n, entries })
    }

    pub fn from_rows(group: Group, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(group, m, n, rows.concat())
    }

    pub fn zeros(group: Group, m: usize, n: usize) -> Result<Self> {
        Self::new(group, m, n, vec![0; m * n])
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, (i, j): Cell) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, (i, j): Cell, value: Elem) {
        debug_assert!(self.group.contains(value));
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_empty_cell(&self, cell: Cell) -> bool {
        self.get(cell) == 0
    }

    /// Nonzero cells of row `i`, left to right.
    pub fn row_cells(&self, i: usize) -> Vec<Cell> {
        (0..self.n).map(|j| (i, j)).filter(|&c| !self.is_empty_cell(c)).collect()
    }

    /// Nonzero cells of column `j`, top to bottom.
    pub fn col_cells(&self, j: usize) -> Vec<Cell> {
        (0..self.m).map(|i| (i, j)).filter(|&c| !self.is_empty_cell(c)).collect()
    }

    pub fn line_cells(&self, line: Line) -> Vec<Cell> {
        match line {
            Line::Row(i) => self.row_cells(i),
            Line::Col(j) => self.col_cells(j),
        }
    }

    /// All lines, rows first.
    pub fn lines(&self) -> impl Iterator<Item = Line> {
        (0..self.m).map(Line::Row).chain((0..self.n).map(Line::Col))
    }

    /// Nonzero cells in lexicographic order.
    pub fn skeleton(&self) -> Vec<Cell> {
        (0..self.m).flat_map(|i| self.row_cells(i)).collect()
    }

    /// The multiset of nonzero entries, in skeleton order.
    pub fn nonzero_entries(&self) -> Vec<Elem> {
        self.entries.iter().copied().filter(|&e| e != 0).collect()
    }

    pub fn weights(&self) -> WeightData {
        let mut rows = vec![0; self.m];
        let mut cols = vec![0; self.n];
        for (idx, &e) in self.entries.iter().enumerate() {
            if e != 0 {
                rows[idx / self.n] += 1;
                cols[idx % self.n] += 1;
            }
        }
        let total = rows.iter().sum();
        WeightData { rows, cols, total }
    }

    /// `A*`: 1-based rank of each nonzero cell in the skeleton, 0 elsewhere.
    pub fn position_matrix(&self) -> Vec<Vec<usize>> {
        let mut rank = 0;
        (0..self.m)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&e| {
                        if e == 0 {
                            0
                        } else {
                            rank += 1;
                            rank
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Applies `f` to every nonzero entry; empty cells stay empty.
    pub fn map_nonzero(&self, mut f: impl FnMut(Cell, Elem) -> Elem) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..self.m {
            for j in 0..self.n {
                let e = self.get((i, j));
                if e != 0 {
                    let x = self.group.check(f((i, j), e))?;
                    if x == 0 {
                        return Err(Error::Matrix(format!("cell ({i}, {j}) mapped to zero")));
                    }
                    out.set((i, j), x);
                }
            }
        }
        Ok(out)
    }

    /// `‖A‖`, entrywise absolute values.
    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = self.group.abs(*e);
        }
        out
    }

    /// Reorders the rows so that row `perm[i]` of `self` becomes row `i`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..self.m).collect::<Vec<_>>() {
            return Err(Error::Dimension("row permutation is not a permutation".into()));
        }
        let entries = perm.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        Self::new(self.group.clone(), self.m, self.n, entries)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &GMatrix) -> Result<Self> {
        if self.group != other.group || self.n != other.n {
            return Err(Error::Dimension("cannot stack matrices of different widths or groups".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(self.group.clone(), self.m + other.m, self.n, entries)
    }

    /// The default natural ordering: every line starts at its first nonzero cell.
    pub fn natural_ordering(&self) -> Ordering {
        Ordering {
            rows: (0..self.m).map(|i| self.row_cells(i)).collect(),
            cols: (0..self.n).map(|j| self.col_cells(j)).collect(),
        }
    }

    /// Natural ordering with the given 0-based start positions per line.
    pub fn natural_ordering_from(&self, row_starts: &[usize], col_starts: &[usize]) -> Result<Ordering> {
        if row_starts.len() != self.m || col_starts.len() != self.n {
            return Err(Error::Ordering("need one start per row and per column".into()));
        }
        let rotate = |cells: Vec<Cell>, start: usize, line: Line| -> Result<Vec<Cell>> {
            if cells.is_empty() {
                return Ok(cells);
            }
            if start >= cells.len() {
                return Err(Error::Ordering(format!(
                    "start {start} out of range for {line:?} of weight {}",
                    cells.len()
                )));
            }
            let mut c = cells;
            c.rotate_left(start);
            Ok(c)
        };
        let rows = (0..self.m)
            .map(|i| rotate(self.row_cells(i), row_starts[i], Line::Row(i)))
            .collect::<Result<_>>()?;
        let cols = (0..self.n)
            .map(|j| rotate(self.col_cells(j), col_starts[j], Line::Col(j)))
            .collect::<Result<_>>()?;
        Ok(Ordering { rows, cols })
    }

    /// A natural ordering in which every line is simple, if one exists.
    ///
    /// Simplicity of a line depends only on that line's own sequence, so the
    /// per-line search over cyclic starts is exhaustive.
    pub fn find_simple_natural_ordering(&self) -> Option<Ordering> {
        let pick = |cells: Vec<Cell>| -> Option<Vec<Cell>> {
            if cells.is_empty() {
                return Some(cells);
            }
            (0..cells.len()).find_map(|s| {
                let mut c = cells.clone();
                c.rotate_left(s);
                let seq: Vec<Elem> = c.iter().map(|&x| self.get(x)).collect();
                is_simple(&self.group, &seq).then_some(c)
            })
        };
        let rows = (0..self.m).map(|i| pick(self.row_cells(i))).collect::<Option<_>>()?;
        let cols = (0..self.n).map(|j| pick(self.col_cells(j))).collect::<Option<_>>()?;
        Some(Ordering { rows, cols })
    }

    /// Plain-text form: header `m n <group>`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.m, self.n, self.group.descriptor());
        for i in 0..self.m {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (m, n, desc, tokens) = split_text(text)?;
        if desc == "sign" {
            return Err(Error::Matrix("sign matrices are not group matrices".into()));
        }
        let group = Group::parse(desc)?;
        let entries = tokens
            .iter()
            .map(|t| t.parse::<Elem>().map_err(|_| Error::Matrix(format!("bad entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, m, n, entries)
    }
}

/// Splits a text-format matrix into its header fields and entry tokens.
pub(crate) fn split_text(text: &str) -> Result<(usize, usize, &str, Vec<&str>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Matrix("empty input".into()))?;
    let mut fields = header.splitn(3, char::is_whitespace);
    let mut dim = || -> Result<usize> {
        fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Matrix(format!("bad header `{header}`")))
    };
    let m = dim()?;
    let n = dim()?;
    let desc = fields.next().map(str::trim).ok_or_else(|| Error::Matrix("missing group descriptor".into()))?;
    let tokens: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
    if tokens.len() != m * n {
        return Err(Error::Matrix(format!("expected {} entries, found {}", m * n, tokens.len())));
    }
    Ok((m, n, desc, tokens))
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    group: Group,
    m: usize,
    n: usize,
    rows: Vec<Vec<Elem>>,
}

impl Serialize for GMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            group: self.group.clone(),
            m: self.m,
            n: self.n,
            rows: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.rows.len() != r.m || r.rows.iter().any(|row| row.len() != r.n) {
            return Err(serde::de::Error::custom("rows do not match the stated dimensions"));
        }
        GMatrix::from_rows(r.group, r.rows).map_err(serde::de::Error::custom)
    }
}

/// Per-line sequences of nonzero cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ordering {
    pub rows: Vec<Vec<Cell>>,
    pub cols: Vec<Vec<Cell>>,
}

impl Ordering {
    /// Checks that every line order is a permutation of that line's nonzero cells.
    pub fn validate(&self, a: &GMatrix) -> Result<()> {
        if self.rows.len() != a.rows() || self.cols.len() != a.cols() {
            return Err(Error::Ordering(format!(
                "ordering has {}x{} lines, matrix is {}x{}",
                self.rows.len(),
                self.cols.len(),
                a.rows(),
                a.cols()
            )));
        }
        for line in a.lines() {
            let mut given = self.line(line).to_vec();
            given.sort_unstable();
            if given != a.line_cells(line) {
                return Err(Error::Ordering(format!("{line:?} does not list exactly its nonzero cells")));
            }
        }
        Ok(())
    }

    pub fn line(&self, line: Line) -> &[Cell] {
        match line {
            Line::Row(i) => &self.rows[i],
            Line::Col(j) => &self.cols[j],
        }
    }

    /// The element sequence `ω_line`.
    pub fn sequence(&self, a: &GMatrix, line: Line) -> Vec<Elem> {
        self.line(line).iter().map(|&c| a.get(c)).collect()
    }

    /// The same ordering with every column order reversed (`ω_c⁻`).
    pub fn with_reversed_cols(&self) -> Self {
        Ordering {
            rows: self.rows.clone(),
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Whether each row and column order is a cyclic shift of the natural one.
    pub fn is_natural(&self, a: &GMatrix) -> bool {
        a.lines().all(|line| {
            let order = self.line(line);
            let natural = a.line_cells(line);
            natural.is_empty()
                || (0..natural.len()).any(|s| {
                    let mut c = natural.clone();
                    c.rotate_left(s);
                    c == order
                })
        })
    }
}

/// Left-to-right partial sums `s_1, ..., s_n`.
pub fn partial_sums(g: &Group, seq: &[Elem]) -> Vec<Elem> {
    let mut acc = 0;
    seq.iter()
        .map(|&a| {
            acc = g.add(acc, a);
            acc
        })
        .collect()
}

/// Runs of a sequence, answered from its partial sums.
#[derive(Clone, Debug)]
pub struct Runs {
    group: Group,
    sums: Vec<Elem>,
}

impl Runs {
    pub fn new(g: &Group, seq: &[Elem]) -> Self {
        Runs { group: g.clone(), sums: partial_sums(g, seq) }
    }

    pub fn partial_sums(&self) -> &[Elem] {
        &self.sums
    }

    /// `s_0`, the total sum.
    pub fn total(&self) -> Elem {
        self.sums.last().copied().unwrap_or(0)
    }

    /// The run `s_{i,j}` with 1-based inclusive bounds, as `-s_{i-1} + s_j`.
    pub fn run(&self, i: usize, j: usize) -> Elem {
        assert!(1 <= i && i <= j && j <= self.sums.len(), "run ({i}, {j}) out of range");
        let before = if i == 1 { 0 } else { self.sums[i - 2] };
        self.group.add(self.group.neg(before), self.sums[j - 1])
    }
}

pub fn sum(g: &Group, seq: &[Elem]) -> Elem {
    g.sum(seq.iter().copied())
}

/// True iff every proper run is nonzero, i.e. the partial sums are pairwise
/// distinct and only the total may vanish.
pub fn is_simple(g: &Group, seq: &[Elem]) -> bool {
    let sums = partial_sums(g, seq);
    if sums.iter().rev().skip(1).any(|&s| s == 0) {
        return false;
    }
    let mut sorted = sums;
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// `(-a_1, a_2, -a_3, ...)` when `first_negative`, its negative otherwise.
pub fn alternated_form(g: &Group, seq: &[Elem], first_negative: bool) -> Result<Vec<Elem>> {
    if !g.is_abelian() {
        return Err(Error::NonAbelian);
    }
    Ok(seq
        .iter()
        .enumerate()
        .map(|(i, &a)| if (i % 2 == 0) == first_negative { g.neg(a) } else { a })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumVerdict {
    ZeroSum,
    NonzeroSum,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSums {
    pub rows: Vec<Elem>,
    pub cols: Vec<Elem>,
    pub verdict: SumVerdict,
}

/// The ordered sum of every line and the overall verdict.
pub fn classify_sums(a: &GMatrix, omega: &Ordering) -> Result<LineSums> {
    omega.validate(a)?;
    let g = a.group();
    let rows: Vec<Elem> = (0..a.rows()).map(|i| sum(g, &omega.sequence(a, Line::Row(i)))).collect();
    let cols: Vec<Elem> = (0..a.cols()).map(|j| sum(g, &omega.sequence(a, Line::Col(j)))).collect();
    let zeros = rows.iter().chain(&cols).filter(|&&s| s == 0).count();
    let verdict = if zeros == rows.len() + cols.len() {
        SumVerdict::ZeroSum
    } else if zeros == 0 {
        SumVerdict::NonzeroSum
    } else {
        SumVerdict::Mixed
    };
    Ok(LineSums { rows, cols, verdict })
}

/// Per-line simplicity flags under `omega`, rows then columns.
pub fn line_simplicity(a: &GMatrix, omega: &Ordering) -> Result<(Vec<bool>, Vec<bool>)> {
    omega.validate(a)?;
    let g = a.group();
    let rows = (0..a.rows()).map(|i| is_simple(g, &omega.sequence(a, Line::Row(i)))).collect();
    let cols = (0..a.cols()).map(|j| is_simple(g, &omega.sequence(a, Line::Col(j)))).collect();
    Ok((rows, cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: usize) -> Group {
        Group::cyclic(v).unwrap()
    }

    #[test]
    fn skeleton_and_positions() {
        let a = GMatrix::from_rows(z(5), vec![vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(a.skeleton(), vec![(0, 0), (1, 1)]);
        let b = GMatrix::from_rows(z(7), vec![vec![5, 0], vec![0, 3]]).unwrap();
        assert_eq!(b.position_matrix(), vec![vec![1, 0], vec![0, 2]]);
        let c = GMatrix::from_rows(z(7), vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(c.position_matrix(), vec![vec![1, 2], vec![3, 4]]);
        let zero = GMatrix::zeros(z(3), 2, 3).unwrap();
        assert!(zero.skeleton().is_empty());
        assert_eq!(zero.weights().rows, vec![0, 0]);
    }

    #[test]
    fn natural_orderings() {
        let a = GMatrix::from_rows(z(7), vec![vec![1, 0, 2, 3]]).unwrap();
        let o = a.natural_ordering_from(&[0], &[0, 0, 0, 0]).unwrap();
        assert_eq!(o.rows[0], vec![(0, 0), (0, 2), (0, 3)]);
        let o = a.natural_ordering_from(&[1], &[0, 0, 0, 0]).unwrap();
        assert_eq!(o.rows[0], vec![(0, 2), (0, 3), (0, 0)]);
        assert!(a.natural_ordering_from(&[3], &[0, 0, 0, 0]).is_err());
        let col = GMatrix::from_rows(z(11), vec![vec![2], vec![0], vec![5]]).unwrap();
        assert_eq!(col.natural_ordering().cols[0], vec![(0, 0), (2, 0)]);
    }

    #[test]
    fn runs_and_simplicity() {
        let g = z(7);
        let r = Runs::new(&g, &[1, 2, 3]);
        assert_eq!(r.partial_sums(), &[1, 3, 6]);
        assert_eq!(r.run(2, 3), 5);
        assert!(is_simple(&g, &[1, 2, 3]));
        assert!(!is_simple(&z(5), &[1, 4, 2]));
        // (1, -2, 4, -3) over Z_17
        assert!(is_simple(&z(17), &[1, 15, 4, 14]));
        assert_eq!(sum(&z(17), &[1, 15, 4, 14]), 0);
    }

    #[test]
    fn nonabelian_sums_depend_on_order() {
        let g = Group::parse("Dih:3").unwrap();
        let ab = sum(&g, &[1, 3]);
        let ba = sum(&g, &[3, 1]);
        assert_ne!(ab, ba);
        let r = Runs::new(&g, &[1, 3, 4]);
        assert_eq!(r.run(2, 3), g.add(3, 4));
    }

    #[test]
    fn alternated_forms() {
        let g = z(7);
        assert_eq!(alternated_form(&g, &[1, 2, 3], true).unwrap(), vec![6, 2, 4]);
        assert_eq!(alternated_form(&g, &[1, 2, 3], false).unwrap(), vec![1, 5, 3]);
        assert!(alternated_form(&g, &[], true).unwrap().is_empty());
        assert!(matches!(
            alternated_form(&Group::dihedral(3).unwrap(), &[1], true),
            Err(Error::NonAbelian)
        ));
    }

    #[test]
    fn sum_classification() {
        let a = GMatrix::from_rows(z(17), vec![vec![1, 15, 4, 14]]).unwrap();
        let s = classify_sums(&a, &a.natural_ordering()).unwrap();
        assert_eq!(s.rows, vec![0]);
        assert_eq!(s.verdict, SumVerdict::Mixed);
        let b = GMatrix::from_rows(z(11), vec![vec![1, 9], vec![8, 4]]).unwrap();
        let s = classify_sums(&b, &b.natural_ordering()).unwrap();
        assert_eq!((s.rows.clone(), s.cols.clone()), (vec![10, 1], vec![9, 2]));
        assert_eq!(s.verdict, SumVerdict::NonzeroSum);
    }

    #[test]
    fn ordering_validation() {
        let a = GMatrix::from_rows(z(5), vec![vec![1, 2]]).unwrap();
        let mut o = a.natural_ordering();
        o.rows[0] = vec![(0, 0)];
        assert!(o.validate(&a).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let a = GMatrix::from_rows(z(11), vec![vec![1, 9], vec![8, 4]]).unwrap();
        let t = a.to_text();
        assert_eq!(t, "2 2 Z:11\n1 9\n8 4\n");
        assert_eq!(GMatrix::from_text(&t).unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<GMatrix>(&json).unwrap(), a);
        assert!(GMatrix::from_text("2 2 Z:11\n1 9\n8").is_err());
    }
}
