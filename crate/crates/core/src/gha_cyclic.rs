//! Generalized Heffter array verification over any group, and the
//! NASM-driven constructions over cyclic groups.

use serde::{Deserialize, Serialize};

use crate::binmat::gale_ryser_check;
use crate::error::{Error, Result};
use crate::gmatrix::{classify_sums, line_simplicity, Cell, GMatrix, LineSums, Ordering, SumVerdict};
use crate::group::{Elem, Group, SymbolSet};
use crate::nasm::{build_doubled_nasm, build_uniform_nasm, SignMatrix};
use crate::report::Check;

/// A matrix claimed to be a GHA over `symbols`, with an optional ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhaCandidate {
    pub matrix: GMatrix,
    pub symbols: SymbolSet,
    pub h: Vec<usize>,
    pub k: Vec<usize>,
    pub ordering: Option<Ordering>,
}

impl GhaCandidate {
    /// Declares the matrix's own weights.
    pub fn new(matrix: GMatrix, symbols: SymbolSet, ordering: Option<Ordering>) -> Self {
        let w = matrix.weights();
        GhaCandidate { matrix, symbols, h: w.rows, k: w.cols, ordering }
    }

    /// The ordering to judge sums and simplicity by: the stored one, or the
    /// default natural ordering.
    pub fn effective_ordering(&self) -> Ordering {
        self.ordering.clone().unwrap_or_else(|| self.matrix.natural_ordering())
    }

    pub fn verify(&self) -> GhaReport {
        verify_gha(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhaReport {
    pub checks: Vec<Check>,
    pub sums: Option<LineSums>,
    pub simple_rows: Vec<bool>,
    pub simple_cols: Vec<bool>,
}

impl GhaReport {
    /// All definitional checks pass.
    pub fn is_gha(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdict(&self) -> Option<SumVerdict> {
        self.sums.as_ref().map(|s| s.verdict)
    }

    pub fn is_simple(&self) -> bool {
        self.sums.is_some() && self.simple_rows.iter().chain(&self.simple_cols).all(|&b| b)
    }
}

/// Checks the necessary conditions, the weight condition and the multiset
/// condition, then classifies line sums and simplicity under the candidate's
/// ordering (the default natural ordering when none is attached).
pub fn verify_gha(c: &GhaCandidate) -> GhaReport {
    let s = &c.symbols;
    let g = c.matrix.group();
    let mut checks = Vec::new();

    let inv = s.involutions();
    let need = s.required_weight();
    let (sh, sk) = (c.h.iter().sum::<usize>(), c.k.iter().sum::<usize>());
    let nec = if !inv.is_empty() && s.lambda() % 2 == 1 {
        Err(format!("multiplicity {} is odd but S has {} involutions", s.lambda(), inv.len()))
    } else if need != sh || need != sk {
        Err(format!("required weight {need}, row weights sum to {sh}, column weights to {sk}"))
    } else {
        Ok(())
    };
    checks.push(Check::from_result("GHA:nec", nec));
    checks.push(Check::from_result(
        "GHA:nec2",
        gale_ryser_check(&c.h, &c.k).map_err(|v| v.to_string()),
    ));

    let w = c.matrix.weights();
    let (m, n) = (c.matrix.rows(), c.matrix.cols());
    let weights = if w.rows != c.h || w.cols != c.k {
        Err(format!("matrix has weights {:?} / {:?}", w.rows, w.cols))
    } else if c.h.iter().any(|&x| x == 0 || x > n) || c.k.iter().any(|&x| x == 0 || x > m) {
        Err("every row and column needs between 1 and full weight".to_string())
    } else {
        Ok(())
    };
    checks.push(Check::from_result("GHA:weights", weights));

    let same_group = g == s.group();
    let mut got: Vec<Elem> = c.matrix.nonzero_entries().iter().map(|&a| g.abs(a)).collect();
    got.sort_unstable();
    let multiset = if !same_group {
        Err(format!("matrix over {g}, symbols over {}", s.group()))
    } else if got != s.multiset() {
        Err("absolute values of the entries do not match the symbol multiset".to_string())
    } else {
        Ok(())
    };
    checks.push(Check::from_result("GHA:multiset", multiset));

    let omega = c.effective_ordering();
    let (sums, simple_rows, simple_cols) = match (classify_sums(&c.matrix, &omega), line_simplicity(&c.matrix, &omega)) {
        (Ok(sums), Ok((r, cc))) => {
            checks.push(Check::pass("ordering"));
            (Some(sums), r, cc)
        }
        (Err(e), _) | (_, Err(e)) => {
            checks.push(Check::fail("ordering", e.to_string()));
            (None, Vec::new(), Vec::new())
        }
    };
    GhaReport { checks, sums, simple_rows, simple_cols }
}

/// `f`: the increasing enumeration of `S`, validated to lie in `[1, ⌊(v-1)/2⌋]`.
pub(crate) fn value_map(v: usize, s: &[usize]) -> Result<Vec<usize>> {
    let mut f = s.to_vec();
    f.sort_unstable();
    f.dedup();
    if f.len() != s.len() {
        return Err(Error::params("symbol set has repeated elements"));
    }
    for &a in &f {
        if v % 2 == 0 && a == v / 2 {
            return Err(Error::params(format!("{a} = v/2 is an involution")));
        }
        if a == 0 || 2 * a >= v {
            return Err(Error::params(format!("{a} is not in [1, (v-1)/2] for v = {v}")));
        }
    }
    Ok(f)
}

/// `H = π_v(A ∘ f(A*))` for a NASM `A` of weight `|S|`: a nonzero sum NGHA
/// over `Z_v`, simple under the default natural ordering.
pub fn build_nonzero_simple_ngha(v: usize, s: &[usize], nasm: &SignMatrix) -> Result<GhaCandidate> {
    let g = Group::cyclic(v)?;
    let f = value_map(v, s)?;
    let check = nasm.verify();
    if !check.is_nasm {
        return Err(Error::NotNasm(format!("{:?} does not alternate", check.first_violation)));
    }
    if check.weights.total != f.len() {
        return Err(Error::params(format!(
            "NASM weight {} differs from |S| = {}",
            check.weights.total,
            f.len()
        )));
    }
    let (m, n) = (nasm.rows(), nasm.cols());
    let mut entries = vec![0; m * n];
    let mut rank = 0;
    for i in 0..m {
        for j in 0..n {
            let sign = nasm.get((i, j));
            if sign != 0 {
                let a = f[rank];
                rank += 1;
                entries[i * n + j] = if sign > 0 { a } else { v - a };
            }
        }
    }
    let matrix = GMatrix::new(g.clone(), m, n, entries)?;
    let symbols = SymbolSet::new(g, f, 1)?;
    let ordering = matrix.natural_ordering();
    Ok(GhaCandidate::new(matrix, symbols, Some(ordering)))
}

/// A set `S` of positive integers with shift `x` and modulus `v` such that
/// `|S| ≡ 0 (mod 4)`, `S` splits into pairs of consecutive integers, and
/// `v/2 - max S > x > max S - min S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedSymbolSet {
    s: Vec<usize>,
    x: usize,
    v: usize,
}

impl PairedSymbolSet {
    pub fn new(mut s: Vec<usize>, x: usize, v: usize) -> Result<Self> {
        s.sort_unstable();
        if s.is_empty() || s.len() % 4 != 0 {
            return Err(Error::params(format!("|S| = {} is not a positive multiple of 4", s.len())));
        }
        if s[0] == 0 {
            return Err(Error::params("S must contain positive integers"));
        }
        if let Some(p) = s.chunks(2).find(|p| p[1] != p[0] + 1) {
            return Err(Error::params(format!(
                "S is not a union of consecutive pairs ({} is followed by {})",
                p[0], p[1]
            )));
        }
        let (lo, hi) = (s[0], s[s.len() - 1]);
        if x <= hi - lo {
            return Err(Error::params(format!("x = {x} must exceed max S - min S = {}", hi - lo)));
        }
        if 2 * (x + hi) >= v {
            return Err(Error::params(format!("x = {x} must be below v/2 - max S = {v}/2 - {hi}")));
        }
        Ok(PairedSymbolSet { s, x, v })
    }

    pub fn elements(&self) -> &[usize] {
        &self.s
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// `T = S ∪ (S + x)`, all already canonical in `Z_v`.
    pub fn target(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.s.iter().flat_map(|&a| [a, a + self.x]).collect();
        t.sort_unstable();
        t
    }
}

/// The zero sum construction: from a NASM with row weights `4h_i` and even
/// column weights `2k_j`, a `2m×n` GHA over `T = S ∪ (S + x)` whose rows are
/// zero sum and simple left to right, and whose columns are zero sum and
/// simple under the returned (non-natural) column ordering.
pub fn build_zero_simple_gha(p: &PairedSymbolSet, nasm: &SignMatrix) -> Result<GhaCandidate> {
    let check = nasm.verify();
    if !check.is_nasm {
        return Err(Error::NotNasm(format!("{:?} does not alternate", check.first_violation)));
    }
    let w = &check.weights;
    if let Some(i) = w.rows.iter().position(|&r| r == 0 || r % 4 != 0) {
        return Err(Error::params(format!("row {i} has weight {}, not a positive multiple of 4", w.rows[i])));
    }
    if let Some(j) = w.cols.iter().position(|&c| c == 0 || c % 2 != 0) {
        return Err(Error::params(format!("column {j} has weight {}, not a positive even number", w.cols[j])));
    }
    if w.total != p.s.len() {
        return Err(Error::params(format!("NASM weight {} differs from |S| = {}", w.total, p.s.len())));
    }
    let (m, n, v, x) = (nasm.rows(), nasm.cols(), p.v, p.x);
    let g = Group::cyclic(v)?;
    let mut entries = vec![0; 2 * m * n];
    let mut offset = 0;
    for i in 0..m {
        let cells = nasm.row_cells(i);
        let block = &p.s[offset..offset + cells.len()];
        offset += cells.len();
        let two_h = cells.len() / 2;
        for (t, &(_, j)) in cells.iter().enumerate() {
            // 0-based position t within the row
            let base = if t < two_h {
                block[t]
            } else if t + 1 < cells.len() {
                block[t + 1]
            } else {
                block[two_h]
            };
            let sign = nasm.get((i, j));
            let signed = |val: usize, s: i8| if s > 0 { val % v } else { (v - val % v) % v };
            entries[i * n + j] = signed(base, sign);
            entries[(m + i) * n + j] = signed(base + x, -sign);
        }
    }
    let matrix = GMatrix::new(g.clone(), 2 * m, n, entries)?;
    let rows = (0..2 * m).map(|i| matrix.row_cells(i)).collect();
    let cols = (0..n)
        .map(|j| {
            let top: Vec<usize> = (0..m).filter(|&i| nasm.get((i, j)) != 0).collect();
            let mut order: Vec<Cell> = top.iter().map(|&i| (i, j)).collect();
            order.extend(top.iter().skip(1).map(|&i| (m + i, j)));
            order.push((m + top[0], j));
            order
        })
        .collect();
    let symbols = SymbolSet::new(g, p.target(), 1)?;
    Ok(GhaCandidate::new(matrix, symbols, Some(Ordering { rows, cols })))
}

/// Whether every cell of the array is filled, the only case in which the
/// row shift yields a naturally simple array.
pub fn is_tight(c: &GhaCandidate) -> bool {
    c.h.iter().all(|&x| x == c.matrix.cols()) && c.k.iter().all(|&x| x == c.matrix.rows())
}

/// Moves row `m + 1` (1-based, with `2m` rows in total) to the end, then
/// confirms that the default natural ordering is zero sum and simple.
pub fn row_shift_naturally_simple(c: &GhaCandidate) -> Result<GhaCandidate> {
    let rows = c.matrix.rows();
    if rows % 2 != 0 || !is_tight(c) {
        return Err(Error::params("row shift needs a tight array with an even number of rows"));
    }
    let m = rows / 2;
    let perm: Vec<usize> = (0..m).chain(m + 1..rows).chain([m]).collect();
    let matrix = c.matrix.permute_rows(&perm)?;
    let ordering = matrix.natural_ordering();
    let out = GhaCandidate::new(matrix, c.symbols.clone(), Some(ordering));
    let report = out.verify();
    if report.verdict() != Some(SumVerdict::ZeroSum) || !report.is_simple() {
        return Err(Error::Invariant("row-shifted array is not naturally zero sum and simple".into()));
    }
    Ok(out)
}

/// Parameters of the zero sum construction for `S = (Z_v ∖ U)⁺`, where
/// `v = (2d+1)u` and `U` is the subgroup of order `u`.
pub fn relative_paired_set(d: usize, u: usize) -> Result<PairedSymbolSet> {
    if d == 0 || u == 0 {
        return Err(Error::params("d and u must be positive"));
    }
    let v = (2 * d + 1) * u;
    if u != 1 && u % 4 != 0 {
        return Err(Error::params(format!("u = {u} must be 1 or divisible by 4")));
    }
    if v % 16 != u % 16 {
        return Err(Error::params(format!("v = {v} is not congruent to u = {u} mod 16")));
    }
    let (x, s): (usize, Vec<usize>) = if u == 1 {
        (d / 2, (1..=d / 2).collect())
    } else {
        let x = (2 * d + 1) * u / 4;
        (x, (1..=x).filter(|a| a % (2 * d + 1) != 0).collect())
    };
    if s.len() != d * u / 2 {
        return Err(Error::Invariant(format!("|S| = {} but du/2 = {}", s.len(), d * u / 2)));
    }
    PairedSymbolSet::new(s, x, v)
}

/// Zero sum and simple GHA over `(Z_v ∖ U)⁺`.
///
/// `h` and `k` describe a NASM`(m, n; 4h, 2k)`. With `uniform` set they must
/// be constant and the NASM is the uniform one; otherwise they must come in
/// equal consecutive pairs and the NASM is the doubled one.
pub fn build_relative_zero_gha(d: usize, u: usize, h: &[usize], k: &[usize], uniform: bool) -> Result<GhaCandidate> {
    let p = relative_paired_set(d, u)?;
    if h.is_empty() || k.is_empty() {
        return Err(Error::params("weight sequences must be nonempty"));
    }
    if 8 * h.iter().sum::<usize>() != d * u {
        return Err(Error::params(format!("h must be a partition of du/8 = {}/8", d * u)));
    }
    let nasm = if uniform {
        let (h0, k0) = (h[0], k[0]);
        if h.iter().any(|&x| x != h0) || k.iter().any(|&x| x != k0) {
            return Err(Error::params("uniform construction needs constant h and k"));
        }
        build_uniform_nasm(h.len(), k.len(), 4 * h0, 2 * k0)?
    } else {
        let halves = |s: &[usize], name: &str| -> Result<Vec<usize>> {
            if s.len() % 2 != 0 || s.chunks(2).any(|c| c[0] != c[1]) {
                return Err(Error::params(format!("{name} must consist of equal consecutive pairs")));
            }
            Ok(s.iter().step_by(2).copied().collect())
        };
        let hp: Vec<usize> = halves(h, "h")?.iter().map(|&x| 2 * x).collect();
        let kp = halves(k, "k")?;
        build_doubled_nasm(&hp, &kp)?
    };
    build_zero_simple_gha(&p, &nasm)
}
