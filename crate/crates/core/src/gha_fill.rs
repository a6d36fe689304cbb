//! Filling a 0/1 pattern with symbols from an arbitrary group so that every
//! row and column has a nonzero sum under the natural ordering.
//!
//! The terminal cells of the pattern (last cell of each row, last cell of
//! each column) span a forest in which every component holds exactly one
//! cell that is last in both its row and its column. Non-terminal cells are
//! filled freely; terminal cells are filled leaves-first so that each one
//! closes exactly one line (two for the component's root) and can dodge the
//! single value that would make that line vanish.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::binmat::BinMatrix;
use crate::error::{Error, Result};
use crate::gha_cyclic::GhaCandidate;
use crate::gmatrix::{Cell, GMatrix};
use crate::group::{Elem, Group, SymbolSet};

/// `R`: last cell of each row. `C`: last cell of each column. `L = R ∩ C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalSets {
    pub r: Vec<Cell>,
    pub c: Vec<Cell>,
    pub l: Vec<Cell>,
}

impl TerminalSets {
    /// `R ∪ C`, sorted.
    pub fn vertices(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self.r.iter().chain(&self.c).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub fn terminal_sets(a: &BinMatrix) -> Result<TerminalSets> {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Vec::with_capacity(m);
    for i in 0..m {
        let j = (0..n)
            .rev()
            .find(|&j| a.get((i, j)))
            .ok_or_else(|| Error::params(format!("row {i} is empty")))?;
        r.push((i, j));
    }
    let mut c = Vec::with_capacity(n);
    for j in 0..n {
        let i = (0..m)
            .rev()
            .find(|&i| a.get((i, j)))
            .ok_or_else(|| Error::params(format!("column {j} is empty")))?;
        c.push((i, j));
    }
    c.sort_unstable();
    let l = r.iter().copied().filter(|x| c.binary_search(x).is_ok()).collect();
    Ok(TerminalSets { r, c, l })
}

/// One connected component of the terminal-cell forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// The unique cell of `L` in this component.
    pub root: Cell,
    pub vertices: Vec<Cell>,
    /// A longest path ending at the root, listed from its far end to the root.
    pub path: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellForest {
    pub vertices: Vec<Cell>,
    pub edges: Vec<(Cell, Cell)>,
    pub components: Vec<Component>,
}

/// The graph on `R ∪ C` joining an `R`-cell and a `C`-cell that share a row
/// or a column. Fails with an invariant error if it is not a forest with one
/// `L`-cell per component.
pub fn build_forest(t: &TerminalSets) -> Result<CellForest> {
    let vertices = t.vertices();
    let idx = |x: &Cell| vertices.binary_search(x).expect("terminal cell is a vertex");
    let nv = vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut edges = Vec::new();
    for r in &t.r {
        for c in &t.c {
            if r != c && (r.0 == c.0 || r.1 == c.1) {
                let (a, b) = (idx(r), idx(c));
                if !adj[a].contains(&b) {
                    adj[a].push(b);
                    adj[b].push(a);
                    edges.push(if r < c { (*r, *c) } else { (*c, *r) });
                }
            }
        }
    }
    edges.sort_unstable();

    let mut comp = vec![usize::MAX; nv];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..nv {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        comp[s] = id;
        members.push(vec![s]);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members[id].push(w);
                    queue.push_back(w);
                }
            }
        }
    }
    if edges.len() + members.len() != nv {
        return Err(Error::Invariant(format!(
            "terminal-cell graph has a cycle ({} vertices, {} edges, {} components)",
            nv,
            edges.len(),
            members.len()
        )));
    }

    let mut roots = vec![None; members.len()];
    for z in &t.l {
        let id = comp[idx(z)];
        if roots[id].replace(idx(z)).is_some() {
            return Err(Error::Invariant(format!("component of {z:?} holds two cells of L")));
        }
    }
    let mut components = Vec::with_capacity(members.len());
    for (id, mut mem) in members.into_iter().enumerate() {
        let z = roots[id].ok_or_else(|| {
            Error::Invariant(format!("component of {:?} holds no cell of L", vertices[mem[0]]))
        })?;
        mem.sort_unstable();
        let path = longest_path_to(z, &adj, nv).into_iter().map(|i| vertices[i]).collect();
        components.push(Component {
            root: vertices[z],
            vertices: mem.into_iter().map(|i| vertices[i]).collect(),
            path,
        });
    }
    components.sort_by_key(|c| c.root);
    Ok(CellForest { vertices, edges, components })
}

/// In a tree, the path from the farthest vertex (smallest index on ties) to `z`.
fn longest_path_to(z: usize, adj: &[Vec<usize>], nv: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; nv];
    let mut prev = vec![usize::MAX; nv];
    dist[z] = 0;
    let mut queue = VecDeque::from([z]);
    let mut far = z;
    while let Some(u) = queue.pop_front() {
        if dist[u] > dist[far] || (dist[u] == dist[far] && u < far) {
            far = u;
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![far];
    while *path.last().unwrap() != z {
        path.push(prev[*path.last().unwrap()]);
    }
    path
}

/// Stage-2 search budget, in assignment attempts.
const BACKTRACK_BUDGET: usize = 200_000;

/// Work state: the shifted pattern and the values placed so far (`0` marks
/// a cell not yet filled).
struct Filler<'a> {
    g: &'a Group,
    pattern: &'a BinMatrix,
    values: Vec<Elem>,
}

impl Filler<'_> {
    fn n(&self) -> usize {
        self.pattern.cols()
    }

    fn get(&self, (i, j): Cell) -> Elem {
        self.values[i * self.n() + j]
    }

    fn set(&mut self, (i, j): Cell, x: Elem) {
        let n = self.n();
        self.values[i * n + j] = x;
    }

    /// The one value at `cell` that would make the line through it sum to
    /// zero, all its other cells being filled already.
    fn forbidden(&self, cell: Cell, along_row: bool) -> Result<Elem> {
        let line: Vec<Cell> = if along_row {
            (0..self.n()).map(|j| (cell.0, j)).collect()
        } else {
            (0..self.pattern.rows()).map(|i| (i, cell.1)).collect()
        };
        let (mut before, mut after, mut seen) = (0, 0, false);
        for x in line {
            if !self.pattern.get(x) {
                continue;
            }
            if x == cell {
                seen = true;
                continue;
            }
            let v = self.get(x);
            if v == 0 {
                return Err(Error::Invariant(format!("{x:?} unfilled while closing a line through {cell:?}")));
            }
            if seen {
                after = self.g.add(after, v);
            } else {
                before = self.g.add(before, v);
            }
        }
        // before + g + after = 0
        Ok(self.g.sub(self.g.neg(before), after))
    }

    /// `+f` unless it is forbidden, then `-f`, else `None`.
    fn signed(&self, f: Elem, forbidden: &[Elem]) -> Option<Elem> {
        [f, self.g.neg(f)].into_iter().find(|x| !forbidden.contains(x))
    }
}

/// Fills the pattern `a` with the multiset of `symbols`, producing an array
/// whose rows and columns all have nonzero sums under the default natural
/// ordering.
pub fn fill_gha(a: &BinMatrix, symbols: &SymbolSet) -> Result<GhaCandidate> {
    let g = symbols.group();
    let (m, n) = (a.rows(), a.cols());
    if a.row_weights().contains(&0) || a.col_weights().contains(&0) {
        return Err(Error::params("every row and column of the pattern needs weight at least 1"));
    }
    let inv = symbols.involutions();
    if !inv.is_empty() && symbols.lambda() % 2 == 1 {
        return Err(Error::params("multiplicity must be even when S has involutions"));
    }
    if symbols.required_weight() != a.weight() {
        return Err(Error::params(format!(
            "pattern weight {} differs from required weight {}",
            a.weight(),
            symbols.required_weight()
        )));
    }

    // Stage 0: rotate so that a heaviest row is last.
    let weights = a.row_weights();
    let max = *weights.iter().max().expect("pattern has rows");
    let heavy = weights.iter().position(|&w| w == max).expect("max is attained");
    let shift = (heavy + 1) % m;
    let pattern = a.rotate_rows(shift);

    let t = terminal_sets(&pattern)?;
    let forest = build_forest(&t)?;
    let terminal = forest.vertices.clone();
    let noninv = symbols.noninvolutions();
    if noninv.len() < terminal.len() {
        return Err(Error::params(format!(
            "need at least |R ∪ C| = {} noninvolutions in S, have {}",
            terminal.len(),
            noninv.len()
        )));
    }
    let reserved: Vec<Elem> = noninv[noninv.len() - terminal.len()..].to_vec();

    let mut filler = Filler { g, pattern: &pattern, values: vec![0; m * n] };

    // Stage 1: non-terminal cells, in lexicographic order, with T ∖ F.
    let mut rest = symbols.multiset();
    for f in &reserved {
        let pos = rest.iter().position(|x| x == f).expect("reserved symbol is in T");
        rest.remove(pos);
    }
    let free: Vec<Cell> = pattern.cells().into_iter().filter(|c| terminal.binary_search(c).is_err()).collect();
    if free.len() != rest.len() {
        return Err(Error::Invariant("free cells and remaining symbols differ in number".into()));
    }
    for (&cell, &x) in free.iter().zip(&rest) {
        filler.set(cell, x);
    }

    // Stage 2: isolated cells of L, each closing its row and its column.
    let isolated: Vec<Cell> = forest
        .components
        .iter()
        .filter(|c| c.vertices.len() == 1)
        .map(|c| c.root)
        .collect();
    let mut pool = reserved;
    fill_isolated(&mut filler, &isolated, &mut pool)?;

    let is_r = |c: &Cell| t.r.contains(c);
    // Each non-root terminal cell closes one line: its row if it is an
    // R-cell, its column if it is a C-cell. Its parent is the cell that
    // closes the other line through it.
    let parent = |x: Cell| -> Cell {
        if is_r(&x) {
            *t.c.iter().find(|c| c.1 == x.1).expect("column has a C-cell")
        } else {
            *t.r.iter().find(|r| r.0 == x.0).expect("row has an R-cell")
        }
    };

    let mut cursor = 0;
    let trees: Vec<&Component> = forest.components.iter().filter(|c| c.vertices.len() > 1).collect();

    // Stage 3: off-path cells, children before parents.
    for comp in &trees {
        let off: Vec<Cell> = comp.vertices.iter().copied().filter(|v| !comp.path.contains(v)).collect();
        for x in post_order(&off, comp.root, &parent)? {
            let f = pool[cursor];
            cursor += 1;
            let forbidden = filler.forbidden(x, is_r(&x))?;
            let val = filler
                .signed(f, &[forbidden])
                .ok_or_else(|| Error::Invariant(format!("no sign of {f} avoids the forbidden value at {x:?}")))?;
            filler.set(x, val);
        }
    }

    // Stage 4: each longest path, far end first, root last.
    for comp in &trees {
        let path = &comp.path;
        let len = path.len();
        let z = comp.root;
        for w in path.windows(2) {
            if parent(w[0]) != w[1] {
                return Err(Error::Invariant(format!("path step {:?} -> {:?} is not toward the root", w[0], w[1])));
            }
        }
        let mut fz: Vec<Elem> = pool[cursor..cursor + len].to_vec();
        cursor += len;
        // The line through z that avoids x_{l-1} is already complete.
        let prev = path[len - 2];
        let first_line_is_col = prev.0 == z.0;
        let g_last = filler.forbidden(z, !first_line_is_col)?;
        if g.abs(g_last) == fz[len - 1] {
            fz.swap(0, len - 1);
        }
        for (i, &x) in path[..len - 1].iter().enumerate() {
            let forbidden = filler.forbidden(x, is_r(&x))?;
            let val = filler
                .signed(fz[i], &[forbidden])
                .ok_or_else(|| Error::Invariant(format!("no sign of {} fits {x:?}", fz[i])))?;
            filler.set(x, val);
        }
        let g_other = filler.forbidden(z, first_line_is_col)?;
        let val = filler
            .signed(fz[len - 1], &[g_last, g_other])
            .ok_or_else(|| Error::Invariant(format!("root {z:?} has no admissible value")))?;
        filler.set(z, val);
    }
    if cursor != pool.len() {
        return Err(Error::Invariant("reserved symbols left over".into()));
    }

    // Undo the row rotation.
    let mut entries = vec![0; m * n];
    for s in 0..m {
        let orig = (s + shift) % m;
        entries[orig * n..(orig + 1) * n].copy_from_slice(&filler.values[s * n..(s + 1) * n]);
    }
    let matrix = GMatrix::new(g.clone(), m, n, entries)?;
    let ordering = matrix.natural_ordering();
    Ok(GhaCandidate::new(matrix, symbols.clone(), Some(ordering)))
}

/// Orders `cells` so that each comes after every cell whose parent chain
/// reaches it; ties broken by cell order.
fn post_order(cells: &[Cell], root: Cell, parent: &impl Fn(Cell) -> Cell) -> Result<Vec<Cell>> {
    let depth = |mut x: Cell| -> Result<usize> {
        let mut d = 0;
        while x != root {
            x = parent(x);
            d += 1;
            if d > cells.len() + 1 {
                return Err(Error::Invariant(format!("parent chain from {x:?} misses the root")));
            }
        }
        Ok(d)
    };
    let mut keyed = cells.iter().map(|&c| Ok((depth(c)?, c))).collect::<Result<Vec<_>>>()?;
    // deeper cells first: every child is one level deeper than its parent
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, c)| c).collect())
}

/// Assigns distinct reserved symbols to the isolated cells, greedily with
/// bounded backtracking, and removes them from `pool`.
fn fill_isolated(filler: &mut Filler<'_>, cells: &[Cell], pool: &mut Vec<Elem>) -> Result<()> {
    if cells.is_empty() {
        return Ok(());
    }
    let forbidden: Vec<[Elem; 2]> = cells
        .iter()
        .map(|&c| Ok([filler.forbidden(c, true)?, filler.forbidden(c, false)?]))
        .collect::<Result<_>>()?;
    let mut used = vec![false; pool.len()];
    let mut choice = vec![0usize; cells.len()];
    let mut budget = BACKTRACK_BUDGET;

    fn search(
        k: usize,
        filler: &Filler<'_>,
        forbidden: &[[Elem; 2]],
        pool: &[Elem],
        used: &mut [bool],
        choice: &mut [usize],
        budget: &mut usize,
    ) -> bool {
        if k == forbidden.len() {
            return true;
        }
        for p in 0..pool.len() {
            if used[p] || filler.signed(pool[p], &forbidden[k]).is_none() {
                continue;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            used[p] = true;
            choice[k] = p;
            if search(k + 1, filler, forbidden, pool, used, choice, budget) {
                return true;
            }
            used[p] = false;
        }
        false
    }

    if !search(0, filler, &forbidden, pool, &mut used, &mut choice, &mut budget) {
        return Err(Error::params(format!(
            "no admissible assignment of reserved symbols to the {} isolated cells{}",
            cells.len(),
            if budget == 0 { " within the search budget" } else { "" }
        )));
    }
    for (k, &cell) in cells.iter().enumerate() {
        let val = filler.signed(pool[choice[k]], &forbidden[k]).expect("search checked this choice");
        filler.set(cell, val);
    }
    let mut keep = used.iter().map(|&u| !u);
    pool.retain(|_| keep.next().unwrap());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmatrix::SumVerdict;

    fn bm(rows: &[&[u8]]) -> BinMatrix {
        BinMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn terminal_sets_small() {
        let t = terminal_sets(&bm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(t.l, vec![(0, 0), (1, 1), (2, 2)]);
        let f = build_forest(&t).unwrap();
        assert_eq!(f.components.len(), 3);
        assert!(f.edges.is_empty());

        let t = terminal_sets(&bm(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(t.r, vec![(0, 1), (1, 1)]);
        assert_eq!(t.c, vec![(1, 0), (1, 1)]);
        assert_eq!(t.l, vec![(1, 1)]);
        let f = build_forest(&t).unwrap();
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].root, (1, 1));
        assert!(terminal_sets(&bm(&[&[1, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn fill_tiny() {
        let g = Group::cyclic(5).unwrap();
        let s = SymbolSet::new(g, vec![1], 1).unwrap();
        let c = fill_gha(&bm(&[&[1]]), &s).unwrap();
        assert!(c.matrix.get((0, 0)) == 1 || c.matrix.get((0, 0)) == 4);

        let g = Group::cyclic(7).unwrap();
        let s = SymbolSet::new(g, vec![1, 2], 1).unwrap();
        let c = fill_gha(&bm(&[&[1, 0], &[0, 1]]), &s).unwrap();
        let r = c.verify();
        assert!(r.is_gha());
        assert_eq!(r.verdict(), Some(SumVerdict::NonzeroSum));
    }

    #[test]
    fn fill_rejects_bad_input() {
        let g = Group::cyclic(7).unwrap();
        let s = SymbolSet::new(g.clone(), vec![1, 2], 1).unwrap();
        assert!(fill_gha(&bm(&[&[1, 1, 1]]), &s).is_err());
        let s = SymbolSet::new(g, vec![1, 2, 3], 1).unwrap();
        // |R ∪ C| = 3 for a single full row of three; fine
        assert!(fill_gha(&bm(&[&[1, 1, 1]]), &s).is_ok());
        let g8 = Group::cyclic(8).unwrap();
        let s = SymbolSet::new(g8, vec![1, 4], 1).unwrap();
        assert!(fill_gha(&bm(&[&[1, 1]]), &s).is_err());
    }

    fn forest_example() -> BinMatrix {
        bm(&[
            &[1, 1, 1, 0, 1, 0, 0, 0],
            &[1, 0, 1, 0, 0, 1, 0, 0],
            &[0, 1, 0, 1, 1, 0, 0, 0],
            &[0, 0, 1, 0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 0, 1, 0, 1],
            &[1, 0, 0, 1, 0, 1, 1, 1],
        ])
    }

    fn one_based(cells: &[(usize, usize)]) -> Vec<Cell> {
        let mut v: Vec<Cell> = cells.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn six_by_eight_terminals() {
        let t = terminal_sets(&forest_example()).unwrap();
        assert_eq!(t.r, one_based(&[(1, 5), (2, 6), (3, 5), (4, 5), (5, 8), (6, 8)]));
        assert_eq!(t.c, one_based(&[(6, 1), (3, 2), (4, 3), (6, 4), (4, 5), (6, 6), (6, 7), (6, 8)]));
        assert_eq!(t.l, one_based(&[(4, 5), (6, 8)]));
        let f = build_forest(&t).unwrap();
        assert_eq!(f.vertices.len(), 12);
        assert_eq!(f.components.len(), 2);
        assert_eq!(f.components[0].root, (3, 4));
        assert_eq!(f.components[1].root, (5, 7));
        for c in &f.components {
            assert_eq!(*c.path.last().unwrap(), c.root);
        }
    }

    #[test]
    fn dihedral_fill() {
        let g = Group::dihedral(25).unwrap();
        let mut s: Vec<Elem> = (1..=12).collect();
        s.extend(25..=30);
        let s = SymbolSet::new(g, s, 2).unwrap();
        let a = bm(&[
            &[1, 1, 1, 1, 1, 0, 0, 0],
            &[1, 1, 1, 1, 1, 1, 0, 0],
            &[1, 1, 1, 1, 1, 0, 0, 0],
            &[1, 0, 1, 1, 1, 0, 0, 0],
            &[1, 0, 0, 1, 0, 1, 1, 1],
            &[1, 0, 0, 1, 0, 1, 1, 1],
        ]);
        let c = fill_gha(&a, &s).unwrap();
        let r = c.verify();
        assert!(r.is_gha(), "{:?}", r.checks);
        assert_eq!(r.verdict(), Some(SumVerdict::NonzeroSum));
        assert_eq!(c.matrix.skeleton(), a.cells());
        let sums = r.sums.unwrap();
        assert_eq!(sums.rows.len() + sums.cols.len(), 14);
        assert!(sums.rows.iter().chain(&sums.cols).all(|&x| x != 0));
    }
}
