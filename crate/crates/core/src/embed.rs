//! Compatible orderings, the rotation system they induce on `Cay[G : S]`,
//! face tracing, and the genus of the resulting orientable embedding.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::decomp::{circuits_from_line, Sign};
use crate::error::{Error, Result};
use crate::gha_cyclic::GhaCandidate;
use crate::gmatrix::{Cell, GMatrix, Line, Ordering};
use crate::group::{Elem, Group};
use crate::report::{failures, Check};

/// Cyclic successor of every nonzero cell along its row and along its column,
/// with cells indexed by skeleton rank.
fn successor_maps(a: &GMatrix, omega: &Ordering) -> Result<(Vec<usize>, Vec<usize>)> {
    omega.validate(a)?;
    let skeleton = a.skeleton();
    let rank = |c: &Cell| skeleton.binary_search(c).expect("ordering lists nonzero cells");
    let mut row = vec![0; skeleton.len()];
    let mut col = vec![0; skeleton.len()];
    for (lines, target) in [(&omega.rows, &mut row), (&omega.cols, &mut col)] {
        for line in lines {
            for (t, c) in line.iter().enumerate() {
                target[rank(c)] = rank(&line[(t + 1) % line.len()]);
            }
        }
    }
    Ok((row, col))
}

fn distinct_entries(a: &GMatrix) -> Result<()> {
    let mut e = a.nonzero_entries();
    e.sort_unstable();
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::params("compatibility needs pairwise distinct entries"));
    }
    Ok(())
}

fn is_single_cycle(perm: &[usize]) -> bool {
    if perm.is_empty() {
        return true;
    }
    let (mut x, mut len) = (perm[0], 1);
    while x != 0 {
        x = perm[x];
        len += 1;
        if len > perm.len() {
            return false;
        }
    }
    len == perm.len()
}

/// Whether `ω_c ∘ ω_r` is one cycle through every nonzero cell.
pub fn check_compatible(a: &GMatrix, omega: &Ordering) -> Result<bool> {
    distinct_entries(a)?;
    let (r, c) = successor_maps(a, omega)?;
    let composite: Vec<usize> = r.iter().map(|&x| c[x]).collect();
    Ok(is_single_cycle(&composite))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrderingSearch {
    Found { ordering: Ordering, tried: usize },
    /// Every per-line cyclic order was tried.
    Exhausted { tried: usize },
    BudgetHit { tried: usize },
    /// The line lengths alone rule out every ordering; see [`parity_obstructed`].
    ParityObstructed,
}

impl OrderingSearch {
    pub fn ordering(&self) -> Option<&Ordering> {
        match self {
            OrderingSearch::Found { ordering, .. } => Some(ordering),
            _ => None,
        }
    }
}

/// Next lexicographic permutation in place; `false` (and sorted) after the last.
fn next_permutation(v: &mut [Cell]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        v.reverse();
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("a larger element exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Whether no ordering of `a` can be compatible. A cycle of length `ℓ` has
/// sign `(-1)^(ℓ-1)`, so `ω_c ∘ ω_r` has the sign of the product over all
/// lines, while one cycle through all `N` cells has sign `(-1)^(N-1)`.
/// Every tight array with an even number of rows and of columns is obstructed.
pub fn parity_obstructed(a: &GMatrix) -> bool {
    let line_parity: usize = a.lines().map(|l| a.line_cells(l).len().saturating_sub(1)).sum();
    line_parity % 2 != a.skeleton().len().saturating_sub(1) % 2
}

/// Searches per-line cyclic orders, the natural one first, for a compatible
/// ordering. Only cyclic orders matter, so each line keeps its first cell
/// fixed and permutes the rest. `budget` caps the orderings tested.
pub fn find_compatible_ordering(a: &GMatrix, budget: usize) -> Result<OrderingSearch> {
    distinct_entries(a)?;
    if parity_obstructed(a) {
        return Ok(OrderingSearch::ParityObstructed);
    }
    search_orderings(a, budget)
}

fn search_orderings(a: &GMatrix, budget: usize) -> Result<OrderingSearch> {
    let mut lines: Vec<Vec<Cell>> = a.lines().map(|l| a.line_cells(l)).collect();
    let m = a.rows();
    let mut tried = 0;
    loop {
        if tried == budget {
            return Ok(OrderingSearch::BudgetHit { tried });
        }
        tried += 1;
        let omega = Ordering { rows: lines[..m].to_vec(), cols: lines[m..].to_vec() };
        if check_compatible(a, &omega)? {
            return Ok(OrderingSearch::Found { ordering: omega, tried });
        }
        let mut carried = true;
        for line in lines.iter_mut() {
            if line.len() > 2 && next_permutation(&mut line[1..]) {
                carried = false;
                break;
            }
        }
        if carried {
            return Ok(OrderingSearch::Exhausted { tried });
        }
    }
}

/// `ρ((g, a + g)) = (g, ρ₀(a) + g)` on the darts of `Cay[G : S]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub matrix: GMatrix,
    pub ordering: Ordering,
    /// `±S` in the order of the cycle `ρ₀`, starting from its smallest element.
    pub rho0: Vec<Elem>,
    /// `E(H)`, sorted.
    pub entries: Vec<Elem>,
}

impl RotationSystem {
    pub fn group(&self) -> &Group {
        self.matrix.group()
    }

    pub fn rho0_of(&self, a: Elem) -> Option<Elem> {
        let i = self.rho0.iter().position(|&x| x == a)?;
        Some(self.rho0[(i + 1) % self.rho0.len()])
    }

    /// Labels `d` of the darts `(g, d + g)` out of `g`, in rotation order.
    pub fn local_rotation(&self, g: Elem) -> Vec<(Elem, Elem)> {
        let grp = self.group();
        self.rho0.iter().map(|&d| (g, grp.add(d, g))).collect()
    }
}

pub fn rotation_system(h: &GhaCandidate, omega: &Ordering) -> Result<RotationSystem> {
    let a = &h.matrix;
    let g = a.group();
    if h.symbols.lambda() != 1 {
        return Err(Error::params("biembedding needs multiplicity 1"));
    }
    if !h.symbols.involutions().is_empty() {
        return Err(Error::params("biembedding needs S without involutions"));
    }
    let report = h.verify();
    if !report.is_gha() {
        return Err(Error::params(format!("not a GHA: failed {:?}", failures(&report.checks))));
    }
    if !check_compatible(a, omega)? {
        return Err(Error::params("ordering is not compatible"));
    }
    let skeleton = a.skeleton();
    let (succ_r, succ_c) = successor_maps(a, omega)?;
    let value = |rank: usize| a.get(skeleton[rank]);
    let mut map: HashMap<Elem, Elem> = HashMap::new();
    for rank in 0..skeleton.len() {
        let x = value(rank);
        // ρ₀(a) = -ω_r(a); ρ₀(-a) = ω_c(a)
        map.insert(x, g.neg(value(succ_r[rank])));
        map.insert(g.neg(x), value(succ_c[rank]));
    }
    let start = *map.keys().min().expect("arrays are nonempty");
    let mut rho0 = vec![start];
    let mut x = map[&start];
    while x != start {
        rho0.push(x);
        x = map[&x];
        if rho0.len() > map.len() {
            break;
        }
    }
    if rho0.len() != map.len() || map.len() != 2 * skeleton.len() {
        return Err(Error::Invariant(format!(
            "ρ₀ is not a single cycle on ±S (cycle of {} out of {})",
            rho0.len(),
            map.len()
        )));
    }
    let mut entries = a.nonzero_entries();
    entries.sort_unstable();
    Ok(RotationSystem { matrix: a.clone(), ordering: omega.clone(), rho0, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceClass {
    Row,
    Col,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Tails of the boundary darts in order; the boundary closes back to the first.
    pub vertices: Vec<Elem>,
    pub class: FaceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEuler {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    pub faces: Vec<Face>,
    pub components: Vec<ComponentEuler>,
    pub checks: Vec<Check>,
}

impl EmbeddingResult {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
}

type EdgeFamily = Vec<Vec<(Elem, Elem)>>;

fn undirected_edges(closed: &[Elem]) -> Vec<(Elem, Elem)> {
    let k = closed.len();
    let mut e: Vec<(Elem, Elem)> = (0..k)
        .map(|i| {
            let (x, y) = (closed[i], closed[(i + 1) % k]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort_unstable();
    e
}

/// Faces of the embedding as orbits of `ρτ`, their colour classes, and
/// Euler data per connected component of `Cay[G : S]`.
pub fn trace_embedding(r: &RotationSystem) -> Result<EmbeddingResult> {
    let g = r.group();
    let order = g.order();
    let deg = r.rho0.len();
    let pos: HashMap<Elem, usize> = r.rho0.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let is_entry = |d: Elem| r.entries.binary_search(&d).is_ok();
    // dart (v, d) ~ (v, d + v), id v * deg + pos[d]
    let dart = |v: Elem, d: Elem| v * deg + pos[&d];
    let next = |v: Elem, d: Elem| -> (Elem, Elem) {
        // τ then ρ
        let (w, e) = (g.add(d, v), g.neg(d));
        (w, r.rho0[(pos[&e] + 1) % deg])
    };

    let mut seen = vec![false; order * deg];
    let mut faces = Vec::new();
    let mut mixed = 0;
    for v in g.elements() {
        for &d in &r.rho0 {
            if seen[dart(v, d)] {
                continue;
            }
            let class = if is_entry(d) { FaceClass::Col } else { FaceClass::Row };
            let mut vertices = Vec::new();
            let (mut x, mut y) = (v, d);
            while !seen[dart(x, y)] {
                seen[dart(x, y)] = true;
                if is_entry(y) != (class == FaceClass::Col) {
                    mixed += 1;
                }
                vertices.push(x);
                (x, y) = next(x, y);
            }
            if (x, y) != (v, d) {
                return Err(Error::Invariant("ρτ is not a permutation of the darts".into()));
            }
            faces.push(Face { vertices, class });
        }
    }

    let mut checks = Vec::new();
    let total_len: usize = faces.iter().map(|f| f.vertices.len()).sum();
    checks.push(Check::expect(
        "darts_partitioned",
        total_len == order * deg,
        format!("face lengths sum to {total_len}, expected {}", order * deg),
    ));
    checks.push(Check::expect("faces_monochrome", mixed == 0, format!("{mixed} darts in faces of the other class")));

    // each edge borders one face of each class
    let mut border: HashMap<(Elem, Elem), [usize; 2]> = HashMap::new();
    for f in &faces {
        let slot = usize::from(f.class == FaceClass::Col);
        for e in undirected_edges(&f.vertices) {
            border.entry(e).or_default()[slot] += 1;
        }
    }
    let bad = border.values().filter(|c| c != &&[1, 1]).count();
    let expected_edges = order * deg / 2;
    checks.push(Check::expect(
        "two_colored",
        bad == 0 && border.len() == expected_edges,
        format!("{bad} edges not bordered once per class; {} of {expected_edges} edges seen", border.len()),
    ));

    // colour classes against the circuit families
    let family = |class: FaceClass| -> EdgeFamily {
        let mut f: EdgeFamily =
            faces.iter().filter(|x| x.class == class).map(|x| undirected_edges(&x.vertices)).collect();
        f.sort();
        f
    };
    let a = &r.matrix;
    let mut rows_expected: EdgeFamily = Vec::new();
    for i in 0..a.rows() {
        for c in circuits_from_line(a, &r.ordering, Line::Row(i), Sign::Plus)? {
            rows_expected.push(undirected_edges(&c.vertices[..c.vertices.len() - 1]));
        }
    }
    rows_expected.sort();
    let reversed = r.ordering.with_reversed_cols();
    let mut cols_expected: EdgeFamily = Vec::new();
    for j in 0..a.cols() {
        for c in circuits_from_line(a, &reversed, Line::Col(j), Sign::Minus)? {
            cols_expected.push(undirected_edges(&c.vertices[..c.vertices.len() - 1]));
        }
    }
    cols_expected.sort();
    checks.push(Check::expect("row_faces_match_circuits", family(FaceClass::Row) == rows_expected, "row-class faces differ from C+(ω_r)"));
    checks.push(Check::expect("col_faces_match_circuits", family(FaceClass::Col) == cols_expected, "column-class faces differ from C-(ω_c⁻)"));

    // connected components of Cay[G : S]
    let mut parent: Vec<usize> = (0..order).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for v in g.elements() {
        for &d in &r.rho0 {
            let (a, b) = (find(&mut parent, v), find(&mut parent, g.add(d, v)));
            parent[a] = b;
        }
    }
    let mut comp_of: HashMap<usize, usize> = HashMap::new();
    let mut data: Vec<(usize, usize, usize)> = Vec::new();
    for v in g.elements() {
        let root = find(&mut parent, v);
        let next_id = comp_of.len();
        let id = *comp_of.entry(root).or_insert(next_id);
        if id == data.len() {
            data.push((0, 0, 0));
        }
        data[id].0 += 1;
        data[id].1 += deg;
    }
    for f in &faces {
        let root = find(&mut parent, f.vertices[0]);
        data[comp_of[&root]].2 += 1;
    }
    let mut components = Vec::new();
    let mut euler_ok = true;
    for (v, darts, f) in data {
        let e = darts / 2;
        let chi = v as i64 - e as i64 + f as i64;
        if chi > 2 || chi % 2 != 0 {
            euler_ok = false;
        }
        components.push(ComponentEuler { vertices: v, edges: e, faces: f, genus: ((2 - chi).max(0) / 2) as usize });
    }
    checks.push(Check::expect("euler_characteristic", euler_ok, "some component has odd or positive-genus-violating characteristic"));

    Ok(EmbeddingResult { faces, components, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SymbolSet;

    fn gha(v: usize, rows: Vec<Vec<Elem>>, s: Vec<Elem>) -> GhaCandidate {
        let g = Group::cyclic(v).unwrap();
        let m = GMatrix::from_rows(g.clone(), rows).unwrap();
        GhaCandidate::new(m, SymbolSet::new(g, s, 1).unwrap(), None)
    }

    #[test]
    fn compatibility() {
        let z7 = Group::cyclic(7).unwrap();
        let a = GMatrix::from_rows(z7.clone(), vec![vec![1, 2]]).unwrap();
        assert!(check_compatible(&a, &a.natural_ordering()).unwrap());
        let b = GMatrix::from_rows(z7.clone(), vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert!(!check_compatible(&b, &b.natural_ordering()).unwrap());
        assert!(matches!(find_compatible_ordering(&b, 100).unwrap(), OrderingSearch::ParityObstructed));
        assert!(matches!(search_orderings(&b, 100).unwrap(), OrderingSearch::Exhausted { tried: 1 }));
        assert!(matches!(find_compatible_ordering(&a, 1).unwrap(), OrderingSearch::Found { tried: 1, .. }));
        assert!(matches!(find_compatible_ordering(&a, 0).unwrap(), OrderingSearch::BudgetHit { .. }));
        let c = GMatrix::from_rows(z7, vec![vec![1, 1]]).unwrap();
        assert!(check_compatible(&c, &c.natural_ordering()).is_err());
    }

    #[test]
    fn parity_obstruction_agrees_with_search() {
        let g = Group::cyclic(31).unwrap();
        let mut obstructed = 0;
        for (m, n) in [(2, 2), (2, 3), (3, 3)] {
            for bits in 1u32..1 << (m * n) {
                let mut next = 0;
                let rows: Vec<Vec<Elem>> = (0..m)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if bits >> (i * n + j) & 1 == 1 {
                                    next += 1;
                                    next
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect();
                let a = GMatrix::from_rows(g.clone(), rows).unwrap();
                if parity_obstructed(&a) {
                    obstructed += 1;
                    assert!(matches!(search_orderings(&a, usize::MAX).unwrap(), OrderingSearch::Exhausted { .. }));
                }
            }
        }
        assert!(obstructed > 0);
    }

    #[test]
    fn next_perm() {
        let mut v = vec![(0, 0), (0, 1), (0, 2)];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn z7_single_row() {
        let h = gha(7, vec![vec![1, 2]], vec![1, 2]);
        let omega = h.matrix.natural_ordering();
        let r = rotation_system(&h, &omega).unwrap();
        assert_eq!(r.rho0, vec![1, 5, 2, 6]);
        assert_eq!(r.local_rotation(0).len(), 4);
        let e = trace_embedding(&r).unwrap();
        assert!(e.is_valid(), "{:?}", e.checks);
        assert_eq!(e.face_count(), 3);
        let mut lens: Vec<(FaceClass, usize)> = e.faces.iter().map(|f| (f.class, f.vertices.len())).collect();
        lens.sort_unstable_by_key(|x| (x.1, x.0 == FaceClass::Row));
        assert_eq!(lens, vec![(FaceClass::Col, 7), (FaceClass::Col, 7), (FaceClass::Row, 14)]);
        assert_eq!(e.components, vec![ComponentEuler { vertices: 7, edges: 14, faces: 3, genus: 3 }]);
    }

    #[test]
    fn disconnected_graph() {
        let h = gha(6, vec![vec![2]], vec![2]);
        let r = rotation_system(&h, &h.matrix.natural_ordering()).unwrap();
        let e = trace_embedding(&r).unwrap();
        assert!(e.is_valid(), "{:?}", e.checks);
        assert_eq!(e.components.len(), 2);
        for c in &e.components {
            assert_eq!((c.vertices, c.edges, c.faces, c.genus), (3, 3, 2, 0));
        }
    }

    #[test]
    fn rejects() {
        let h = gha(7, vec![vec![1, 2], vec![3, 4]], vec![1, 2, 3]);
        assert!(rotation_system(&h, &h.matrix.natural_ordering()).is_err());
        let h = gha(6, vec![vec![3]], vec![3]);
        assert!(rotation_system(&h, &h.matrix.natural_ordering()).is_err());
    }
}
