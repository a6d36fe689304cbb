//! Walks read off ordered matrix lines, their developments under right
//! translation, and checks that a family of developments decomposes a Cayley
//! (di)graph or is orthogonal to another family.
//!
//! Arcs are stored as `(x, y)` with connection element `y - x`, so an arc of
//! `Cay[G : D]` is `(x, d + x)`. Right translation preserves `y - x`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::binmat::gale_ryser_construct;
use crate::error::{Error, Result};
use crate::gha_cyclic::value_map;
use crate::gmatrix::{alternated_form, GMatrix, Line, Ordering};
use crate::group::{Elem, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::params(format!("sign must be + or -, got `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Rows,
    Cols,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    Cycle,
    Path,
    Walk,
}

pub type Edge = (Elem, Elem);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    #[serde(skip)]
    group: Option<Group>,
    pub vertices: Vec<Elem>,
    pub directed: bool,
    pub line: Option<Line>,
    pub sign: Sign,
}

fn normalize(directed: bool, (x, y): Edge) -> Edge {
    if directed || x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

impl Walk {
    /// `W_+ = (0, -s_1, ..., -s_k)` or `W_- = (0, s⁻_1, ..., s⁻_k)` for `seq`.
    pub fn from_sequence(g: &Group, seq: &[Elem], sign: Sign) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::params("walk of an empty line"));
        }
        if seq.iter().any(|&a| a == 0) {
            return Err(Error::params("walk sequences have nonzero entries"));
        }
        let mut vertices = vec![g.zero()];
        match sign {
            Sign::Plus => {
                let mut s = g.zero();
                for &a in seq {
                    s = g.add(s, a);
                    vertices.push(g.neg(s));
                }
            }
            Sign::Minus => {
                // s⁻_i = a_{k-i+1} + ... + a_k
                let mut s = g.zero();
                for &a in seq.iter().rev() {
                    s = g.add(a, s);
                    vertices.push(s);
                }
            }
        }
        Ok(Walk { group: Some(g.clone()), vertices, directed: true, line: None, sign })
    }

    pub fn group(&self) -> &Group {
        self.group.as_ref().expect("walk carries its group")
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> Elem {
        self.vertices[0]
    }

    pub fn end(&self) -> Elem {
        *self.vertices.last().expect("walks are nonempty")
    }

    /// `Γ*`: the same walk with its arcs forgotten to edges.
    pub fn undirected(&self) -> Self {
        Walk { directed: false, ..self.clone() }
    }

    /// `Γ + g`: every vertex `u` replaced by `u + g`.
    pub fn translate(&self, t: Elem) -> Self {
        let g = self.group();
        Walk { vertices: self.vertices.iter().map(|&u| g.add(u, t)).collect(), ..self.clone() }
    }

    /// Arcs in walk order, or edges with endpoints in index order.
    pub fn edges(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| normalize(self.directed, (w[0], w[1]))).collect()
    }

    pub fn kind(&self) -> WalkKind {
        let k = self.len();
        let mut inner = self.vertices[..k].to_vec();
        inner.sort_unstable();
        let distinct = inner.windows(2).all(|w| w[0] != w[1]);
        if !distinct {
            WalkKind::Walk
        } else if self.end() == self.start() {
            WalkKind::Cycle
        } else if inner.binary_search(&self.end()).is_ok() {
            WalkKind::Walk
        } else {
            WalkKind::Path
        }
    }
}

pub fn walk_from_ordering(a: &GMatrix, line: Line, omega: &Ordering, sign: Sign) -> Result<Walk> {
    let seq = omega.sequence(a, line);
    if seq.is_empty() {
        return Err(Error::params(format!("{line:?} is empty")));
    }
    let mut w = Walk::from_sequence(a.group(), &seq, sign)?;
    w.line = Some(line);
    Ok(w)
}

pub fn classify_walk(w: &Walk) -> WalkKind {
    w.kind()
}

/// The multiset of right translates of a walk, kept as the base walk alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Development {
    pub base: Walk,
}

impl Development {
    pub fn new(base: Walk) -> Self {
        Development { base }
    }

    pub fn group(&self) -> &Group {
        self.base.group()
    }

    /// Translates `base + g` for every `g`, in element order.
    pub fn materialize(&self) -> Vec<Walk> {
        self.group().elements().map(|g| self.base.translate(g)).collect()
    }
}

pub fn develop(w: &Walk) -> Development {
    Development::new(w.clone())
}

/// `W_x` of every line on one side, developed; `undirected` forgets arcs.
pub fn decomposition_from_matrix(
    a: &GMatrix,
    omega: &Ordering,
    sign: Sign,
    side: Side,
    undirected: bool,
) -> Result<Vec<Development>> {
    omega.validate(a)?;
    let lines: Vec<Line> = match side {
        Side::Rows => (0..a.rows()).map(Line::Row).collect(),
        Side::Cols => (0..a.cols()).map(Line::Col).collect(),
    };
    lines
        .into_iter()
        .map(|line| {
            let w = walk_from_ordering(a, line, omega, sign)?;
            Ok(develop(&if undirected { w.undirected() } else { w }))
        })
        .collect()
}

/// A Cayley graph or digraph with a connection multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleySpec {
    #[serde(serialize_with = "ser_group", deserialize_with = "de_group")]
    pub group: Group,
    pub connection: Vec<Elem>,
    pub directed: bool,
}

fn ser_group<S: serde::Serializer>(g: &Group, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.descriptor())
}

fn de_group<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Group, D::Error> {
    let desc = String::deserialize(d)?;
    Group::parse(&desc).map_err(serde::de::Error::custom)
}

impl CayleySpec {
    pub fn new(group: Group, connection: Vec<Elem>, directed: bool) -> Result<Self> {
        for &d in &connection {
            group.check(d)?;
            if d == 0 {
                return Err(Error::params("connection multiset contains 0"));
            }
        }
        Ok(CayleySpec { group, connection, directed })
    }

    /// `λ Cay[G : S]`.
    pub fn lambda_fold(group: Group, s: &[Elem], lambda: usize, directed: bool) -> Result<Self> {
        let connection = s.iter().flat_map(|&d| std::iter::repeat(d).take(lambda)).collect();
        Self::new(group, connection, directed)
    }

    /// Arc multiset `{(x, d + x)}`; undirected, each distinct `d` of multiplicity
    /// `μ` contributes `μ` copies of the simple graph `Cay[G : {d}]`.
    pub fn edge_multiset(&self) -> HashMap<Edge, usize> {
        let g = &self.group;
        let mut out = HashMap::new();
        let mut mult: HashMap<Elem, usize> = HashMap::new();
        for &d in &self.connection {
            *mult.entry(d).or_default() += 1;
        }
        for (&d, &mu) in &mult {
            if self.directed {
                for x in g.elements() {
                    *out.entry((x, g.add(d, x))).or_default() += mu;
                }
            } else {
                let mut simple: Vec<Edge> = g.elements().map(|x| normalize(false, (x, g.add(d, x)))).collect();
                simple.sort_unstable();
                simple.dedup();
                for e in simple {
                    *out.entry(e).or_default() += mu;
                }
            }
        }
        out
    }
}

/// Edge multiset of every translate in `d`, read with the given directedness.
pub fn development_edges(d: &[Development], directed: bool) -> HashMap<Edge, usize> {
    let mut out = HashMap::new();
    for dev in d {
        let g = dev.group();
        let base = dev.base.edges();
        for t in g.elements() {
            for &(x, y) in &base {
                *out.entry(normalize(directed, (g.add(x, t), g.add(y, t)))).or_default() += 1;
            }
        }
    }
    out
}

/// Whether the translates in `d` partition exactly the edges of `spec`.
pub fn check_decomposes(d: &[Development], spec: &CayleySpec) -> bool {
    if spec.directed && d.iter().any(|x| !x.base.directed) {
        return false;
    }
    if d.iter().any(|x| x.group() != &spec.group) {
        return false;
    }
    development_edges(d, spec.directed) == spec.edge_multiset()
}

/// Whether every translate from `d1` shares at most one edge with every
/// translate from `d2`.
pub fn check_orthogonal(d1: &[Development], d2: &[Development]) -> bool {
    let directed = d1.iter().chain(d2).all(|x| x.base.directed);
    // edge -> (walk id, multiplicity in that walk)
    let mut index: HashMap<Edge, Vec<(usize, usize)>> = HashMap::new();
    let mut id = 0;
    for dev in d2 {
        for w in dev.materialize() {
            for (e, c) in edge_counts(&w, directed) {
                index.entry(e).or_default().push((id, c));
            }
            id += 1;
        }
    }
    let mut shared: HashMap<usize, usize> = HashMap::new();
    for dev in d1 {
        for w in dev.materialize() {
            shared.clear();
            for (e, c) in edge_counts(&w, directed) {
                for &(other, c2) in index.get(&e).map(Vec::as_slice).unwrap_or(&[]) {
                    let s = shared.entry(other).or_default();
                    *s += c.min(c2);
                    if *s > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn edge_counts(w: &Walk, directed: bool) -> HashMap<Edge, usize> {
    let mut out = HashMap::new();
    for e in w.edges() {
        *out.entry(normalize(directed, e)).or_default() += 1;
    }
    out
}

/// A closed walk joining the translates `W, W + g, ..., W + (p-1)g` of a base
/// walk from `0` to `g`, shifted by a coset representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    /// Closed: the last vertex repeats the first.
    pub vertices: Vec<Elem>,
    pub joining: Elem,
    pub period: usize,
    pub shift: Elem,
}

impl Circuit {
    pub fn edges(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| normalize(false, (w[0], w[1]))).collect()
    }
}

/// Smallest element of each right coset `<g> + t`.
pub fn coset_transversal(group: &Group, g: Elem) -> Vec<Elem> {
    let cyc: Vec<Elem> = {
        let mut v = vec![group.zero()];
        let mut x = g;
        while x != group.zero() {
            v.push(x);
            x = group.add(x, g);
        }
        v
    };
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for t in group.elements() {
        if !seen[t] {
            out.push(t);
            for &c in &cyc {
                seen[group.add(c, t)] = true;
            }
        }
    }
    out
}

/// One circuit per element of the transversal of `<g>`, `g` being the
/// terminal vertex of `W_x` on this line.
pub fn circuits_from_line(a: &GMatrix, omega: &Ordering, line: Line, sign: Sign) -> Result<Vec<Circuit>> {
    let w = walk_from_ordering(a, line, omega, sign)?;
    Ok(circuits_from_walk(&w))
}

pub fn circuits_from_walk(w: &Walk) -> Vec<Circuit> {
    let group = w.group();
    let g = w.end();
    let period = group.element_order(g);
    let mut closed = vec![w.start()];
    let mut shift = group.zero();
    for _ in 0..period {
        closed.extend(w.vertices[1..].iter().map(|&u| group.add(u, shift)));
        shift = group.add(shift, g);
    }
    coset_transversal(group, g)
        .into_iter()
        .map(|t| Circuit {
            vertices: closed.iter().map(|&u| group.add(u, t)).collect(),
            joining: g,
            period,
            shift: t,
        })
        .collect()
}

/// Orthogonal path decompositions of `Cay[Z_v : S]` from prescribed row and
/// column lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoPaths {
    /// Signs alternating along rows.
    pub rows_matrix: GMatrix,
    /// Signs alternating down columns.
    pub cols_matrix: GMatrix,
    pub rows: Vec<Development>,
    pub cols: Vec<Development>,
}

pub fn ortho_path_decomposition(v: usize, s: &[usize], h: &[usize], k: &[usize]) -> Result<OrthoPaths> {
    let f = value_map(v, s)?;
    let total: usize = h.iter().sum();
    if total != f.len() {
        return Err(Error::params(format!("Σh = {total} differs from |S| = {}", f.len())));
    }
    let c = gale_ryser_construct(h, k)?;
    let g = Group::cyclic(v)?;
    let (m, n) = (c.rows(), c.cols());
    let mut b = GMatrix::zeros(g.clone(), m, n)?;
    for (rank, cell) in c.cells().into_iter().enumerate() {
        b.set(cell, f[rank]);
    }
    let mut a = b.clone();
    for i in 0..m {
        let cells = b.row_cells(i);
        let seq: Vec<Elem> = cells.iter().map(|&x| b.get(x)).collect();
        for (x, val) in cells.into_iter().zip(alternated_form(&g, &seq, false)?) {
            a.set(x, val);
        }
    }
    let mut a2 = b.clone();
    for j in 0..n {
        let cells = b.col_cells(j);
        let seq: Vec<Elem> = cells.iter().map(|&x| b.get(x)).collect();
        for (x, val) in cells.into_iter().zip(alternated_form(&g, &seq, false)?) {
            a2.set(x, val);
        }
    }
    let rows = decomposition_from_matrix(&a, &a.natural_ordering(), Sign::Plus, Side::Rows, true)?;
    let cols = decomposition_from_matrix(&a2, &a2.natural_ordering(), Sign::Plus, Side::Cols, true)?;
    Ok(OrthoPaths { rows_matrix: a, cols_matrix: a2, rows, cols })
}

/// `p(s_0)` for every row, then every column.
pub fn period_sequence(a: &GMatrix, omega: &Ordering) -> Result<Vec<usize>> {
    omega.validate(a)?;
    let g = a.group();
    Ok(a
        .lines()
        .map(|line| g.element_order(g.sum(omega.sequence(a, line))))
        .collect())
}

impl Walk {
    /// Restores the group after deserialization.
    pub fn with_group(mut self, g: Group) -> Result<Self> {
        for &u in &self.vertices {
            g.check(u)?;
        }
        self.group = Some(g);
        Ok(self)
    }
}
