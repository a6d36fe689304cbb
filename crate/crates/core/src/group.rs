//! Finite groups in additive notation.
//!
//! Elements are dense indices `0..order` with `0` always the identity. Cyclic
//! groups use residues, the dihedral group `Dih_n` lists the rotations
//! `α^0..α^{n-1}` followed by the reflections `α^0β..α^{n-1}β`, and direct
//! products use a mixed-radix encoding with the first factor most significant.
//! Arbitrary finite groups can be supplied as an explicit addition table.
//!
//! The absolute value `‖a‖` of an element is the member of `{a, -a}` with the
//! smaller index, so `‖a‖ = ‖-a‖` and the choice is deterministic.

use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A group element, encoded as its canonical index.
pub type Elem = usize;

/// Largest order for which a composite group materializes its tables.
const TABLE_CACHE_LIMIT: usize = 512;

#[derive(Clone)]
pub struct Group(Arc<Inner>);

struct Inner {
    kind: Kind,
    order: usize,
    cache: OnceLock<Option<Tables>>,
}

enum Kind {
    Cyclic(usize),
    Dihedral(usize),
    Product(Vec<Group>),
    Table { source: String, tables: Tables },
}

struct Tables {
    add: Vec<Elem>,
    neg: Vec<Elem>,
}

impl Group {
    /// The cyclic group `Z_v`.
    pub fn cyclic(v: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::ZeroOrder);
        }
        Ok(Self::from_kind(Kind::Cyclic(v), v))
    }

    /// The dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOrder);
        }
        Ok(Self::from_kind(Kind::Dihedral(n), 2 * n))
    }

    /// Direct product of the given factors.
    pub fn product(factors: Vec<Group>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Descriptor("x() needs at least one factor".into()));
        }
        let order = factors.iter().map(Group::order).product();
        Ok(Self::from_kind(Kind::Product(factors), order))
    }

    /// A group given by its full addition table, row-major:
    /// `add[a * order + b] = a + b`. Element `0` must be the identity.
    pub fn from_table(order: usize, add: Vec<Elem>, source: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if add.len() != order * order {
            return Err(Error::Table(format!(
                "expected {} entries, found {}",
                order * order,
                add.len()
            )));
        }
        if let Some(&bad) = add.iter().find(|&&x| x >= order) {
            return Err(Error::Table(format!("entry {bad} out of range")));
        }
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.fill(false);
            for b in 0..order {
                let x = add[a * order + b];
                if seen[x] {
                    return Err(Error::Table(format!("row {a} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for b in 0..order {
            seen.fill(false);
            for a in 0..order {
                let x = add[a * order + b];
                if seen[x] {
                    return Err(Error::Table(format!("column {b} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let identity = (0..order).find(|&e| (0..order).all(|a| add[e * order + a] == a && add[a * order + e] == a));
        match identity {
            Some(0) => {}
            Some(e) => return Err(Error::Table(format!("identity is element {e}, expected 0"))),
            None => return Err(Error::Table("no identity element".into())),
        }
        for a in 0..order {
            for b in 0..order {
                let ab = add[a * order + b];
                for c in 0..order {
                    if add[ab * order + c] != add[a * order + add[b * order + c]] {
                        return Err(Error::Table(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let neg = (0..order)
            .map(|a| (0..order).find(|&b| add[a * order + b] == 0).expect("latin square row contains 0"))
            .collect();
        let tables = Tables { add, neg };
        Ok(Self::from_kind(Kind::Table { source: source.into(), tables }, order))
    }

    /// Reads a table file: the order, then `order²` element indices.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut tokens = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Table(format!("`{t}` is not a nonnegative integer")))
        });
        let order = tokens.next().ok_or_else(|| Error::Table("empty table file".into()))??;
        let add = tokens.collect::<Result<Vec<_>>>()?;
        Self::from_table(order, add, path.display().to_string())
    }

    /// Parses `Z:<v>`, `Dih:<n>`, `x(<desc>,<desc>,..)` or `table:<path>`.
    pub fn parse(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        let bad = || Error::Descriptor(desc.to_string());
        if let Some(rest) = desc.strip_prefix("Z:") {
            let v = rest.trim().parse().map_err(|_| bad())?;
            Self::cyclic(v)
        } else if let Some(rest) = desc.strip_prefix("Dih:") {
            let n = rest.trim().parse().map_err(|_| bad())?;
            Self::dihedral(n)
        } else if let Some(rest) = desc.strip_prefix("table:") {
            Self::from_table_file(rest.trim())
        } else if let Some(inner) = desc.strip_prefix("x(").and_then(|r| r.strip_suffix(')')) {
            let factors = split_top_level(inner)
                .ok_or_else(bad)?
                .into_iter()
                .map(Self::parse)
                .collect::<Result<Vec<_>>>()?;
            Self::product(factors)
        } else {
            Err(bad())
        }
    }

    fn from_kind(kind: Kind, order: usize) -> Self {
        Group(Arc::new(Inner {
            kind,
            order,
            cache: OnceLock::new(),
        }))
    }

    /// The descriptor this group parses from.
    pub fn descriptor(&self) -> String {
        match &self.0.kind {
            Kind::Cyclic(v) => format!("Z:{v}"),
            Kind::Dihedral(n) => format!("Dih:{n}"),
            Kind::Product(fs) => {
                let parts: Vec<_> = fs.iter().map(Group::descriptor).collect();
                format!("x({})", parts.join(","))
            }
            Kind::Table { source, .. } => format!("table:{source}"),
        }
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.0.order
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::NotInGroup { elem: a, order: self.order() })
        }
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.order
    }

    /// If this is `Z_v`, returns `v`.
    pub fn cyclic_modulus(&self) -> Option<usize> {
        match self.0.kind {
            Kind::Cyclic(v) => Some(v),
            _ => None,
        }
    }

    fn tables(&self) -> Option<&Tables> {
        match &self.0.kind {
            Kind::Table { tables, .. } => Some(tables),
            Kind::Product(_) => self
                .0
                .cache
                .get_or_init(|| (self.0.order <= TABLE_CACHE_LIMIT).then(|| self.build_tables()))
                .as_ref(),
            _ => None,
        }
    }

    fn build_tables(&self) -> Tables {
        let n = self.order();
        let mut add = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                add.push(self.add_direct(a, b));
            }
        }
        let neg = (0..n).map(|a| self.neg_direct(a)).collect();
        Tables { add, neg }
    }

    /// `a + b`, evaluated left to right.
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match self.tables() {
            Some(t) => t.add[a * self.0.order + b],
            None => self.add_direct(a, b),
        }
    }

    fn add_direct(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.kind {
            Kind::Cyclic(v) => (a + b) % v,
            Kind::Dihedral(n) => {
                let n = *n;
                let (ra, fa) = (a % n, a >= n);
                let (rb, fb) = (b % n, b >= n);
                // β α^j = α^{-j} β
                let r = if fa { (ra + n - rb) % n } else { (ra + rb) % n };
                if fa != fb {
                    n + r
                } else {
                    r
                }
            }
            Kind::Product(fs) => {
                let mut out = 0;
                let (mut a, mut b) = (a, b);
                let mut radix = 1;
                for f in fs.iter().rev() {
                    let k = f.order();
                    out += f.add(a % k, b % k) * radix;
                    a /= k;
                    b /= k;
                    radix *= k;
                }
                out
            }
            Kind::Table { tables, .. } => tables.add[a * self.0.order + b],
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        debug_assert!(self.contains(a));
        match self.tables() {
            Some(t) => t.neg[a],
            None => self.neg_direct(a),
        }
    }

    fn neg_direct(&self, a: Elem) -> Elem {
        match &self.0.kind {
            Kind::Cyclic(v) => (v - a) % v,
            Kind::Dihedral(n) => {
                if a >= *n {
                    a
                } else {
                    (n - a) % n
                }
            }
            Kind::Product(fs) => {
                let mut out = 0;
                let mut a = a;
                let mut radix = 1;
                for f in fs.iter().rev() {
                    let k = f.order();
                    out += f.neg(a % k) * radix;
                    a /= k;
                    radix *= k;
                }
                out
            }
            Kind::Table { tables, .. } => tables.neg[a],
        }
    }

    /// `a - b`, i.e. `a + (-b)`.
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Left-to-right sum of a sequence; the empty sum is `0`.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// `k·a` for an integer `k` (negative multiples of `-a`).
    pub fn multiple(&self, k: i64, a: Elem) -> Elem {
        let base = if k < 0 { self.neg(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.add(acc, base))
    }

    pub fn is_abelian(&self) -> bool {
        match &self.0.kind {
            Kind::Cyclic(_) => true,
            Kind::Dihedral(n) => *n <= 2,
            Kind::Product(fs) => fs.iter().all(Group::is_abelian),
            Kind::Table { tables, .. } => {
                let n = self.0.order;
                (0..n).all(|a| (a + 1..n).all(|b| tables.add[a * n + b] == tables.add[b * n + a]))
            }
        }
    }

    /// Canonical absolute value: whichever of `a`, `-a` has the smaller index.
    pub fn abs(&self, a: Elem) -> Elem {
        a.min(self.neg(a))
    }

    pub fn is_involution(&self, a: Elem) -> bool {
        a != 0 && self.add(a, a) == 0
    }

    /// Smallest `p ≥ 1` with `p·a = 0`, by repeated addition.
    pub fn element_order(&self, a: Elem) -> usize {
        let mut p = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            p += 1;
        }
        p
    }

    /// The involutions among `set`, in the order they appear.
    pub fn involutions(&self, set: &[Elem]) -> Vec<Elem> {
        set.iter().copied().filter(|&a| self.is_involution(a)).collect()
    }

    /// `H⁺`: the distinct absolute values of a multiset, zero removed, sorted.
    pub fn positive_part(&self, multiset: &[Elem]) -> Vec<Elem> {
        let mut out: Vec<Elem> = multiset.iter().map(|&a| self.abs(a)).filter(|&a| a != 0).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Human-oriented label: residues for `Z_v`, `a^jb` style for dihedral
    /// groups, tuples for products, indices otherwise.
    pub fn label(&self, a: Elem) -> String {
        match &self.0.kind {
            Kind::Cyclic(_) | Kind::Table { .. } => a.to_string(),
            Kind::Dihedral(n) => {
                let (r, f) = (a % n, a >= *n);
                let rot = match r {
                    0 if f => String::new(),
                    0 => "1".to_string(),
                    1 => "a".to_string(),
                    _ => format!("a^{r}"),
                };
                if f {
                    format!("{rot}b")
                } else {
                    rot
                }
            }
            Kind::Product(fs) => {
                let mut parts = Vec::with_capacity(fs.len());
                let mut a = a;
                for f in fs.iter().rev() {
                    parts.push(f.label(a % f.order()));
                    a /= f.order();
                }
                parts.reverse();
                format!("({})", parts.join(","))
            }
        }
    }
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Table { tables: a, .. }, Kind::Table { tables: b, .. }) => a.add == b.add,
            (Kind::Product(a), Kind::Product(b)) => a == b,
            (Kind::Cyclic(a), Kind::Cyclic(b)) => a == b,
            (Kind::Dihedral(a), Kind::Dihedral(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.descriptor())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = String::deserialize(d)?;
        Group::parse(&desc).map_err(serde::de::Error::custom)
    }
}

/// A symbol set `S ⊆ G⁺` together with a multiplicity `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSet {
    group: Group,
    elements: Vec<Elem>,
    lambda: usize,
}

impl SymbolSet {
    /// Validates that every element is its own nonzero absolute value.
    pub fn new(group: Group, mut elements: Vec<Elem>, lambda: usize) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::params("multiplicity must be positive"));
        }
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::params(format!("symbol {} repeated", w[0])));
            }
        }
        for &s in &elements {
            group.check(s)?;
            if s == 0 {
                return Err(Error::params("symbol set contains zero"));
            }
            if group.abs(s) != s {
                return Err(Error::params(format!(
                    "symbol {} is not an absolute value (‖{}‖ = {})",
                    group.label(s),
                    group.label(s),
                    group.label(group.abs(s))
                )));
            }
        }
        Ok(SymbolSet { group, elements, lambda })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn involutions(&self) -> Vec<Elem> {
        self.group.involutions(&self.elements)
    }

    pub fn noninvolutions(&self) -> Vec<Elem> {
        self.elements.iter().copied().filter(|&a| !self.group.is_involution(a)).collect()
    }

    /// How many times `s` must occur (in absolute value) among the entries of
    /// a GHA over this set: `λ` for noninvolutions, `λ/2` for involutions.
    pub fn multiplicity(&self, s: Elem) -> usize {
        if self.group.is_involution(s) {
            self.lambda / 2
        } else {
            self.lambda
        }
    }

    /// `λ|S| - (λ/2)|I(S)|`, the total weight a GHA over this set must have.
    pub fn required_weight(&self) -> usize {
        self.elements.iter().map(|&s| self.multiplicity(s)).sum()
    }

    /// The multiset `T`, each symbol repeated by its multiplicity, sorted.
    pub fn multiset(&self) -> Vec<Elem> {
        self.elements
            .iter()
            .flat_map(|&s| std::iter::repeat(s).take(self.multiplicity(s)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let g = Group::cyclic(7).unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.add(3, 5), 1);
        assert_eq!(g.abs(5), 2);
        assert_eq!(Group::cyclic(8).unwrap().abs(4), 4);
        assert!(g.involutions(&[1, 2, 3]).is_empty());
        assert_eq!(Group::cyclic(12).unwrap().element_order(8), 3);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn dihedral_elements() {
        let g = Group::dihedral(25).unwrap();
        assert_eq!(g.order(), 50);
        // -α^20 = α^5
        assert_eq!(g.neg(20), 5);
        assert_eq!(g.abs(20), 5);
        assert_eq!(g.element_order(5), 5);
        // {α, β, αβ} -> {β, αβ}
        assert_eq!(g.involutions(&[1, 25, 26]), vec![25, 26]);
        assert_eq!(g.label(26), "ab");
        assert_eq!(g.label(25), "b");
        assert_eq!(g.label(3), "a^3");
    }

    #[test]
    fn dihedral_is_not_abelian() {
        let g = Group::parse("Dih:3").unwrap();
        // α + β = αβ, β + α = βα = α^{-1}β = α²β
        assert_eq!(g.add(1, 3), 4);
        assert_eq!(g.add(3, 1), 5);
        assert!(!g.is_abelian());
        assert!(Group::dihedral(2).unwrap().is_abelian());
    }

    #[test]
    fn klein_group() {
        let g = Group::parse("x(Z:2,Z:2)").unwrap();
        assert_eq!(g.order(), 4);
        assert!((1..4).all(|a| g.is_involution(a)));
        assert_eq!(g.descriptor(), "x(Z:2,Z:2)");
    }

    #[test]
    fn positive_part() {
        let g = Group::cyclic(7).unwrap();
        assert_eq!(g.positive_part(&[3, 4, 4, 0]), vec![3]);
        assert_eq!(Group::cyclic(9).unwrap().positive_part(&[1, 2, 8]), vec![1, 2]);
        assert!(g.positive_part(&[]).is_empty());
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(Group::parse("Z:0"), Err(Error::ZeroOrder)));
        assert!(Group::parse("Q:8").is_err());
        assert!(Group::parse("x(Z:2,Z:3").is_err());
        assert!(Group::parse("x()").is_err());
    }

    #[test]
    fn table_validation() {
        // Z_3 written out
        let g = Group::from_table(3, vec![0, 1, 2, 1, 2, 0, 2, 0, 1], "z3").unwrap();
        assert_eq!(g.add(2, 2), 1);
        assert_eq!(g.neg(1), 2);
        assert!(g.is_abelian());
        // not a latin square
        assert!(Group::from_table(2, vec![0, 1, 1, 1], "bad").is_err());
        // identity is element 1, not 0
        assert!(Group::from_table(2, vec![1, 0, 0, 1], "bad").is_err());
    }

    #[test]
    fn table_file_roundtrip() {
        let dir = std::env::temp_dir().join(format!("heffter-table-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z4.txt");
        std::fs::write(&path, "4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n").unwrap();
        let g = Group::parse(&format!("table:{}", path.display())).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.add(3, 3), 2);
        assert_eq!(g, Group::from_table_file(&path).unwrap());
    }

    #[test]
    fn symbol_set_rules() {
        let g = Group::cyclic(8).unwrap();
        assert!(SymbolSet::new(g.clone(), vec![1, 5], 1).is_err());
        assert!(SymbolSet::new(g.clone(), vec![0, 1], 1).is_err());
        let s = SymbolSet::new(g, vec![1, 2, 3, 4], 2).unwrap();
        assert_eq!(s.involutions(), vec![4]);
        assert_eq!(s.required_weight(), 2 * 3 + 1);
        assert_eq!(s.multiset(), vec![1, 1, 2, 2, 3, 3, 4]);
    }
}
