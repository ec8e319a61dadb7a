//! Planar tangles modelled as non-crossing perfect matchings.
//!
//! A degree-`n` tangle has `2n` boundary points. Upper point `P_i` is encoded
//! as `+i` and lower point `P_i'` as `-i`. Going around the boundary cycle the
//! points sit at positions `1, ..., n` (upper, left to right) followed by
//! `n', ..., 1'` (lower, right to left); a tangle is planar exactly when no two
//! of its blocks interleave with respect to those positions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tuples::TnTuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("degree must be at least 1, got {0}")]
    Degree(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a perfect matching: {0}")]
    NotAMatching(String),
    #[error("blocks ({},{}) and ({},{}) cross", .0.0, .0.1, .1.0, .1.1)]
    Crossing((i32, i32), (i32, i32)),
    #[error("generator index {index} outside [1, {}]", .n - 1)]
    Index { n: usize, index: usize },
    #[error("cannot parse tangle: {0}")]
    Parse(String),
}

/// A boundary point: `+i` is the upper point `i`, `-i` the lower point `i'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(i32);

impl Point {
    pub fn new(n: usize, value: i32) -> Result<Self, TangleError> {
        if value == 0 || value.unsigned_abs() as usize > n {
            return Err(TangleError::NotAMatching(format!(
                "point {value} is not in [-{n},-1] or [1,{n}]"
            )));
        }
        Ok(Point(value))
    }

    pub fn upper(i: usize) -> Self {
        Point(i as i32)
    }

    pub fn lower(i: usize) -> Self {
        Point(-(i as i32))
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn is_upper(self) -> bool {
        self.0 > 0
    }

    /// Column of the point, ignoring which side it sits on.
    pub fn column(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    /// 0-based position on the boundary cycle of a degree-`n` rectangle.
    fn position(self, n: usize) -> usize {
        if self.0 > 0 {
            self.0 as usize - 1
        } else {
            2 * n - self.0.unsigned_abs() as usize
        }
    }

    fn at_position(n: usize, p: usize) -> Self {
        if p < n {
            Point(p as i32 + 1)
        } else {
            Point(-((2 * n - p) as i32))
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the Temperley-Lieb monoid of degree `n`.
///
/// Stored as the partner map on boundary positions, which is canonical:
/// two tangles are equal iff their block sets are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tangle {
    n: usize,
    partner: Vec<u32>,
}

/// Which of the three generator families to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Lambda,
    Rho,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub rank: usize,
    pub dom: Vec<usize>,
    pub codom: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Simplicity {
    pub left_simple: bool,
    pub right_simple: bool,
}

impl Tangle {
    /// Builds a tangle from a list of point pairs, validating that they form a
    /// non-crossing perfect matching.
    pub fn new<I>(n: usize, blocks: I) -> Result<Self, TangleError>
    where
        I: IntoIterator<Item = (i32, i32)>,
    {
        if n < 1 {
            return Err(TangleError::Degree(n));
        }
        let mut partner = vec![u32::MAX; 2 * n];
        let mut count = 0;
        for (a, b) in blocks {
            let (pa, pb) = (Point::new(n, a)?, Point::new(n, b)?);
            if pa == pb {
                return Err(TangleError::NotAMatching(format!(
                    "block ({a},{b}) repeats a point"
                )));
            }
            let (qa, qb) = (pa.position(n), pb.position(n));
            for (q, v) in [(qa, a), (qb, b)] {
                if partner[q] != u32::MAX {
                    return Err(TangleError::NotAMatching(format!("point {v} appears twice")));
                }
            }
            partner[qa] = qb as u32;
            partner[qb] = qa as u32;
            count += 1;
        }
        if count != n {
            let missing = (0..2 * n)
                .find(|&p| partner[p] == u32::MAX)
                .map(|p| Point::at_position(n, p).0)
                .unwrap_or_default();
            return Err(TangleError::NotAMatching(format!(
                "expected {n} blocks, got {count}; point {missing} is unmatched"
            )));
        }
        let t = Tangle { n, partner };
        t.check_planar()?;
        Ok(t)
    }

    /// Trusted constructor for partner maps produced by internal operations.
    pub(crate) fn from_partner(n: usize, partner: Vec<u32>) -> Self {
        let t = Tangle { n, partner };
        debug_assert!(t.check_planar().is_ok(), "internal operation produced a crossing");
        t
    }

    pub fn identity(n: usize) -> Result<Self, TangleError> {
        if n < 1 {
            return Err(TangleError::Degree(n));
        }
        Ok(Self::identity_unchecked(n))
    }

    pub(crate) fn identity_unchecked(n: usize) -> Self {
        let partner = (0..2 * n).map(|p| (2 * n - 1 - p) as u32).collect();
        Tangle { n, partner }
    }

    /// The generator tangles `λ̄_i`, `ρ̄_i` and `ē_i` for `1 <= i <= n-1`.
    pub fn generator(n: usize, kind: GeneratorKind, i: usize) -> Result<Self, TangleError> {
        if n < 2 {
            return Err(TangleError::Degree(n));
        }
        if i < 1 || i > n - 1 {
            return Err(TangleError::Index { n, index: i });
        }
        let (n32, i32_) = (n as i32, i as i32);
        let mut blocks = Vec::with_capacity(n);
        match kind {
            GeneratorKind::Lambda | GeneratorKind::Rho => {
                blocks.extend((1..i32_).map(|j| (j, -j)));
                blocks.push((i32_, i32_ + 1));
                blocks.extend((i32_ + 2..=n32).map(|j| (j, -(j - 2))));
                blocks.push((-(n32 - 1), -n32));
            }
            GeneratorKind::E => {
                blocks.extend((1..=n32).filter(|&j| j != i32_ && j != i32_ + 1).map(|j| (j, -j)));
                blocks.push((i32_, i32_ + 1));
                blocks.push((-i32_, -(i32_ + 1)));
            }
        }
        let t = Tangle::new(n, blocks).expect("generator blocks are planar");
        Ok(if kind == GeneratorKind::Rho { t.dagger() } else { t })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// The partner of a point.
    pub fn mate(&self, p: Point) -> Point {
        Point::at_position(self.n, self.partner[p.position(self.n)] as usize)
    }

    /// Blocks in canonical order: each block lists its earlier boundary
    /// position first, blocks sorted by that position.
    pub fn blocks(&self) -> Vec<(i32, i32)> {
        (0..2 * self.n)
            .filter(|&p| (self.partner[p] as usize) > p)
            .map(|p| {
                (
                    Point::at_position(self.n, p).0,
                    Point::at_position(self.n, self.partner[p] as usize).0,
                )
            })
            .collect()
    }

    fn check_planar(&self) -> Result<(), TangleError> {
        let spans: Vec<(usize, usize)> = (0..2 * self.n)
            .filter(|&p| (self.partner[p] as usize) > p)
            .map(|p| (p, self.partner[p] as usize))
            .collect();
        for (x, &(a, b)) in spans.iter().enumerate() {
            for &(c, d) in &spans[x + 1..] {
                if a < c && c < b && b < d {
                    let pt = |q| Point::at_position(self.n, q).0;
                    return Err(TangleError::Crossing((pt(a), pt(b)), (pt(c), pt(d))));
                }
            }
        }
        Ok(())
    }

    /// Stacks `self` above `other`, returning the product tangle together with
    /// the number of closed loops that were discarded.
    pub fn compose(&self, other: &Tangle) -> Result<(Tangle, usize), TangleError> {
        if self.n != other.n {
            return Err(TangleError::DegreeMismatch(self.n, other.n));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Tangle) -> (Tangle, usize) {
        let n = self.n;
        // nodes: [0, n) top boundary, [n, 2n) bottom boundary, [2n, 3n) middle row
        let top_node = |p: Point| {
            if p.is_upper() {
                p.column() - 1
            } else {
                2 * n + p.column() - 1
            }
        };
        let bottom_node = |p: Point| {
            if p.is_upper() {
                2 * n + p.column() - 1
            } else {
                n + p.column() - 1
            }
        };
        let mut uf = UnionFind::new(3 * n);
        for p in 0..2 * n {
            let q = self.partner[p] as usize;
            if q > p {
                let (a, b) = (Point::at_position(n, p), Point::at_position(n, q));
                uf.union(top_node(a), top_node(b));
            }
            let q = other.partner[p] as usize;
            if q > p {
                let (a, b) = (Point::at_position(n, p), Point::at_position(n, q));
                uf.union(bottom_node(a), bottom_node(b));
            }
        }

        let boundary_point = |node: usize| {
            if node < n {
                Point::upper(node + 1)
            } else {
                Point::lower(node - n + 1)
            }
        };
        let mut first_seen = vec![usize::MAX; 3 * n];
        let mut has_boundary = vec![false; 3 * n];
        let mut partner = vec![u32::MAX; 2 * n];
        for node in 0..2 * n {
            let root = uf.find(node);
            has_boundary[root] = true;
            if first_seen[root] == usize::MAX {
                first_seen[root] = node;
            } else {
                let a = boundary_point(first_seen[root]).position(n);
                let b = boundary_point(node).position(n);
                partner[a] = b as u32;
                partner[b] = a as u32;
            }
        }
        let mut loops = 0;
        let mut counted = vec![false; 3 * n];
        for node in 2 * n..3 * n {
            let root = uf.find(node);
            if !has_boundary[root] && !counted[root] {
                counted[root] = true;
                loops += 1;
            }
        }
        (Tangle::from_partner(n, partner), loops)
    }

    /// Reflection in the horizontal midline.
    pub fn dagger(&self) -> Tangle {
        let n = self.n;
        let flip = |p: usize| Point(-Point::at_position(n, p).0).position(n);
        let mut partner = vec![0u32; 2 * n];
        for p in 0..2 * n {
            partner[flip(p)] = flip(self.partner[p] as usize) as u32;
        }
        Tangle::from_partner(n, partner)
    }

    pub fn profile(&self) -> Profile {
        let mut dom = Vec::new();
        let mut codom = Vec::new();
        for (a, b) in self.blocks() {
            if (a > 0) != (b > 0) {
                let (up, down) = if a > 0 { (a, b) } else { (b, a) };
                dom.push(up as usize);
                codom.push(down.unsigned_abs() as usize);
            }
        }
        dom.sort_unstable();
        codom.sort_unstable();
        let rank = dom.len();
        assert_eq!(rank % 2, self.n % 2, "rank must have the parity of the degree");
        Profile { rank, dom, codom }
    }

    pub fn rank(&self) -> usize {
        (0..self.n)
            .filter(|&p| (self.partner[p] as usize) >= self.n)
            .count()
    }

    /// Left endpoints of the upper and lower non-transversals, each listed in
    /// decreasing order.
    pub fn boundary_tuples(&self) -> (TnTuple, TnTuple) {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for (a, b) in self.blocks() {
            if a > 0 && b > 0 {
                upper.push(a.min(b) as usize);
            } else if a < 0 && b < 0 {
                lower.push(a.unsigned_abs().min(b.unsigned_abs()) as usize);
            }
        }
        upper.sort_unstable_by(|x, y| y.cmp(x));
        lower.sort_unstable_by(|x, y| y.cmp(x));
        let certify = |entries: Vec<usize>| {
            TnTuple::from_entries(self.n, entries)
                .expect("boundary tuples of a planar tangle always lie in T_n")
        };
        (certify(upper), certify(lower))
    }

    pub fn simplicity(&self) -> Simplicity {
        let (bl, br) = self.boundary_tuples();
        Simplicity {
            left_simple: bl.is_packed(),
            right_simple: br.is_packed(),
        }
    }

    /// Structured-document form `{"n": .., "blocks": [[a, b], ..]}`.
    pub fn to_doc(&self) -> TangleDoc {
        TangleDoc {
            n: self.n,
            blocks: self.blocks().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl fmt::Debug for Tangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tangle({self})")
    }
}

/// Bit-exact line format: `n=<int>; blocks=(a,b)(c,d)...`.
impl fmt::Display for Tangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; blocks=", self.n)?;
        for (a, b) in self.blocks() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl FromStr for Tangle {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('{') {
            let doc: TangleDoc = serde_json::from_str(s).map_err(|e| TangleError::Parse(e.to_string()))?;
            return Tangle::try_from(doc);
        }
        let bad = |msg: &str| TangleError::Parse(format!("{msg} in {s:?}"));
        let (head, tail) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let n = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| bad("expected n=<int>"))?;
        let body = tail
            .trim()
            .strip_prefix("blocks=")
            .ok_or_else(|| bad("expected blocks="))?;
        let mut blocks = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = inner.find(')').ok_or_else(|| bad("unclosed '('"))?;
            let (a, b) = inner[..close]
                .split_once(',')
                .ok_or_else(|| bad("expected a,b"))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| TangleError::Parse(format!("bad point {:?}", t.trim())))
            };
            blocks.push((parse(a)?, parse(b)?));
            rest = inner[close + 1..].trim_start();
        }
        Tangle::new(n, blocks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleDoc {
    pub n: usize,
    pub blocks: Vec<[i32; 2]>,
}

impl TryFrom<TangleDoc> for Tangle {
    type Error = TangleError;

    fn try_from(doc: TangleDoc) -> Result<Self, Self::Error> {
        Tangle::new(doc.n, doc.blocks.into_iter().map(|[a, b]| (a, b)))
    }
}

impl Serialize for Tangle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Tangle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = TangleDoc::deserialize(deserializer)?;
        Tangle::try_from(doc).map_err(serde::de::Error::custom)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn alpha() -> Tangle {
        Tangle::new(
            9,
            [
                (1, -3),
                (8, -6),
                (9, -9),
                (2, 7),
                (3, 4),
                (5, 6),
                (-1, -2),
                (-4, -5),
                (-7, -8),
            ],
        )
        .unwrap()
    }

    fn beta() -> Tangle {
        Tangle::new(
            9,
            [
                (1, 2),
                (3, 4),
                (5, 6),
                (8, 9),
                (7, -7),
                (-1, -2),
                (-4, -5),
                (-3, -6),
                (-8, -9),
            ],
        )
        .unwrap()
    }

    #[test]
    fn alpha_beta_product() {
        let (ab, loops) = alpha().compose(&beta()).unwrap();
        let expected = Tangle::new(
            9,
            [
                (1, 8),
                (2, 7),
                (3, 4),
                (5, 6),
                (9, -7),
                (-1, -2),
                (-3, -6),
                (-4, -5),
                (-8, -9),
            ],
        )
        .unwrap();
        assert_eq!(ab, expected);
        assert_eq!(loops, 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Tangle::new(0, []), Err(TangleError::Degree(0)));
        assert!(matches!(
            Tangle::new(2, [(1, -2), (2, -1)]),
            Err(TangleError::Crossing(..))
        ));
        assert!(matches!(
            Tangle::new(2, [(1, -1), (1, 2)]),
            Err(TangleError::NotAMatching(_))
        ));
        assert!(matches!(
            Tangle::new(2, [(1, -1)]),
            Err(TangleError::NotAMatching(_))
        ));
        assert!(matches!(
            Tangle::new(2, [(1, 3), (2, -1)]),
            Err(TangleError::NotAMatching(_))
        ));
        assert!(matches!(
            Tangle::new(2, [(1, 1), (2, -1)]),
            Err(TangleError::NotAMatching(_))
        ));
        let id1 = Tangle::new(1, [(1, -1)]).unwrap();
        assert_eq!(id1, Tangle::identity(1).unwrap());
    }

    #[test]
    fn canonical_blocks_and_text_format() {
        let a = alpha();
        assert_eq!(
            a.to_string(),
            "n=9; blocks=(1,-3)(2,7)(3,4)(5,6)(8,-6)(9,-9)(-8,-7)(-5,-4)(-2,-1)"
        );
        assert_eq!(a.to_string().parse::<Tangle>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.starts_with(r#"{"n":9,"blocks":[[1,-3],[2,7],"#));
        assert_eq!(json.parse::<Tangle>().unwrap(), a);
        let again = Tangle::new(9, a.blocks()).unwrap();
        assert_eq!(again.blocks(), a.blocks());
    }

    #[test]
    fn generators() {
        let l = Tangle::generator(5, GeneratorKind::Lambda, 2).unwrap();
        assert_eq!(
            l,
            Tangle::new(5, [(1, -1), (2, 3), (4, -2), (5, -3), (-4, -5)]).unwrap()
        );
        let e = Tangle::generator(5, GeneratorKind::E, 4).unwrap();
        assert_eq!(
            e,
            Tangle::new(5, [(1, -1), (2, -2), (3, -3), (4, 5), (-4, -5)]).unwrap()
        );
        let r = Tangle::generator(5, GeneratorKind::Rho, 4).unwrap();
        assert_eq!(r, e);
        assert_eq!(Tangle::generator(5, GeneratorKind::Lambda, 4).unwrap(), e);
        assert_eq!(l.dagger(), Tangle::generator(5, GeneratorKind::Rho, 2).unwrap());
        assert_eq!(
            Tangle::generator(5, GeneratorKind::E, 5),
            Err(TangleError::Index { n: 5, index: 5 })
        );
        assert_eq!(
            Tangle::generator(5, GeneratorKind::E, 0),
            Err(TangleError::Index { n: 5, index: 0 })
        );
    }

    #[test]
    fn generator_products() {
        let l2 = Tangle::generator(5, GeneratorKind::Lambda, 2).unwrap();
        let r2 = Tangle::generator(5, GeneratorKind::Rho, 2).unwrap();
        let e = |i| Tangle::generator(5, GeneratorKind::E, i).unwrap();
        assert_eq!(l2.compose(&r2).unwrap(), (e(2), 1));
        assert_eq!(r2.compose(&l2).unwrap(), (e(4), 1));
        let id = Tangle::identity(5).unwrap();
        assert_eq!(id.compose(&e(2)).unwrap(), (e(2), 0));
        assert!(matches!(
            id.compose(&Tangle::identity(4).unwrap()),
            Err(TangleError::DegreeMismatch(5, 4))
        ));
    }

    #[test]
    fn dagger_of_alpha() {
        let expected = Tangle::new(
            9,
            [
                (3, -1),
                (6, -8),
                (9, -9),
                (-2, -7),
                (-3, -4),
                (-5, -6),
                (1, 2),
                (4, 5),
                (7, 8),
            ],
        )
        .unwrap();
        assert_eq!(alpha().dagger(), expected);
        assert_eq!(
            Tangle::identity(4).unwrap().dagger(),
            Tangle::identity(4).unwrap()
        );
        assert_eq!(beta().dagger().dagger(), beta());
    }

    #[test]
    fn profiles() {
        let p = alpha().profile();
        assert_eq!(
            p,
            Profile {
                rank: 3,
                dom: vec![1, 8, 9],
                codom: vec![3, 6, 9]
            }
        );
        let id = Tangle::identity(7).unwrap().profile();
        assert_eq!(id.rank, 7);
        assert_eq!(id.dom, (1..=7).collect::<Vec<_>>());
        let e2 = Tangle::generator(5, GeneratorKind::E, 2).unwrap().profile();
        assert_eq!(
            e2,
            Profile {
                rank: 3,
                dom: vec![1, 4, 5],
                codom: vec![1, 4, 5]
            }
        );
        assert_eq!(alpha().rank(), 3);
    }

    #[test]
    fn boundary_tuples_of_alpha_and_beta() {
        let (bl, br) = alpha().boundary_tuples();
        assert_eq!(bl.entries(), &[5, 3, 2]);
        assert_eq!(br.entries(), &[7, 4, 1]);
        let (bl, br) = beta().boundary_tuples();
        assert_eq!(bl.entries(), &[8, 5, 3, 1]);
        assert_eq!(br.entries(), &[8, 4, 3, 1]);
        let (bl, br) = Tangle::identity(6).unwrap().boundary_tuples();
        assert!(bl.is_empty() && br.is_empty());
    }

    #[test]
    fn simplicity_flags() {
        let gamma = Tangle::new(
            9,
            [
                (2, 7),
                (3, 4),
                (5, 6),
                (-4, -5),
                (-6, -7),
                (-8, -9),
                (1, -1),
                (8, -2),
                (9, -3),
            ],
        )
        .unwrap();
        assert!(gamma.simplicity().right_simple);
        assert!(!gamma.simplicity().left_simple);
        assert!(gamma.dagger().simplicity().left_simple);
        for i in 1..9 {
            let l = Tangle::generator(9, GeneratorKind::Lambda, i).unwrap();
            assert!(l.simplicity().right_simple, "lambda_{i}");
        }
        assert_eq!(
            alpha().simplicity(),
            Simplicity {
                left_simple: false,
                right_simple: false
            }
        );
    }
}
