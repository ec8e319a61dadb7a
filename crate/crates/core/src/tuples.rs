//! The tuple set `T_n` and the factorisation of tangles through it.
//!
//! Every tangle is determined by the pair `(bl, br)` of left endpoints of its
//! upper and lower arcs, and conversely every pair of equal-length tuples in
//! `T_n` is realised by `λ̄_x ρ̄_y`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::presentations::{Letter, Word};
use crate::tangle::{GeneratorKind, Tangle, TangleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("entries must be strictly decreasing (entry {index} is {value}, previous {previous})")]
    NotDecreasing { index: usize, value: i64, previous: i64 },
    #[error("entry {index} is {value}, which is not positive")]
    NonPositive { index: usize, value: i64 },
    #[error("entry {index} is {value}, above the bound n-2i+1 = {bound}")]
    BoundViolation { index: usize, value: i64, bound: i64 },
    #[error("tuple length {k} outside [0, {max}]")]
    LengthOutOfRange { k: usize, max: usize },
    #[error("tuple lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot parse tuple: {0}")]
    Parse(String),
    #[error(transparent)]
    Tangle(#[from] TangleError),
}

/// A member of `T_n`: a strictly decreasing tuple with `x_i <= n - 2i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TnTuple {
    n: usize,
    entries: Vec<usize>,
}

/// Validates `entries` as a member of `T_n`. Indices in errors are 1-based.
pub fn check_tuple(n: usize, entries: &[i64]) -> Result<TnTuple, TupleError> {
    for (idx, &value) in entries.iter().enumerate() {
        let index = idx + 1;
        if value < 1 {
            return Err(TupleError::NonPositive { index, value });
        }
        if idx > 0 && value >= entries[idx - 1] {
            return Err(TupleError::NotDecreasing {
                index,
                value,
                previous: entries[idx - 1],
            });
        }
        let bound = n as i64 - 2 * index as i64 + 1;
        if value > bound {
            return Err(TupleError::BoundViolation { index, value, bound });
        }
    }
    Ok(TnTuple {
        n,
        entries: entries.iter().map(|&v| v as usize).collect(),
    })
}

impl TnTuple {
    pub fn from_entries(n: usize, entries: Vec<usize>) -> Result<Self, TupleError> {
        let signed: Vec<i64> = entries.iter().map(|&v| v as i64).collect();
        check_tuple(n, &signed)
    }

    pub fn empty(n: usize) -> Self {
        TnTuple {
            n,
            entries: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True for `(n-1, n-3, ..., n-2k+1)`, the tuple of a one-sided simple tangle.
    pub fn is_packed(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &x)| x + 2 * i + 1 == self.n)
    }

    /// `(λ_x, ρ_x)` with `λ_x = λ_{x_1}...λ_{x_k}` and `ρ_x = ρ_{x_k}...ρ_{x_1}`.
    pub fn words(&self) -> (Word, Word) {
        let lambda = self.entries.iter().map(|&x| Letter::lambda(x)).collect();
        let rho = self.entries.iter().rev().map(|&x| Letter::rho(x)).collect();
        (
            Word::from_letters_unchecked(self.n, lambda),
            Word::from_letters_unchecked(self.n, rho),
        )
    }

    /// Bit-exact line format `n=<int>; x=(5,3,2)`.
    pub fn to_line(&self) -> String {
        format!("n={}; x={}", self.n, self)
    }

    pub fn parse(n: usize, s: &str) -> Result<Self, TupleError> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        let entries = if s.is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| TupleError::Parse(format!("bad entry {:?}", t.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        check_tuple(n, &entries)
    }
}

impl fmt::Display for TnTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for TnTuple {
    type Err = TupleError;

    /// Parses the line format `n=<int>; x=(...)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, tail) = s
            .split_once(';')
            .ok_or_else(|| TupleError::Parse(format!("missing ';' in {s:?}")))?;
        let n = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| TupleError::Parse(format!("expected n=<int> in {s:?}")))?;
        let body = tail
            .trim()
            .strip_prefix("x=")
            .ok_or_else(|| TupleError::Parse(format!("expected x=(...) in {s:?}")))?;
        TnTuple::parse(n, body)
    }
}

/// All members of `T_n` (of length `k` when given) in lexicographic order.
pub fn enumerate_tuples(n: usize, k: Option<usize>) -> Result<Vec<TnTuple>, TupleError> {
    if n < 1 {
        return Err(TupleError::Tangle(TangleError::Degree(n)));
    }
    if let Some(k) = k {
        if k > n / 2 {
            return Err(TupleError::LengthOutOfRange { k, max: n / 2 });
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend_tuples(n, k, &mut prefix, &mut out);
    Ok(out)
}

fn extend_tuples(n: usize, k: Option<usize>, prefix: &mut Vec<usize>, out: &mut Vec<TnTuple>) {
    if k.is_none_or(|k| k == prefix.len()) {
        out.push(TnTuple {
            n,
            entries: prefix.clone(),
        });
    }
    if k.is_some_and(|k| k == prefix.len()) {
        return;
    }
    let i = prefix.len() + 1;
    let bound = n as i64 - 2 * i as i64 + 1;
    let upper = prefix.last().map_or(bound, |&p| bound.min(p as i64 - 1));
    for x in 1..=upper.max(0) as usize {
        prefix.push(x);
        extend_tuples(n, k, prefix, out);
        prefix.pop();
    }
}

/// Evaluates `λ̄_x ρ̄_y` by composing generator tangles.
pub fn build_tangle(x: &TnTuple, y: &TnTuple) -> Result<Tangle, TupleError> {
    if x.n != y.n {
        return Err(TupleError::DegreeMismatch(x.n, y.n));
    }
    if x.len() != y.len() {
        return Err(TupleError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.n;
    let mut acc = Tangle::identity(n)?;
    let letters = x
        .entries
        .iter()
        .map(|&i| (GeneratorKind::Lambda, i))
        .chain(y.entries.iter().rev().map(|&i| (GeneratorKind::Rho, i)));
    for (kind, i) in letters {
        acc = acc.compose_unchecked(&Tangle::generator(n, kind, i)?).0;
    }
    debug_assert_eq!(acc.rank(), n - 2 * x.len());
    debug_assert_eq!(acc.boundary_tuples(), (x.clone(), y.clone()));
    Ok(acc)
}

/// `(bl(a), br(a))`; inverse to [`build_tangle`].
pub fn factorize(a: &Tangle) -> (TnTuple, TnTuple) {
    a.boundary_tuples()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, xs: &[usize]) -> TnTuple {
        TnTuple::from_entries(n, xs.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(check_tuple(9, &[5, 3, 2]).unwrap().entries(), &[5, 3, 2]);
        assert!(check_tuple(9, &[]).unwrap().is_empty());
        assert_eq!(
            check_tuple(5, &[4, 3]),
            Err(TupleError::BoundViolation {
                index: 2,
                value: 3,
                bound: 2
            })
        );
        assert!(matches!(
            check_tuple(9, &[3, 5]),
            Err(TupleError::NotDecreasing { index: 2, .. })
        ));
        assert!(matches!(
            check_tuple(9, &[3, 3]),
            Err(TupleError::NotDecreasing { .. })
        ));
        assert!(matches!(
            check_tuple(9, &[2, 0]),
            Err(TupleError::NonPositive { index: 2, .. })
        ));
    }

    #[test]
    fn enumeration() {
        let k1: Vec<_> = enumerate_tuples(5, Some(1)).unwrap();
        assert_eq!(
            k1.iter().map(|x| x.entries().to_vec()).collect::<Vec<_>>(),
            [[1], [2], [3], [4]]
        );
        let k2: Vec<Vec<usize>> = enumerate_tuples(5, Some(2))
            .unwrap()
            .iter()
            .map(|x| x.entries().to_vec())
            .collect();
        assert_eq!(
            k2,
            vec![vec![2, 1], vec![3, 1], vec![3, 2], vec![4, 1], vec![4, 2]]
        );
        assert_eq!(enumerate_tuples(4, Some(0)).unwrap(), vec![TnTuple::empty(4)]);
        assert_eq!(
            enumerate_tuples(4, Some(3)),
            Err(TupleError::LengthOutOfRange { k: 3, max: 2 })
        );
        let all = enumerate_tuples(6, None).unwrap();
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| a.entries().cmp(b.entries()));
        assert_eq!(all, sorted);
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for n in 1..=9 {
            let mut brute = Vec::new();
            for mask in 0u32..(1 << (n - 1)) {
                let entries: Vec<i64> = (1..n as i64).rev().filter(|x| mask >> (x - 1) & 1 == 1).collect();
                if let Ok(t) = check_tuple(n, &entries) {
                    brute.push(t);
                }
            }
            brute.sort_by(|a, b| a.entries().cmp(b.entries()));
            assert_eq!(enumerate_tuples(n, None).unwrap(), brute, "n={n}");
        }
    }

    #[test]
    fn words_of_tuples() {
        let (l, r) = t(9, &[5, 3, 2]).words();
        assert_eq!(l.to_string(), "L5 L3 L2");
        assert_eq!(r.to_string(), "R2 R3 R5");
        let (l, r) = TnTuple::empty(9).words();
        assert!(l.is_empty() && r.is_empty());
        let (l, r) = t(9, &[4]).words();
        assert_eq!((l.to_string().as_str(), r.to_string().as_str()), ("L4", "R4"));
    }

    #[test]
    fn build_examples() {
        let alpha = Tangle::new(
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
        .unwrap();
        assert_eq!(build_tangle(&t(9, &[5, 3, 2]), &t(9, &[7, 4, 1])).unwrap(), alpha);
        assert_eq!(factorize(&alpha), (t(9, &[5, 3, 2]), t(9, &[7, 4, 1])));
        assert_eq!(
            build_tangle(&TnTuple::empty(6), &TnTuple::empty(6)).unwrap(),
            Tangle::identity(6).unwrap()
        );
        let expected = Tangle::new(5, [(2, 3), (-4, -5), (1, -1), (4, -2), (5, -3)]).unwrap();
        assert_eq!(build_tangle(&t(5, &[2]), &t(5, &[4])).unwrap(), expected);
        let e2 = Tangle::generator(5, GeneratorKind::E, 2).unwrap();
        assert_eq!(factorize(&e2), (t(5, &[2]), t(5, &[2])));
        assert_eq!(
            build_tangle(&t(5, &[2]), &TnTuple::empty(5)),
            Err(TupleError::LengthMismatch(1, 0))
        );
        assert_eq!(
            build_tangle(&t(5, &[2]), &t(6, &[2])),
            Err(TupleError::DegreeMismatch(5, 6))
        );
    }

    #[test]
    fn text_format() {
        let x = t(9, &[5, 3, 2]);
        assert_eq!(x.to_line(), "n=9; x=(5,3,2)");
        assert_eq!(TnTuple::empty(4).to_line(), "n=4; x=()");
        assert_eq!("n=9; x=(5,3,2)".parse::<TnTuple>().unwrap(), x);
        assert_eq!("n=4; x=()".parse::<TnTuple>().unwrap(), TnTuple::empty(4));
        assert_eq!(TnTuple::parse(9, "5,3,2").unwrap(), x);
    }
}
