//! Alphabets, words and the relation sets of the two monoid presentations.
//!
//! Relations are instantiated for a concrete degree; powers such as
//! `λ_{n-2i+1}^i` are expanded into explicit letters so that a rewrite step
//! is a plain positional substitution.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::algebra::Scalar;
use crate::tangle::{GeneratorKind, Tangle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unrecognised token {0:?}")]
    Parse(String),
    #[error("letter {token} out of range for degree {n} (indices run 1..={})", .n.saturating_sub(1))]
    Index { token: String, n: usize },
    #[error("letter {0} is not allowed here ({1})")]
    Alphabet(Letter, &'static str),
    #[error("presentations need degree at least 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{0} is not a relation of degree {1}")]
    InvalidRelation(RelId, usize),
    #[error("step {step}: expected {expected} at position {position}, found {found}")]
    NoMatch {
        step: Step,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("twist parameter must be non-zero")]
    ZeroDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Alphabet {
    L,
    R,
    E,
}

impl Alphabet {
    fn symbol(self) -> char {
        match self {
            Alphabet::L => 'L',
            Alphabet::R => 'R',
            Alphabet::E => 'E',
        }
    }

    fn kind(self) -> GeneratorKind {
        match self {
            Alphabet::L => GeneratorKind::Lambda,
            Alphabet::R => GeneratorKind::Rho,
            Alphabet::E => GeneratorKind::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub alphabet: Alphabet,
    pub index: u16,
}

impl Letter {
    pub fn lambda(i: usize) -> Self {
        Letter {
            alphabet: Alphabet::L,
            index: i as u16,
        }
    }

    pub fn rho(i: usize) -> Self {
        Letter {
            alphabet: Alphabet::R,
            index: i as u16,
        }
    }

    pub fn e(i: usize) -> Self {
        Letter {
            alphabet: Alphabet::E,
            index: i as u16,
        }
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn tangle(self, n: usize) -> Tangle {
        Tangle::generator(n, self.alphabet.kind(), self.index()).expect("letter index checked against degree")
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alphabet.symbol(), self.index)
    }
}

/// A word over `L ∪ R ∪ E` for a fixed degree. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    n: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self, PresentationError> {
        for l in &letters {
            if l.index == 0 || l.index() >= n {
                return Err(PresentationError::Index {
                    token: l.to_string(),
                    n,
                });
            }
        }
        Ok(Word { n, letters })
    }

    pub(crate) fn from_letters_unchecked(n: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| l.index >= 1 && l.index() < n));
        Word { n, letters }
    }

    pub fn empty(n: usize) -> Self {
        Word {
            n,
            letters: Vec::new(),
        }
    }

    /// Parses whitespace-separated tokens `L<i>`, `R<i>`, `E<i>`
    /// (case-insensitive); `1` or the empty string is the empty word.
    pub fn parse(n: usize, s: &str) -> Result<Self, PresentationError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty(n));
        }
        let letters = s
            .split_whitespace()
            .map(|tok| {
                let mut chars = tok.chars();
                let alphabet = match chars.next().map(|c| c.to_ascii_uppercase()) {
                    Some('L') => Alphabet::L,
                    Some('R') => Alphabet::R,
                    Some('E') => Alphabet::E,
                    _ => return Err(PresentationError::Parse(tok.to_string())),
                };
                let index: u16 = chars
                    .as_str()
                    .parse()
                    .map_err(|_| PresentationError::Parse(tok.to_string()))?;
                if index == 0 || index as usize >= n {
                    return Err(PresentationError::Index {
                        token: tok.to_string(),
                        n,
                    });
                }
                Ok(Letter { alphabet, index })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { n, letters })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word, PresentationError> {
        if self.n != other.n {
            return Err(PresentationError::DegreeMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    pub fn uses_only(&self, allowed: &[Alphabet]) -> bool {
        self.letters.iter().all(|l| allowed.contains(&l.alphabet))
    }

    /// Replaces every `e_i` by `λ_i ρ_i`, leaving other letters alone.
    pub fn lift_e(&self) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if l.alphabet == Alphabet::E {
                letters.push(Letter::lambda(l.index()));
                letters.push(Letter::rho(l.index()));
            } else {
                letters.push(l);
            }
        }
        Word { n: self.n, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Names a relation schema together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelId {
    L1(u16),
    L2(u16, u16),
    L3(u16),
    R1(u16),
    R2(u16, u16),
    R3(u16),
    RL1(u16, u16),
    RL2(u16, u16),
    RL3(u16, u16),
    /// `λ_{n-1} = ρ_{n-1}`, the second equality of the (RL2) schema.
    RL2b,
    E1(u16),
    E2(u16, u16),
    E3(u16, u16),
}

/// The derivation families a certificate can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Omega,
    Xi,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Omega => "Omega",
            Family::Xi => "Xi",
        })
    }
}

impl FromStr for Family {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Omega" => Ok(Family::Omega),
            "Xi" => Ok(Family::Xi),
            other => Err(PresentationError::Parse(other.to_string())),
        }
    }
}

/// Selector for [`relation_set`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationSet {
    OmegaL,
    OmegaR,
    Omega,
    Xi,
}

impl RelId {
    pub fn family(self) -> Family {
        match self {
            RelId::E1(_) | RelId::E2(..) | RelId::E3(..) => Family::Xi,
            _ => Family::Omega,
        }
    }

    pub fn is_left(self) -> bool {
        matches!(self, RelId::L1(_) | RelId::L2(..) | RelId::L3(_))
    }

    pub fn is_right(self) -> bool {
        matches!(self, RelId::R1(_) | RelId::R2(..) | RelId::R3(_))
    }

    pub fn is_mixed(self) -> bool {
        matches!(
            self,
            RelId::RL1(..) | RelId::RL2(..) | RelId::RL3(..) | RelId::RL2b
        )
    }
}

impl fmt::Display for RelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelId::L1(i) => write!(f, "L1({i})"),
            RelId::L2(i, j) => write!(f, "L2({i},{j})"),
            RelId::L3(i) => write!(f, "L3({i})"),
            RelId::R1(i) => write!(f, "R1({i})"),
            RelId::R2(i, j) => write!(f, "R2({i},{j})"),
            RelId::R3(i) => write!(f, "R3({i})"),
            RelId::RL1(i, j) => write!(f, "RL1({i},{j})"),
            RelId::RL2(i, j) => write!(f, "RL2({i},{j})"),
            RelId::RL3(i, j) => write!(f, "RL3({i},{j})"),
            RelId::RL2b => write!(f, "RL2b"),
            RelId::E1(i) => write!(f, "E1({i})"),
            RelId::E2(i, j) => write!(f, "E2({i},{j})"),
            RelId::E3(i, j) => write!(f, "E3({i},{j})"),
        }
    }
}

impl FromStr for RelId {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || PresentationError::Parse(s.to_string());
        if s == "RL2b" {
            return Ok(RelId::RL2b);
        }
        let open = s.find('(').ok_or_else(bad)?;
        let name = &s[..open];
        let args = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let params: Vec<u16> = args
            .split(',')
            .map(|t| t.trim().parse::<u16>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let one = |f: fn(u16) -> RelId| match params[..] {
            [i] => Ok(f(i)),
            _ => Err(bad()),
        };
        let two = |f: fn(u16, u16) -> RelId| match params[..] {
            [i, j] => Ok(f(i, j)),
            _ => Err(bad()),
        };
        match name {
            "L1" => one(RelId::L1),
            "L2" => two(RelId::L2),
            "L3" => one(RelId::L3),
            "R1" => one(RelId::R1),
            "R2" => two(RelId::R2),
            "R3" => one(RelId::R3),
            "RL1" => two(RelId::RL1),
            "RL2" => two(RelId::RL2),
            "RL3" => two(RelId::RL3),
            "E1" => one(RelId::E1),
            "E2" => two(RelId::E2),
            "E3" => two(RelId::E3),
            _ => Err(bad()),
        }
    }
}

/// An instantiated relation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub id: RelId,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    /// Instantiates `id` in degree `n`, checking the schema's side conditions.
    pub fn instantiate(n: usize, id: RelId) -> Result<Relation, PresentationError> {
        let (lhs, rhs) = sides(n, id)?;
        Ok(Relation {
            id,
            lhs: Word::from_letters_unchecked(n, lhs.into_vec()),
            rhs: Word::from_letters_unchecked(n, rhs.into_vec()),
        })
    }
}

type Side = SmallVec<[Letter; 8]>;

pub(crate) fn side_lens(n: usize, id: RelId) -> Result<(usize, usize), PresentationError> {
    sides(n, id).map(|(l, r)| (l.len(), r.len()))
}

/// Both sides of relation `id` in degree `n`, after checking side conditions.
fn sides(n: usize, id: RelId) -> Result<(Side, Side), PresentationError> {
    if n < 3 {
        return Err(PresentationError::DegreeTooSmall(n));
    }
    let invalid = || PresentationError::InvalidRelation(id, n);
    let n16 = n as i64;
    let ok = |i: u16| (1..n16).contains(&(i as i64));
    let l = |i: i64| Letter::lambda(i as usize);
    let r = |i: i64| Letter::rho(i as usize);
    let e = |i: i64| Letter::e(i as usize);
    let (lhs, rhs): (Side, Side) = match id {
        RelId::L1(i) | RelId::R1(i) | RelId::E1(i) if !ok(i) => return Err(invalid()),
        RelId::L1(i) => (smallvec![l(i.into()), l(n16 - 1)], smallvec![l(i.into())]),
        RelId::R1(i) => (smallvec![r(n16 - 1), r(i.into())], smallvec![r(i.into())]),
        RelId::E1(i) => (smallvec![e(i.into()); 2], smallvec![e(i.into())]),
        RelId::L2(i, j) | RelId::R2(i, j) => {
            let (i, j) = (i as i64, j as i64);
            if !(1 <= i && i <= j && j <= n16 - 3) {
                return Err(invalid());
            }
            if matches!(id, RelId::L2(..)) {
                (smallvec![l(i), l(j)], smallvec![l(j + 2), l(i)])
            } else {
                (smallvec![r(j), r(i)], smallvec![r(i), r(j + 2)])
            }
        }
        RelId::L3(i) | RelId::R3(i) => {
            let i = i as i64;
            if i < 1 || n16 - 2 * i < 1 {
                return Err(invalid());
            }
            let k = n16 - 2 * i + 1;
            if matches!(id, RelId::L3(_)) {
                let power = smallvec![l(k); i as usize];
                let mut lhs = power.clone();
                lhs.push(l(k - 1));
                (lhs, power)
            } else {
                let power = smallvec![r(k); i as usize];
                let mut lhs = smallvec![r(k - 1)];
                lhs.extend_from_slice(&power);
                (lhs, power)
            }
        }
        RelId::RL1(i, j) => {
            let (i, j) = (i as i64, j as i64);
            if !(ok(i as u16) && j >= 1 && j <= i - 2) {
                return Err(invalid());
            }
            (smallvec![r(i), l(j)], smallvec![l(n16 - 1), l(j), r(i - 2)])
        }
        RelId::RL2(i, j) => {
            let (i, j) = (i as i64, j as i64);
            if !(ok(i as u16) && ok(j as u16) && (i - j).abs() <= 1) {
                return Err(invalid());
            }
            (smallvec![r(i), l(j)], smallvec![l(n16 - 1)])
        }
        RelId::RL3(i, j) => {
            let (i, j) = (i as i64, j as i64);
            if !(i >= 1 && ok(j as u16) && j >= i + 2) {
                return Err(invalid());
            }
            (smallvec![r(i), l(j)], smallvec![l(n16 - 1), l(j - 2), r(i)])
        }
        RelId::RL2b => (smallvec![l(n16 - 1)], smallvec![r(n16 - 1)]),
        RelId::E2(i, j) => {
            if !(ok(i) && ok(j) && i.abs_diff(j) > 1) {
                return Err(invalid());
            }
            (
                smallvec![e(i.into()), e(j.into())],
                smallvec![e(j.into()), e(i.into())],
            )
        }
        RelId::E3(i, j) => {
            if !(ok(i) && ok(j) && i.abs_diff(j) == 1) {
                return Err(invalid());
            }
            (
                smallvec![e(i.into()), e(j.into()), e(i.into())],
                smallvec![e(i.into())],
            )
        }
    };
    Ok((lhs, rhs))
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.id, self.lhs, self.rhs)
    }
}

/// All instances of the requested relation set in degree `n`.
pub fn relation_set(n: usize, which: RelationSet) -> Result<Vec<Relation>, PresentationError> {
    if n < 3 {
        return Err(PresentationError::DegreeTooSmall(n));
    }
    let m = (n - 1) as u16;
    let mut ids = Vec::new();
    let left = |ids: &mut Vec<RelId>| {
        ids.extend((1..=m).map(RelId::L1));
        for i in 1..=m {
            ids.extend((i..=m.saturating_sub(2)).map(|j| RelId::L2(i, j)));
        }
        ids.extend((1..=((n - 1) / 2) as u16).map(RelId::L3));
    };
    let right = |ids: &mut Vec<RelId>| {
        ids.extend((1..=m).map(RelId::R1));
        for i in 1..=m {
            ids.extend((i..=m.saturating_sub(2)).map(|j| RelId::R2(i, j)));
        }
        ids.extend((1..=((n - 1) / 2) as u16).map(RelId::R3));
    };
    match which {
        RelationSet::OmegaL => left(&mut ids),
        RelationSet::OmegaR => right(&mut ids),
        RelationSet::Omega => {
            left(&mut ids);
            right(&mut ids);
            for i in 1..=m {
                for j in 1..=m {
                    if j + 2 <= i {
                        ids.push(RelId::RL1(i, j));
                    } else if j >= i + 2 {
                        ids.push(RelId::RL3(i, j));
                    } else {
                        ids.push(RelId::RL2(i, j));
                    }
                }
            }
            ids.push(RelId::RL2b);
        }
        RelationSet::Xi => {
            ids.extend((1..=m).map(RelId::E1));
            for i in 1..=m {
                for j in 1..=m {
                    if i.abs_diff(j) > 1 {
                        ids.push(RelId::E2(i, j));
                    } else if i.abs_diff(j) == 1 {
                        ids.push(RelId::E3(i, j));
                    }
                }
            }
        }
    }
    ids.into_iter().map(|id| Relation::instantiate(n, id)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// One application of a relation at a 0-based position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub position: usize,
    pub relation: RelId,
    pub direction: Direction,
}

impl Step {
    pub fn new(position: usize, relation: RelId, direction: Direction) -> Self {
        Step {
            position,
            relation,
            direction,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            direction: self.direction.flip(),
            ..self
        }
    }
}

/// `<pos>:<RelId>:<fwd|bwd>`
impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        };
        write!(f, "{}:{}:{}", self.position, self.relation, dir)
    }
}

impl FromStr for Step {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PresentationError::Parse(s.trim().to_string());
        let mut parts = s.trim().split(':');
        let (Some(pos), Some(rel), Some(dir), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let position = pos.parse().map_err(|_| bad())?;
        let relation = rel.parse()?;
        let direction = match dir {
            "fwd" => Direction::Forward,
            "bwd" => Direction::Backward,
            _ => return Err(bad()),
        };
        Ok(Step {
            position,
            relation,
            direction,
        })
    }
}

/// Applies `step` to a raw letter buffer in place.
pub(crate) fn apply_in_place(
    n: usize,
    letters: &mut Vec<Letter>,
    step: Step,
) -> Result<(), PresentationError> {
    let (lhs, rhs) = sides(n, step.relation)?;
    let (from, to) = match step.direction {
        Direction::Forward => (lhs, rhs),
        Direction::Backward => (rhs, lhs),
    };
    let p = step.position;
    let end = p + from.len();
    if end > letters.len() || letters[p..end] != from[..] {
        let found = letters
            .get(p..end.min(letters.len()))
            .map(|s| Word::from_letters_unchecked(n, s.to_vec()).to_string())
            .unwrap_or_else(|| "end of word".to_string());
        return Err(PresentationError::NoMatch {
            step,
            position: p,
            expected: Word::from_letters_unchecked(n, from.to_vec()).to_string(),
            found,
        });
    }
    if from.len() == to.len() {
        letters[p..end].copy_from_slice(&to);
    } else {
        letters.splice(p..end, to.iter().copied());
    }
    Ok(())
}

/// Rewrites `w` by one relation application.
pub fn apply_step(w: &Word, step: Step) -> Result<Word, PresentationError> {
    let mut letters = w.letters.clone();
    apply_in_place(w.n, &mut letters, step)?;
    Ok(Word { n: w.n, letters })
}

/// The tangle represented by `w`, and the number of loops removed while
/// multiplying its letters out from left to right.
pub fn evaluate(w: &Word) -> (Tangle, usize) {
    let n = w.n;
    let gens: Vec<Option<Tangle>> = if n >= 2 {
        let mut cache = vec![None; 3 * n];
        for l in &w.letters {
            let slot = l.alphabet as usize * n + l.index();
            if cache[slot].is_none() {
                cache[slot] = Some(l.tangle(n));
            }
        }
        cache
    } else {
        Vec::new()
    };
    let mut acc = Tangle::identity(n.max(1)).expect("degree is positive");
    let mut loops = 0;
    for l in &w.letters {
        let g = gens[l.alphabet as usize * n + l.index()]
            .as_ref()
            .expect("cached above");
        let (next, m) = acc.compose_unchecked(g);
        acc = next;
        loops += m;
    }
    (acc, loops)
}

/// The morphism `λ_i ↦ e_i e_{i+1} ... e_{n-1}`, `ρ_i ↦ e_{n-1} ... e_{i+1} e_i`.
pub fn hat(w: &Word) -> Result<Word, PresentationError> {
    let n = w.n;
    let mut letters = Vec::new();
    for &l in &w.letters {
        match l.alphabet {
            Alphabet::L => letters.extend((l.index()..n).map(Letter::e)),
            Alphabet::R => letters.extend((l.index()..n).rev().map(Letter::e)),
            Alphabet::E => return Err(PresentationError::Alphabet(l, "expected L or R")),
        }
    }
    Ok(Word { n, letters })
}

pub(crate) fn hat_len(n: usize, l: Letter) -> usize {
    match l.alphabet {
        Alphabet::E => 1,
        _ => n - l.index(),
    }
}

/// A relation `lhs_coeff · lhs = rhs_coeff · rhs` of the twisted algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedRelation<S> {
    pub id: RelId,
    pub lhs: Word,
    pub rhs: Word,
    pub lhs_coeff: S,
    pub rhs_coeff: S,
}

impl<S: Scalar> fmt::Display for TwistedRelation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: ({}) {} = ({}) {}",
            self.id, self.lhs_coeff, self.lhs, self.rhs_coeff, self.rhs
        )
    }
}

/// Turns each relation `u = v` of the E-presentation into
/// `δ^{m(v)} u = δ^{m(u)} v`.
pub fn twist_relations<S: Scalar>(n: usize, delta: &S) -> Result<Vec<TwistedRelation<S>>, PresentationError> {
    if delta.is_zero() {
        return Err(PresentationError::ZeroDelta);
    }
    let rels = relation_set(n, RelationSet::Xi)?;
    Ok(rels
        .into_iter()
        .map(|r| {
            let m_lhs = evaluate(&r.lhs).1;
            let m_rhs = evaluate(&r.rhs).1;
            TwistedRelation {
                id: r.id,
                lhs_coeff: crate::algebra::power(delta, m_rhs),
                rhs_coeff: crate::algebra::power(delta, m_lhs),
                lhs: r.lhs,
                rhs: r.rhs,
            }
        })
        .collect())
}
