//! Certified normal forms.
//!
//! Every function here returns a [`Derivation`]: the list of single relation
//! applications that turns its input into its output. Derivations can be
//! written to text, read back and re-checked with [`check_derivation`]
//! without trusting the code that produced them.

mod reduce;
mod translate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::presentations::{
    apply_in_place, evaluate, hat, Alphabet, Family, Letter, PresentationError, Step, Word,
};
use crate::tangle::Tangle;
use crate::tuples::TnTuple;

use reduce::Tracer;
pub(crate) use translate::Templates;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("step {index}: {reason}")]
    BadStep { index: usize, reason: String },
    #[error("step {index}: {relation} is not a relation of {family}")]
    FamilyViolation {
        index: usize,
        relation: String,
        family: Family,
    },
    #[error("derivation ends at {found}, but claims {expected}")]
    EndMismatch { expected: String, found: String },
    #[error("start and end words evaluate to different tangles")]
    EvaluationMismatch,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A replayable rewrite sequence `start → ... → end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub family: Family,
    pub start: Word,
    pub steps: Vec<Step>,
    pub end: Word,
    /// The original word when `E` letters were replaced by `λ_i ρ_i` before
    /// rewriting over `L ∪ R`.
    pub lifted_from: Option<Word>,
}

impl Derivation {
    pub fn degree(&self) -> usize {
        self.start.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn from_tracer(family: Family, start: Word, tr: Tracer) -> Self {
        let end = Word::new(start.degree(), tr.word).expect("rewriting keeps indices in range");
        Derivation {
            family,
            start,
            steps: tr.steps,
            end,
            lifted_from: None,
        }
    }

    /// Parses the text form written by `Display`.
    pub fn parse(s: &str) -> Result<Self, CertError> {
        let err = |line: usize, reason: String| CertError::Parse { line, reason };
        let mut n = None;
        let mut family = None;
        let mut start = None;
        let mut end = None;
        let mut lifted_from = None;
        let mut steps = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("# lifted from:") {
                let n = n.ok_or_else(|| err(line_no, "annotation before header".into()))?;
                lifted_from = Some(Word::parse(n, rest).map_err(|e| err(line_no, e.to_string()))?);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n.is_none() {
                for field in line.split(';').map(str::trim) {
                    match field.split_once('=') {
                        Some(("n", v)) => {
                            n = Some(
                                v.trim()
                                    .parse::<usize>()
                                    .map_err(|_| err(line_no, format!("bad degree {v:?}")))?,
                            )
                        }
                        Some(("family", v)) => {
                            family = Some(v.parse::<Family>().map_err(|e| err(line_no, e.to_string()))?)
                        }
                        _ => return Err(err(line_no, format!("unexpected header field {field:?}"))),
                    }
                }
                if n.is_none() || family.is_none() {
                    return Err(err(line_no, "header needs n=<int>; family=<Omega|Xi>".into()));
                }
                continue;
            }
            let deg = n.expect("header parsed");
            if let Some(w) = line.strip_prefix("start=") {
                start = Some(Word::parse(deg, w).map_err(|e| err(line_no, e.to_string()))?);
            } else if let Some(w) = line.strip_prefix("end=") {
                end = Some(Word::parse(deg, w).map_err(|e| err(line_no, e.to_string()))?);
            } else if end.is_some() {
                return Err(err(line_no, "content after end= line".into()));
            } else {
                steps.push(line.parse::<Step>().map_err(|e| err(line_no, e.to_string()))?);
            }
        }
        let total = s.lines().count();
        let (Some(_), Some(family)) = (n, family) else {
            return Err(err(total, "missing header".into()));
        };
        let start = start.ok_or_else(|| err(total, "missing start= line".into()))?;
        let end = end.ok_or_else(|| err(total, "missing end= line".into()))?;
        Ok(Derivation {
            family,
            start,
            steps,
            end,
            lifted_from,
        })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}; family={}", self.degree(), self.family)?;
        if let Some(w) = &self.lifted_from {
            writeln!(f, "# lifted from: {w}")?;
        }
        writeln!(f, "start={}", self.start)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "end={}", self.end)
    }
}

impl FromStr for Derivation {
    type Err = CertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Derivation::parse(s)
    }
}

/// Replays `d`, checking that every step uses a relation of `family` and
/// matches where it claims to. Returns the end word.
pub fn check_derivation(d: &Derivation, family: Family) -> Result<Word, CertError> {
    let n = d.degree();
    let mut letters = d.start.letters().to_vec();
    for (index, &step) in d.steps.iter().enumerate() {
        if step.relation.family() != family {
            return Err(CertError::FamilyViolation {
                index,
                relation: step.relation.to_string(),
                family,
            });
        }
        apply_in_place(n, &mut letters, step).map_err(|e| CertError::BadStep {
            index,
            reason: e.to_string(),
        })?;
    }
    let w = Word::new(n, letters).expect("relations keep indices in range");
    if w != d.end {
        return Err(CertError::EndMismatch {
            expected: d.end.to_string(),
            found: w.to_string(),
        });
    }
    if evaluate(&d.start).0 != evaluate(&w).0 {
        return Err(CertError::EvaluationMismatch);
    }
    if let Some(orig) = &d.lifted_from {
        if orig.lift_e() != d.start {
            return Err(CertError::BadStep {
                index: 0,
                reason: "start is not the lift of the annotated word".into(),
            });
        }
    }
    Ok(w)
}

/// The canonical balanced pair `(x, y)`, representing `λ_x ρ_y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub x: TnTuple,
    pub y: TnTuple,
}

impl NormalForm {
    pub fn word(&self) -> Word {
        let (l, _) = self.x.words();
        let (_, r) = self.y.words();
        l.concat(&r).expect("same degree")
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} y={}", self.x, self.y)
    }
}

fn require_degree(w: &Word) -> Result<(), RewriteError> {
    if w.degree() < 3 {
        return Err(PresentationError::DegreeTooSmall(w.degree()).into());
    }
    Ok(())
}

fn require_only(w: &Word, allowed: &[Alphabet], what: &'static str) -> Result<(), RewriteError> {
    match w.letters().iter().find(|l| !allowed.contains(&l.alphabet)) {
        Some(&l) => Err(PresentationError::Alphabet(l, what).into()),
        None => Ok(()),
    }
}

fn tuple(n: usize, entries: Vec<usize>) -> TnTuple {
    TnTuple::from_entries(n, entries).expect("reduction always produces a T_n tuple")
}

/// Reduces a pure-`L` word to `λ_x` or a pure-`R` word to `ρ_z` using only
/// the one-sided relations.
pub fn reduce_one_sided(w: &Word) -> Result<(TnTuple, Derivation), RewriteError> {
    require_degree(w)?;
    let n = w.degree();
    let side = w.letters().first().map_or(Alphabet::L, |l| l.alphabet);
    require_only(w, &[side], "expected a word over a single alphabet L or R")?;
    let mut tr = Tracer::new(n, w.letters().to_vec());
    let t = match side {
        Alphabet::L => reduce::reduce_left(&mut tr, 0, w.len()),
        Alphabet::R => reduce::reduce_right(&mut tr, 0, w.len()),
        Alphabet::E => return Err(PresentationError::Alphabet(w.letters()[0], "expected L or R").into()),
    };
    Ok((tuple(n, t), Derivation::from_tracer(Family::Omega, w.clone(), tr)))
}

/// Moves `λ_j` leftwards through the `R`-word `p`: `p λ_j ∼ u p'` with
/// `|p'| <= |p|`, using only the mixed relations.
pub fn push_lambda(p: &Word, j: usize) -> Result<(Word, Word, Derivation), RewriteError> {
    require_degree(p)?;
    require_only(p, &[Alphabet::R], "expected an R word")?;
    let n = p.degree();
    let start = p.concat(&Word::new(n, vec![Letter::lambda(j)])?)?;
    let mut tr = Tracer::new(n, start.letters().to_vec());
    let (a, b) = reduce::push(&mut tr, 0, p.len(), j);
    let u = Word::new(n, tr.word[..a.len()].to_vec())?;
    let v = Word::new(n, tr.word[a.len()..a.len() + b].to_vec())?;
    Ok((u, v, Derivation::from_tracer(Family::Omega, start, tr)))
}

fn lift(w: &Word) -> (Word, Option<Word>) {
    if w.letters().iter().any(|l| l.alphabet == Alphabet::E) {
        (w.lift_e(), Some(w.clone()))
    } else {
        (w.clone(), None)
    }
}

/// Rewrites a word over `L ∪ R` to `u v` with `u = λ_x` and `v = ρ_z` reduced.
pub fn separate(w: &Word) -> Result<(Word, Word, Derivation), RewriteError> {
    require_degree(w)?;
    let n = w.degree();
    let (start, lifted_from) = lift(w);
    let mut tr = Tracer::new(n, start.letters().to_vec());
    let (x, z) = reduce::separate_all(&mut tr);
    let u = tuple(n, x).words().0;
    let v = tuple(n, z).words().1;
    let mut d = Derivation::from_tracer(Family::Omega, start, tr);
    d.lifted_from = lifted_from;
    Ok((u, v, d))
}

fn omega_normal_form(start: &Word) -> (NormalForm, Tracer) {
    let n = start.degree();
    let mut tr = Tracer::new(n, start.letters().to_vec());
    let (x, z) = reduce::separate_all(&mut tr);
    let (x, y) = reduce::balance(&mut tr, x, z);
    assert_eq!(x.len(), y.len(), "balancing produced unequal lengths");
    let nf = NormalForm {
        x: tuple(n, x),
        y: tuple(n, y),
    };
    debug_assert_eq!(tr.word, nf.word().into_letters());
    (nf, tr)
}

/// The normal form `λ_x ρ_y` of a word over `L ∪ R`, with its `Ω`-derivation.
/// `E` letters are first replaced by `λ_i ρ_i`.
pub fn normal_form(w: &Word) -> Result<(NormalForm, Derivation), RewriteError> {
    require_degree(w)?;
    let (start, lifted_from) = lift(w);
    let (nf, tr) = omega_normal_form(&start);
    let mut d = Derivation::from_tracer(Family::Omega, start, tr);
    d.lifted_from = lifted_from;
    Ok((nf, d))
}

/// Normal form of a word over `E`, with a `Ξ`-derivation from `w` to the
/// canonical word `hat(λ_x ρ_y)`.
pub fn normal_form_e(w: &Word) -> Result<(NormalForm, Word, Derivation), RewriteError> {
    require_degree(w)?;
    let mut templates = Templates::new(w.degree());
    normal_form_e_with(&mut templates, w)
}

pub(crate) fn normal_form_e_with(
    templates: &mut Templates,
    w: &Word,
) -> Result<(NormalForm, Word, Derivation), RewriteError> {
    require_degree(w)?;
    require_only(w, &[Alphabet::E], "expected an E word")?;
    let lifted = w.lift_e();
    let (nf, omega) = omega_normal_form(&lifted);
    let tr = translate::translate(templates, w, lifted.letters(), &omega.steps);
    let canonical = hat(&nf.word())?;
    let d = Derivation::from_tracer(Family::Xi, w.clone(), tr);
    assert_eq!(
        d.end, canonical,
        "translated derivation must end at the canonical E word"
    );
    Ok((nf, canonical, d))
}

/// Outcome of [`equal_words`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equality {
    /// Both derivations end at the same word.
    Equal {
        left: Derivation,
        right: Derivation,
    },
    NotEqual {
        left: Tangle,
        right: Tangle,
    },
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal { .. })
    }
}

/// Decides `w1 = w2` in the monoid. Two pure-`E` words are compared over
/// `Ξ`; anything else is lifted to `L ∪ R` and compared over `Ω`.
pub fn equal_words(w1: &Word, w2: &Word) -> Result<Equality, RewriteError> {
    if w1.degree() != w2.degree() {
        return Err(PresentationError::DegreeMismatch(w1.degree(), w2.degree()).into());
    }
    require_degree(w1)?;
    let pure_e = |w: &Word| w.uses_only(&[Alphabet::E]);
    if pure_e(w1) && pure_e(w2) {
        let mut templates = Templates::new(w1.degree());
        let (nf1, _, d1) = normal_form_e_with(&mut templates, w1)?;
        let (nf2, _, d2) = normal_form_e_with(&mut templates, w2)?;
        return Ok(decide(nf1, d1, nf2, d2));
    }
    let (nf1, d1) = normal_form(w1)?;
    let (nf2, d2) = normal_form(w2)?;
    Ok(decide(nf1, d1, nf2, d2))
}

fn decide(nf1: NormalForm, d1: Derivation, nf2: NormalForm, d2: Derivation) -> Equality {
    if nf1 == nf2 {
        Equality::Equal { left: d1, right: d2 }
    } else {
        Equality::NotEqual {
            left: evaluate(&nf1.word()).0,
            right: evaluate(&nf2.word()).0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{Direction, RelId};

    fn w(n: usize, s: &str) -> Word {
        Word::parse(n, s).unwrap()
    }

    fn t(n: usize, e: &[usize]) -> TnTuple {
        TnTuple::from_entries(n, e.to_vec()).unwrap()
    }

    #[test]
    fn one_sided_examples() {
        let (x, d) = reduce_one_sided(&w(5, "L1 L4")).unwrap();
        assert_eq!(x, t(5, &[1]));
        assert_eq!(d.steps, vec![Step::new(0, RelId::L1(1), Direction::Forward)]);
        assert_eq!(check_derivation(&d, Family::Omega).unwrap(), w(5, "L1"));

        let (x, d) = reduce_one_sided(&w(5, "L4 L3")).unwrap();
        assert_eq!(x, t(5, &[4]));
        assert_eq!(d.steps, vec![Step::new(0, RelId::L3(1), Direction::Forward)]);

        let (x, d) = reduce_one_sided(&w(5, "L1 L1")).unwrap();
        assert_eq!(x, t(5, &[3, 1]));
        assert_eq!(d.end, w(5, "L3 L1"));

        let (z, d) = reduce_one_sided(&w(5, "R1 R1")).unwrap();
        assert_eq!(z, t(5, &[3, 1]));
        assert_eq!(d.end, w(5, "R1 R3"));
        assert!(d.steps.iter().all(|s| s.relation.is_right()));

        assert!(reduce_one_sided(&w(5, "L1 R1")).is_err());
        assert!(reduce_one_sided(&w(2, "L1")).is_err());
    }

    #[test]
    fn push_examples() {
        let (u, v, d) = push_lambda(&w(5, "R2"), 2).unwrap();
        assert_eq!((u, v), (w(5, "L4"), Word::empty(5)));
        assert_eq!(d.steps, vec![Step::new(0, RelId::RL2(2, 2), Direction::Forward)]);

        let (u, v, d) = push_lambda(&w(5, "R4"), 1).unwrap();
        assert_eq!((u, v), (w(5, "L4 L1"), w(5, "R2")));
        assert_eq!(d.steps, vec![Step::new(0, RelId::RL1(4, 1), Direction::Forward)]);

        let (u, v, d) = push_lambda(&Word::empty(7), 3).unwrap();
        assert_eq!((u, v), (w(7, "L3"), Word::empty(7)));
        assert!(d.is_empty());
    }

    #[test]
    fn separate_examples() {
        let (u, v, _) = separate(&w(5, "R2 L2")).unwrap();
        assert_eq!((u, v), (w(5, "L4"), Word::empty(5)));
        let (u, v, d) = separate(&w(5, "L1 R2 L2")).unwrap();
        assert_eq!((u, v), (w(5, "L1"), Word::empty(5)));
        check_derivation(&d, Family::Omega).unwrap();
        let (u, v, d) = separate(&w(9, "L5 L3 L2 R1 R4 R7")).unwrap();
        assert_eq!((u, v), (w(9, "L5 L3 L2"), w(9, "R1 R4 R7")));
        assert!(d.is_empty());
    }

    #[test]
    fn normal_form_examples() {
        let (nf, d) = normal_form(&w(9, "L5 L3 L2 R1 R4 R7")).unwrap();
        assert_eq!(nf.to_string(), "x=(5,3,2) y=(7,4,1)");
        assert!(d.is_empty());
        let (nf, d) = normal_form(&w(5, "R2 L2")).unwrap();
        assert_eq!((nf.x, nf.y), (t(5, &[4]), t(5, &[4])));
        check_derivation(&d, Family::Omega).unwrap();
        let (nf, d) = normal_form(&Word::empty(6)).unwrap();
        assert!(nf.x.is_empty() && nf.y.is_empty() && d.is_empty());
    }

    #[test]
    fn normal_form_needs_padding() {
        for (n, s) in [
            (5, "L1"),
            (6, "L2 L1"),
            (7, "R1 R2"),
            (9, "R1 R1 R1 L8"),
            (4, "E1 L3"),
        ] {
            let word = w(n, s);
            let (nf, d) = normal_form(&word).unwrap();
            let (bl, br) = evaluate(&word).0.boundary_tuples();
            assert_eq!((nf.x.clone(), nf.y.clone()), (bl, br), "{s}");
            assert_eq!(check_derivation(&d, Family::Omega).unwrap(), nf.word());
        }
    }

    #[test]
    fn e_normal_form_examples() {
        let (nf, canon, d) = normal_form_e(&w(5, "E1 E2 E1")).unwrap();
        assert_eq!((nf.x.clone(), nf.y.clone()), (t(5, &[1]), t(5, &[1])));
        assert_eq!(canon, w(5, "E1 E2 E3 E4 E4 E3 E2 E1"));
        assert_eq!(check_derivation(&d, Family::Xi).unwrap(), canon);

        let (nf, canon, _) = normal_form_e(&w(5, "E4 E4")).unwrap();
        assert_eq!(nf.to_string(), "x=(4) y=(4)");
        assert_eq!(canon, w(5, "E4 E4"));

        let a = normal_form_e(&w(5, "E1 E3")).unwrap().0;
        let b = normal_form_e(&w(5, "E3 E1")).unwrap().0;
        assert_eq!(a, b);
        assert!(normal_form_e(&w(5, "L1")).is_err());
    }

    #[test]
    fn equality_examples() {
        let eq = equal_words(&w(5, "E1 E2 E1"), &w(5, "E1")).unwrap();
        let Equality::Equal { left, right } = eq else {
            panic!("expected equal")
        };
        assert_eq!(check_derivation(&left, Family::Xi).unwrap(), right.end);
        assert!(equal_words(&w(5, "L1 L4"), &w(5, "L1")).unwrap().is_equal());
        match equal_words(&w(5, "E1"), &w(5, "E2")).unwrap() {
            Equality::NotEqual { left, right } => {
                assert_eq!(left, Letter::e(1).tangle(5));
                assert_eq!(right, Letter::e(2).tangle(5));
            }
            other => panic!("{other:?}"),
        }
        assert!(equal_words(&w(5, "E1"), &w(6, "E1")).is_err());
    }

    #[test]
    fn certificate_checks() {
        let (_, d) = reduce_one_sided(&w(5, "L1 L4")).unwrap();
        let mut forged = d.clone();
        forged.steps[0] = Step::new(0, RelId::E3(1, 2), Direction::Forward);
        assert!(matches!(
            check_derivation(&forged, Family::Xi),
            Err(CertError::BadStep { index: 0, .. })
        ));
        assert!(matches!(
            check_derivation(&forged, Family::Omega),
            Err(CertError::FamilyViolation { .. })
        ));
        let mut wrong_end = d.clone();
        wrong_end.end = w(5, "L2");
        assert!(matches!(
            check_derivation(&wrong_end, Family::Omega),
            Err(CertError::EndMismatch { .. })
        ));
        let empty = Derivation {
            family: Family::Xi,
            start: w(4, "E1 E3"),
            steps: vec![],
            end: w(4, "E1 E3"),
            lifted_from: None,
        };
        assert_eq!(check_derivation(&empty, Family::Xi).unwrap(), w(4, "E1 E3"));
    }

    #[test]
    fn certificate_text_round_trip() {
        let (_, d) = normal_form(&w(6, "E2 R1 L3")).unwrap();
        let text = d.to_string();
        assert!(text.starts_with("n=6; family=Omega\n# lifted from: E2 R1 L3\nstart=L2 R2 R1 L3\n"));
        assert_eq!(text.parse::<Derivation>().unwrap(), d);
        assert!("n=6; family=Omega\nstart=1\n0:L1(9):fwd\nend=1\n"
            .parse::<Derivation>()
            .is_ok());
        assert!(matches!(
            "n=6; family=Omega\nstart=1\nbogus\nend=1\n".parse::<Derivation>(),
            Err(CertError::Parse { line: 3, .. })
        ));
    }
}
