//! The twisted semigroup algebra: linear combinations of tangles where the
//! product of two basis tangles is rescaled by `δ^m`, `m` the number of
//! loops the composition removes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::presentations::{twist_relations, Alphabet, Letter, PresentationError, Word};
use crate::tangle::{Tangle, TangleError};

pub type Rational = BigRational;

/// Coefficients: any exact field with decidable equality.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Add<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

pub fn power<S: Scalar>(delta: &S, m: usize) -> S {
    num_traits::pow::pow(delta.clone(), m)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("twist parameter must be non-zero")]
    ZeroDelta,
    #[error("letter {0} is not an E letter")]
    Alphabet(Letter),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// A finite linear combination of degree-`n` tangles. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S = Rational> {
    n: usize,
    terms: BTreeMap<Tangle, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Result<Self, AlgebraError> {
        Ok(Self::basis(Tangle::identity(n)?))
    }

    pub fn basis(t: Tangle) -> Self {
        Self::term(S::one(), t)
    }

    pub fn term(c: S, t: Tangle) -> Self {
        let mut e = Self::zero(t.degree());
        e.accumulate(t, c);
        e
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tangle, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &Tangle) -> S {
        self.terms.get(t).cloned().unwrap_or_else(S::zero)
    }

    fn accumulate(&mut self, t: Tangle, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DegreeMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.accumulate(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (t, a) in &self.terms {
            out.accumulate(t.clone(), c.clone() * a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// The twisted product: bilinear extension of `α ⋆ β = δ^{m(α,β)} αβ`.
    /// `δ = 0` is allowed here.
    pub fn mul(&self, other: &Self, delta: &S) -> Result<Self, AlgebraError> {
        self.check_degree(other)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (ab, m) = a.compose_unchecked(b);
                out.accumulate(ab, power(delta, m) * ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `delta=<q>; n=<n>;` followed by one `<q> * <tangle>` line per term.
    pub fn to_text(&self, delta: &S) -> String {
        let mut s = format!("delta={delta}; n={};\n", self.n);
        for (t, c) in &self.terms {
            s.push_str(&format!("{c} * {t}\n"));
        }
        s
    }
}

impl<S: Scalar + FromStr> AlgebraElement<S> {
    /// Parses the output of [`AlgebraElement::to_text`], returning `δ` too.
    pub fn parse_text(s: &str) -> Result<(S, Self), AlgebraError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| AlgebraError::Parse("empty input".into()))?;
        let mut delta = None;
        let mut n = None;
        for field in header.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            match field.split_once('=') {
                Some(("delta", v)) => {
                    delta = Some(v.trim().parse::<S>().map_err(|_| AlgebraError::Parse(v.into()))?)
                }
                Some(("n", v)) => {
                    n = Some(
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| AlgebraError::Parse(v.into()))?,
                    )
                }
                _ => return Err(AlgebraError::Parse(field.into())),
            }
        }
        let (Some(delta), Some(n)) = (delta, n) else {
            return Err(AlgebraError::Parse(header.into()));
        };
        let mut out = Self::zero(n);
        for line in lines {
            let (c, t) = line
                .split_once('*')
                .ok_or_else(|| AlgebraError::Parse(line.into()))?;
            let c = c
                .trim()
                .parse::<S>()
                .map_err(|_| AlgebraError::Parse(c.trim().into()))?;
            let t: Tangle = t.trim().parse()?;
            if t.degree() != n {
                return Err(AlgebraError::DegreeMismatch(n, t.degree()));
            }
            out.accumulate(t, c);
        }
        Ok((delta, out))
    }
}

fn require_e(w: &Word) -> Result<(), AlgebraError> {
    if w.degree() < 3 {
        return Err(PresentationError::DegreeTooSmall(w.degree()).into());
    }
    match w.letters().iter().find(|l| l.alphabet != Alphabet::E) {
        Some(&l) => Err(AlgebraError::Alphabet(l)),
        None => Ok(()),
    }
}

/// `δ^{m(w)} · w̄` for a word over `E`.
pub fn alg_eval_word<S: Scalar>(w: &Word, delta: &S) -> Result<AlgebraElement<S>, AlgebraError> {
    require_e(w)?;
    let (t, m) = crate::presentations::evaluate(w);
    Ok(AlgebraElement::term(power(delta, m), t))
}

/// The image of a word computed as an explicit `⋆`-product of generators.
fn star_chain<S: Scalar>(w: &Word, delta: &S) -> AlgebraElement<S> {
    let n = w.degree();
    let mut acc = AlgebraElement::basis(Tangle::identity_unchecked(n));
    for &l in w.letters() {
        let g = AlgebraElement::basis(l.tangle(n));
        acc = acc.mul(&g, delta).expect("same degree");
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct XiPrimeCheck {
    pub relation: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct XiPrimeReport {
    pub n: usize,
    pub delta: String,
    pub checks: Vec<XiPrimeCheck>,
    pub all_pass: bool,
}

/// Checks every relation `δ^{m(v)} u = δ^{m(u)} v` in the twisted algebra.
pub fn verify_xi_prime<S: Scalar>(n: usize, delta: &S) -> Result<XiPrimeReport, AlgebraError> {
    if delta.is_zero() {
        return Err(AlgebraError::ZeroDelta);
    }
    let checks: Vec<XiPrimeCheck> = twist_relations(n, delta)?
        .into_iter()
        .map(|r| {
            let lhs = star_chain(&r.lhs, delta).scale(&r.lhs_coeff);
            let rhs = star_chain(&r.rhs, delta).scale(&r.rhs_coeff);
            XiPrimeCheck {
                relation: r.to_string(),
                pass: lhs == rhs,
            }
        })
        .collect();
    Ok(XiPrimeReport {
        n,
        delta: delta.to_string(),
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
