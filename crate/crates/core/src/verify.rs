//! Exhaustive and randomised checks of the presentations at small degrees.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::presentations::{
    apply_step, evaluate, hat, relation_set, Direction, Family, Letter, Relation, RelationSet, Step, Word,
};
use crate::rewrite::{check_derivation, equal_words, normal_form, normal_form_e_with, Templates};
use crate::tangle::Tangle;
use crate::tuples::{build_tangle, enumerate_tuples, factorize};

pub const MAX_ENUMERATION_DEGREE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("degree {0} is outside 1..={MAX_ENUMERATION_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("degree {0} is outside 3..=10")]
    DegreeOutOfRange(usize),
    #[error("fuzzing needs degree at least 3, got {0}")]
    DegreeTooSmall(usize),
}

/// All non-crossing perfect matchings of degree `n`, in a fixed order.
pub fn enumerate_tl(n: usize) -> Result<Vec<Tangle>, VerifyError> {
    if n == 0 || n > MAX_ENUMERATION_DEGREE {
        return Err(VerifyError::DegreeTooLarge(n));
    }
    let mut out = Vec::new();
    let mut partner = vec![u32::MAX; 2 * n];
    fill(&mut partner, &mut out, n);
    Ok(out)
}

fn fill(partner: &mut Vec<u32>, out: &mut Vec<Tangle>, n: usize) {
    let Some(p) = partner.iter().position(|&q| q == u32::MAX) else {
        out.push(Tangle::from_partner(n, partner.clone()));
        return;
    };
    // p pairs with q if the free points strictly between them can be matched
    // among themselves, i.e. no already-paired point lies between them and
    // their count is even
    let mut q = p + 1;
    while q < 2 * n && partner[q] == u32::MAX {
        if (q - p) % 2 == 1 {
            partner[p] = q as u32;
            partner[q] = p as u32;
            fill(partner, out, n);
            partner[p] = u32::MAX;
            partner[q] = u32::MAX;
        }
        q += 1;
    }
}

pub fn catalan(n: usize) -> u64 {
    (0..n).fold(1u64, |c, i| c * 2 * (2 * i as u64 + 1) / (i as u64 + 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str, checked: usize, mut failures: Vec<String>) -> Self {
        failures.truncate(10);
        Check {
            name,
            pass: failures.is_empty(),
            checked,
            failures,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub n: usize,
    pub catalan: u64,
    pub tangles: usize,
    pub normal_forms: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Runs four checks in degree `n`: relation soundness, normal forms versus
/// the enumeration, `E`-generation of every tangle, and factorisation.
pub fn verify_presentation(n: usize) -> Result<PresentationReport, VerifyError> {
    if !(3..=10).contains(&n) {
        return Err(VerifyError::DegreeOutOfRange(n));
    }
    let started = Instant::now();
    let all = enumerate_tl(n)?;

    let mut rels = relation_set(n, RelationSet::Omega).expect("n >= 3");
    rels.extend(relation_set(n, RelationSet::Xi).expect("n >= 3"));
    let bad: Vec<String> = rels
        .par_iter()
        .filter(|r| evaluate(&r.lhs).0 != evaluate(&r.rhs).0)
        .map(|r| r.to_string())
        .collect();
    let relations = Check::new("relations", rels.len(), bad);

    let mut nf_tangles = Vec::new();
    for k in 0..=n / 2 {
        let tuples = enumerate_tuples(n, Some(k)).expect("k in range");
        for x in &tuples {
            for y in &tuples {
                let w = x.words().0.concat(&y.words().1).expect("same degree");
                nf_tangles.push(evaluate(&w).0);
            }
        }
    }
    let image: HashSet<&Tangle> = nf_tangles.iter().collect();
    let all_set: HashSet<&Tangle> = all.iter().collect();
    let mut bij = Vec::new();
    if image.len() != nf_tangles.len() {
        bij.push(format!(
            "{} normal forms but only {} distinct tangles",
            nf_tangles.len(),
            image.len()
        ));
    }
    if image != all_set {
        bij.push(format!(
            "image has {} tangles, enumeration has {}",
            image.len(),
            all_set.len()
        ));
    }
    let bijection = Check::new("normal-form bijection", nf_tangles.len(), bij);

    let bad: Vec<String> = all
        .par_iter()
        .filter(|t| {
            let (x, y) = factorize(t);
            let w = x.words().0.concat(&y.words().1).expect("same degree");
            evaluate(&hat(&w).expect("L/R word")).0 != **t
        })
        .map(|t| t.to_string())
        .collect();
    let generation = Check::new("E-generation", all.len(), bad);

    let bad: Vec<String> = all
        .par_iter()
        .filter(|t| {
            let (x, y) = factorize(t);
            build_tangle(&x, &y).map_or(true, |b| b != **t)
        })
        .map(|t| t.to_string())
        .collect();
    let round_trip = Check::new("factorize/build", all.len(), bad);

    let checks = vec![relations, bijection, generation, round_trip];
    Ok(PresentationReport {
        n,
        catalan: catalan(n),
        tangles: all.len(),
        normal_forms: nf_tangles.len(),
        all_pass: checks.iter().all(|c| c.pass) && all.len() as u64 == catalan(n),
        checks,
        elapsed_ms: Some(started.elapsed().as_millis()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub n: usize,
    pub count: usize,
    pub max_len: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub lr_words: usize,
    pub e_words: usize,
    pub certificates: usize,
    pub equality_triples: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Equality triples are sampled on every `TRIPLE_STRIDE`-th word.
const TRIPLE_STRIDE: usize = 8;

struct Outcome {
    certificates: usize,
    triples: usize,
    mismatches: Vec<String>,
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize, e: bool) -> Word {
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n);
            if e {
                Letter::e(i)
            } else if rng.gen_bool(0.5) {
                Letter::lambda(i)
            } else {
                Letter::rho(i)
            }
        })
        .collect();
    Word::new(n, letters).expect("indices drawn in range")
}

/// Applies up to `steps` random relation applications to `w`.
fn scramble(rng: &mut ChaCha8Rng, rels: &[Relation], w: &Word, steps: usize) -> Word {
    let mut w = w.clone();
    for _ in 0..steps {
        let mut options = Vec::new();
        for r in rels {
            for (side, dir) in [(&r.lhs, Direction::Forward), (&r.rhs, Direction::Backward)] {
                let l = side.letters();
                for p in 0..=w.len().saturating_sub(l.len()) {
                    if w.len() >= l.len() && &w.letters()[p..p + l.len()] == l {
                        options.push(Step::new(p, r.id, dir));
                    }
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let s = options[rng.gen_range(0..options.len())];
        w = apply_step(&w, s).expect("step was matched");
    }
    w
}

fn fuzz_one(
    n: usize,
    max_len: usize,
    seed: u64,
    index: usize,
    omega: &[Relation],
    xi: &[Relation],
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut out = Outcome {
        certificates: 0,
        triples: 0,
        mismatches: Vec::new(),
    };
    let mut templates = Templates::new(n);

    let lr = {
        let len = rng.gen_range(0..=max_len);
        random_word(&mut rng, n, len, false)
    };
    let e = {
        let len = rng.gen_range(0..=max_len);
        random_word(&mut rng, n, len, true)
    };

    let (nf, d) = normal_form(&lr).expect("degree checked");
    let (bl, br) = evaluate(&lr).0.boundary_tuples();
    if (nf.x.clone(), nf.y.clone()) != (bl, br) {
        out.mismatches
            .push(format!("#{index} L/R {lr}: normal form {nf}"));
    }
    if let Err(err) = check_derivation(&d, Family::Omega) {
        out.mismatches
            .push(format!("#{index} L/R {lr}: certificate {err}"));
    }
    out.certificates += 1;

    let (nf, canon, d) = normal_form_e_with(&mut templates, &e).expect("degree checked");
    let (bl, br) = evaluate(&e).0.boundary_tuples();
    if (nf.x.clone(), nf.y.clone()) != (bl, br) {
        out.mismatches.push(format!("#{index} E {e}: normal form {nf}"));
    }
    match check_derivation(&d, Family::Xi) {
        Ok(end) if end == canon => {}
        Ok(end) => out
            .mismatches
            .push(format!("#{index} E {e}: certificate ends at {end}")),
        Err(err) => out.mismatches.push(format!("#{index} E {e}: certificate {err}")),
    }
    out.certificates += 1;

    if index.is_multiple_of(TRIPLE_STRIDE) {
        for (w, rels) in [(&lr, omega), (&e, xi)] {
            let w2 = scramble(&mut rng, rels, w, 3);
            let w3 = scramble(&mut rng, rels, &w2, 3);
            let eq = |a: &Word, b: &Word| equal_words(a, b).expect("same degree").is_equal();
            let ok = eq(w, w) && eq(w, &w2) && eq(&w2, w) && eq(&w2, &w3) && eq(w, &w3);
            if !ok {
                out.mismatches
                    .push(format!("#{index} equality triple {w} / {w2} / {w3}"));
            }
            let other = random_word(&mut rng, n, w.len(), w == &e);
            let same = evaluate(w).0 == evaluate(&other).0;
            if eq(w, &other) != same {
                out.mismatches.push(format!(
                    "#{index} equal_words({w}, {other}) disagrees with tangles"
                ));
            }
            out.triples += 1;
        }
    }
    out
}

/// Normal-form soundness, certificate replay and equality laws on `count`
/// seeded random words over each alphabet. Word `i` is drawn from stream `i`
/// of a ChaCha8 generator seeded with `seed`, so results do not depend on
/// scheduling.
pub fn fuzz_words(n: usize, count: usize, max_len: usize, seed: u64) -> Result<FuzzReport, VerifyError> {
    if n < 3 {
        return Err(VerifyError::DegreeTooSmall(n));
    }
    let started = Instant::now();
    let omega = relation_set(n, RelationSet::Omega).expect("n >= 3");
    let xi = relation_set(n, RelationSet::Xi).expect("n >= 3");
    let outcomes: Vec<Outcome> = (0..count)
        .into_par_iter()
        .map(|i| fuzz_one(n, max_len, seed, i, &omega, &xi))
        .collect();
    let mismatches: Vec<String> = outcomes.iter().flat_map(|o| o.mismatches.clone()).collect();
    Ok(FuzzReport {
        n,
        count,
        max_len,
        seed,
        rng: "ChaCha8",
        lr_words: count,
        e_words: count,
        certificates: outcomes.iter().map(|o| o.certificates).sum(),
        equality_triples: outcomes.iter().map(|o| o.triples).sum(),
        pass: mismatches.is_empty(),
        mismatches,
        elapsed_ms: Some(started.elapsed().as_millis()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(n: usize) -> usize {
        // all perfect matchings of 2n points, filtered by planarity
        fn rec(free: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, count: &mut usize) {
            if free.is_empty() {
                let crossing = pairs
                    .iter()
                    .any(|&(a, b)| pairs.iter().any(|&(c, d)| a < c && c < b && b < d));
                if !crossing {
                    *count += 1;
                }
                return;
            }
            let a = free.remove(0);
            for idx in 0..free.len() {
                let b = free.remove(idx);
                pairs.push((a, b));
                rec(free, pairs, count);
                pairs.pop();
                free.insert(idx, b);
            }
            free.insert(0, a);
        }
        let mut count = 0;
        rec(&mut (0..2 * n).collect(), &mut Vec::new(), &mut count);
        count
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tl(1).unwrap().len(), 1);
        assert_eq!(enumerate_tl(3).unwrap().len(), 5);
        assert_eq!(enumerate_tl(4).unwrap().len(), 14);
        for n in 1..=6 {
            let all = enumerate_tl(n).unwrap();
            assert_eq!(all.len(), brute_force_count(n));
            assert_eq!(all.len() as u64, catalan(n));
            assert_eq!(all.iter().collect::<HashSet<_>>().len(), all.len());
        }
        assert_eq!(enumerate_tl(13), Err(VerifyError::DegreeTooLarge(13)));
        assert_eq!(enumerate_tl(0), Err(VerifyError::DegreeTooLarge(0)));
    }

    #[test]
    fn presentation_checks() {
        for (n, count) in [(3, 5), (4, 14), (6, 132)] {
            let r = verify_presentation(n).unwrap();
            assert!(r.all_pass, "{r:?}");
            assert_eq!(r.normal_forms, count);
        }
        assert!(verify_presentation(2).is_err());
        assert!(verify_presentation(11).is_err());
    }

    #[test]
    fn small_fuzz() {
        let r = fuzz_words(3, 100, 20, 0).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
        let empty = fuzz_words(5, 0, 10, 1).unwrap();
        assert_eq!((empty.certificates, empty.mismatches.len()), (0, 0));
    }
}
