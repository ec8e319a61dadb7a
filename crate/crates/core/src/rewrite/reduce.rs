//! Reduction strategies over `L ∪ R`. Every rewrite goes through a
//! [`Tracer`], which applies the step to a working word and records it.

use crate::presentations::{apply_in_place, side_lens, Alphabet, Direction, Letter, RelId, Step};

use Direction::{Backward, Forward};

pub(crate) struct Tracer {
    pub n: usize,
    pub word: Vec<Letter>,
    pub steps: Vec<Step>,
}

impl Tracer {
    pub fn new(n: usize, word: Vec<Letter>) -> Self {
        Tracer {
            n,
            word,
            steps: Vec::new(),
        }
    }

    pub fn apply(&mut self, position: usize, relation: RelId, direction: Direction) {
        let step = Step::new(position, relation, direction);
        if let Err(e) = apply_in_place(self.n, &mut self.word, step) {
            panic!("rewrite strategy produced an invalid step: {e}");
        }
        self.steps.push(step);
    }

    /// Replays `steps` shifted right by `offset`; `reversed` runs them
    /// backwards with each direction flipped.
    pub fn replay(&mut self, offset: usize, steps: &[Step], reversed: bool) {
        let mut go = |s: &Step| {
            let dir = if reversed { s.direction.flip() } else { s.direction };
            self.apply(s.position + offset, s.relation, dir);
        };
        if reversed {
            steps.iter().rev().for_each(&mut go);
        } else {
            steps.iter().for_each(&mut go);
        }
    }

    fn index(&self, p: usize) -> usize {
        self.word[p].index()
    }
}

fn u16_(i: usize) -> u16 {
    i as u16
}

/// The left-right mirror of a relation (reverse the word, swap `λ` and `ρ`),
/// together with whether the direction has to flip.
pub(crate) fn mirror_relation(id: RelId) -> (RelId, bool) {
    match id {
        RelId::L1(i) => (RelId::R1(i), false),
        RelId::L2(i, j) => (RelId::R2(i, j), false),
        RelId::L3(i) => (RelId::R3(i), false),
        RelId::R1(i) => (RelId::L1(i), false),
        RelId::R2(i, j) => (RelId::L2(i, j), false),
        RelId::R3(i) => (RelId::L3(i), false),
        RelId::E1(i) => (RelId::E1(i), false),
        RelId::E2(i, j) => (RelId::E2(j, i), false),
        RelId::E3(i, j) => (RelId::E3(i, j), false),
        RelId::RL2b => (RelId::RL2b, true),
        RelId::RL1(..) | RelId::RL2(..) | RelId::RL3(..) => {
            unreachable!("mixed relations have no mirror image in the relation set")
        }
    }
}

/// Mirrors a derivation that starts from a word of length `start_len`.
pub(crate) fn mirror_steps(n: usize, start_len: usize, steps: &[Step]) -> Vec<Step> {
    let mut len = start_len;
    steps
        .iter()
        .map(|s| {
            let (l, r) = side_lens(n, s.relation).expect("relation was applied successfully");
            let (from, to) = match s.direction {
                Forward => (l, r),
                Backward => (r, l),
            };
            let (relation, flip) = mirror_relation(s.relation);
            let direction = if flip { s.direction.flip() } else { s.direction };
            let position = len - s.position - from;
            len = len + to - from;
            Step {
                position,
                relation,
                direction,
            }
        })
        .collect()
}

/// `λ_x` at `s` followed by `λ_j`; rewrites to `λ_{x'}` and returns `x'`.
pub(crate) fn insert_lambda(tr: &mut Tracer, s: usize, mut x: Vec<usize>, j: usize) -> Vec<usize> {
    let k = x.len();
    if k >= 1 && j + 2 * k >= tr.n {
        absorb(tr, s, &x, j);
        return x;
    }
    if k == 0 || x[k - 1] > j {
        x.push(j);
        return x;
    }
    let xk = x.pop().expect("k >= 1");
    tr.apply(s + k - 1, RelId::L2(u16_(xk), u16_(j)), Forward);
    let mut y = insert_lambda(tr, s, x, j + 2);
    y.push(xk);
    y
}

/// `λ_x λ_j → λ_x` for `j >= n - 2|x|`.
fn absorb(tr: &mut Tracer, s: usize, x: &[usize], j: usize) {
    let n = tr.n;
    let k = x.len();
    let xk = x[k - 1];
    let last = s + k - 1;
    if j == n - 1 {
        tr.apply(last, RelId::L1(u16_(xk)), Forward);
    } else if j == n - 2 {
        if k == 1 && xk == n - 1 {
            tr.apply(s, RelId::L3(1), Forward);
        } else {
            tr.apply(last, RelId::L1(u16_(xk)), Backward);
            tr.apply(last + 1, RelId::L3(1), Forward);
            tr.apply(last, RelId::L1(u16_(xk)), Forward);
        }
    } else if j + 2 * k > n {
        tr.apply(last, RelId::L2(u16_(xk), u16_(j)), Forward);
        absorb(tr, s, &x[..k - 1], j + 2);
    } else {
        // j = n - 2k: pad with λ_h^k, collapse with (L3), then absorb the padding
        let h = n - 2 * k + 1;
        let mut letters: Vec<Letter> = x.iter().map(|&a| Letter::lambda(a)).collect();
        letters.push(Letter::lambda(h));
        let mut scratch = Tracer::new(n, letters);
        absorb(&mut scratch, 0, x, h);
        for _ in 0..k {
            tr.replay(s, &scratch.steps, true);
        }
        tr.apply(s + k, RelId::L3(u16_(k)), Forward);
        for _ in 0..k {
            tr.replay(s, &scratch.steps, false);
        }
    }
}

/// Reduces the pure-`L` region `[s, s + len)` to `λ_x`.
pub(crate) fn reduce_left(tr: &mut Tracer, s: usize, len: usize) -> Vec<usize> {
    let mut x = Vec::new();
    for _ in 0..len {
        let j = tr.index(s + x.len());
        x = insert_lambda(tr, s, x, j);
    }
    x
}

/// Reduces the pure-`R` region `[s, s + len)` to `ρ_z` by reducing its mirror.
pub(crate) fn reduce_right(tr: &mut Tracer, s: usize, len: usize) -> Vec<usize> {
    let mirrored: Vec<Letter> = tr.word[s..s + len]
        .iter()
        .rev()
        .map(|l| {
            debug_assert_eq!(l.alphabet, Alphabet::R);
            Letter::lambda(l.index())
        })
        .collect();
    let mut scratch = Tracer::new(tr.n, mirrored);
    let z = reduce_left(&mut scratch, 0, len);
    for step in mirror_steps(tr.n, len, &scratch.steps) {
        tr.apply(step.position + s, step.relation, step.direction);
    }
    z
}

/// `P λ_j` with `P` the `R`-word at `[s, s + plen)`; rewrites to `λ_a P'`
/// using mixed relations only and returns `(a, |P'|)`.
pub(crate) fn push(tr: &mut Tracer, s: usize, plen: usize, j: usize) -> (Vec<usize>, usize) {
    if plen == 0 {
        return (vec![j], 0);
    }
    let n = tr.n;
    let p = s + plen - 1;
    let i = tr.index(p);
    if i.abs_diff(j) <= 1 {
        tr.apply(p, RelId::RL2(u16_(i), u16_(j)), Forward);
        return push(tr, s, plen - 1, n - 1);
    }
    let next = if j + 2 <= i {
        tr.apply(p, RelId::RL1(u16_(i), u16_(j)), Forward);
        j
    } else {
        tr.apply(p, RelId::RL3(u16_(i), u16_(j)), Forward);
        j - 2
    };
    let (mut a, b) = push(tr, s, plen - 1, n - 1);
    let (a2, b2) = push(tr, s + a.len(), b, next);
    a.extend(a2);
    (a, b2 + 1)
}

/// Folds the whole working word into `λ_x ρ_z`.
pub(crate) fn separate_all(tr: &mut Tracer) -> (Vec<usize>, Vec<usize>) {
    let total = tr.word.len();
    let mut x = Vec::new();
    let mut z: Vec<usize> = Vec::new();
    for _ in 0..total {
        let letter = tr.word[x.len() + z.len()];
        match letter.alphabet {
            Alphabet::R => z = reduce_right(tr, x.len(), z.len() + 1),
            Alphabet::L => {
                let (a, b) = push(tr, x.len(), z.len(), letter.index());
                for j in a {
                    x = insert_lambda(tr, 0, x, j);
                }
                z = reduce_right(tr, x.len(), b);
            }
            Alphabet::E => unreachable!("E letters are lifted before separation"),
        }
    }
    (x, z)
}

/// `λ_x` at `s` becomes `λ_x ρ_h`, `h = n - 2|x| + 1`.
fn pad_right(tr: &mut Tracer, s: usize, x: &[usize]) {
    let n = tr.n;
    let k = x.len();
    if k == 1 {
        tr.apply(s, RelId::L1(u16_(x[0])), Backward);
        tr.apply(s + 1, RelId::RL2b, Forward);
        return;
    }
    pad_right(tr, s, &x[..k - 1]);
    tr.apply(
        s + k - 1,
        RelId::RL1(u16_(n - 2 * k + 3), u16_(x[k - 1])),
        Forward,
    );
    tr.apply(s + k - 2, RelId::L1(u16_(x[k - 2])), Forward);
}

/// `ρ_z` at `s` becomes `λ_h ρ_z`, `h = n - 2|z| + 1`.
fn pad_left(tr: &mut Tracer, s: usize, z: &[usize]) {
    let n = tr.n;
    let l = z.len();
    if l == 1 {
        tr.apply(s, RelId::R1(u16_(z[0])), Backward);
        tr.apply(s, RelId::RL2b, Backward);
        return;
    }
    let h = n - 2 * l + 1;
    let zl = z[l - 1];
    pad_left(tr, s + 1, &z[..l - 1]);
    tr.apply(s, RelId::RL3(u16_(zl), u16_(h + 2)), Forward);
    tr.apply(s, RelId::L2(u16_(h), u16_(n - 3)), Backward);
    tr.apply(s, RelId::L1(u16_(h)), Backward);
    tr.apply(s + 1, RelId::RL3(u16_(zl), u16_(n - 1)), Backward);
    tr.apply(s + 2, RelId::RL2b, Forward);
    tr.apply(s + 2, RelId::R1(u16_(z[l - 2])), Forward);
}

/// Brings `λ_x ρ_z` (the whole working word) to a balanced `λ_x ρ_y`.
pub(crate) fn balance(tr: &mut Tracer, x: Vec<usize>, z: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let (k, l) = (x.len(), z.len());
    if k > l {
        for _ in 0..k - l {
            pad_right(tr, 0, &x);
        }
        let y = reduce_right(tr, k, k);
        (x, y)
    } else if l > k {
        for t in 0..l - k {
            pad_left(tr, k + t, &z);
        }
        let x = reduce_left(tr, 0, l);
        (x, z)
    } else {
        (x, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{evaluate, Word};

    fn tracer(n: usize, s: &str) -> Tracer {
        Tracer::new(n, Word::parse(n, s).unwrap().into_letters())
    }

    fn word(tr: &Tracer) -> String {
        Word::new(tr.n, tr.word.clone()).unwrap().to_string()
    }

    #[test]
    fn absorb_examples() {
        let mut tr = tracer(5, "L1 L4");
        assert_eq!(reduce_left(&mut tr, 0, 2), vec![1]);
        assert_eq!(tr.steps, vec![Step::new(0, RelId::L1(1), Forward)]);

        let mut tr = tracer(5, "L4 L3");
        assert_eq!(reduce_left(&mut tr, 0, 2), vec![4]);
        assert_eq!(tr.steps, vec![Step::new(0, RelId::L3(1), Forward)]);

        let mut tr = tracer(5, "L1 L1");
        assert_eq!(reduce_left(&mut tr, 0, 2), vec![3, 1]);
        assert_eq!(tr.steps, vec![Step::new(0, RelId::L2(1, 1), Forward)]);
    }

    #[test]
    fn deep_absorb_uses_l3() {
        // λ_5 λ_2 λ_3 in degree 7: |x| = 2 and j = n - 2k
        let mut tr = tracer(7, "L5 L2 L3");
        let x = reduce_left(&mut tr, 0, 3);
        assert_eq!(x, vec![5, 2]);
        assert!(tr.steps.iter().any(|s| s.relation == RelId::L3(2)));
        assert_eq!(word(&tr), "L5 L2");
    }

    #[test]
    fn mirror_round_trip() {
        let mut tr = tracer(6, "R1 R1 R5 R2");
        let z = reduce_right(&mut tr, 0, 4);
        let expect = evaluate(&Word::parse(6, "R1 R1 R5 R2").unwrap())
            .0
            .boundary_tuples()
            .1;
        assert_eq!(z, expect.entries());
        assert!(tr.steps.iter().all(|s| s.relation.is_right()));
    }

    #[test]
    fn push_examples() {
        let mut tr = tracer(5, "R2 L2");
        assert_eq!(push(&mut tr, 0, 1, 2), (vec![4], 0));
        let mut tr = tracer(5, "R4 L1");
        assert_eq!(push(&mut tr, 0, 1, 1), (vec![4, 1], 1));
        assert_eq!(word(&tr), "L4 L1 R2");
        assert_eq!(tr.steps, vec![Step::new(0, RelId::RL1(4, 1), Forward)]);
    }

    #[test]
    fn padding_preserves_tangle() {
        for n in 3..=10 {
            for k in 1..=(n / 2) {
                let x: Vec<usize> = (0..k).map(|t| n - 1 - 2 * t).collect();
                let lam: Vec<Letter> = x.iter().map(|&a| Letter::lambda(a)).collect();
                let before = evaluate(&Word::new(n, lam.clone()).unwrap()).0;

                let mut tr = Tracer::new(n, lam);
                pad_right(&mut tr, 0, &x);
                assert_eq!(tr.word.last(), Some(&Letter::rho(n - 2 * k + 1)));
                assert_eq!(evaluate(&Word::new(n, tr.word.clone()).unwrap()).0, before);

                let rho: Vec<Letter> = x.iter().rev().map(|&a| Letter::rho(a)).collect();
                let before = evaluate(&Word::new(n, rho.clone()).unwrap()).0;
                let mut tr = Tracer::new(n, rho);
                pad_left(&mut tr, 0, &x);
                assert_eq!(tr.word[0], Letter::lambda(n - 2 * k + 1));
                assert_eq!(evaluate(&Word::new(n, tr.word.clone()).unwrap()).0, before);
            }
        }
    }
}
