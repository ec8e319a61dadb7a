//! Translation of `Ω`-derivations into `Ξ`-derivations through the hat map.
//!
//! For each `Ω` relation `u = v` a template derivation `û → v̂` over `Ξ` is
//! built once per degree and replayed at the hat offset of each step.

use std::collections::HashMap;
use std::rc::Rc;

use crate::presentations::{hat, hat_len, Direction, Letter, RelId, Relation, Step, Word};

use super::reduce::{mirror_steps, Tracer};
use Direction::{Backward, Forward};

pub(crate) struct Templates {
    n: usize,
    cache: HashMap<RelId, Rc<Vec<Step>>>,
    wh: HashMap<usize, Rc<Vec<Step>>>,
}

impl Templates {
    pub fn new(n: usize) -> Self {
        Templates {
            n,
            cache: HashMap::new(),
            wh: HashMap::new(),
        }
    }

    fn hat_of(&self, w: &Word) -> Vec<Letter> {
        hat(w).expect("relation sides are L/R words").into_letters()
    }

    /// `λ̂_i ρ̂_i → e_i`.
    pub fn wh(&mut self, i: usize) -> Rc<Vec<Step>> {
        if let Some(t) = self.wh.get(&i) {
            return t.clone();
        }
        let n = self.n;
        let start: Vec<Letter> = (i..n).map(Letter::e).chain((i..n).rev().map(Letter::e)).collect();
        let mut tr = Tracer::new(n, start);
        if i == n - 1 {
            tr.apply(0, RelId::E1(u(i)), Forward);
        } else {
            let inner = self.wh(i + 1);
            tr.replay(1, &inner, false);
            tr.apply(0, RelId::E3(u(i), u(i + 1)), Forward);
        }
        assert_eq!(tr.word, vec![Letter::e(i)]);
        let t = Rc::new(tr.steps);
        self.wh.insert(i, t.clone());
        t
    }

    /// Template derivation `hat(lhs) → hat(rhs)` for an `Ω` relation.
    pub fn get(&mut self, id: RelId) -> Rc<Vec<Step>> {
        if let Some(t) = self.cache.get(&id) {
            return t.clone();
        }
        let t = Rc::new(self.build(id));
        self.cache.insert(id, t.clone());
        t
    }

    fn build(&mut self, id: RelId) -> Vec<Step> {
        let n = self.n;
        let rel = Relation::instantiate(n, id).expect("template requested for a valid relation");
        let (lhs, rhs) = (self.hat_of(&rel.lhs), self.hat_of(&rel.rhs));
        let mirrored = |this: &mut Self, other: RelId| {
            let base = this.get(other);
            let base_rel = Relation::instantiate(n, other).expect("mirror relation is valid");
            mirror_steps(n, this.hat_of(&base_rel.lhs).len(), &base)
        };
        let steps = match id {
            RelId::R1(i) => mirrored(self, RelId::L1(i)),
            RelId::R2(i, j) => mirrored(self, RelId::L2(i, j)),
            RelId::R3(i) => mirrored(self, RelId::L3(i)),
            RelId::RL2b => Vec::new(),
            RelId::L2(..) => {
                // built from the right-hand side and then reversed
                let mut tr = Tracer::new(n, rhs.clone());
                self.l2_from_rhs(&mut tr, id);
                assert_eq!(tr.word, lhs, "{id} template");
                tr.steps.iter().rev().map(|s| s.inverse()).collect()
            }
            _ => {
                let mut tr = Tracer::new(n, lhs.clone());
                match id {
                    RelId::L1(i) => tr.apply(n - i as usize - 1, RelId::E1(u(n - 1)), Forward),
                    RelId::L3(i) => self.l3(&mut tr, i as usize),
                    RelId::RL1(i, j) => self.rl1(&mut tr, i as usize, j as usize),
                    RelId::RL2(i, j) => self.rl2(&mut tr, i as usize, j as usize),
                    RelId::RL3(i, j) => self.rl3(&mut tr, i as usize, j as usize),
                    _ => unreachable!("{id} is not an Ω relation"),
                }
                tr.steps
            }
        };
        let mut check = Tracer::new(n, lhs);
        check.replay(0, &steps, false);
        assert_eq!(check.word, rhs, "{id} template");
        steps
    }

    fn l2_from_rhs(&mut self, tr: &mut Tracer, id: RelId) {
        let RelId::L2(i, j) = id else { unreachable!() };
        let (i, j, n) = (i as usize, j as usize, self.n);
        let a = n - j - 2;
        let c = j - i + 1;
        swap_blocks(tr, 0, a, c);
        tr.apply(c - 1, RelId::E3(u(j), u(j + 1)), Backward);
        swap_blocks(tr, c + 1, 1, a);
    }

    fn l3(&mut self, tr: &mut Tracer, i: usize) {
        let n = self.n;
        let k = n - 2 * i + 1;
        if i == 1 {
            tr.apply(0, RelId::E3(u(n - 1), u(n - 2)), Forward);
            return;
        }
        let block = 2 * i - 3;
        let l2 = self.get(RelId::L2(u(k), u(k)));
        let before = tr.steps.len();
        for t in 0..i - 1 {
            tr.replay(t * block, &l2, false);
        }
        let shuffle: Vec<Step> = tr.steps[before..].to_vec();
        let p = (i - 1) * block;
        swap_blocks(tr, 0, p, 1);
        let inner = self.get(RelId::L3(u(i - 1)));
        tr.replay(1, &inner, false);
        swap_blocks(tr, 0, 1, p);
        tr.apply(p, RelId::E3(u(k), u(k - 1)), Forward);
        tr.replay(0, &shuffle, true);
    }

    fn rl2(&mut self, tr: &mut Tracer, i: usize, j: usize) {
        let n = self.n;
        if j == i + 1 {
            tr.apply(n - 1 - i, RelId::E1(u(i)), Backward);
            self.rl2(tr, i, i);
        } else if j + 1 == i {
            tr.apply(n - i, RelId::E1(u(j)), Backward);
            self.rl2(tr, j, j);
        } else if i == n - 1 {
            tr.apply(0, RelId::E1(u(i)), Forward);
        } else {
            tr.apply(n - 1 - i, RelId::E1(u(i)), Forward);
            tr.apply(n - 2 - i, RelId::E3(u(i + 1), u(i)), Forward);
            tr.apply(n - 2 - i, RelId::E1(u(i + 1)), Backward);
            self.rl2(tr, i + 1, i + 1);
        }
    }

    fn rl1(&mut self, tr: &mut Tracer, i: usize, j: usize) {
        let n = self.n;
        let b = i - 1 - j;
        swap_blocks(tr, 0, n - i, b);
        let inner = self.get(RelId::RL2(u(i), u(i - 1)));
        tr.replay(b, &inner, false);
        swap_blocks(tr, 0, b, 1);
        let wh = self.wh(i - 2);
        tr.replay(b, &wh, true);
    }

    fn rl3(&mut self, tr: &mut Tracer, i: usize, j: usize) {
        let n = self.n;
        swap_blocks(tr, n - j + 1, j - 1 - i, n - j);
        let inner = self.get(RelId::RL2(u(j - 1), u(j)));
        tr.replay(0, &inner, false);
        let wh = self.wh(j - 2);
        tr.replay(1, &wh, true);
    }
}

fn u(i: usize) -> u16 {
    i as u16
}

/// Block `A` of length `a` at `pos` followed by block `C` of length `c`
/// becomes `C A`, provided every letter of `A` commutes with every letter of `C`.
fn swap_blocks(tr: &mut Tracer, pos: usize, a: usize, c: usize) {
    for t in 0..c {
        for q in (0..a).rev() {
            let p = pos + t + q;
            let (x, y) = (tr.word[p].index(), tr.word[p + 1].index());
            tr.apply(p, RelId::E2(u(x), u(y)), Forward);
        }
    }
}

/// Expands a pure-`E` word into the hat of its lift and replays `omega`
/// (a derivation starting at the lift) through the templates.
pub(crate) fn translate(
    templates: &mut Templates,
    word: &Word,
    omega_start: &[Letter],
    omega: &[Step],
) -> Tracer {
    let n = word.degree();
    let mut tr = Tracer::new(n, word.letters().to_vec());
    let mut offset = 0;
    for l in word.letters() {
        let wh = templates.wh(l.index());
        tr.replay(offset, &wh, true);
        offset += 2 * (n - l.index());
    }
    let mut current = omega_start.to_vec();
    for &step in omega {
        let off: usize = current[..step.position].iter().map(|&l| hat_len(n, l)).sum();
        let t = templates.get(step.relation);
        tr.replay(off, &t, step.direction == Backward);
        crate::presentations::apply_in_place(n, &mut current, step).expect("Ω derivation replays");
    }
    tr
}
