use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use tl_core::{
    build_tangle, check_tuple, enumerate_tl, enumerate_tuples, factorize, GeneratorKind, Tangle, TnTuple,
};

fn all(n: usize) -> &'static [Tangle] {
    static CACHE: OnceLock<Vec<Vec<Tangle>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=9)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    enumerate_tl(n).unwrap()
                }
            })
            .collect()
    })[n]
}

fn tangle(max_n: usize) -> impl Strategy<Value = Tangle> {
    (1..=max_n).prop_flat_map(|n| (0..all(n).len()).prop_map(move |i| all(n)[i].clone()))
}

fn triple(max_n: usize) -> impl Strategy<Value = (Tangle, Tangle, Tangle)> {
    (1..=max_n).prop_flat_map(|n| {
        let k = all(n).len();
        (0..k, 0..k, 0..k)
            .prop_map(move |(a, b, c)| (all(n)[a].clone(), all(n)[b].clone(), all(n)[c].clone()))
    })
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn composition_is_associative_with_cocycle((a, b, c) in triple(9)) {
        let (ab, m_ab) = a.compose(&b).unwrap();
        let (bc, m_bc) = b.compose(&c).unwrap();
        let (l, m1) = ab.compose(&c).unwrap();
        let (r, m2) = a.compose(&bc).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(m1 + m_ab, m2 + m_bc);
    }

    #[test]
    fn regular_star_axioms((a, b, _) in triple(9)) {
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        let (ab, m) = a.compose(&b).unwrap();
        let (ba, m_dag) = b.dagger().compose(&a.dagger()).unwrap();
        prop_assert_eq!(ab.dagger(), ba);
        prop_assert_eq!(m, m_dag);
        let aa = a.compose(&a.dagger()).unwrap().0;
        prop_assert_eq!(aa.compose(&a).unwrap().0, a.clone());
        let (aa_dag, _) = a.dagger().compose(&a).unwrap();
        prop_assert_eq!(aa_dag.dagger(), aa_dag);
    }

    #[test]
    fn rank_dom_codom_identities((a, b, _) in triple(9)) {
        let (ab, _) = a.compose(&b).unwrap();
        let (pa, pb, pab) = (a.profile(), b.profile(), ab.profile());
        prop_assert!(pab.rank <= pa.rank.min(pb.rank));
        prop_assert!(set(&pab.dom).is_subset(&set(&pa.dom)));
        prop_assert!(set(&pab.codom).is_subset(&set(&pb.codom)));
        if set(&pa.codom).is_subset(&set(&pb.dom)) {
            prop_assert_eq!(pab.rank, pa.rank);
        }
        prop_assert_eq!(pa.rank % 2, a.degree() % 2);
        prop_assert_eq!(pa.dom.len(), pa.rank);
        prop_assert_eq!(pa.codom.len(), pa.rank);
    }

    #[test]
    fn boundary_tuples_are_certified(a in tangle(9)) {
        let n = a.degree();
        let (bl, br) = a.boundary_tuples();
        let as_i64 = |t: &TnTuple| t.entries().iter().map(|&x| x as i64).collect::<Vec<_>>();
        prop_assert_eq!(check_tuple(n, &as_i64(&bl)).unwrap(), bl.clone());
        prop_assert_eq!(check_tuple(n, &as_i64(&br)).unwrap(), br.clone());
        prop_assert_eq!(a.dagger().boundary_tuples(), (br.clone(), bl.clone()));
        prop_assert_eq!(bl.len(), (n - a.rank()) / 2);
        let s = a.simplicity();
        prop_assert_eq!(s.right_simple, a.dagger().simplicity().left_simple);
    }

    #[test]
    fn canonical_form_round_trips(a in tangle(9)) {
        let again = Tangle::new(a.degree(), a.blocks()).unwrap();
        prop_assert_eq!(&again, &a);
        let parsed: Tangle = a.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &a);
        let json = serde_json::to_string(&a.to_doc()).unwrap();
        let parsed: Tangle = json.parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn factorize_then_build(a in tangle(9)) {
        let (x, y) = factorize(&a);
        prop_assert_eq!(build_tangle(&x, &y).unwrap(), a);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn enumeration_sizes_are_catalan() {
    for n in 1..=9 {
        let c = binomial(2 * n as u64, n as u64) / (n as u64 + 1);
        assert_eq!(all(n).len() as u64, c, "n={n}");
        let distinct: BTreeSet<&Tangle> = all(n).iter().collect();
        assert_eq!(distinct.len(), all(n).len());
        assert_eq!(
            enumerate_tuples(n, None).unwrap().len() as u64,
            binomial(n as u64, (n / 2) as u64)
        );
    }
}

#[test]
fn lambda_words_are_determined_by_their_tuple() {
    for n in 2..=8 {
        for x in enumerate_tuples(n, None).unwrap() {
            let mut t = Tangle::identity(n).unwrap();
            for &i in x.entries() {
                t = t
                    .compose(&Tangle::generator(n, GeneratorKind::Lambda, i).unwrap())
                    .unwrap()
                    .0;
            }
            assert_eq!(t.boundary_tuples().0, x, "n={n}");
            assert!(t.simplicity().right_simple);
        }
    }
}

#[test]
fn exhaustive_star_semigroup_small_degrees() {
    for n in 1..=4 {
        for a in all(n) {
            for b in all(n) {
                let (ab, _) = a.compose(b).unwrap();
                assert_eq!(ab.dagger(), b.dagger().compose(&a.dagger()).unwrap().0);
                for c in all(n) {
                    let (ab_c, m1) = ab.compose(c).unwrap();
                    let (bc, m_bc) = b.compose(c).unwrap();
                    let (a_bc, m2) = a.compose(&bc).unwrap();
                    assert_eq!(ab_c, a_bc);
                    assert_eq!(m1 + a.compose(b).unwrap().1, m2 + m_bc);
                }
            }
        }
    }
}
