use std::sync::OnceLock;

use braceops::operad::{act, act_vec, insert, insert_vec, Permutation};
use braceops::sign::{delta, delta_dual, delta_vec};
use braceops::tree::enumerate_all;
use braceops::vector::q_int;
use braceops::{BraceTree, TreeVector};
use proptest::prelude::*;

fn trees(n: usize) -> &'static [BraceTree] {
    static CACHE: OnceLock<Vec<Vec<BraceTree>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=5).map(|k| if k == 0 { vec![] } else { enumerate_all(k) }).collect())[n]
}

fn tree(max: usize) -> impl Strategy<Value = BraceTree> {
    (1..=max, any::<prop::sample::Index>()).prop_map(|(n, i)| i.get(trees(n)).clone())
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u8).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn one(t: &BraceTree) -> TreeVector {
    TreeVector::from_tree(t.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_round_trips(t in tree(5)) {
        let back: BraceTree = t.canonical().parse().unwrap();
        prop_assert_eq!(&back, &t);
    }

    #[test]
    fn differential_squares_to_zero(t in tree(5)) {
        prop_assert!(delta_vec(&delta(&t)).is_zero());
    }

    #[test]
    fn differential_raises_degree(t in tree(5)) {
        for (s, _) in delta(&t).iter() {
            prop_assert_eq!(s.degree(), t.degree() + 1);
        }
    }

    #[test]
    fn dual_is_adjoint(t in tree(4), s in tree(4)) {
        prop_assume!(t.arity() == s.arity());
        prop_assert_eq!(delta(&t).pairing(&one(&s)), one(&t).pairing(&delta_dual(&s)));
    }

    #[test]
    fn leibniz_beyond_exhaustive_range(t in tree(3), s in tree(3), i in 1usize..=3) {
        prop_assume!(i <= t.arity());
        let lhs = delta_vec(&insert(&t, i, &s));
        let mut rhs = insert_vec(&delta(&t), i, &one(&s));
        let sign = if t.degree().rem_euclid(2) == 0 { 1 } else { -1 };
        rhs.add_scaled(&insert_vec(&one(&t), i, &delta(&s)), &q_int(sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sequential_associativity(t in tree(3), s in tree(2), r in tree(2), i in 1usize..=3, j in 1usize..=2) {
        prop_assume!(i <= t.arity() && j <= s.arity());
        let lhs = insert_vec(&insert(&t, i, &s), i + j - 1, &one(&r));
        let rhs = insert_vec(&one(&t), i, &insert(&s, j, &r));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_a_left_action((t, a, b) in (1usize..=4).prop_flat_map(|n| (Just(n), perm(n), perm(n)))
        .prop_flat_map(|(n, a, b)| (any::<prop::sample::Index>().prop_map(move |i| i.get(trees(n)).clone()), Just(a), Just(b)))) {
        prop_assert_eq!(act(&a, &act(&b, &t)), act(&a.compose(&b), &t));
        prop_assert_eq!(act(&a.inverse(), &act(&a, &t)), t.clone());
    }

    #[test]
    fn action_commutes_with_differential((t, s) in (1usize..=4).prop_flat_map(|n| (any::<prop::sample::Index>().prop_map(move |i| i.get(trees(n)).clone()), perm(n)))) {
        prop_assert_eq!(delta_vec(&one(&act(&s, &t))), act_vec(&s, &delta(&t)));
    }

    #[test]
    fn vector_json_round_trips(t in tree(4), s in tree(4), a in -5i64..5, b in 1i64..5) {
        let mut v = one(&t);
        v.add_scaled(&one(&s), &braceops::vector::q(a, b));
        prop_assert_eq!(TreeVector::from_json(&v.to_json()).unwrap(), v);
    }
}

#[test]
fn exhaustive_operad_axioms_small() {
    let (count, bad) = braceops::report::operad_axioms_exhaustive(4);
    assert!(count > 0 && bad.is_empty(), "{bad:?}");
}

#[test]
fn exhaustive_leibniz_small() {
    let (count, bad) = braceops::report::leibniz_exhaustive(3);
    assert!(count > 0 && bad.is_empty(), "{bad:?}");
}
