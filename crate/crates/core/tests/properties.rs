use proptest::prelude::*;

use mevsym::fairness::{lambda_plus, lambda_star};
use mevsym::intersecting::intersection_profile;
use mevsym::perm::factorial;
use mevsym::sequencing::{majority_graph, valid_orderings};
use mevsym::{OrderingSet, Payoff, Permutation, Table, VoteProfile};

fn perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| Permutation::lehmer_unrank(n, r).unwrap())
}

fn perm_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=8).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
}

fn payoff(n: usize) -> impl Strategy<Value = Payoff> {
    prop::collection::vec(0.0f64..10.0, factorial(n) as usize).prop_map(move |v| Payoff::new(n, v).unwrap())
}

fn subset(n: usize) -> impl Strategy<Value = OrderingSet> {
    prop::collection::vec(0..factorial(n), 1..12).prop_map(move |r| OrderingSet::new(n, r).unwrap())
}

proptest! {
    #[test]
    fn group_laws((a, b, c) in perm_triple()) {
        let n = a.n();
        let id = Permutation::identity(n);
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.compose(&a.inverse()).unwrap(), id.clone());
        prop_assert_eq!(id.compose(&a).unwrap(), a.clone());
        // conjugation preserves cycle type
        let conj = b.compose(&a).unwrap().compose(&b.inverse()).unwrap();
        prop_assert_eq!(conj.cycle_type(), a.cycle_type());
        prop_assert_eq!(a.cycle_type().parts().iter().sum::<usize>(), n);
    }

    #[test]
    fn rank_round_trip(p in (1usize..=10).prop_flat_map(perm_of)) {
        let r = p.lehmer_rank();
        prop_assert!(r < factorial(p.n()));
        prop_assert_eq!(Permutation::lehmer_unrank(p.n(), r).unwrap(), p);
    }

    #[test]
    fn lambda_scaling(f in payoff(4), a in subset(4), c in 0.01f64..100.0) {
        let lp = lambda_plus(&f, &a).unwrap();
        let scaled = f.scale(c);
        prop_assert!((lambda_plus(&scaled, &a).unwrap() - c * lp).abs() <= 1e-9 * (1.0 + c * lp.abs()));
        if let Ok(ls) = lambda_star(&f, &a) {
            let ls_c = lambda_star(&scaled, &a).unwrap();
            prop_assert!((ls_c - ls).abs() <= 1e-9 * ls);
            prop_assert!(ls >= 1.0 - 1e-12);
        }
        let max = a.permutations().map(|p| f.at(&p)).fold(f64::MIN, f64::max);
        prop_assert!(lp <= (1.0 - 1.0 / 24.0) * max + 1e-12);
    }

    #[test]
    fn t_max_is_monotone(small in subset(5), extra in subset(5)) {
        let big = OrderingSet::new(5, small.members().iter().chain(extra.members()).copied().collect()).unwrap();
        prop_assert!(small.is_subset_of(&big));
        prop_assert!(intersection_profile(&small).unwrap().t_max >= intersection_profile(&big).unwrap().t_max);
    }

    #[test]
    fn transform_is_linear(f in payoff(4), g in payoff(4), c in -3.0f64..3.0) {
        let table = Table::new(4).unwrap();
        let lhs = table.transform(&f.scale(c).add(&g).unwrap()).unwrap();
        let (tf, tg) = (table.transform(&f).unwrap(), table.transform(&g).unwrap());
        for ((l, a), b) in lhs.blocks().iter().zip(tf.blocks()).zip(tg.blocks()) {
            prop_assert!((&l.matrix - (&a.matrix * c + &b.matrix)).abs().max() <= 1e-9);
        }
    }

    #[test]
    fn uncertainty_holds_for_signed_payoffs(v in prop::collection::vec(-5.0f64..5.0, 24)) {
        let f = Payoff::new(4, v).unwrap();
        prop_assume!(!f.is_zero());
        let u = Table::new(4).unwrap().uncertainty_check(&f).unwrap();
        prop_assert!(u.holds, "product {} < 24", u.product);
    }

    #[test]
    fn valid_orderings_respect_majority(orders in prop::collection::vec(perm_of(5), 1..8)) {
        let v = VoteProfile::new(5, orders).unwrap();
        let g = majority_graph(&v);
        for &(i, j) in &g.edges {
            prop_assert!(!g.edges.contains(&(j, i)));
        }
        let a = valid_orderings(&g).unwrap();
        prop_assert!(!a.is_empty());
        for p in a.permutations() {
            prop_assert!(g.respects(&p));
        }
    }
}
