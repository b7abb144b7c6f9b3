use invbar::bijections::{
    ascent_count, complement, f_inverse, f_levels_to_cycles, g_ascents, g_inverse, levels_involution,
    sper_involution, CycleForm,
};
use invbar::gfseries::{self, rat, Rational, RationalSeries};
use invbar::invseq::{from_permutation, stats, to_permutation, InversionSequence};
use invbar::mpoly::{Assignment, MPoly, Var};
use invbar::recur::{self, DistTable};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn var_strategy() -> impl Strategy<Value = Var> {
    prop::sample::select(Var::ALL.to_vec())
}

fn poly_strategy() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((-5i64..=5, prop::array::uniform5(-2i32..=3)), 0..6)
        .prop_map(|terms| MPoly::from_terms(terms.into_iter().map(|(c, e)| (c.into(), e))))
}

fn nonneg_poly_strategy() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((-5i64..=5, prop::array::uniform5(0i32..=3)), 0..5)
        .prop_map(|terms| MPoly::from_terms(terms.into_iter().map(|(c, e)| (c.into(), e))))
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational_strategy().prop_filter("nonzero", |r| !r.is_zero())
}

fn point_strategy() -> impl Strategy<Value = Assignment> {
    prop::array::uniform5(nonzero_rational()).prop_map(|vals| Var::ALL.iter().copied().zip(vals).collect())
}

fn seq_strategy(max_len: usize) -> impl Strategy<Value = InversionSequence> {
    (1..=max_len)
        .prop_flat_map(|n| (1..=n).map(|i| 1u32..=i as u32).collect::<Vec<_>>())
        .prop_map(|v| InversionSequence::new(v).unwrap())
}

fn series_strategy(order: usize) -> impl Strategy<Value = RationalSeries> {
    prop::collection::vec(rational_strategy(), order + 1)
        .prop_map(move |c| RationalSeries::from_coeffs(c, order))
}

fn unit_series(order: usize) -> impl Strategy<Value = RationalSeries> {
    series_strategy(order).prop_map(move |s| {
        let mut c = s.coeffs().to_vec();
        c[0] = Rational::one();
        RationalSeries::from_coeffs(c, order)
    })
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_distributes(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &MPoly::one(), a.clone());
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(a in poly_strategy(), v in var_strategy()) {
        prop_assert_eq!(a.substitute(v, &MPoly::var(v)).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly_strategy(), b in poly_strategy(), at in point_strategy()) {
        let (ea, eb) = (a.eval_rational(&at).unwrap(), b.eval_rational(&at).unwrap());
        prop_assert_eq!((&a * &b).eval_rational(&at).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval_rational(&at).unwrap(), &ea + &eb);
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in nonneg_poly_strategy(), q in poly_strategy(), v in var_strategy(), at in point_strategy()) {
        let mut moved = at.clone();
        moved.insert(v, q.eval_rational(&at).unwrap());
        prop_assert_eq!(a.substitute(v, &q).unwrap().eval_rational(&at).unwrap(), a.eval_rational(&moved).unwrap());
    }

    #[test]
    fn canonical_text_round_trips(a in poly_strategy()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<MPoly>().unwrap(), a.clone());
        let js = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<MPoly>(&js).unwrap(), a);
    }

    #[test]
    fn weighted_sum_matches_derivative_at_one(a in nonneg_poly_strategy(), v in var_strategy()) {
        // d/dv of a at all-ones, computed by hand from the terms
        let want: num_bigint::BigInt = a.terms().map(|(e, c)| c * e[v.index()]).sum();
        prop_assert_eq!(a.weighted_coeff_sum(v), want);
    }
}

proptest! {
    #[test]
    fn permutation_encoding_round_trips(s in seq_strategy(9)) {
        let p = to_permutation(&s);
        prop_assert_eq!(from_permutation(&p), s);
    }

    #[test]
    fn sequence_text_round_trips(s in seq_strategy(9)) {
        prop_assert_eq!(s.to_string().parse::<InversionSequence>().unwrap(), s);
    }

    #[test]
    fn stats_are_consistent(s in seq_strategy(10)) {
        let st = stats(&s);
        let n = s.len() as u64;
        prop_assert_eq!(st.area, s.entries().iter().map(|&r| r as u64).sum::<u64>());
        prop_assert_eq!((st.levels + st.descents + st.ascents) as u64, n - 1);
        prop_assert!(st.sper > n);
    }

    #[test]
    fn complement_swaps_ascents_with_weak_descents(s in seq_strategy(10)) {
        let c = complement(&s);
        prop_assert_eq!(complement(&c), s.clone());
        let (a, b) = (stats(&s), stats(&c));
        prop_assert_eq!(b.ascents, a.levels + a.descents);
    }

    #[test]
    fn f_is_invertible_and_counts_cycles(s in seq_strategy(10)) {
        let c = f_levels_to_cycles(&s);
        prop_assert_eq!(c.cycle_count(), stats(&s).levels as usize + 1);
        prop_assert_eq!(f_inverse(&c), s);
        let round: CycleForm = c.to_string().parse().unwrap();
        prop_assert_eq!(round, c);
    }

    #[test]
    fn g_is_invertible_and_keeps_ascents(s in seq_strategy(10)) {
        let p = g_ascents(&s);
        prop_assert_eq!(ascent_count(&p), stats(&s).ascents as usize);
        prop_assert_eq!(g_inverse(&p), s);
    }

    #[test]
    fn sign_reversing_maps_pair_up(s in seq_strategy(10)) {
        if let Some(t) = sper_involution(&s) {
            prop_assert_eq!(sper_involution(&t), Some(s.clone()));
            prop_assert_eq!(stats(&s).sper.abs_diff(stats(&t).sper) % 2, 1);
        }
        match levels_involution(&s) {
            Some(t) => {
                prop_assert_eq!(levels_involution(&t), Some(s.clone()));
                prop_assert_eq!(stats(&s).levels.abs_diff(stats(&t).levels) % 2, 1);
            }
            None => prop_assert!(s.entries().iter().all(|&r| r <= 2)),
        }
    }
}

proptest! {
    #[test]
    fn series_inverse_and_log(a in unit_series(7), b in unit_series(7)) {
        let one = RationalSeries::one(7);
        prop_assert_eq!(a.mul(&a.inv().unwrap()), one);
        let lhs = a.mul(&b).log().unwrap();
        let rhs = a.log().unwrap().add(&b.log().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_agrees_with_argument_scaling(a in series_strategy(7), c in rational_strategy()) {
        let inner = RationalSeries::monomial(c.clone(), 1, 7);
        prop_assert_eq!(a.compose(&inner).unwrap(), a.scale_arg(&c));
        prop_assert_eq!(a.compose(&RationalSeries::x(7)).unwrap(), a);
    }
}

fn table_strategy() -> impl Strategy<Value = DistTable> {
    (1usize..=4).prop_flat_map(|n| {
        (1..=n)
            .map(|m| prop::collection::vec(poly_strategy(), m))
            .collect::<Vec<_>>()
            .prop_map(DistTable::from_rows)
    })
}

proptest! {
    #[test]
    fn dist_table_serializations_round_trip(t in table_strategy()) {
        prop_assert_eq!(DistTable::from_csv(&t.to_csv()).unwrap(), t.clone());
        prop_assert_eq!(DistTable::from_json(&t.to_json()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn a_identities_at_random_points(
        p in rational_strategy().prop_filter("p != 1", |p| !p.is_one()),
        y in rational_strategy(),
    ) {
        prop_assume!(!(&p * &y).is_one());
        let a = recur::a_table_lemma(7);
        prop_assert!(gfseries::check_a_functional_on(&a, &p, 7).is_ok());
        let r = gfseries::check_a_closed_on(&a, &p, &y, 7);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn b_identity_at_random_points(p in rational_strategy(), q in nonzero_rational(), r in rational_strategy()) {
        let b = recur::b_table_lemma(7);
        let res = gfseries::check_b_functional_on(&b, &p, &q, &r, 7);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}
