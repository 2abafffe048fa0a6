use num_rational::Ratio;
use proptest::prelude::*;

use kk_core::lifting::{
    certify_triple, combine_admissible_components, combine_admissible_smooth, AdmissibleQuadruple, AssociatedTriple,
    CertifyOptions, PolySystem,
};
use kk_core::localglobal::{hilbert_symbol, relevant_places, Place, Rat};
use kk_core::milnor::{lemma51_certify, wedge, Lemma51Verdict, MonomialElem, UnitClassModD};
use kk_core::pointfinder::{cw_search, truncate_split, CwMode};
use kk_core::series::{exp, exp_int};
use kk_core::{Field, FieldPoly, PuiseuxSeries, SeriesPoly};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(7))]
}

fn series_in(field: Field) -> impl Strategy<Value = PuiseuxSeries> {
    (1i64..=6, prop::collection::vec((-3i64..=8, -5i64..=5), 0..5), prop::option::of(6i64..=12)).prop_map(
        move |(q, terms, prec)| {
            let terms = terms.into_iter().map(|(k, c)| (k, field.from_i64(c)));
            PuiseuxSeries::new(field, q, terms, prec.map(|p| exp(p, q))).unwrap()
        },
    )
}

fn three_series() -> impl Strategy<Value = (PuiseuxSeries, PuiseuxSeries, PuiseuxSeries)> {
    field_strategy().prop_flat_map(|f| (series_in(f), series_in(f), series_in(f)))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (prop_oneof![-500i64..=-1, 1i64..=500], 1i64..=60).prop_map(|(n, d)| Rat::new(n, d))
}

fn quad() -> impl Strategy<Value = (u64, u64, u64, u64)> {
    (1u64..=4, 1u64..=20, 1u64..=6, 0u64..=5)
}

fn mk((q0, n, c, s): (u64, u64, u64, u64)) -> AdmissibleQuadruple {
    AdmissibleQuadruple::new(q0, n, c, s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn series_ring_laws((a, b, c) in three_series()) {
        prop_assert!((&a * &b).eq_at_common_precision(&(&b * &a)));
        prop_assert!((&(&a + &b) + &c).eq_at_common_precision(&(&a + &(&b + &c))));
        prop_assert!((&(&a * &b) * &c).eq_at_common_precision(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).eq_at_common_precision(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero_so_far());
    }

    #[test]
    fn reramification_preserves_the_element((a, _, _) in three_series(), k in 1i64..=4) {
        let r = a.reramify(a.ram() * k).unwrap();
        prop_assert!(r.same_element(&a));
        prop_assert_eq!(r.val(), a.val());
    }

    #[test]
    fn truncation_split_recomposes(coeffs in prop::collection::vec(prop::collection::vec((0i64..=6, -4i64..=4), 0..4), 3), nu in 0i64..=8) {
        let f = Field::Rationals;
        let mons = [vec![2, 0], vec![1, 1], vec![0, 2]];
        let terms = mons.iter().cloned().zip(coeffs.into_iter().map(|t| {
            PuiseuxSeries::new(f, 1, t.into_iter().map(|(k, c)| (k, f.from_i64(c))), None).unwrap()
        }));
        let form = SeriesPoly::from_terms(f, 2, terms.collect::<Vec<_>>()).unwrap();
        let split = truncate_split(&form, exp_int(nu)).unwrap();
        prop_assert_eq!(split.recompose(), form);
        for (_, c) in split.g_nu.terms() {
            prop_assert!(c.val().at_least(exp_int(0)));
        }
        for (_, c) in split.f_nu.terms() {
            prop_assert!(c.exp_terms().all(|(e, _)| e < exp_int(nu)));
        }
    }

    #[test]
    fn hilbert_symbol_is_bimultiplicative_and_symmetric(a in nonzero_rat(), a2 in nonzero_rat(), b in nonzero_rat()) {
        for v in relevant_places(&[a, a2, b]) {
            let h = |x: &Rat, y: &Rat| hilbert_symbol(x, y, v).unwrap();
            prop_assert_eq!(h(&(a * a2), &b), h(&a, &b) * h(&a2, &b), "place {}", v);
            prop_assert_eq!(h(&a, &b), h(&b, &a));
            prop_assert_eq!(h(&a, &(-a)), 1);
        }
    }

    #[test]
    fn hilbert_product_formula(a in nonzero_rat(), b in nonzero_rat()) {
        let prod: i32 = relevant_places(&[a, b]).into_iter().map(|v| hilbert_symbol(&a, &b, v).unwrap()).product();
        prop_assert_eq!(prod, 1);
        // places outside the relevant set are unramified
        prop_assert_eq!(hilbert_symbol(&a, &b, Place::finite(1_000_003).unwrap()).unwrap(), 1);
    }

    #[test]
    fn wedge_is_alternating(d in prop_oneof![Just(2u32), Just(3), Just(5)], vs in prop::collection::vec(prop::collection::vec(0i64..5, 4), 2..=4), i in 0usize..4, k in 0usize..4) {
        let classes: Vec<UnitClassModD> = vs.iter().map(|v| UnitClassModD::new(d, v.clone()).unwrap()).collect();
        let (i, k) = (i % classes.len(), k % classes.len());
        let w = wedge(&classes).unwrap();
        let mut swapped = classes.clone();
        swapped.swap(i, k);
        let ws = wedge(&swapped).unwrap();
        if i == k {
            prop_assert_eq!(ws, w);
        } else {
            prop_assert_eq!(ws, w.neg());
            let mut repeated = classes.clone();
            repeated[k] = repeated[i].clone();
            prop_assert!(wedge(&repeated).unwrap().is_zero());
        }
    }

    #[test]
    fn constant_calculus_is_monotone(minor in quad(), per in prop::collection::vec(quad(), 0..3), bump in 0usize..4, by in 1u64..4) {
        let base = combine_admissible_smooth(mk(minor), &per.iter().copied().map(mk).collect::<Vec<_>>());
        let mut m2 = minor;
        match bump {
            0 => m2.1 += by,
            1 => m2.2 += by,
            2 => m2.3 += by,
            _ => {}
        }
        let bigger = combine_admissible_smooth(mk(m2), &per.iter().copied().map(mk).collect::<Vec<_>>());
        prop_assert!(bigger.n >= base.n && bigger.c >= base.c && bigger.s >= base.s);

        let comps: Vec<_> = std::iter::once(minor).chain(per.iter().copied()).collect();
        let u = comps.len() as u64;
        let a = combine_admissible_components(2, u, 1, 1, &comps.iter().copied().map(mk).collect::<Vec<_>>()).unwrap();
        let mut c2 = comps.clone();
        c2[0] = m2;
        let b = combine_admissible_components(2, u, 1, 1, &c2.iter().copied().map(mk).collect::<Vec<_>>()).unwrap();
        prop_assert!(b.n >= a.n && b.c >= a.c && b.s >= a.s);
    }

    #[test]
    fn triple_scaling(x in quad(), q in 1u64..=6) {
        let t = mk(x).triple_at(q);
        prop_assert_eq!(t, AssociatedTriple { n: q * x.1, c: x.2, s: q * x.3, q: q * x.0 });
        let g = kk_core::lifting::greenberg_constants(mk(x));
        prop_assert_eq!(g.m * Ratio::from_integer(x.0), Ratio::from_integer(x.1));
    }

    #[test]
    fn certified_means_nonzero_class(d in prop_oneof![Just(2u32), Just(3), Just(5)], v0 in prop::collection::vec(-9i64..=9, 1..=3)) {
        let mut coeffs = vec![Some(MonomialElem::new(v0.clone()))];
        coeffs.resize(d as usize, None);
        let cert = lemma51_certify(&coeffs, d, true).unwrap();
        let nonzero = v0.iter().any(|e| e.rem_euclid(d as i64) != 0);
        match cert.verdict {
            Lemma51Verdict::Certified { level } => {
                prop_assert!(nonzero);
                prop_assert!(v0[level - 1].rem_euclid(d as i64) != 0);
                prop_assert!(v0[level..].iter().all(|e| e.rem_euclid(d as i64) == 0));
            }
            Lemma51Verdict::Refuted => prop_assert!(!nonzero),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reports_do_not_depend_on_worker_count(seed in any::<u64>(), c in 1i64..=5) {
        let f = Field::Rationals;
        let c0 = &PuiseuxSeries::from_i64(f, c) + &PuiseuxSeries::t_pow(f, exp_int(1));
        let p = SeriesPoly::from_univariate(f, &[-&c0, PuiseuxSeries::zero(f), PuiseuxSeries::one(f)]);
        let sys = PolySystem::single(p).unwrap();
        let triple = AssociatedTriple::new(1, 1, 0, 1).unwrap();
        let a = certify_triple(&sys, &triple, 6, seed, &CertifyOptions::default());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| certify_triple(&sys, &triple, 6, seed, &CertifyOptions::default()));
        prop_assert_eq!(a, b);

        let fp = Field::Prime(11);
        let form = FieldPoly::from_terms(fp, 3, vec![
            (vec![2, 0, 0], fp.one()), (vec![0, 2, 0], fp.from_i64(c)), (vec![0, 0, 2], fp.from_i64(-3)),
        ]).unwrap();
        let x = cw_search(&form, CwMode::Random { seed }, 10_000).ok();
        let y = pool.install(|| cw_search(&form, CwMode::Random { seed }, 10_000).ok());
        prop_assert_eq!(x, y);
        let e1 = cw_search(&form, CwMode::Exhaustive, 1 << 20).unwrap();
        let e2 = pool.install(|| cw_search(&form, CwMode::Exhaustive, 1 << 20).unwrap());
        prop_assert_eq!(e1, e2);
    }
}
