use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistlab::exactnum::{
    eventual_sign, eventual_sign_at, eventual_sign_region, feasible_set, frac, isolate_real_roots, rat, Poly, Rational, Ring,
    RealPoint, Sign, SignCondition, UPoly,
};
use twistlab::oracle::{brute_force_with, defect_value, identity_battery, oracle_window, DEFAULT_WINDOW};
use twistlab::par::Exec;
use twistlab::sncmodel::{random_tree, random_tree_curve, synth_generator, ClassExpr, ComponentSet, Configuration, CurveParams};
use twistlab::stability::{e_poly, e_value, is_semistable, Mode, Scope};
use twistlab::twistenum::{apply_twist, enumerate_with, Twist};

fn upoly() -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-12i64..=12, 1..6).prop_map(|c| UPoly::from_ints(&c))
}

fn curve_from_seed(seed: u64, components: std::ops::RangeInclusive<usize>) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_curve(
        &mut rng,
        &CurveParams {
            components,
            ..CurveParams::default()
        },
    )
}

fn class(c: &Configuration, coeffs: &[i64]) -> ClassExpr {
    let n = c.num_components();
    let mut m = ClassExpr::twist(&coeffs[..n]);
    for (k, b) in c.bundle_names().iter().enumerate() {
        m = m.plus(&ClassExpr::bundle(b).scaled(coeffs[n + k]));
    }
    m
}

fn genus(c: &Configuration) -> Rational {
    rat(1) - c.chi_union(c.full(), &ClassExpr::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_are_sorted_separated_and_counted(p in upoly()) {
        prop_assume!(p.degree().is_some_and(|d| d > 0));
        let roots = isolate_real_roots(&p).unwrap();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert!(total <= p.degree().unwrap());
        let b = p.cauchy_bound();
        prop_assert_eq!(roots.len(), p.square_free_part().sturm_count(&-b.clone(), &b));
        let points: Vec<RealPoint> = roots.into_iter().map(|r| RealPoint::from_box(r.boxed)).collect();
        for w in points.windows(2) {
            prop_assert!(w[0].cmp_exact(&w[1]).is_lt());
            let q = RealPoint::rational_between(&w[0], &w[1]);
            prop_assert!(p.sign_at(&q) != Sign::Zero);
        }
        for r in &points {
            prop_assert_eq!(r.sign_of(&p), Sign::Zero);
        }
    }

    #[test]
    fn eventual_sign_is_sign_far_out(p in upoly()) {
        let far = p.cauchy_bound() + rat(1);
        prop_assert_eq!(eventual_sign(&p), p.sign_at(&far));
    }

    #[test]
    fn sign_regions_agree_with_pointwise_signs(
        c0 in upoly(), c1 in upoly(), samples in prop::collection::vec((-40i64..=40, 1i64..=7), 8)
    ) {
        let coeffs = [c0, c1];
        let regions = eventual_sign_region(&coeffs);
        for (p, q) in samples {
            let x = frac(p, q);
            let hits: Vec<_> = regions.iter().filter(|r| r.interval.contains(&x)).collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(hits[0].sign, eventual_sign_at(&coeffs, &RealPoint::from(x)));
        }
    }

    #[test]
    fn feasible_set_is_exact_on_samples(
        c0 in upoly(), c1 in upoly(), d0 in upoly(),
        samples in prop::collection::vec((-40i64..=40, 1i64..=7), 8)
    ) {
        let a = [c0, c1];
        let b = [d0];
        let set = feasible_set(&[(&a, SignCondition::NonPositive), (&b, SignCondition::NonNegative)]);
        for (p, q) in samples {
            let x = frac(p, q);
            let pt = RealPoint::from(x.clone());
            let direct = eventual_sign_at(&a, &pt) != Sign::Positive && eventual_sign_at(&b, &pt) != Sign::Negative;
            prop_assert_eq!(set.iter().any(|iv| iv.contains(&x)), direct);
        }
    }

    #[test]
    fn bivariate_product_evaluates_pointwise(
        a in prop::collection::vec(-5i64..=5, 4), b in prop::collection::vec(-5i64..=5, 4),
        m in -6i64..=6, x in -6i64..=6
    ) {
        let mk = |c: &[i64]| {
            Poly::constant(rat(c[0])) + Poly::m().scale(&rat(c[1])) + Poly::b().scale(&rat(c[2]))
                + (Poly::m() * Poly::b()).scale(&rat(c[3]))
        };
        let (p, q) = (mk(&a), mk(&b));
        let (mm, xx) = (rat(m), rat(x));
        prop_assert_eq!((p.clone() * q.clone()).eval(&mm, &xx), p.eval(&mm, &xx) * q.eval(&mm, &xx));
    }

    #[test]
    fn generated_curves_validate_and_round_trip(seed in any::<u64>()) {
        let c = curve_from_seed(seed, 1..=6);
        prop_assert!(c.validate().passed());
        let text = c.to_json();
        let back = Configuration::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn complement_identity_and_oracle_agreement(
        seed in any::<u64>(), coeffs in prop::collection::vec(-8i64..=8, 8), mask in 1u64..64
    ) {
        let c = curve_from_seed(seed, 2..=6);
        let n = c.num_components();
        let y = ComponentSet::from_mask(mask & (c.full().mask() >> 1).max(1));
        prop_assume!(!y.is_empty() && y != c.full());
        let m = class(&c, &coeffs);
        let ey = e_value(&c, y, &m).unwrap();
        prop_assert_eq!(&ey, &defect_value(&c, y, &m).unwrap());
        let ez = e_value(&c, y.complement(n), &m).unwrap();
        prop_assert_eq!(ez, -e_value(&c, y, &m.plus(&ClassExpr::union(y))).unwrap());
        prop_assert_eq!(defect_value(&c, c.full(), &m).unwrap(), rat(0));
    }

    #[test]
    fn e_poly_specializes_to_e_value(
        seed in any::<u64>(), mm in -5i64..=5, bb in -5i64..=5, mask in 1u64..64
    ) {
        let c = curve_from_seed(seed, 2..=5);
        let y = ComponentSet::from_mask(mask & (c.full().mask() >> 1).max(1));
        prop_assume!(!y.is_empty() && y != c.full());
        let l = c.parse_class("L").unwrap();
        let k = c.parse_class("K").unwrap();
        let p = e_poly(&c, y, &l, &k, y).unwrap();
        let direct = l.plus(&k.scaled(mm)).plus(&ClassExpr::union(y).scaled(bb));
        prop_assert_eq!(p.eval(&rat(mm), &rat(bb)), e_value(&c, y, &direct).unwrap());
    }

    #[test]
    fn pairs_scope_matches_all_unions(seed in any::<u64>(), mode in prop::bool::ANY) {
        let c = curve_from_seed(seed, 1..=6);
        let l = c.parse_class("L").unwrap();
        let k = c.parse_class("K").unwrap();
        let mode = if mode { Mode::Minus } else { Mode::Plus };
        prop_assert_eq!(
            is_semistable(&c, &l, &k, mode, Scope::ConnectedPairs).unwrap(),
            is_semistable(&c, &l, &k, mode, Scope::AllUnions).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_is_order_free_bounded_and_complete(seed in any::<u64>(), root in 0usize..6) {
        let c = curve_from_seed(seed, 1..=5);
        prop_assume!(genus(&c) >= rat(2));
        let n = c.num_components();
        let l = c.parse_class("L").unwrap();
        let k = c.parse_class("K").unwrap();
        let base = enumerate_with(&c, &l, &k, Mode::Minus, 0, Exec::Sequential).unwrap().twists;
        let other = enumerate_with(&c, &l, &k, Mode::Minus, root % n, Exec::Parallel).unwrap().twists;
        prop_assert_eq!(&base, &other);
        prop_assert!(!base.is_empty() && base.len() <= 1 << (n - 1));
        for t in &base {
            prop_assert!(is_semistable(&c, &apply_twist(&l, t), &k, Mode::Minus, Scope::AllUnions).unwrap());
        }
        let w = oracle_window(&c, &l, &k, Mode::Minus, DEFAULT_WINDOW).unwrap();
        prop_assert_eq!(&base, &brute_force_with(&c, &l, &k, Mode::Minus, w, Exec::Sequential).unwrap());
    }

    #[test]
    fn twists_are_defined_up_to_constants(raw in prop::collection::vec(-9i64..=9, 1..6), shift in -9i64..=9) {
        let moved: Vec<i64> = raw.iter().map(|x| x + shift).collect();
        prop_assert_eq!(Twist::new(&raw), Twist::new(&moved));
        prop_assert_eq!(Twist::new(&raw).coords()[0], 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn generated_surfaces_validate_and_satisfy_identities(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(n, &mut rng);
        let c = synth_generator(2, &tree, seed).unwrap();
        prop_assert!(c.validate().passed());
        let report = identity_battery(&c, 10, seed).unwrap();
        prop_assert!(report.passed(), "{:?}", report.counterexamples);
        let text = c.to_json();
        prop_assert_eq!(Configuration::from_json(&text).unwrap().to_json(), text);
    }
}
