//! Randomized invariants across modules.

use proptest::prelude::*;

use itlag::cobordism::{orientation_check, CobordismPresentation, FlatLocalSystem};
use itlag::grid::{check_grid, IntervalSeq, IntervalTuple};
use itlag::lag::compose;
use itlag::lag::correspondence::{random_lagrangian, random_object};
use itlag::random::{random_complex, seeded, ComplexShape};
use itlag::rational::q;
use itlag::spine::PFamily;

fn interval_seq() -> impl Strategy<Value = IntervalSeq> {
    (-5i64..5, prop::collection::vec((0i64..3, 0i64..3, 1i64..4), 1..=3)).prop_map(|(start, steps)| {
        let mut pairs: Vec<(i64, i64)> = Vec::new();
        let mut a = start;
        for (da, db, w) in steps {
            a += da;
            let b = match pairs.last() {
                Some(&(_, prev)) => (a + w).max(prev + db),
                None => a + w,
            };
            pairs.push((a, b));
        }
        IntervalSeq::from_i64(&pairs).expect("valid by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_identities_hold(dirs in prop::collection::vec(interval_seq(), 1..=2)) {
        let t = check_grid(&IntervalTuple::new(dirs));
        prop_assert!(t.ok(), "{:?}", t.failures);
    }

    #[test]
    fn spine_values_are_contractible(j in prop::collection::vec(0usize..=2, 0..=2), l in 0usize..=2, pick in any::<prop::sample::Index>()) {
        let family = PFamily::new(j, l);
        let objects = family.objects();
        let xi = pick.get(&objects);
        let v = family.value(xi).unwrap();
        for &n in v.dims().keys() {
            prop_assert!(v.diff(n + 1).mul(&v.diff(n)).is_zero());
        }
        prop_assert_eq!(v.homology(), [(0, 1)].into());
        for c in objects.iter().filter(|c| xi.maps_to(c)) {
            prop_assert!(family.structure_map(xi, c).unwrap().is_quasi_iso());
        }
    }

    #[test]
    fn duality_reflects_homology(seed in any::<u64>(), k in -2i32..=2) {
        let c = random_complex(&mut seeded(seed), &ComplexShape::default());
        let h = c.homology();
        let hd = c.dual().homology();
        let hs = c.shift(k).homology();
        for (&n, &r) in &h {
            prop_assert_eq!(hd.get(&-n).copied(), Some(r));
            prop_assert_eq!(hs.get(&(n - k)).copied(), Some(r));
        }
        prop_assert_eq!(hd.len(), h.len());
    }

    #[test]
    fn lagrangians_compose(seed in any::<u64>(), s in -1i32..=2) {
        let mut rng = seeded(seed);
        let (wx, x) = random_object(&mut rng, s, 2);
        let (wy, y) = random_object(&mut rng, s, 2);
        let (wz, z) = random_object(&mut rng, s, 2);
        let c1 = random_lagrangian(&mut rng, (&wx, &x), (&wy, &y)).unwrap();
        let c2 = random_lagrangian(&mut rng, (&wy, &y), (&wz, &z)).unwrap();
        prop_assert!(compose(&c1, &c2).unwrap().is_lagrangian().unwrap());
    }

    #[test]
    fn circle_duality_with_any_monodromy(m in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5])) {
        let p = CobordismPresentation::bundled("circle").unwrap();
        let e = FlatLocalSystem::rank_one((0, 2), q(m)).unwrap();
        prop_assert!(orientation_check(&p, &e).unwrap().ok());
    }
}
