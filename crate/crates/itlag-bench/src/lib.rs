//! Fixtures shared by the benchmarks.

use itlag::homlin::diagram::Diagram;
use itlag::lag::correspondence::{random_lagrangian, random_object};
use itlag::lag::Correspondence;
use itlag::random::{seeded, ComplexShape};
use itlag::span_nondeg::{random_fold_cone, BottomKind};

/// A fixed random fold cone diagram on `sp^n ▷`.
pub fn fold_cone(n: usize, seed: u64) -> Diagram {
    let mut rng = seeded(seed);
    random_fold_cone(&mut rng, n, &ComplexShape::default(), BottomKind::Acyclic).expect("generator succeeds")
}

/// Two composable random Lagrangian correspondences of shift `s`.
pub fn lagrangian_pair(s: i32, seed: u64) -> (Correspondence, Correspondence) {
    let mut rng = seeded(seed);
    let (wx, x) = random_object(&mut rng, s, 3);
    let (wy, y) = random_object(&mut rng, s, 3);
    let (wz, z) = random_object(&mut rng, s, 3);
    let c1 = random_lagrangian(&mut rng, (&wx, &x), (&wy, &y)).expect("generator succeeds");
    let c2 = random_lagrangian(&mut rng, (&wy, &y), (&wz, &z)).expect("generator succeeds");
    (c1, c2)
}
