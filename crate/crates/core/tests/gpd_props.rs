use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitary_model::gen::{random_amplified_functor, random_groupoid};
use unitary_model::gpd::{
    adjunction_extend, adjunction_restrict, cstar_max, fundamental_groupoid, nerve, normalize_fp,
};
use unitary_model::numlin::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjunction_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objects = rng.random_range(1..=3);
        let order = rng.random_range(1..=4);
        let g = random_groupoid(&mut rng, objects, order).unwrap();
        let gc = cstar_max(&g);
        let largest = (0..gc.category.len()).map(|x| gc.category.dim(x)).max().unwrap();
        let f = random_amplified_functor(&mut rng, &gc.category, 2 * largest, 1).unwrap();
        let phi = adjunction_restrict(&gc, &f, &tol()).unwrap();
        let back = adjunction_extend(&gc, f.target(), &phi, &tol()).unwrap();
        prop_assert_eq!(back.object_map(), f.object_map());
        prop_assert!(back.max_distance(&f) <= 1e-9);
        let phi2 = adjunction_restrict(&gc, &back, &tol()).unwrap();
        prop_assert!(phi2.max_distance(&phi) <= 1e-9);
    }

    #[test]
    fn regular_representation_has_hom_sizes_as_dimensions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objects = rng.random_range(1..=4);
        let order = rng.random_range(1..=6);
        let g = random_groupoid(&mut rng, objects, order).unwrap();
        prop_assert_eq!(cstar_max(&g).category.hom_dims(), g.hom_sizes());
    }

    #[test]
    fn nerve_satisfies_simplicial_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objects = rng.random_range(1..=2);
        let order = rng.random_range(1..=3);
        let g = random_groupoid(&mut rng, objects, order).unwrap();
        let k = nerve(&g, 3);
        for n in 2..=3 {
            for s in 0..k.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = k.face(n - 1, k.face(n, s, j), i);
                        let rhs = k.face(n - 1, k.face(n, s, i), j - 1);
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn fundamental_groupoid_of_nerve_recovers_the_groupoid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objects = rng.random_range(1..=3);
        let order = rng.random_range(1..=4);
        let g = random_groupoid(&mut rng, objects, order).unwrap();
        let p = fundamental_groupoid(&nerve(&g, 2)).unwrap();
        let n = normalize_fp(&p, 10_000).unwrap().finite().unwrap();
        prop_assert_eq!(n.groupoid.hom_sizes(), g.hom_sizes());
    }
}
