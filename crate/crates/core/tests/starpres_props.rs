use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitary_model::gen::random_bounded_instance;
use unitary_model::numlin::{op_norm, Tolerance, C64};
use unitary_model::starpres::{free_star_category, norm_bound, Quiver, QuiverArrow, StarExpr};

/// Two objects with a generator in every direction, so every type is inhabited.
fn full_quiver() -> Quiver {
    Quiver::new(
        vec!["x".into(), "y".into()],
        vec![
            QuiverArrow::new("a", "x", "y"),
            QuiverArrow::new("b", "y", "x"),
            QuiverArrow::new("c", "x", "x"),
            QuiverArrow::new("d", "y", "y"),
        ],
    )
    .unwrap()
}

/// Small Gaussian integers keep every product and sum exact in f64.
fn small_coef(rng: &mut ChaCha8Rng) -> C64 {
    const CHOICES: [(f64, f64); 6] = [(1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0)];
    let (re, im) = CHOICES[rng.random_range(0..CHOICES.len())];
    C64::new(re, im)
}

fn random_expr(q: &Quiver, src: &str, tgt: &str, depth: u32, rng: &mut ChaCha8Rng) -> StarExpr {
    let leaf = |rng: &mut ChaCha8Rng| -> StarExpr {
        if src == tgt && rng.random_bool(0.3) {
            return StarExpr::Id(src.into());
        }
        let forward: Vec<_> = q.arrows.iter().filter(|a| a.src == src && a.tgt == tgt).collect();
        let backward: Vec<_> = q.arrows.iter().filter(|a| a.src == tgt && a.tgt == src).collect();
        if rng.random_bool(0.5) || backward.is_empty() {
            StarExpr::Gen(forward[rng.random_range(0..forward.len())].name.clone())
        } else {
            StarExpr::adj(StarExpr::Gen(
                backward[rng.random_range(0..backward.len())].name.clone(),
            ))
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..5) {
        0 => leaf(rng),
        1 => StarExpr::adj(random_expr(q, tgt, src, depth - 1, rng)),
        2 => {
            let mid = &q.objects[rng.random_range(0..q.objects.len())];
            StarExpr::comp(
                random_expr(q, mid, tgt, depth - 1, rng),
                random_expr(q, src, mid, depth - 1, rng),
            )
        }
        3 => StarExpr::sum(
            random_expr(q, src, tgt, depth - 1, rng),
            random_expr(q, src, tgt, depth - 1, rng),
        ),
        _ => StarExpr::scale(small_coef(rng), random_expr(q, src, tgt, depth - 1, rng)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rewriting_is_confluent(seed in any::<u64>()) {
        let q = full_quiver();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = if rng.random_bool(0.5) { "x" } else { "y" };
        let tgt = if rng.random_bool(0.5) { "x" } else { "y" };
        let e = random_expr(&q, src, tgt, 4, &mut rng);
        let direct = e.to_element(&q).unwrap();

        let mut picks = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let random_order = e.normalize_with(|n| picks.random_range(0..n));
        let leftmost = e.normalize_with(|_| 0);
        prop_assert!(random_order.is_normal());
        prop_assert!(leftmost.is_normal());
        prop_assert_eq!(random_order.to_element(&q).unwrap(), direct.clone());
        prop_assert_eq!(leftmost.to_element(&q).unwrap(), direct);
    }

    #[test]
    fn involution_has_period_two(seed in any::<u64>()) {
        let q = full_quiver();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&q, "x", "y", 4, &mut rng).to_element(&q).unwrap();
        let e = e.scale(C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)));
        prop_assert_eq!(e.adjoint().adjoint(), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluation_respects_norm_bound(seed in any::<u64>()) {
        let inst = random_bounded_instance(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let p = free_star_category(&inst.quiver).unwrap().with_bounds(inst.bounds.clone()).unwrap();
        let ev = p.evaluate(&inst.rep, &Tolerance::default()).unwrap();
        let value = op_norm(&ev.eval(&inst.element).unwrap()).unwrap();
        let c = norm_bound(&inst.element, &inst.bounds).unwrap();
        prop_assert!(value <= c + 1e-9, "{} > {}", value, c);
    }
}
