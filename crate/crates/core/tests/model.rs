use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitary_model::gen::{random_block_category, random_functor, random_path_triples, random_weq};
use unitary_model::gpd::{adjunction_extend, cstar_max, interval_groupoid, terminal_groupoid, UniFunctor};
use unitary_model::matcat::{fold, validate_category, validate_functor, MatCStarCategory, MatObject, StarFunctor};
use unitary_model::model::*;
use unitary_model::numlin::{ComplexMatrix, Tolerance, C64};
use unitary_model::Error;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn full(dims: &[usize]) -> Arc<MatCStarCategory> {
    let objects = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| MatObject::new(&format!("x{i}"), d))
        .collect();
    Arc::new(MatCStarCategory::full(objects).unwrap())
}

/// Scalars into the one-object full 2×2 matrix algebra.
fn scalar_inclusion() -> StarFunctor {
    let m2 = full(&[2]);
    StarFunctor::from_fn(Arc::new(MatCStarCategory::unit()), m2, vec![0], |_, _, b| {
        Ok(ComplexMatrix::identity(2).scale(b[(0, 0)]))
    })
    .unwrap()
}

/// `C ⊕ C → C`, `diag(a, b) ↦ a`.
fn diagonal_collapse() -> StarFunctor {
    let spans = [(
        (0, 0),
        vec![ComplexMatrix::unit(2, 2, 0, 0), ComplexMatrix::unit(2, 2, 1, 1)],
    )]
    .into();
    let diag = Arc::new(MatCStarCategory::from_spans(vec![MatObject::new("d", 2)], spans, &tol()).unwrap());
    StarFunctor::from_fn(diag, Arc::new(MatCStarCategory::unit()), vec![0], |_, _, b| {
        Ok(ComplexMatrix::from_vec(1, 1, vec![b[(0, 0)]]).unwrap())
    })
    .unwrap()
}

/// `C*_max(interval) → C*_max(pt)` collapsing both objects.
fn interval_collapse() -> StarFunctor {
    let gi = cstar_max(&interval_groupoid());
    let gt = cstar_max(&terminal_groupoid());
    let one = ComplexMatrix::identity(1);
    let phi = UniFunctor {
        object_map: vec![0, 0],
        images: vec![one; 4],
    };
    adjunction_extend(&gi, &gt.category, &phi, &tol()).unwrap()
}

#[test]
fn cofibrations() {
    let id = StarFunctor::identity(full(&[1, 2]));
    assert!(is_cofibration(&id));
    let (_, collapse) = fold(&full(&[2]), 2).unwrap();
    assert!(!is_cofibration(&collapse));
    let (_, j) = generating_trivial_cofibration();
    assert!(is_cofibration(&j));
}

#[test]
fn weak_equivalences() {
    let id = StarFunctor::identity(full(&[1, 2]));
    assert!(is_weak_equivalence(&id, 0, &tol()).unwrap().is_yes());

    let (gc, j) = generating_trivial_cofibration();
    let v = is_weak_equivalence(&j, 0, &tol()).unwrap();
    let w = v.witnesses().unwrap();
    assert_eq!(w[1].source, 0);
    // The witness at the second object is the interval's generating unitary.
    let g = gc.groupoid.hom(0, 1)[0];
    assert!(w[1].unitary.distance(gc.unitary(g)) < 1e-12);

    match is_weak_equivalence(&scalar_inclusion(), 0, &tol()).unwrap() {
        WeqVerdict::No {
            obstruction: WeqObstruction::NotFull { x: 0, y: 0 },
        } => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        is_weak_equivalence(&diagonal_collapse(), 0, &tol()).unwrap(),
        WeqVerdict::No {
            obstruction: WeqObstruction::NotFaithful { .. }
        }
    ));
    // Dimensions 1 and 2 cannot be isomorphic.
    let incl = StarFunctor::from_fn(full(&[1]), full(&[1, 2]), vec![0], |_, _, b| Ok(b.clone())).unwrap();
    assert!(matches!(
        is_weak_equivalence(&incl, 0, &tol()).unwrap(),
        WeqVerdict::No {
            obstruction: WeqObstruction::NotEssentiallySurjective { object: 1 }
        }
    ));
}

#[test]
fn trivial_fibrations_and_generators() {
    let id = StarFunctor::identity(full(&[1, 2]));
    assert!(is_trivial_fibration(&id));
    for g in [Generator::U, Generator::V, Generator::W] {
        assert!(rlp_generating(&id, g));
    }
    let (_, j) = generating_trivial_cofibration();
    assert!(!is_trivial_fibration(&j));

    let s = scalar_inclusion();
    assert!(rlp_generating(&s, Generator::U));
    assert!(!rlp_generating(&s, Generator::V));
    assert!(rlp_generating(&s, Generator::W));

    let c = diagonal_collapse();
    assert!(!rlp_generating(&c, Generator::W));
    assert!(c.kernel_witness(0, 0).is_some());

    // On one object the fold is object-surjective but misses the homs
    // between the two summands.
    let (_, f) = fold(&full(&[2]), 2).unwrap();
    assert!(!is_trivial_fibration(&f));
    for f in [id, j, s, c, f] {
        assert!(check_rlp_equiv(&f).passed());
    }
}

#[test]
fn unitary_lifts() {
    let a = full(&[2, 2]);
    let id = StarFunctor::identity(a.clone());
    let v = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap();
    let l = solve_unitary_lift(&id, 0, &v, 1, 0, &tol()).unwrap().unwrap();
    assert_eq!(l.target, 1);
    assert!(l.unitary.distance(&v) < 1e-12);

    // Collapse of the interval: the first preimage of the point is object 0,
    // whose identity already lifts the scalar 1; the generator lifts too once
    // the target object is pinned to 1.
    let c = interval_collapse();
    let one = ComplexMatrix::identity(1);
    let l = solve_unitary_lift(&c, 0, &one, 0, 0, &tol()).unwrap().unwrap();
    assert_eq!(l.target, 0);
    assert!(c.apply(0, 0, &l.unitary).distance(&one) < 1e-12);
    let gi = cstar_max(&interval_groupoid());
    let g = gi.groupoid.hom(0, 1)[0];
    let (pre, r) = c.preimage(0, 1, &one).unwrap();
    assert!(r < 1e-12);
    assert!(pre.distance(gi.unitary(g)) < 1e-12);

    let (l, lift) = lift_generator(&c, 0, &one, 0, 0, &tol()).unwrap().unwrap();
    assert_eq!(l.object_map(), &[0, lift.target]);
    assert!(validate_functor(&l, &tol()).is_ok());

    // Nothing over an object outside the image.
    let incl = StarFunctor::from_fn(full(&[1]), full(&[1, 1]), vec![0], |_, _, b| Ok(b.clone())).unwrap();
    assert_eq!(solve_unitary_lift(&incl, 0, &one, 1, 0, &tol()).unwrap(), None);

    assert!(matches!(
        solve_unitary_lift(&id, 0, &ComplexMatrix::identity(3), 1, 0, &tol()),
        Err(Error::SquareMismatch(_))
    ));
}

#[test]
fn kernel_sampling_finds_invertible_lifts() {
    // C ⊕ C → C, lifting 1: the minimum-norm solution diag(1, 0) is singular.
    let c = diagonal_collapse();
    let one = ComplexMatrix::identity(1);
    let (a0, _) = c.preimage(0, 0, &one).unwrap();
    assert!(a0.distance(&ComplexMatrix::unit(2, 2, 0, 0)) < 1e-12);
    let l = solve_unitary_lift(&c, 0, &one, 0, 11, &tol()).unwrap().unwrap();
    assert!(c.apply(0, 0, &l.unitary).distance(&one) < 1e-9);
    assert!(unitary_model::numlin::unitary_defect(&l.unitary) < 1e-9);
}

#[test]
fn quasi_inverses() {
    let a = full(&[1, 2]);
    let id = Arc::new(StarFunctor::identity(a.clone()));
    let v = is_weak_equivalence(&id, 0, &tol()).unwrap();
    let q = quasi_inverse(&id, &v, &tol()).unwrap();
    assert!(q.functor.same_as(&id, &tol()));
    assert!(
        q.unit
            .max_distance(&unitary_model::matcat::NatTransform::identity(Arc::new(
                q.unit.source().as_ref().clone()
            )))
            < 1e-12
    );

    let (gc, j) = generating_trivial_cofibration();
    let j = Arc::new(j);
    let v = is_weak_equivalence(&j, 0, &tol()).unwrap();
    let q = quasi_inverse(&j, &v, &tol()).unwrap();
    assert_eq!(q.functor.object_map(), &[0, 0]);
    let g = gc.groupoid.hom(0, 1)[0];
    assert!(q.counit.component(1).distance(gc.unitary(g)) < 1e-12);
    for t in [&q.unit, &q.counit] {
        assert!(t.is_natural(&tol()) && t.is_unitary(&tol()));
    }
    // Injective on objects: GF = 1 on objects with identity unit.
    assert_eq!(j.then(&q.functor).unwrap().object_map(), &[0]);
    assert!(q.unit.component(0).distance(&ComplexMatrix::identity(1)) < 1e-12);

    let bad = quasi_inverse(
        &Arc::new(scalar_inclusion()),
        &WeqVerdict::No {
            obstruction: WeqObstruction::NotFull { x: 0, y: 0 },
        },
        &tol(),
    );
    assert!(matches!(bad, Err(Error::NotAWeakEquivalence(_))));
}

#[test]
fn random_quasi_inverses_are_natural() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..25 {
        let a = random_block_category(&mut rng, 3, 3).unwrap();
        let (_, f) = random_weq(&mut rng, &a, 4).unwrap();
        let f = Arc::new(f);
        let v = is_weak_equivalence(&f, k, &tol()).unwrap();
        let q = quasi_inverse(&f, &v, &tol()).unwrap();
        assert!(validate_functor(&q.functor, &tol()).is_ok());
        for t in [&q.unit, &q.counit] {
            assert!(t.naturality_residual() <= 1e-8, "{}", t.naturality_residual());
            assert!(t.is_unitary(&tol()));
        }
    }
}

#[test]
fn path_factorization() {
    let (gc, j) = generating_trivial_cofibration();
    let j = Arc::new(j);
    let path = factor_path(&j);
    let g = gc.groupoid.hom(0, 1)[0];
    let u = gc.unitary(g).clone();
    let k = path.materialize(0, &u, 1, &tol()).unwrap();
    assert_eq!(k, 1);
    assert_eq!(path.materialize(0, &u, 1, &tol()).unwrap(), 1);
    let snap = path.snapshot().unwrap();
    assert_eq!(snap.midway.name(1), "(*,u1,1)");
    assert_eq!(snap.second.map_object(1), 1);
    assert!(snap.composite_residual < 1e-12);
    assert!(validate_category(&snap.midway, &tol()).is_ok());
    assert!(validate_functor(&snap.second, &tol()).is_ok());
    // P(1) on (•,1,0) → (•,g,1) is g·F(1)·1* = g.
    let one = ComplexMatrix::identity(1);
    assert!(snap.second.apply(0, 1, &one).distance(&u) < 1e-12);
    assert!(path.project(0, 1, &one).unwrap().distance(&u) < 1e-12);
    // P lifts every unitary at every object.
    let (k2, lift) = path.lift_unitary(1, &u.adjoint(), 0, &tol()).unwrap();
    assert_eq!(path.triple(k2).unwrap().target, 0);
    assert!(path.project(1, k2, &lift).unwrap().distance(&u.adjoint()) < 1e-12);

    let id = Arc::new(StarFunctor::identity(Arc::new(MatCStarCategory::unit())));
    let snap = factor_path(&id).snapshot().unwrap();
    assert_eq!(snap.midway.name(0), "(*,1,*)");
    assert!(snap.first.then(&snap.second).unwrap().same_as(&id, &tol()));
}

#[test]
fn cylinder_factorization() {
    let a = full(&[1, 2]);
    let cyl = factor_cylinder(&StarFunctor::identity(a.clone())).unwrap();
    assert_eq!(cyl.midway.len(), 4);
    assert_eq!(cyl.second.object_map(), &[0, 1, 0, 1]);
    assert!(is_trivial_fibration(&cyl.second));

    let (_, j) = generating_trivial_cofibration();
    let cyl = factor_cylinder(&j).unwrap();
    assert_eq!(cyl.midway.hom_dims(), vec![vec![1; 3]; 3]);
    assert_eq!(cyl.midway.name(0), "0.*");
    assert!(is_cofibration(&cyl.first) && is_trivial_fibration(&cyl.second));

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let a = random_block_category(&mut rng, 3, 3).unwrap();
        let (b, f) = random_functor(&mut rng, &a, 4, 4).unwrap();
        let cyl = factor_cylinder(&f).unwrap();
        let na = a.category.len();
        for y in 0..b.category.len() {
            for x2 in 0..na {
                assert_eq!(cyl.midway.hom_dim(na + y, x2), b.category.hom_dim(y, f.map_object(x2)));
            }
        }
        assert!(cyl.composite_residual < 1e-9);
        assert!(validate_category(&cyl.midway, &tol()).is_ok());
    }
}

#[test]
fn pushout_products() {
    let (_, j) = generating_trivial_cofibration();
    let v = pushout_product_objects(&j, &j);
    assert_eq!((v.pushout_size, v.target_size, v.injective), (3, 4, true));

    let id = StarFunctor::identity(full(&[1, 1]));
    let v = pushout_product_objects(&id, &id);
    assert!(v.injective);
    assert_eq!(v.pushout_size, v.target_size);

    // F injective, F' collapsing two objects: (b, a1) and (b, a2) stay apart
    // when b is outside the image of F but land on the same pair.
    let (_, collapse) = fold(&full(&[1]), 2).unwrap();
    let v = pushout_product_objects(&j, &collapse);
    assert_eq!((v.pushout_size, v.target_size), (3, 2));
    assert!(!v.injective);
    assert_eq!(v.collision, Some(("(1,0.x0)".into(), "(1,1.x0)".into())));
}

#[test]
fn lifts_in_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..20 {
        let a = random_block_category(&mut rng, 3, 3).unwrap();
        let (_, f) = random_functor(&mut rng, &a, 4, 4).unwrap();
        let f = Arc::new(f);
        let path_object = factor_path(&f);
        random_path_triples(&mut rng, &path_object, 4, &tol()).unwrap();
        let path = path_object.snapshot().unwrap();
        let cyl = factor_cylinder(&f).unwrap();

        // I against Q, with Q∘J = F = P∘I.
        let sq = LiftingSquare::new(
            cyl.first.clone(),
            path.first.clone(),
            cyl.second.clone(),
            path.second.clone(),
            &tol(),
        )
        .unwrap();
        let l = lift_tcof_fib(&sq, k, &tol()).unwrap();
        assert!(
            l.upper_residual <= 1e-8 && l.lower_residual <= 1e-8,
            "{} {}",
            l.upper_residual,
            l.lower_residual
        );
        assert!(validate_functor(&l.functor, &tol()).is_ok());

        // J against Q: objects 1.y may be sent to an earlier 0.x over the same y.
        let sq = LiftingSquare::new(
            cyl.first.clone(),
            cyl.first.clone(),
            cyl.second.clone(),
            cyl.second.clone(),
            &tol(),
        )
        .unwrap();
        let l = lift_cof_tfib(&sq, &tol()).unwrap();
        assert!(l.upper_residual <= 1e-8 && l.lower_residual <= 1e-8);
        assert!(validate_functor(&l.functor, &tol()).is_ok());
    }
}

#[test]
fn lift_preconditions() {
    let (_, j) = generating_trivial_cofibration();
    let j = Arc::new(j);
    let s = Arc::new(scalar_inclusion());
    let b = s.target().clone();
    let unit = Arc::new(MatCStarCategory::unit());
    let id_unit = Arc::new(StarFunctor::identity(unit));
    let id_b = Arc::new(StarFunctor::identity(b));
    let sq = LiftingSquare::new(s.clone(), id_unit.clone(), id_b.clone(), s.clone(), &tol()).unwrap();
    // Left leg is the identity: the lift is the bottom leg.
    let l = lift_cof_tfib(&sq, &tol()).unwrap();
    assert!(l.functor.same_as(&s, &tol()));
    let l = lift_tcof_fib(&sq, 0, &tol()).unwrap();
    assert!(l.functor.same_as(&s, &tol()));
    // Scalar inclusion is not a weak equivalence.
    let sq = LiftingSquare::new(s.clone(), s.clone(), id_b.clone(), id_b.clone(), &tol()).unwrap();
    assert!(matches!(
        lift_tcof_fib(&sq, 0, &tol()),
        Err(Error::PreconditionFailed(_))
    ));
    let sq = LiftingSquare::new(j.clone(), id_unit.clone(), id_b.clone(), j.clone(), &tol());
    assert!(matches!(sq, Err(Error::SquareMismatch(_))));
}
