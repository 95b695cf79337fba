use unitary_model::gpd::{
    cstar_max, fundamental_groupoid, interval_groupoid, nerve, normalize_fp, GroupoidFunctor, Normalization,
    COSET_BUDGET,
};
use unitary_model::matcat::validate_functor;
use unitary_model::numlin::Tolerance;
use unitary_model::sset::{induced_groupoid_functor, pi, pi_map, standard, SimplicialMap, StandardKind};
use unitary_model::Error;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn presentations_of_standard_simplices() {
    let d0 = fundamental_groupoid(&standard(StandardKind::Delta(0), 2).unwrap()).unwrap();
    assert_eq!((d0.objects().len(), d0.generators().len()), (1, 0));
    let d1 = fundamental_groupoid(&standard(StandardKind::Delta(1), 2).unwrap()).unwrap();
    assert_eq!(
        (d1.objects().len(), d1.generators().len(), d1.relations().len()),
        (2, 1, 0)
    );
    let d2 = fundamental_groupoid(&standard(StandardKind::Delta(2), 2).unwrap()).unwrap();
    assert_eq!(
        (d2.objects().len(), d2.generators().len(), d2.relations().len()),
        (3, 3, 1)
    );
    let r = &d2.relations()[0];
    // d₀ℓ · d₂ℓ = d₁ℓ with d₀ℓ = (1,2), d₂ℓ = (0,1), d₁ℓ = (0,2).
    assert_eq!(d2.display_word(&r.lhs), "1,2.0,1");
    assert_eq!(d2.display_word(&r.rhs), "0,2");
}

#[test]
fn delta_two_is_codiscrete() {
    let p = fundamental_groupoid(&standard(StandardKind::Delta(2), 2).unwrap()).unwrap();
    let n = normalize_fp(&p, COSET_BUDGET).unwrap().finite().unwrap();
    assert_eq!(n.groupoid.hom_sizes(), vec![vec![1; 3]; 3]);
    for r in p.relations() {
        assert_eq!(n.evaluate(r.src, &r.lhs).unwrap(), n.evaluate(r.src, &r.rhs).unwrap());
    }
}

#[test]
fn boundary_has_infinite_vertex_group() {
    let p = fundamental_groupoid(&standard(StandardKind::Boundary(2), 2).unwrap()).unwrap();
    assert!(matches!(
        normalize_fp(&p, COSET_BUDGET).unwrap(),
        Normalization::NotFiniteWithinBound {
            budget: COSET_BUDGET,
            ..
        }
    ));
    assert_eq!(
        pi(&standard(StandardKind::Boundary(2), 2).unwrap(), COSET_BUDGET).unwrap_err(),
        Error::NotFiniteWithinBound { budget: COSET_BUDGET }
    );
}

#[test]
fn horn_inclusions_induce_isomorphisms() {
    for n in 2..=3 {
        let delta = standard(StandardKind::Delta(n), n).unwrap();
        let pd = pi(&delta, COSET_BUDGET).unwrap();
        for k in 0..=n {
            let horn = standard(StandardKind::Horn(n, k), n).unwrap();
            let ph = pi(&horn, COSET_BUDGET).unwrap();
            let incl = SimplicialMap::inclusion(&horn, &delta).unwrap();
            let f = induced_groupoid_functor(&incl, &ph, &pd).unwrap();
            assert!(f.is_bijective(&pd.normalized.groupoid), "n={n} k={k}");
            let star = pi_map(&incl, &ph, &pd, &tol()).unwrap();
            assert!(validate_functor(&star, &tol()).is_ok());
            assert!(star.is_fully_faithful() && star.is_injective_on_objects() && star.is_surjective_on_objects());
        }
    }
}

#[test]
fn delta_one_is_the_interval() {
    let p = pi(&standard(StandardKind::Delta(1), 2).unwrap(), COSET_BUDGET).unwrap();
    let g = &p.normalized.groupoid;
    let i = interval_groupoid();
    assert_eq!(g.hom_sizes(), i.hom_sizes());
    // Send the interval's isomorphism to the generator.
    let gen = p.normalized.generator_images[0];
    let arrow_map = (0..i.arrow_count())
        .map(|a| match (i.src(a), i.tgt(a)) {
            (x, y) if x == y => g.identity(x),
            (0, 1) => gen,
            _ => g.inverse(gen),
        })
        .collect();
    let iso = GroupoidFunctor {
        object_map: vec![0, 1],
        arrow_map,
    };
    iso.validate(&i, g).unwrap();
    assert!(iso.is_bijective(g));
    assert_eq!(p.category().hom_dims(), cstar_max(&i).category.hom_dims());
}

#[test]
fn nerve_of_a_groupoid_recovers_it() {
    // Π(N G) ≅ G for a finite groupoid G.
    let g = unitary_model::gpd::product_groupoid(&interval_groupoid(), &unitary_model::gpd::cyclic_group(3));
    let p = pi(&nerve(&g, 2), COSET_BUDGET).unwrap();
    assert_eq!(p.normalized.groupoid.hom_sizes(), g.hom_sizes());
}
