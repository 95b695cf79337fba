//! `verify-axioms` suites: the bundled instances plus a fixed number of
//! random instances drawn from `--seed`.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitary_model::gen::{
    random_amplified_functor, random_block_category, random_functor, random_groupoid, random_path_triples,
    random_retract, random_weq,
};
use unitary_model::gpd::{
    adjunction_extend, adjunction_restrict, codiscrete_groupoid, comparison_functor, cstar_max, cyclic_group,
    fundamental_groupoid, interval_groupoid, nerve, normalize_fp, product_groupoid, terminal_groupoid, FiniteGroupoid,
    Normalization,
};
use unitary_model::matcat::{curry, tensor_max, uncurry, validate_category, MatCStarCategory, StarFunctor};
use unitary_model::model::{
    check_factor_roundtrip, check_retract, check_rlp_equiv, check_two_of_three, factor_cylinder, factor_path,
    lift_cof_tfib, lift_tcof_fib, Check, CheckStatus, LiftingSquare,
};
use unitary_model::numlin::{op_norm, Tolerance, C64};
use unitary_model::sset::{induced_groupoid_functor, pi, standard, FiniteSimplicialSet, SimplicialMap, StandardKind};

use crate::commands::{lift, simplicial_identities, validation_checks};
use crate::{CliResult, Files, LiftMode, RunConfig, Suite};

/// Random instances per suite.
pub const RANDOM_INSTANCES: usize = 12;

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> CliResult<Vec<Check>> {
    match suite {
        Suite::Mc => mc(cfg),
        Suite::Monoidal => monoidal(cfg),
        Suite::Simplicial => simplicial(cfg),
        Suite::Adjunctions => adjunctions(cfg),
    }
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("{prefix}: {}", c.name);
        c
    })
}

fn residual_check(name: String, residual: f64, tol: &Tolerance) -> Check {
    Check::from_residual(name, residual, tol)
}

fn mc(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let tol = &cfg.tolerance;
    let files = Files::bundled();
    let mut out = Vec::new();
    for name in [
        "scalar.json",
        "include.json",
        "collapse.json",
        "diagonal_collapse.json",
        "top.json",
    ] {
        let f = Arc::new(files.functor(&crate::io::Ref::Path(name.into()))?);
        out.extend(prefixed(name, check_factor_roundtrip(&f, cfg.seed, tol)?));
        out.extend(prefixed(name, vec![check_rlp_equiv(&f)]));
    }
    for (name, mode) in [
        ("square_cof_tfib.json", LiftMode::CofTfib),
        ("square_tcof_fib.json", LiftMode::TcofFib),
        ("generator.json", LiftMode::Generator),
    ] {
        let (checks, _) = lift(cfg, &files, mode, Path::new(name))?;
        out.extend(prefixed(name, checks));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..RANDOM_INSTANCES {
        let label = format!("random {k}");
        let seed = cfg.seed.wrapping_add(k as u64);
        let a = random_block_category(&mut rng, 3, 3)?;
        let f = Arc::new(random_functor(&mut rng, &a, 4, 4)?.1);
        out.extend(prefixed(&label, check_factor_roundtrip(&f, seed, tol)?));
        out.extend(prefixed(&label, vec![check_rlp_equiv(&f)]));

        let path_object = factor_path(&f);
        random_path_triples(&mut rng, &path_object, 4, tol)?;
        let path = path_object.snapshot()?;
        let cyl = factor_cylinder(&f)?;
        let squares = [
            (
                LiftingSquare::new(
                    cyl.first.clone(),
                    path.first.clone(),
                    cyl.second.clone(),
                    path.second.clone(),
                    tol,
                )?,
                true,
            ),
            (
                LiftingSquare::new(
                    cyl.first.clone(),
                    cyl.first.clone(),
                    cyl.second.clone(),
                    cyl.second.clone(),
                    tol,
                )?,
                false,
            ),
        ];
        for (sq, trivial_left) in squares {
            let (kind, lifted) = if trivial_left {
                ("tcof/fib lift", lift_tcof_fib(&sq, seed, tol))
            } else {
                ("cof/tfib lift", lift_cof_tfib(&sq, tol))
            };
            out.push(match lifted {
                Ok(l) => residual_check(format!("{label}: {kind}"), l.upper_residual.max(l.lower_residual), tol),
                Err(e) => Check::new(format!("{label}: {kind}"), CheckStatus::Fail).with_witness(e.to_string()),
            });
        }

        let (b, w) = random_weq(&mut rng, &a, 4)?;
        let g = if rng.random_bool(0.5) {
            random_weq(&mut rng, &b, 5)?.1
        } else {
            random_functor(&mut rng, &b, 5, 6)?.1
        };
        out.extend(prefixed(&label, vec![check_two_of_three(&w, &g, seed, tol)?]));

        let small = random_block_category(&mut rng, 2, 3)?;
        let d = random_retract(&mut rng, &small, 3)?;
        out.extend(prefixed(&label, vec![check_retract(&d, seed, tol)?]));
    }
    Ok(out)
}

/// The groupoids whose pairwise comparison functors are checked.
pub fn comparison_groupoids() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![
        ("terminal", terminal_groupoid()),
        ("interval", interval_groupoid()),
        ("Z/2", cyclic_group(2)),
        ("Z/3", cyclic_group(3)),
        (
            "interval x Z/2",
            product_groupoid(&codiscrete_groupoid(&["p", "q"]), &cyclic_group(2)),
        ),
    ]
}

fn monoidal(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let tol = &cfg.tolerance;
    let mut out = Vec::new();
    let groupoids = comparison_groupoids();
    for (n1, g1) in &groupoids {
        for (n2, g2) in &groupoids {
            let c = comparison_functor(g1, g2, tol)?;
            let v = &c.verdict;
            let mut check =
                Check::from_bool(format!("comparison {n1} ⊗ {n2}"), v.is_isomorphism()).with_witness(format!(
                    "objects bijective: {}, hom dims match: {}, full rank: {}, valid: {}",
                    v.objects_bijective, v.hom_dims_match, v.hom_maps_full_rank, v.functor_valid
                ));
            check.residual = Some(v.functor_residual);
            out.push(check);
        }
    }
    let files = Files::bundled();
    let cat = |n: &str| files.category(&crate::io::Ref::Path(n.into()));
    for (l, r) in [
        ("point.json", "m2.json"),
        ("m2.json", "diagonal.json"),
        ("pair.json", "m2.json"),
    ] {
        out.extend(prefixed(&format!("{l} ⊗ {r}"), tensor_checks(&cat(l)?, &cat(r)?, tol)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..RANDOM_INSTANCES {
        let a = random_block_category(&mut rng, 2, 3)?.category;
        let b = random_block_category(&mut rng, 2, 3)?.category;
        out.extend(prefixed(&format!("random {k}"), tensor_checks(&a, &b, tol)?));
    }
    Ok(out)
}

fn tensor_checks(a: &Arc<MatCStarCategory>, b: &Arc<MatCStarCategory>, tol: &Tolerance) -> CliResult<Vec<Check>> {
    let t = tensor_max(a, b, tol)?;
    let n = t.category.len();
    let dims_multiply = (0..n).all(|k| {
        (0..n).all(|l| {
            let ((x, y), (x2, y2)) = (t.split(k), t.split(l));
            t.category.hom_dim(k, l) == a.hom_dim(x, x2) * b.hom_dim(y, y2)
        })
    });
    let mut out = validation_checks("tensor category", &validate_category(&t.category, tol));
    out.push(Check::from_bool("hom dimensions multiply", dims_multiply));
    Ok(out)
}

fn simplicial(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let tol = &cfg.tolerance;
    let budget = cfg.coset_budget;
    let files = Files::bundled();
    let mut out = Vec::new();
    for name in ["delta2.json", "horn21.json", "boundary2.json"] {
        let (k, _) = files.parse::<FiniteSimplicialSet>(Path::new(name))?;
        out.extend(prefixed(name, vec![simplicial_identities(&k)]));
    }

    let d1 = pi(&standard(StandardKind::Delta(1), 2)?, budget)?;
    out.push(Check::from_bool(
        "Π(Δ[1]) is the interval",
        d1.normalized.groupoid.hom_sizes() == interval_groupoid().hom_sizes(),
    ));
    for n in 2..=3 {
        let delta = standard(StandardKind::Delta(n), n)?;
        let pd = pi(&delta, budget)?;
        for k in 0..=n {
            let horn = standard(StandardKind::Horn(n, k), n)?;
            let ph = pi(&horn, budget)?;
            let incl = SimplicialMap::inclusion(&horn, &delta)?;
            let f = induced_groupoid_functor(&incl, &ph, &pd)?;
            out.push(Check::from_bool(
                format!("Π(Λ^{k}[{n}]) → Π(Δ[{n}]) is an isomorphism"),
                f.is_bijective(&pd.normalized.groupoid),
            ));
        }
    }
    let boundary = fundamental_groupoid(&standard(StandardKind::Boundary(2), 2)?)?;
    let infinite = matches!(
        normalize_fp(&boundary, budget)?,
        Normalization::NotFiniteWithinBound { .. }
    );
    out.push(Check::from_bool(
        format!("Π(∂Δ[2]) has no finite model within {budget} cosets"),
        infinite,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..RANDOM_INSTANCES {
        let objects = rng.random_range(1..=3);
        let order = rng.random_range(1..=4);
        let g = random_groupoid(&mut rng, objects, order)?;
        let nv = nerve(&g, 3.min(cfg.dim_cap.max(2)));
        let label = format!("random {k}");
        out.extend(prefixed(&label, vec![simplicial_identities(&nv)]));
        let p = pi(&nerve(&g, 2), budget)?;
        out.push(Check::from_bool(
            format!("{label}: Π of the nerve recovers the groupoid"),
            p.normalized.groupoid.hom_sizes() == g.hom_sizes(),
        ));
        out.extend(prefixed(
            &label,
            validation_checks("πK", &validate_category(p.category(), tol)),
        ));
    }
    Ok(out)
}

fn adjunctions(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let tol = &cfg.tolerance;
    let files = Files::bundled();
    let mut out = Vec::new();
    for name in ["z2.json", "z3.json", "interval.json"] {
        let (g, _) = files.parse::<FiniteGroupoid>(Path::new(name))?;
        let gc = cstar_max(&g);
        let id = StarFunctor::identity(gc.category.clone());
        out.extend(prefixed(name, round_trip(&gc, &id, tol)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..RANDOM_INSTANCES {
        let label = format!("random {k}");
        let objects = rng.random_range(1..=3);
        let order = rng.random_range(1..=4);
        let g = random_groupoid(&mut rng, objects, order)?;
        let gc = cstar_max(&g);
        let largest = (0..gc.category.len()).map(|x| gc.category.dim(x)).max().unwrap_or(1);
        let f = random_amplified_functor(&mut rng, &gc.category, 2 * largest, 1)?;
        out.extend(prefixed(&label, round_trip(&gc, &f, tol)?));
        out.extend(prefixed(&label, exponential_law(&mut rng, tol)?));
    }
    Ok(out)
}

/// `extend ∘ restrict = id` at `f` and `restrict ∘ extend = id` at its restriction.
fn round_trip(gc: &unitary_model::gpd::GroupoidCStar, f: &StarFunctor, tol: &Tolerance) -> CliResult<Vec<Check>> {
    let phi = adjunction_restrict(gc, f, tol)?;
    let back = adjunction_extend(gc, f.target(), &phi, tol)?;
    let phi2 = adjunction_restrict(gc, &back, tol)?;
    let objects_agree = back.object_map() == f.object_map();
    Ok(vec![
        residual_check(
            "extend ∘ restrict = id".into(),
            if objects_agree {
                back.max_distance(f)
            } else {
                f64::INFINITY
            },
            tol,
        ),
        residual_check("restrict ∘ extend = id".into(), phi2.max_distance(&phi), tol),
    ])
}

/// Curry then uncurry a random functor out of `A ⊗ B`, and bound the
/// curried transformations by the norms of the arrows they come from.
fn exponential_law(rng: &mut ChaCha8Rng, tol: &Tolerance) -> CliResult<Vec<Check>> {
    let a = random_block_category(rng, 2, 2)?.category;
    let b = random_block_category(rng, 2, 2)?.category;
    let t = tensor_max(&a, &b, tol)?;
    let f = random_amplified_functor(rng, &t.category, 6, 1)?;
    let c = curry(&t, &f, tol)?;
    let back = uncurry(&c)?;
    let objects_agree = back.object_map() == f.object_map();
    let mut excess: f64 = 0.0;
    for (x, x2) in a.nonzero_pairs().collect::<Vec<_>>() {
        let coeffs: Vec<C64> = (0..a.hom_dim(x, x2))
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let m = a.hom(x, x2).combine(&coeffs);
        let phi = c.transform(x, x2, &m)?;
        excess = excess.max(phi.sup_norm() - op_norm(&m)?);
    }
    Ok(vec![
        residual_check(
            "uncurry ∘ curry = id".into(),
            if objects_agree {
                back.max_distance(&f)
            } else {
                f64::INFINITY
            },
            tol,
        ),
        residual_check("curried arrows are norm-decreasing".into(), excess.max(0.0), tol),
    ])
}
