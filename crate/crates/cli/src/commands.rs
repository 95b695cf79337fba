use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use unitary_model::gpd::{cstar_max, fundamental_groupoid, nerve as nerve_of, normalize_fp, Normalization};
use unitary_model::matcat::{tensor_max, validate_category, validate_functor, StarFunctor, ValidationReport};
use unitary_model::model::{
    factor_cylinder, factor_path, is_cofibration, is_trivial_fibration, is_weak_equivalence, lift_cof_tfib,
    lift_generator, lift_tcof_fib, Check, CheckStatus, LiftingSquare, WeqVerdict,
};
use unitary_model::numlin::unitary_defect;
use unitary_model::sset::{pi as pi_of, FiniteSimplicialSet};
use unitary_model::Error;

use crate::io::{FunctorFile, GeneratorFile, Instance, Ref, SquareFile, TripleFile};
use crate::{CliResult, FactorMode, Files, LiftMode, RunConfig};

type Outcome = CliResult<(Vec<Check>, Option<Value>)>;

fn path_ref<T>(p: &Path) -> Ref<T> {
    Ref::Path(p.display().to_string())
}

/// One passing entry, or one failing entry per violation.
pub(crate) fn validation_checks(name: &str, rep: &ValidationReport) -> Vec<Check> {
    if rep.is_ok() {
        let mut c = Check::new(name, CheckStatus::Pass);
        c.residual = Some(rep.max_residual);
        return vec![c];
    }
    rep.violations
        .iter()
        .map(|v| {
            let mut c = Check::new(format!("{name}: {}", v.check), CheckStatus::Fail).with_witness(v.location.clone());
            c.residual = Some(v.residual);
            c
        })
        .collect()
}

pub(crate) fn weq_check(name: &str, v: &WeqVerdict) -> Check {
    let (status, witness) = match v {
        WeqVerdict::Yes { .. } => (CheckStatus::Pass, None),
        WeqVerdict::No { obstruction } => (CheckStatus::Fail, Some(format!("{obstruction:?}"))),
        WeqVerdict::NoEvidence { object, reason } => {
            (CheckStatus::Unknown, Some(format!("object {object}: {reason:?}")))
        }
    };
    let c = Check::new(name, status);
    match witness {
        Some(w) => c.with_witness(w),
        None => c,
    }
}

pub(crate) fn simplicial_identities(k: &FiniteSimplicialSet) -> Check {
    for n in 2..=k.dim_cap() {
        for s in 0..k.count(n) {
            for j in 1..=n {
                for i in 0..j {
                    if k.face(n - 1, k.face(n, s, j), i) != k.face(n - 1, k.face(n, s, i), j - 1) {
                        let name = &k.level(n)[s].name;
                        return Check::new("simplicial identities", CheckStatus::Fail)
                            .with_witness(format!("d{i}d{j} != d{}d{i} on {name}", j - 1));
                    }
                }
            }
        }
    }
    Check::new("simplicial identities", CheckStatus::Pass)
}

pub fn validate(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    let checks = match files.instance(input)? {
        Instance::Category(c) => validation_checks("category", &validate_category(&c, tol)),
        Instance::Functor(f) => {
            let mut out = validation_checks("source", &validate_category(f.source(), tol));
            out.extend(validation_checks("target", &validate_category(f.target(), tol)));
            out.extend(validation_checks("functor", &validate_functor(&f, tol)));
            out
        }
        // Groupoid and simplicial-set axioms are checked while parsing.
        Instance::Groupoid(_) => vec![Check::new("groupoid", CheckStatus::Pass)],
        Instance::SimplicialSet(k) => vec![simplicial_identities(&k)],
    };
    Ok((checks, None))
}

fn load_functor(files: &Files, input: &Path) -> CliResult<StarFunctor> {
    files.functor(&path_ref(input))
}

pub fn factorize(cfg: &RunConfig, files: &Files, mode: FactorMode, input: &Path, triples: Option<&Path>) -> Outcome {
    let tol = &cfg.tolerance;
    let f = Arc::new(load_functor(files, input)?);
    let mut out = Vec::new();
    let result = match mode {
        FactorMode::Path => {
            let path = factor_path(&f);
            if let Some(t) = triples {
                let (list, _) = files.parse::<Vec<TripleFile>>(t)?;
                for t in list {
                    let x = f.source().index_of(&t.x)?;
                    let y = f.target().index_of(&t.y)?;
                    let name = format!("materialize ({}, u, {})", t.x, t.y);
                    out.push(match path.materialize(x, &t.u, y, tol) {
                        Ok(_) => Check::new(name, CheckStatus::Pass),
                        Err(e) => Check::new(name, CheckStatus::Fail).with_witness(e.to_string()),
                    });
                }
            }
            let r = path.snapshot()?;
            out.push(Check::from_residual("P∘I = F", r.composite_residual, tol));
            out.push(Check::from_bool("I is a cofibration", is_cofibration(&r.first)));
            out.push(weq_check(
                "I is a weak equivalence",
                &is_weak_equivalence(&r.first, cfg.seed, tol)?,
            ));
            out.extend(validation_checks("midway category", &validate_category(&r.midway, tol)));
            r
        }
        FactorMode::Cylinder => {
            let r = factor_cylinder(&f)?;
            out.push(Check::from_residual("Q∘J = F", r.composite_residual, tol));
            out.push(Check::from_bool("J is a cofibration", is_cofibration(&r.first)));
            out.push(Check::from_bool(
                "Q is a trivial fibration",
                is_trivial_fibration(&r.second),
            ));
            out.extend(validation_checks("midway category", &validate_category(&r.midway, tol)));
            r
        }
    };
    let value = json!({
        "midway": &*result.midway,
        "first": result.first.to_data(),
        "second": result.second.to_data(),
    });
    Ok((out, Some(value)))
}

fn lift_failure(name: &str, e: Error) -> CliResult<Check> {
    match e {
        Error::PreconditionFailed(m) | Error::LiftObstruction(m) => {
            Ok(Check::new(name, CheckStatus::Fail).with_witness(m))
        }
        other => Err(other.into()),
    }
}

pub fn lift(cfg: &RunConfig, files: &Files, mode: LiftMode, input: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    if mode == LiftMode::Generator {
        return lift_unitary(cfg, files, input);
    }
    let (sq, ctx) = files.parse::<SquareFile>(input)?;
    let leg = |r: &Ref<FunctorFile>| ctx.functor(r).map(Arc::new);
    let square = LiftingSquare::new(leg(&sq.top)?, leg(&sq.left)?, leg(&sq.right)?, leg(&sq.bottom)?, tol)?;
    let attempt = match mode {
        LiftMode::TcofFib => lift_tcof_fib(&square, cfg.seed, tol),
        _ => lift_cof_tfib(&square, tol),
    };
    let l = match attempt {
        Ok(l) => l,
        Err(e) => return Ok((vec![lift_failure("lift", e)?], None)),
    };
    let mut out = vec![
        Check::from_residual("L∘left = top", l.upper_residual, tol),
        Check::from_residual("right∘L = bottom", l.lower_residual, tol),
    ];
    out.extend(validation_checks("lift", &validate_functor(&l.functor, tol)));
    Ok((out, Some(json!({ "lift": l.functor.to_data() }))))
}

fn lift_unitary(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    let (g, ctx) = files.parse::<GeneratorFile>(input)?;
    let f = ctx.functor(&g.functor)?;
    let x = f.source().index_of(&g.x)?;
    let y = f.target().index_of(&g.y)?;
    match lift_generator(&f, x, &g.v, y, cfg.seed, tol)? {
        Some((l, u)) => {
            let target = f.source().name(u.target).to_string();
            let mut out =
                vec![Check::from_residual("F(u) = v", u.residual, tol).with_witness(format!("u: {} -> {target}", g.x))];
            out.extend(validation_checks("lift", &validate_functor(&l, tol)));
            let value = json!({ "unitary": u.unitary, "target": target, "lift": l.to_data() });
            Ok((out, Some(value)))
        }
        None => {
            // Without a same-dimensional preimage with nonzero homs the answer
            // is a definite no; otherwise the seeded search may have missed.
            let dx = f.source().dim(x);
            let candidates = f
                .preimages(y)
                .into_iter()
                .any(|x2| f.source().dim(x2) == dx && f.source().hom_dim(x, x2) > 0);
            let status = if candidates {
                CheckStatus::Unknown
            } else {
                CheckStatus::Fail
            };
            let witness = if candidates {
                "no unitary preimage found by seeded search"
            } else {
                "no preimage object admits a unitary from x"
            };
            Ok((vec![Check::new("F(u) = v", status).with_witness(witness)], None))
        }
    }
}

pub fn tensor(cfg: &RunConfig, files: &Files, left: &Path, right: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    let a = files.category(&path_ref(left))?;
    let b = files.category(&path_ref(right))?;
    let t = tensor_max(&a, &b, tol)?;
    let n = t.category.len();
    let mismatch = (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).find(|&(k, l)| {
        let ((x, y), (x2, y2)) = (t.split(k), t.split(l));
        t.category.hom_dim(k, l) != a.hom_dim(x, x2) * b.hom_dim(y, y2)
    });
    let mut out = validation_checks("tensor category", &validate_category(&t.category, tol));
    out.push(match mismatch {
        None => Check::new("hom dimensions multiply", CheckStatus::Pass),
        Some((k, l)) => Check::new("hom dimensions multiply", CheckStatus::Fail).with_witness(format!(
            "{} -> {}",
            t.category.name(k),
            t.category.name(l)
        )),
    });
    Ok((
        out,
        Some(serde_json::to_value(&*t.category).expect("categories serialize")),
    ))
}

pub fn groupoid_cstar(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    let (g, _) = files.parse::<unitary_model::gpd::FiniteGroupoid>(input)?;
    let gc = cstar_max(&g);
    let mut out = validation_checks("category", &validate_category(&gc.category, tol));
    out.push(Check::from_bool(
        "hom dimensions equal hom-set sizes",
        gc.category.hom_dims() == g.hom_sizes(),
    ));
    let defect = (0..g.arrow_count())
        .map(|a| unitary_defect(gc.unitary(a)))
        .fold(0.0, f64::max);
    out.push(Check::from_residual("arrows act unitarily", defect, tol));
    Ok((
        out,
        Some(serde_json::to_value(&*gc.category).expect("categories serialize")),
    ))
}

fn not_finite(budget: usize, root: Option<&str>) -> Check {
    let at = root.map(|r| format!(" at {r}")).unwrap_or_default();
    Check::new("finite within budget", CheckStatus::Unknown).with_witness(format!(
        "NotFiniteWithinBound: coset enumeration{at} exceeded {budget} cosets"
    ))
}

pub fn fundamental(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let (k, _) = files.parse::<FiniteSimplicialSet>(input)?;
    let p = fundamental_groupoid(&k)?;
    let mut value = json!({ "presentation": &p });
    let out = match normalize_fp(&p, cfg.coset_budget)? {
        Normalization::Finite(n) => {
            let holds = p
                .relations()
                .iter()
                .all(|r| matches!((n.evaluate(r.src, &r.lhs), n.evaluate(r.src, &r.rhs)), (Ok(a), Ok(b)) if a == b));
            value["groupoid"] = serde_json::to_value(&n.groupoid).expect("groupoids serialize");
            value["vertex_group_orders"] = json!(n.vertex_group_orders);
            vec![
                Check::new("finite within budget", CheckStatus::Pass)
                    .with_witness(format!("vertex group orders {:?}", n.vertex_group_orders)),
                Check::from_bool("relations hold in the normal form", holds),
            ]
        }
        Normalization::NotFiniteWithinBound { budget, root } => vec![not_finite(budget, Some(&root))],
    };
    Ok((out, Some(value)))
}

pub fn nerve(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let (g, _) = files.parse::<unitary_model::gpd::FiniteGroupoid>(input)?;
    let k = nerve_of(&g, cfg.dim_cap);
    let counts: Vec<usize> = (0..=k.dim_cap()).map(|n| k.count(n)).collect();
    let out = vec![simplicial_identities(&k).with_witness(format!("simplices per level {counts:?}"))];
    Ok((out, Some(serde_json::to_value(&k).expect("simplicial sets serialize"))))
}

pub fn pi(cfg: &RunConfig, files: &Files, input: &Path) -> Outcome {
    let tol = &cfg.tolerance;
    let (k, _) = files.parse::<FiniteSimplicialSet>(input)?;
    match pi_of(&k, cfg.coset_budget) {
        Ok(p) => {
            let mut out = validation_checks("category", &validate_category(p.category(), tol));
            out.push(Check::from_bool(
                "hom dimensions equal hom-set sizes",
                p.category().hom_dims() == p.normalized.groupoid.hom_sizes(),
            ));
            Ok((
                out,
                Some(serde_json::to_value(&**p.category()).expect("categories serialize")),
            ))
        }
        Err(Error::NotFiniteWithinBound { budget }) => Ok((vec![not_finite(budget, None)], None)),
        Err(e) => Err(e.into()),
    }
}
