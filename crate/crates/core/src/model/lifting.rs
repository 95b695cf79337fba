use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::predicates::{is_cofibration, is_trivial_fibration, is_weak_equivalence, quasi_inverse};
use crate::error::{Error, Result};
use crate::gpd::{adjunction_extend, cstar_max, interval_groupoid, GroupoidCStar, UniFunctor};
use crate::matcat::{same_category, uni_membership, MatCStarCategory, StarFunctor, ISO_SAMPLES};
use crate::numlin::{min_singular_value, polar_unitary, svd, ComplexMatrix, Tolerance, C64, RANK_RTOL};

/// A unitary `u: x → target` with `F(u) ≈ v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryLift {
    pub unitary: ComplexMatrix,
    pub target: usize,
    pub residual: f64,
}

/// Looks for a unitary `u: x → x'` with `F(u) = v` and `Fx' = y`. For every
/// `x'` over `y` in declaration order, solves `F(a) = v` on `A(x, x')`; a
/// singular minimum-norm solution is perturbed along the kernel with seeded
/// draws. An invertible solution is unitarized, which `F` commutes with.
pub fn solve_unitary_lift(
    f: &StarFunctor,
    x: usize,
    v: &ComplexMatrix,
    y: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Option<UnitaryLift>> {
    let b = f.target();
    if x >= f.source().len() || y >= b.len() {
        return Err(Error::SquareMismatch("object out of range".into()));
    }
    let fx = f.map_object(x);
    if v.shape() != (b.dim(y), b.dim(fx)) {
        return Err(Error::SquareMismatch(format!(
            "unitary of shape {:?} does not start at F({}) = {}",
            v.shape(),
            f.source().name(x),
            b.name(fx)
        )));
    }
    if !uni_membership(b, fx, y, v, tol) {
        return Err(Error::NotUnitary(format!("{} -> {}", b.name(fx), b.name(y))));
    }
    let a_cat = f.source();
    for x2 in f.preimages(y) {
        if a_cat.dim(x2) != a_cat.dim(x) || a_cat.hom_dim(x, x2) == 0 {
            continue;
        }
        let (a0, r) = f.preimage(x, x2, v)?;
        if !tol.accepts(r, v.frobenius_norm()) {
            continue;
        }
        let mut candidates = vec![a0.clone()];
        if min_singular_value(&a0)? <= tol.eps_abs {
            let kernel = svd(&f.hom_matrix(x, x2))?.kernel(RANK_RTOL);
            if !kernel.is_empty() {
                let hom = a_cat.hom(x, x2);
                let dirs: Vec<ComplexMatrix> = kernel.iter().map(|k| hom.combine(k)).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (x2 as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                for _ in 0..ISO_SAMPLES {
                    let mut c = a0.clone();
                    for d in &dirs {
                        c.axpy(
                            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)),
                            d,
                        );
                    }
                    candidates.push(c);
                }
            }
        }
        for c in candidates {
            if min_singular_value(&c)? <= tol.eps_abs {
                continue;
            }
            let u = polar_unitary(&c, tol)?;
            let residual = f.apply(x, x2, &u).distance(v);
            if tol.accepts(residual, v.frobenius_norm()) {
                return Ok(Some(UnitaryLift {
                    unitary: u,
                    target: x2,
                    residual,
                }));
            }
        }
    }
    Ok(None)
}

/// `right ∘ top = bottom ∘ left` with `top: A → C`, `left: A → B`,
/// `right: C → D`, `bottom: B → D`.
#[derive(Debug, Clone)]
pub struct LiftingSquare {
    pub top: Arc<StarFunctor>,
    pub left: Arc<StarFunctor>,
    pub right: Arc<StarFunctor>,
    pub bottom: Arc<StarFunctor>,
    /// Matrix residual of the commutation.
    pub residual: f64,
}

impl LiftingSquare {
    /// Checks the corners, exact commutation on objects and commutation on
    /// matrices within `tol`.
    pub fn new(
        top: Arc<StarFunctor>,
        left: Arc<StarFunctor>,
        right: Arc<StarFunctor>,
        bottom: Arc<StarFunctor>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let corners = [
            (top.source(), left.source(), "top and left"),
            (top.target(), right.source(), "top and right"),
            (left.target(), bottom.source(), "left and bottom"),
            (right.target(), bottom.target(), "right and bottom"),
        ];
        for (p, q, what) in corners {
            if !same_category(p, q) {
                return Err(Error::SquareMismatch(format!("{what} do not share a corner")));
            }
        }
        let upper = top.then(&right)?;
        let lower = left.then(&bottom)?;
        if upper.object_map() != lower.object_map() {
            return Err(Error::SquareMismatch("square does not commute on objects".into()));
        }
        let residual = upper.max_distance(&lower);
        if !tol.accepts(residual, 1.0) {
            return Err(Error::SquareMismatch(format!(
                "square does not commute (residual {residual:.3e})"
            )));
        }
        Ok(LiftingSquare {
            top,
            left,
            right,
            bottom,
            residual,
        })
    }
}

/// A diagonal `L: B → C` with its two triangle residuals.
#[derive(Debug, Clone)]
pub struct Lift {
    pub functor: StarFunctor,
    /// `‖L ∘ left − top‖` on basis images.
    pub upper_residual: f64,
    /// `‖right ∘ L − bottom‖` on basis images.
    pub lower_residual: f64,
}

fn certify(sq: &LiftingSquare, l: StarFunctor) -> Result<Lift> {
    let upper = sq.left.then(&l)?;
    let lower = l.then(&sq.right)?;
    if upper.object_map() != sq.top.object_map() || lower.object_map() != sq.bottom.object_map() {
        return Err(Error::LiftObstruction("triangles do not commute on objects".into()));
    }
    Ok(Lift {
        upper_residual: upper.max_distance(&sq.top),
        lower_residual: lower.max_distance(&sq.bottom),
        functor: l,
    })
}

/// Lift of a trivial cofibration against a functor whose unitary lifts are
/// found by [`solve_unitary_lift`]. With `H` a quasi-inverse of the left leg
/// and `w_y: FHy → y`, objects over the image keep `LFz = Uz`; every other `y`
/// lifts `V(w_y)` at `UHy` to `t_y: UHy → Ly`, and `Lb = t_{y'}·U(Hb)·t_y*`.
pub fn lift_tcof_fib(sq: &LiftingSquare, seed: u64, tol: &Tolerance) -> Result<Lift> {
    let (f, u, g, v) = (&sq.left, &sq.top, &sq.right, &sq.bottom);
    if !is_cofibration(f) {
        return Err(Error::PreconditionFailed("left leg is not injective on objects".into()));
    }
    let verdict = is_weak_equivalence(f, seed, tol)?;
    if !verdict.is_yes() {
        return Err(Error::PreconditionFailed("left leg is not a weak equivalence".into()));
    }
    let h = quasi_inverse(f, &verdict, tol)?;
    let b = f.target();
    let mut l_obj = Vec::with_capacity(b.len());
    let mut t = Vec::with_capacity(b.len());
    for y in 0..b.len() {
        if let Some(&z) = f.preimages(y).first() {
            let c = u.map_object(z);
            l_obj.push(c);
            t.push(ComplexMatrix::identity(u.target().dim(c)));
            continue;
        }
        let hy = h.functor.map_object(y);
        let c = u.map_object(hy);
        let vw = v.apply(f.map_object(hy), y, h.counit.component(y));
        let lifted = solve_unitary_lift(g, c, &vw, v.map_object(y), seed, tol)?
            .ok_or_else(|| Error::LiftObstruction(b.name(y).into()))?;
        l_obj.push(lifted.target);
        t.push(lifted.unitary);
    }
    let hf = &h.functor;
    let l = StarFunctor::from_fn(b.clone(), u.target().clone(), l_obj, |y, y2, m| {
        let (hy, hy2) = (hf.map_object(y), hf.map_object(y2));
        let inner = u.apply(hy, hy2, &hf.apply(y, y2, m));
        Ok(&(&t[y2] * &inner) * &t[y].adjoint())
    })?;
    certify(sq, l)
}

/// Lift of a cofibration against a trivial fibration: objects over the image
/// of the left leg go to `Uz`, the rest to the first `G`-preimage of `Vy`, and
/// `Lb = G⁻¹(Vb)`.
pub fn lift_cof_tfib(sq: &LiftingSquare, tol: &Tolerance) -> Result<Lift> {
    let (f, u, g, v) = (&sq.left, &sq.top, &sq.right, &sq.bottom);
    if !is_cofibration(f) {
        return Err(Error::PreconditionFailed("left leg is not injective on objects".into()));
    }
    if !is_trivial_fibration(g) {
        return Err(Error::PreconditionFailed("right leg is not a trivial fibration".into()));
    }
    let b = f.target();
    let l_obj: Vec<usize> = (0..b.len())
        .map(|y| match f.preimages(y).first() {
            Some(&z) => u.map_object(z),
            None => g.preimages(v.map_object(y))[0],
        })
        .collect();
    let l = StarFunctor::from_fn(b.clone(), u.target().clone(), l_obj.clone(), |y, y2, m| {
        let vb = v.apply(y, y2, m);
        let (pre, r) = g.preimage(l_obj[y], l_obj[y2], &vb)?;
        if !tol.accepts(r, vb.frobenius_norm()) {
            return Err(Error::LiftObstruction(b.name(y).into()));
        }
        Ok(pre)
    })?;
    certify(sq, l)
}

/// The generating trivial cofibration `0: F → I`: the one-object category of
/// scalars sent to the first object of `C*_max` of the interval.
pub fn generating_trivial_cofibration() -> (GroupoidCStar, StarFunctor) {
    let gc = cstar_max(&interval_groupoid());
    let d = gc.category.dim(0);
    let f = StarFunctor::from_fn(
        Arc::new(MatCStarCategory::unit()),
        gc.category.clone(),
        vec![0],
        |_, _, b| Ok(ComplexMatrix::identity(d).scale(b[(0, 0)])),
    )
    .expect("scalars embed in every object");
    (gc, f)
}

/// Lift against the generating trivial cofibration `0: F → I`: the square
/// picks `x` in the source of `right` and a unitary `v: right(x) → y`. On
/// success returns `L: C*_max(interval) → C` sending the interval's arrow to
/// the lifted unitary.
pub fn lift_generator(
    right: &StarFunctor,
    x: usize,
    v: &ComplexMatrix,
    y: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Option<(StarFunctor, UnitaryLift)>> {
    let Some(lift) = solve_unitary_lift(right, x, v, y, seed, tol)? else {
        return Ok(None);
    };
    let gc = cstar_max(&interval_groupoid());
    let g = &gc.groupoid;
    let object_map = vec![x, lift.target];
    let images = (0..g.arrow_count())
        .map(|a| match (g.src(a), g.tgt(a)) {
            (0, 1) => lift.unitary.clone(),
            (1, 0) => lift.unitary.adjoint(),
            (s, _) => ComplexMatrix::identity(right.source().dim(object_map[s])),
        })
        .collect();
    let l = adjunction_extend(&gc, right.source(), &UniFunctor { object_map, images }, tol)?;
    Ok(Some((l, lift)))
}
