//! Seeded random instances: block-structured categories and functors between
//! them, weak equivalences by construction, groupoids and bounded
//! presentations with representations.
//!
//! A finite-dimensional C*-category is, up to unitary change of frame on each
//! object, a direct sum of matrix blocks. A [`BlockSpec`] records one
//! amplification `n_t` per block type and a multiplicity `m[x][t]` per object;
//! the object `x` has dimension `Σ_t m[x][t]·n_t` and `hom(x, y)` is
//! `⊕_t M_{m[y][t] × m[x][t]} ⊗ 1_{n_t}`. A *-functor between two such
//! categories is given by an object map and a multiplicity matrix `c[t][s]`
//! saying how often the source type `s` appears inside the target type `t`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpd::{
    codiscrete_groupoid, cyclic_group, disjoint_union, permutation_group, product_groupoid, FiniteGroupoid,
};
use crate::matcat::{copair, fold, MatCStarCategory, MatObject, StarFunctor};
use crate::model::{PathObject, RetractDiagram};
use crate::numlin::{
    find_invertible, op_norm, polar_unitary, ComplexMatrix, InvertibleSearch, Subspace, Tolerance, C64,
};
use crate::starpres::{FreeStarElement, Letter, Quiver, QuiverArrow, Representation};

/// Largest object count accepted by the generators.
pub const MAX_OBJECTS: usize = 5;
/// Largest object dimension accepted by the generators.
pub const MAX_DIM: usize = 6;
/// Largest vertex-group order accepted by [`random_groupoid`].
pub const MAX_ORDER: usize = 8;

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("shape matches data")
}

/// Polar part of a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        if let Ok(u) = polar_unitary(&gaussian_matrix(rng, n, n), &Tolerance::default()) {
            return u;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub amplifications: Vec<usize>,
    /// `multiplicities[x][t]`.
    pub multiplicities: Vec<Vec<usize>>,
}

impl BlockSpec {
    pub fn types(&self) -> usize {
        self.amplifications.len()
    }

    pub fn objects(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.multiplicities[x]
            .iter()
            .zip(&self.amplifications)
            .map(|(m, n)| m * n)
            .sum()
    }

    fn offset(&self, x: usize, t: usize) -> usize {
        (0..t).map(|s| self.multiplicities[x][s] * self.amplifications[s]).sum()
    }

    fn check(&self) -> Result<()> {
        if self.amplifications.contains(&0) {
            return Err(Error::InvalidParams("amplification 0".into()));
        }
        for (x, row) in self.multiplicities.iter().enumerate() {
            if row.len() != self.types() {
                return Err(Error::InvalidParams(format!(
                    "object {x} has {} multiplicities",
                    row.len()
                )));
            }
            if self.dim(x) == 0 {
                return Err(Error::InvalidParams(format!("object {x} has dimension 0")));
            }
        }
        Ok(())
    }

    /// `e_{ij} ⊗ 1_{n_t}` in type `t`, from slot `j` of `x` to slot `i` of `y`.
    fn raw_unit(&self, x: usize, y: usize, t: usize, i: usize, j: usize) -> ComplexMatrix {
        let n = self.amplifications[t];
        let mut m = ComplexMatrix::zeros(self.dim(y), self.dim(x));
        let (r0, c0) = (self.offset(y, t) + i * n, self.offset(x, t) + j * n);
        for k in 0..n {
            m[(r0 + k, c0 + k)] = C64::new(1.0, 0.0);
        }
        m
    }
}

/// A concrete category built from a [`BlockSpec`] and a unitary frame per object.
#[derive(Debug, Clone)]
pub struct BlockCategory {
    pub spec: BlockSpec,
    pub frames: Vec<ComplexMatrix>,
    pub category: Arc<MatCStarCategory>,
}

/// Basis of `hom(x, y)` in the order `t`, then `i < m[y][t]`, then `j < m[x][t]`.
fn hom_basis(spec: &BlockSpec, frames: &[ComplexMatrix], x: usize, y: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for t in 0..spec.types() {
        let scale = 1.0 / (spec.amplifications[t] as f64).sqrt();
        for i in 0..spec.multiplicities[y][t] {
            for j in 0..spec.multiplicities[x][t] {
                let raw = spec.raw_unit(x, y, t, i, j);
                out.push((&(&frames[y] * &raw) * &frames[x].adjoint()).scale_real(scale));
            }
        }
    }
    out
}

pub fn block_category(spec: BlockSpec, frames: Vec<ComplexMatrix>, prefix: &str) -> Result<BlockCategory> {
    spec.check()?;
    if frames.len() != spec.objects() || (0..spec.objects()).any(|x| frames[x].shape() != (spec.dim(x), spec.dim(x))) {
        return Err(Error::InvalidParams("one square frame per object is required".into()));
    }
    let objects = (0..spec.objects())
        .map(|x| MatObject::new(&format!("{prefix}{x}"), spec.dim(x)))
        .collect();
    let tol = Tolerance::default();
    let mut homs = BTreeMap::new();
    for x in 0..spec.objects() {
        for y in 0..spec.objects() {
            let basis = hom_basis(&spec, &frames, x, y);
            if !basis.is_empty() {
                homs.insert(
                    (x, y),
                    Subspace::from_orthonormal(spec.dim(y), spec.dim(x), basis, &tol)?,
                );
            }
        }
    }
    let category = Arc::new(MatCStarCategory::new(objects, homs)?);
    Ok(BlockCategory { spec, frames, category })
}

fn random_frames(rng: &mut impl Rng, spec: &BlockSpec) -> Vec<ComplexMatrix> {
    (0..spec.objects()).map(|x| random_unitary(rng, spec.dim(x))).collect()
}

fn random_amplifications(rng: &mut impl Rng, types: usize) -> Vec<usize> {
    (0..types)
        .map(|t| if t == 0 { 1 } else { rng.random_range(1..=2) })
        .collect()
}

/// Fills an object of dimension `dim` with random blocks; type 0 has
/// amplification 1, so any dimension is reachable.
fn fill_object(rng: &mut impl Rng, amplifications: &[usize], dim: usize) -> Vec<usize> {
    let mut row = vec![0; amplifications.len()];
    let mut rest = dim;
    while rest > 0 {
        let fits: Vec<usize> = (0..amplifications.len())
            .filter(|&t| amplifications[t] <= rest)
            .collect();
        let t = fits[rng.random_range(0..fits.len())];
        row[t] += 1;
        rest -= amplifications[t];
    }
    row
}

fn check_bounds(objects: usize, dims: &[usize]) -> Result<()> {
    if objects == 0 || objects > MAX_OBJECTS {
        return Err(Error::InvalidParams(format!(
            "object count must be in 1..={MAX_OBJECTS}"
        )));
    }
    if dims.iter().any(|&d| d == 0 || d > MAX_DIM) {
        return Err(Error::InvalidParams(format!("dimensions must be in 1..={MAX_DIM}")));
    }
    Ok(())
}

/// A random category with the given object dimensions and up to three block types.
pub fn random_matcat(rng: &mut impl Rng, dims: &[usize]) -> Result<BlockCategory> {
    check_bounds(dims.len(), dims)?;
    let types = rng.random_range(1..=3);
    let amplifications = random_amplifications(rng, types);
    let multiplicities = dims.iter().map(|&d| fill_object(rng, &amplifications, d)).collect();
    let spec = BlockSpec {
        amplifications,
        multiplicities,
    };
    let frames = random_frames(rng, &spec);
    block_category(spec, frames, "x")
}

/// A random category with `1..=max_objects` objects of dimension `1..=max_dim`.
pub fn random_block_category(rng: &mut impl Rng, max_objects: usize, max_dim: usize) -> Result<BlockCategory> {
    check_bounds(max_objects, &[max_dim])?;
    let n = rng.random_range(1..=max_objects);
    let dims: Vec<usize> = (0..n).map(|_| rng.random_range(1..=max_dim)).collect();
    random_matcat(rng, &dims)
}

/// The *-functor determined by `object_map` and `c[t][s]`. Requires
/// `m_B[Fx][t] = Σ_s c[t][s]·m_A[x][s]` for every source object.
pub fn block_functor(
    a: &BlockCategory,
    b: &BlockCategory,
    object_map: &[usize],
    c: &[Vec<usize>],
) -> Result<StarFunctor> {
    let (sa, sb) = (&a.spec, &b.spec);
    if object_map.len() != sa.objects() || c.len() != sb.types() || c.iter().any(|r| r.len() != sa.types()) {
        return Err(Error::InvalidParams(
            "object map or multiplicity matrix has the wrong size".into(),
        ));
    }
    for (x, &fx) in object_map.iter().enumerate() {
        for t in 0..sb.types() {
            let want: usize = (0..sa.types()).map(|s| c[t][s] * sa.multiplicities[x][s]).sum();
            if sb.multiplicities[fx][t] != want {
                return Err(Error::InvalidParams(format!(
                    "object {x}: target multiplicity {} of type {t}, expected {want}",
                    sb.multiplicities[fx][t]
                )));
            }
        }
    }
    // Slot of copy `k` of source slot `j` (type `s`) inside target type `t`.
    let slot = |x: usize, t: usize, s: usize, k: usize, j: usize| {
        (0..s).map(|s2| c[t][s2] * sa.multiplicities[x][s2]).sum::<usize>() + k * sa.multiplicities[x][s] + j
    };
    let mut images = BTreeMap::new();
    for x in 0..sa.objects() {
        for y in 0..sa.objects() {
            let (fx, fy) = (object_map[x], object_map[y]);
            let mut imgs = Vec::new();
            for s in 0..sa.types() {
                let scale = 1.0 / (sa.amplifications[s] as f64).sqrt();
                for i in 0..sa.multiplicities[y][s] {
                    for j in 0..sa.multiplicities[x][s] {
                        let mut raw = ComplexMatrix::zeros(sb.dim(fy), sb.dim(fx));
                        for (t, row) in c.iter().enumerate() {
                            for k in 0..row[s] {
                                let u = sb.raw_unit(fx, fy, t, slot(y, t, s, k, i), slot(x, t, s, k, j));
                                raw = &raw + &u;
                            }
                        }
                        imgs.push((&(&b.frames[fy] * &raw) * &b.frames[fx].adjoint()).scale_real(scale));
                    }
                }
            }
            if !imgs.is_empty() {
                images.insert((x, y), imgs);
            }
        }
    }
    StarFunctor::new(a.category.clone(), b.category.clone(), object_map.to_vec(), images)
}

/// Permutes the objects of a target spec; `object_map` is updated in place.
fn shuffle_objects(rng: &mut impl Rng, rows: Vec<Vec<usize>>, object_map: &mut [usize]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(rng);
    // order[new] = old
    let mut position = vec![0; rows.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    for y in object_map.iter_mut() {
        *y = position[*y];
    }
    order.into_iter().map(|old| rows[old].clone()).collect()
}

/// A random functor out of `a` into a fresh block category with at most
/// `max_objects` objects of dimension at most `max_dim`. Block types may be
/// dropped (not faithful), repeated (not full), objects merged, and extra
/// objects added (not surjective, possibly not essentially surjective).
pub fn random_functor(
    rng: &mut impl Rng,
    a: &BlockCategory,
    max_objects: usize,
    max_dim: usize,
) -> Result<(BlockCategory, StarFunctor)> {
    check_bounds(max_objects, &[max_dim])?;
    let sa = &a.spec;
    if sa.objects() > max_objects || (0..sa.objects()).any(|x| sa.dim(x) > max_dim) {
        return Err(Error::InvalidParams("source exceeds the target bounds".into()));
    }
    for _ in 0..64 {
        let types = rng.random_range(1..=3);
        let amplifications = random_amplifications(rng, types);
        let c: Vec<Vec<usize>> = (0..types)
            .map(|_| {
                (0..sa.types())
                    .map(|_| [0, 0, 1, 1, 1, 2][rng.random_range(0..6)])
                    .collect()
            })
            .collect();
        let image_rows: Vec<Vec<usize>> = (0..sa.objects())
            .map(|x| {
                (0..types)
                    .map(|t| (0..sa.types()).map(|s| c[t][s] * sa.multiplicities[x][s]).sum())
                    .collect()
            })
            .collect();
        let dim = |row: &[usize]| row.iter().zip(&amplifications).map(|(m, n)| m * n).sum::<usize>();
        if image_rows.iter().any(|r| dim(r) == 0 || dim(r) > max_dim) {
            continue;
        }
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut object_map = Vec::with_capacity(sa.objects());
        for r in &image_rows {
            let same: Vec<usize> = (0..rows.len()).filter(|&k| rows[k] == *r).collect();
            if !same.is_empty() && rng.random_bool(0.4) {
                object_map.push(same[rng.random_range(0..same.len())]);
            } else {
                object_map.push(rows.len());
                rows.push(r.clone());
            }
        }
        let room = max_objects - rows.len();
        for _ in 0..rng.random_range(0..=room.min(2)) {
            let row = if rng.random_bool(0.5) {
                rows[rng.random_range(0..rows.len())].clone()
            } else {
                let d = rng.random_range(1..=max_dim);
                fill_object(rng, &amplifications, d)
            };
            rows.push(row);
        }
        let rows = shuffle_objects(rng, rows, &mut object_map);
        let spec = BlockSpec {
            amplifications,
            multiplicities: rows,
        };
        let frames = random_frames(rng, &spec);
        let b = block_category(spec, frames, "y")?;
        let f = block_functor(a, &b, &object_map, &c)?;
        return Ok((b, f));
    }
    random_weq(rng, a, max_objects)
}

/// A weak equivalence out of `a` by construction: the same block types, an
/// injective object map, extra objects that duplicate the block content of
/// source objects, and fresh frames everywhere.
pub fn random_weq(rng: &mut impl Rng, a: &BlockCategory, max_objects: usize) -> Result<(BlockCategory, StarFunctor)> {
    let sa = &a.spec;
    if sa.objects() > max_objects || max_objects > MAX_OBJECTS {
        return Err(Error::InvalidParams("source exceeds the target bounds".into()));
    }
    let mut rows = sa.multiplicities.clone();
    let mut object_map: Vec<usize> = (0..sa.objects()).collect();
    for _ in 0..rng.random_range(0..=(max_objects - rows.len()).min(2)) {
        rows.push(sa.multiplicities[rng.random_range(0..sa.objects())].clone());
    }
    let rows = shuffle_objects(rng, rows, &mut object_map);
    let spec = BlockSpec {
        amplifications: sa.amplifications.clone(),
        multiplicities: rows,
    };
    let frames = random_frames(rng, &spec);
    let b = block_category(spec, frames, "y")?;
    let c: Vec<Vec<usize>> = (0..sa.types())
        .map(|t| (0..sa.types()).map(|s| usize::from(s == t)).collect())
        .collect();
    let f = block_functor(a, &b, &object_map, &c)?;
    Ok((b, f))
}

/// `F'` a random weak equivalence out of `a` as a retract of `F' ⊔ F'`:
/// `i` and `j` include the first summand, `r` and `s` are the folds.
pub fn random_retract(rng: &mut impl Rng, a: &BlockCategory, max_objects: usize) -> Result<RetractDiagram> {
    let (b, f) = random_weq(rng, a, max_objects)?;
    let (ca, fold_a) = fold(&a.category, 2)?;
    let (cb, fold_b) = fold(&b.category, 2)?;
    let legs = [f.then(&cb.injections[0])?, f.then(&cb.injections[1])?];
    let sum = copair(&ca, &legs)?;
    Ok(RetractDiagram {
        original: Arc::new(sum),
        retract: Arc::new(f),
        i: Arc::new(ca.injections[0].clone()),
        r: Arc::new(fold_a),
        j: Arc::new(cb.injections[0].clone()),
        s: Arc::new(fold_b),
    })
}

/// Registers up to `count` random objects `(x, u, y)` in a path category,
/// each `u` the unitarization of a random invertible element of `B(Fx, y)`.
/// Returns how many new objects were added.
pub fn random_path_triples(rng: &mut impl Rng, path: &PathObject, count: usize, tol: &Tolerance) -> Result<usize> {
    let f = path.functor();
    let b = f.target();
    let before = path.len();
    for _ in 0..count {
        let x = rng.random_range(0..f.source().len());
        let y = rng.random_range(0..b.len());
        let fx = f.map_object(x);
        if b.dim(fx) != b.dim(y) || b.hom_dim(fx, y) == 0 {
            continue;
        }
        if let InvertibleSearch::Found { matrix, .. } = find_invertible(b.hom(fx, y), rng.random(), 4, tol)? {
            path.materialize(x, &polar_unitary(&matrix, tol)?, y, tol)?;
        }
    }
    Ok(path.len() - before)
}

/// A groupoid with `objects` objects whose vertex groups have order `order`:
/// one or two codiscrete components times `ℤ/order` (or `S₃` for order 6).
pub fn random_groupoid<R: Rng>(rng: &mut R, objects: usize, order: usize) -> Result<FiniteGroupoid> {
    if objects == 0 || objects > MAX_OBJECTS || order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidParams(format!(
            "need 1..={MAX_OBJECTS} objects and order 1..={MAX_ORDER}"
        )));
    }
    let group = |rng: &mut R| -> Result<FiniteGroupoid> {
        if order == 6 && rng.random_bool(0.5) {
            permutation_group(&[vec![1, 0, 2], vec![1, 2, 0]])
        } else {
            Ok(cyclic_group(order))
        }
    };
    let split = if objects > 1 && rng.random_bool(0.5) {
        rng.random_range(1..objects)
    } else {
        objects
    };
    let component = |k: usize, g: &FiniteGroupoid| {
        let names: Vec<String> = (0..k).map(|i| format!("o{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        product_groupoid(&codiscrete_groupoid(&refs), g)
    };
    if split == objects {
        return Ok(component(objects, &group(rng)?));
    }
    let (g1, g2) = (group(rng)?, group(rng)?);
    Ok(disjoint_union(&[
        component(split, &g1),
        component(objects - split, &g2),
    ]))
}

/// A random *-functor out of any concrete category into a full matrix
/// category: `a ↦ W_y (a ⊗ 1_m) W_x*` with an amplification `m`, a random
/// unitary frame `W_x` per source object, objects of equal image dimension
/// sometimes merged, and up to `extra` unused target objects.
pub fn random_amplified_functor(
    rng: &mut impl Rng,
    source: &Arc<MatCStarCategory>,
    max_dim: usize,
    extra: usize,
) -> Result<StarFunctor> {
    let largest = source.objects().iter().map(|o| o.dim).max().unwrap_or(1);
    if largest > max_dim {
        return Err(Error::InvalidParams("source exceeds the target bounds".into()));
    }
    let m = rng.random_range(1..=(max_dim / largest).max(1));
    let mut dims: Vec<usize> = Vec::new();
    let mut object_map = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let d = m * source.dim(x);
        let same: Vec<usize> = (0..dims.len()).filter(|&k| dims[k] == d).collect();
        if !same.is_empty() && rng.random_bool(0.3) {
            object_map.push(same[rng.random_range(0..same.len())]);
        } else {
            object_map.push(dims.len());
            dims.push(d);
        }
    }
    for _ in 0..rng.random_range(0..=extra) {
        dims.push(rng.random_range(1..=max_dim));
    }
    let objects = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| MatObject::new(&format!("z{k}"), d))
        .collect();
    let target = Arc::new(MatCStarCategory::full(objects)?);
    let frames: Vec<ComplexMatrix> = (0..source.len())
        .map(|x| random_unitary(rng, m * source.dim(x)))
        .collect();
    let one = ComplexMatrix::identity(m);
    StarFunctor::from_fn(source.clone(), target, object_map, |x, y, b| {
        Ok(&(&frames[y] * &b.kron(&one)) * &frames[x].adjoint())
    })
}

/// A quiver, norm bounds on its arrows, a representation meeting the bounds
/// (saturating some of them) and a random element.
#[derive(Debug, Clone)]
pub struct BoundedInstance {
    pub quiver: Quiver,
    pub bounds: BTreeMap<String, f64>,
    pub rep: Representation,
    pub element: FreeStarElement,
}

fn random_word_from(rng: &mut impl Rng, q: &Quiver, start: &str, len: usize) -> (Vec<Letter>, String) {
    // Built in application order, then reversed to written order.
    let mut at = start.to_string();
    let mut applied = Vec::new();
    for _ in 0..len {
        let options: Vec<Letter> = q
            .arrows
            .iter()
            .flat_map(|a| {
                let mut v = Vec::new();
                if a.src == at {
                    v.push(Letter::new(&a.name));
                }
                if a.tgt == at {
                    v.push(Letter::star(&a.name));
                }
                v
            })
            .collect();
        if options.is_empty() {
            break;
        }
        let l = options[rng.random_range(0..options.len())].clone();
        at = l.ends(q).expect("letter from the quiver").1.to_string();
        applied.push(l);
    }
    applied.reverse();
    (applied, at)
}

pub fn random_bounded_instance(rng: &mut impl Rng) -> Result<BoundedInstance> {
    let n_obj = rng.random_range(1..=3);
    let objects: Vec<String> = (0..n_obj).map(|i| format!("o{i}")).collect();
    let arrows: Vec<QuiverArrow> = (0..rng.random_range(1..=4))
        .map(|i| {
            QuiverArrow::new(
                &format!("g{i}"),
                &objects[rng.random_range(0..n_obj)],
                &objects[rng.random_range(0..n_obj)],
            )
        })
        .collect();
    let quiver = Quiver::new(objects.clone(), arrows)?;
    let dims: BTreeMap<String, usize> = objects.iter().map(|o| (o.clone(), rng.random_range(1..=3))).collect();
    let mut bounds = BTreeMap::new();
    let mut images = BTreeMap::new();
    for a in &quiver.arrows {
        let b: f64 = rng.random_range(0.0..3.0);
        let m = gaussian_matrix(rng, dims[&a.tgt], dims[&a.src]);
        let norm = op_norm(&m)?;
        // Saturate the bound on some arrows so it is exercised at equality.
        let target = if rng.random_bool(0.3) {
            b
        } else {
            b * rng.random_range(0.0..1.0)
        };
        let m = if norm > 0.0 { m.scale_real(target / norm) } else { m };
        bounds.insert(a.name.clone(), b);
        images.insert(a.name.clone(), m);
    }
    let start = objects[rng.random_range(0..n_obj)].clone();
    let len = rng.random_range(0..4);
    let (w0, end) = random_word_from(rng, &quiver, &start, len);
    let mut terms = vec![(w0, C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))];
    for _ in 0..8 {
        let len = rng.random_range(0..4);
        let (w, e) = random_word_from(rng, &quiver, &start, len);
        if e == end {
            terms.push((w, C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))));
        }
    }
    let element = FreeStarElement::from_terms(&quiver, &start, &end, terms)?;
    Ok(BoundedInstance {
        quiver,
        bounds,
        rep: Representation { dims, images },
        element,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcat::{validate_category, validate_functor};
    use crate::model::{is_weak_equivalence, WeqVerdict};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn block_categories_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_block_category(&mut rng, 4, 4).unwrap();
            assert!(validate_category(&a.category, &tol()).is_ok());
        }
        let a = random_matcat(&mut rng, &[2, 3]).unwrap();
        assert_eq!(
            a.category.objects().iter().map(|o| o.dim).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn hom_dimension_is_sum_of_block_products() {
        let spec = BlockSpec {
            amplifications: vec![1, 2],
            multiplicities: vec![vec![2, 1], vec![1, 0]],
        };
        let frames = vec![ComplexMatrix::identity(4), ComplexMatrix::identity(1)];
        let a = block_category(spec, frames, "x").unwrap();
        assert_eq!(a.category.hom_dims(), vec![vec![5, 2], vec![2, 1]]);
    }

    #[test]
    fn random_functors_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = random_block_category(&mut rng, 3, 3).unwrap();
            let (b, f) = random_functor(&mut rng, &a, 4, 4).unwrap();
            assert!(validate_category(&b.category, &tol()).is_ok());
            let rep = validate_functor(&f, &tol());
            assert!(rep.is_ok(), "{:?}", rep.violations.first());
        }
    }

    #[test]
    fn random_weqs_are_weak_equivalences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..20 {
            let a = random_block_category(&mut rng, 3, 3).unwrap();
            let (_, f) = random_weq(&mut rng, &a, 4).unwrap();
            assert!(validate_functor(&f, &tol()).is_ok());
            assert!(matches!(
                is_weak_equivalence(&f, k, &tol()).unwrap(),
                WeqVerdict::Yes { .. }
            ));
        }
    }

    #[test]
    fn mismatched_multiplicities_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matcat(&mut rng, &[2]).unwrap();
        let b = random_matcat(&mut rng, &[3]).unwrap();
        let c = vec![vec![1; a.spec.types()]; b.spec.types()];
        if a.spec.dim(0) != b.spec.dim(0) {
            assert!(block_functor(&a, &b, &[0], &c).is_err());
        }
    }

    #[test]
    fn amplified_functors_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_block_category(&mut rng, 3, 3).unwrap();
            let f = random_amplified_functor(&mut rng, &a.category, 6, 2).unwrap();
            assert!(validate_functor(&f, &tol()).is_ok());
            assert!(f.is_faithful());
        }
    }

    #[test]
    fn retract_diagrams_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let a = random_block_category(&mut rng, 2, 3).unwrap();
            let d = random_retract(&mut rng, &a, 3).unwrap();
            assert!(d.residual().unwrap() < 1e-12);
        }
    }

    #[test]
    fn groupoid_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_groupoid(&mut rng, 2, 2).unwrap();
        assert_eq!(g.object_count(), 2);
        assert!(random_groupoid(&mut rng, 6, 2).is_err());
        assert!(random_groupoid(&mut rng, 2, 9).is_err());
        assert!(random_matcat(&mut rng, &[7]).is_err());
    }
}
