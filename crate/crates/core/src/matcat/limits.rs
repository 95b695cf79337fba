use std::collections::BTreeMap;
use std::sync::Arc;

use super::category::{MatCStarCategory, MatObject};
use super::functor::{same_category, StarFunctor};
use crate::error::{Error, Result};
use crate::numlin::{svd, ComplexMatrix, Subspace, Tolerance, RANK_RTOL};
use crate::starpres::RenamePolicy;

/// Binary product with its two projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub category: Arc<MatCStarCategory>,
    pub left: StarFunctor,
    pub right: StarFunctor,
}

/// `A × B`: objects are pairs `(x, y)` acting on `C^{dx} ⊕ C^{dy}`, with
/// block-diagonal hom spaces. Pair `(x, y)` has index `x·|B| + y`.
pub fn product(a: &Arc<MatCStarCategory>, b: &Arc<MatCStarCategory>) -> Result<Product> {
    let nb = b.len();
    let objects: Vec<MatObject> = a
        .objects()
        .iter()
        .flat_map(|ox| {
            b.objects()
                .iter()
                .map(move |oy| MatObject::new(&format!("({},{})", ox.name, oy.name), ox.dim + oy.dim))
        })
        .collect();
    let mut homs = BTreeMap::new();
    for x in 0..a.len() {
        for y in 0..nb {
            for x2 in 0..a.len() {
                for y2 in 0..nb {
                    let (rows, cols) = (a.dim(x2) + b.dim(y2), a.dim(x) + b.dim(y));
                    let mut basis = Vec::new();
                    for m in a.hom(x, x2).basis() {
                        basis.push(m.direct_sum(&ComplexMatrix::zeros(b.dim(y2), b.dim(y))));
                    }
                    for m in b.hom(y, y2).basis() {
                        basis.push(ComplexMatrix::zeros(a.dim(x2), a.dim(x)).direct_sum(m));
                    }
                    homs.insert(
                        (x * nb + y, x2 * nb + y2),
                        Subspace::from_orthonormal(rows, cols, basis, &Tolerance::default())?,
                    );
                }
            }
        }
    }
    let category = Arc::new(MatCStarCategory::new(objects, homs)?);
    let split = |k: usize| (k / nb, k % nb);
    let left = StarFunctor::from_fn(
        category.clone(),
        a.clone(),
        (0..category.len()).map(|k| split(k).0).collect(),
        |s, t, m| {
            let ((x, _), (x2, _)) = (split(s), split(t));
            Ok(m.block(0, 0, a.dim(x2), a.dim(x)))
        },
    )?;
    let right = StarFunctor::from_fn(
        category.clone(),
        b.clone(),
        (0..category.len()).map(|k| split(k).1).collect(),
        |s, t, m| {
            let ((x, y), (x2, y2)) = (split(s), split(t));
            Ok(m.block(a.dim(x2), a.dim(x), b.dim(y2), b.dim(y)))
        },
    )?;
    Ok(Product { category, left, right })
}

#[derive(Debug, Clone)]
pub struct Equalizer {
    pub category: Arc<MatCStarCategory>,
    pub inclusion: StarFunctor,
}

/// Objects with `F x = G x`, and in each hom the kernel of `F − G`.
pub fn equalizer(f: &StarFunctor, g: &StarFunctor, tol: &Tolerance) -> Result<Equalizer> {
    if !same_category(f.source(), g.source()) || !same_category(f.target(), g.target()) {
        return Err(Error::NotParallel("equalizer of non-parallel functors".into()));
    }
    let a = f.source();
    let keep: Vec<usize> = (0..a.len()).filter(|&x| f.map_object(x) == g.map_object(x)).collect();
    let objects = keep.iter().map(|&x| a.object(x).clone()).collect();
    let mut homs = BTreeMap::new();
    for (i, &x) in keep.iter().enumerate() {
        for (j, &y) in keep.iter().enumerate() {
            let src = a.hom(x, y);
            let shape = src.ambient_shape();
            let space = if src.dim() == 0 {
                Subspace::zero(shape.0, shape.1)
            } else {
                let diff = &f.hom_matrix(x, y) - &g.hom_matrix(x, y);
                let kernel = if diff.rows() == 0 {
                    src.basis().to_vec()
                } else {
                    svd(&diff)?.kernel(RANK_RTOL).iter().map(|v| src.combine(v)).collect()
                };
                Subspace::span(&kernel, Some(shape), tol)?
            };
            homs.insert((i, j), space);
        }
    }
    let category = Arc::new(MatCStarCategory::new(objects, homs)?);
    let inclusion = StarFunctor::from_fn(category.clone(), a.clone(), keep, |_, _, m| Ok(m.clone()))?;
    Ok(Equalizer { category, inclusion })
}

/// Disjoint union with its injections.
#[derive(Debug, Clone)]
pub struct MatCoproduct {
    pub category: Arc<MatCStarCategory>,
    pub parts: Vec<Arc<MatCStarCategory>>,
    pub injections: Vec<StarFunctor>,
    /// Index of the first object of each part.
    pub offsets: Vec<usize>,
}

impl MatCoproduct {
    /// `(part, local index)` of a coproduct object.
    pub fn locate(&self, k: usize) -> (usize, usize) {
        let part = self.offsets.iter().rposition(|&o| o <= k).expect("offsets start at 0");
        (part, k - self.offsets[part])
    }
}

/// `⨿ parts`; homs between different parts are zero.
pub fn coproduct(parts: &[MatCStarCategory], policy: RenamePolicy) -> Result<MatCoproduct> {
    let parts: Vec<Arc<MatCStarCategory>> = parts.iter().cloned().map(Arc::new).collect();
    coproduct_of(&parts, policy)
}

pub fn coproduct_of(parts: &[Arc<MatCStarCategory>], policy: RenamePolicy) -> Result<MatCoproduct> {
    let mut objects: Vec<MatObject> = Vec::new();
    let mut offsets = Vec::new();
    let mut homs = BTreeMap::new();
    for (i, p) in parts.iter().enumerate() {
        let off = objects.len();
        offsets.push(off);
        for o in p.objects() {
            let name = match policy {
                RenamePolicy::Strict => o.name.clone(),
                RenamePolicy::Prefix => format!("{i}.{}", o.name),
            };
            if objects.iter().any(|q| q.name == name) {
                return Err(Error::NameClash(format!("object {name}")));
            }
            objects.push(MatObject::new(&name, o.dim));
        }
        for (x, y) in p.nonzero_pairs() {
            homs.insert((off + x, off + y), p.hom(x, y).clone());
        }
    }
    let category = Arc::new(MatCStarCategory::new(objects, homs)?);
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(p, &off)| {
            StarFunctor::from_fn(
                p.clone(),
                category.clone(),
                (0..p.len()).map(|x| off + x).collect(),
                |_, _, m| Ok(m.clone()),
            )
        })
        .collect::<Result<_>>()?;
    Ok(MatCoproduct {
        category,
        parts: parts.to_vec(),
        injections,
        offsets,
    })
}

/// The functor out of a coproduct that restricts to `legs[i]` on part `i`.
pub fn copair(c: &MatCoproduct, legs: &[StarFunctor]) -> Result<StarFunctor> {
    if legs.len() != c.parts.len() {
        return Err(Error::InvalidFunctor(format!(
            "{} legs for {} parts",
            legs.len(),
            c.parts.len()
        )));
    }
    let target = legs
        .first()
        .map(|l| l.target().clone())
        .ok_or_else(|| Error::InvalidFunctor("copairing of no legs".into()))?;
    for (leg, part) in legs.iter().zip(&c.parts) {
        if !same_category(leg.source(), part) || !same_category(leg.target(), &target) {
            return Err(Error::NotParallel("copairing legs do not match the parts".into()));
        }
    }
    let object_map = (0..c.category.len())
        .map(|k| {
            let (p, x) = c.locate(k);
            legs[p].map_object(x)
        })
        .collect();
    let mut images = BTreeMap::new();
    for (s, t) in c.category.nonzero_pairs() {
        let ((p, x), (_, y)) = (c.locate(s), c.locate(t));
        images.insert((s, t), legs[p].images(x, y).to_vec());
    }
    StarFunctor::new(c.category.clone(), target, object_map, images)
}

/// `∇: A ⊔ … ⊔ A → A` with `copies` summands.
pub fn fold(a: &Arc<MatCStarCategory>, copies: usize) -> Result<(MatCoproduct, StarFunctor)> {
    let parts = vec![a.clone(); copies];
    let c = coproduct_of(&parts, RenamePolicy::Prefix)?;
    let id = StarFunctor::identity(a.clone());
    let f = copair(&c, &vec![id; copies])?;
    Ok((c, f))
}

/// `a ↦ a ⊗ 1_n`. With `full_target` the codomain is the full matrix category
/// on the amplified dimensions (faithful, not full for `n > 1`); otherwise it is
/// the image category (an isomorphism).
pub fn amplify(a: &Arc<MatCStarCategory>, n: usize, full_target: bool) -> Result<StarFunctor> {
    if n == 0 {
        return Err(Error::InvalidParams("amplification factor must be positive".into()));
    }
    let objects: Vec<MatObject> = a.objects().iter().map(|o| MatObject::new(&o.name, o.dim * n)).collect();
    let id_n = ComplexMatrix::identity(n);
    let target = if full_target {
        MatCStarCategory::full(objects)?
    } else {
        let norm = 1.0 / (n as f64).sqrt();
        let mut homs = BTreeMap::new();
        for (x, y) in a.nonzero_pairs() {
            let basis = a
                .hom(x, y)
                .basis()
                .iter()
                .map(|m| m.kron(&id_n).scale_real(norm))
                .collect();
            homs.insert(
                (x, y),
                Subspace::from_orthonormal(a.dim(y) * n, a.dim(x) * n, basis, &Tolerance::default())?,
            );
        }
        MatCStarCategory::new(objects, homs)?
    };
    StarFunctor::from_fn(a.clone(), Arc::new(target), (0..a.len()).collect(), |_, _, m| {
        Ok(m.kron(&id_n))
    })
}
