use std::collections::BTreeMap;
use std::sync::Arc;

use super::category::{validate_category, MatCStarCategory, MatObject};
use super::functor::{same_category, validate_functor, StarFunctor};
use super::natural::NatTransform;
use crate::error::{Error, Result};
use crate::numlin::{ComplexMatrix, Subspace, Tolerance};

/// `A ⊗ B` with its factors. Pair `(x, y)` has index `x·|B| + y`.
#[derive(Debug, Clone)]
pub struct TensorMax {
    pub category: Arc<MatCStarCategory>,
    pub left: Arc<MatCStarCategory>,
    pub right: Arc<MatCStarCategory>,
}

impl TensorMax {
    pub fn object(&self, x: usize, y: usize) -> usize {
        x * self.right.len() + y
    }

    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / self.right.len(), k % self.right.len())
    }

    /// `a ⊗ b` for `a: x → x'` in `A` and `b: y → y'` in `B`.
    pub fn arrow(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        a.kron(b)
    }
}

/// Kronecker tensor product. Objects `(x, y)` act on `C^{dx} ⊗ C^{dy}` and the
/// hom `(x, y) → (x', y')` has basis `a_i ⊗ b_j`, ordered `i·dim B(y, y') + j`.
/// Finite-dimensional C*-categories are nuclear, so this is also the maximal
/// tensor product.
pub fn tensor_max(a: &Arc<MatCStarCategory>, b: &Arc<MatCStarCategory>, tol: &Tolerance) -> Result<TensorMax> {
    validate_category(a, tol).into_result(Error::InvalidCategory)?;
    validate_category(b, tol).into_result(Error::InvalidCategory)?;
    let nb = b.len();
    let objects: Vec<MatObject> = a
        .objects()
        .iter()
        .flat_map(|ox| {
            b.objects()
                .iter()
                .map(move |oy| MatObject::new(&format!("({},{})", ox.name, oy.name), ox.dim * oy.dim))
        })
        .collect();
    let mut homs = BTreeMap::new();
    for (x, x2) in a.nonzero_pairs() {
        for (y, y2) in b.nonzero_pairs() {
            let basis: Vec<ComplexMatrix> = a
                .hom(x, x2)
                .basis()
                .iter()
                .flat_map(|p| b.hom(y, y2).basis().iter().map(move |q| p.kron(q)))
                .collect();
            let rows = a.dim(x2) * b.dim(y2);
            let cols = a.dim(x) * b.dim(y);
            homs.insert(
                (x * nb + y, x2 * nb + y2),
                Subspace::from_orthonormal(rows, cols, basis, tol)?,
            );
        }
    }
    Ok(TensorMax {
        category: Arc::new(MatCStarCategory::new(objects, homs)?),
        left: a.clone(),
        right: b.clone(),
    })
}

/// `F ⊗ G : A ⊗ B → C ⊗ D`, sending `a ⊗ b` to `F(a) ⊗ G(b)`.
pub fn tensor_functor(src: &TensorMax, tgt: &TensorMax, f: &StarFunctor, g: &StarFunctor) -> Result<StarFunctor> {
    if !same_category(f.source(), &src.left)
        || !same_category(g.source(), &src.right)
        || !same_category(f.target(), &tgt.left)
        || !same_category(g.target(), &tgt.right)
    {
        return Err(Error::NotParallel(
            "factor functors do not match the tensor products".into(),
        ));
    }
    let object_map = (0..src.category.len())
        .map(|k| {
            let (x, y) = src.split(k);
            tgt.object(f.map_object(x), g.map_object(y))
        })
        .collect();
    let mut images = BTreeMap::new();
    for (s, t) in src.category.nonzero_pairs() {
        let ((x, y), (x2, y2)) = (src.split(s), src.split(t));
        let imgs = f
            .images(x, x2)
            .iter()
            .flat_map(|p| g.images(y, y2).iter().map(move |q| p.kron(q)))
            .collect();
        images.insert((s, t), imgs);
    }
    StarFunctor::new(src.category.clone(), tgt.category.clone(), object_map, images)
}

/// Exponential transpose of `F : A ⊗ B → C`: one functor `Φ(x) = F(1_x ⊗ −)`
/// per object of `A`, and for each basis arrow `a: x → x'` the transformation
/// `Φ(a) : Φ(x) → Φ(x')` with components `Φ(a)_y = F(a ⊗ 1_y)`.
#[derive(Debug, Clone)]
pub struct CurriedFunctor {
    pub tensor: TensorMax,
    pub target: Arc<MatCStarCategory>,
    pub slices: Vec<Arc<StarFunctor>>,
    /// Transformations for the basis of `A(x, x')`, in basis order.
    pub arrows: BTreeMap<(usize, usize), Vec<NatTransform>>,
}

impl CurriedFunctor {
    pub fn slice(&self, x: usize) -> &Arc<StarFunctor> {
        &self.slices[x]
    }

    /// `Φ(a)` for an arbitrary `a` in `A(x, x')`.
    pub fn transform(&self, x: usize, x2: usize, a: &ComplexMatrix) -> Result<NatTransform> {
        let left = &self.tensor.left;
        if a.shape() != (left.dim(x2), left.dim(x)) {
            return Err(Error::ShapeMismatch("arrow has the wrong shape".into()));
        }
        let coords = left.hom(x, x2).coordinates(a);
        let b = &self.tensor.right;
        let mut components: Vec<ComplexMatrix> = (0..b.len())
            .map(|y| {
                let (fx, fx2) = (self.slices[x].map_object(y), self.slices[x2].map_object(y));
                ComplexMatrix::zeros(self.target.dim(fx2), self.target.dim(fx))
            })
            .collect();
        if let Some(basis) = self.arrows.get(&(x, x2)) {
            for (t, &c) in basis.iter().zip(&coords) {
                for (acc, m) in components.iter_mut().zip(t.components()) {
                    acc.axpy(c, m);
                }
            }
        }
        NatTransform::new(self.slices[x].clone(), self.slices[x2].clone(), components)
    }
}

pub fn curry(t: &TensorMax, f: &StarFunctor, tol: &Tolerance) -> Result<CurriedFunctor> {
    if !same_category(f.source(), &t.category) {
        return Err(Error::InvalidFunctor(
            "functor is not defined on the tensor product".into(),
        ));
    }
    validate_functor(f, tol).into_result(Error::InvalidFunctor)?;
    let (a, b) = (&t.left, &t.right);
    let target = f.target().clone();
    let mut slices = Vec::with_capacity(a.len());
    for x in 0..a.len() {
        let id = ComplexMatrix::identity(a.dim(x));
        let object_map = (0..b.len()).map(|y| f.map_object(t.object(x, y))).collect();
        let slice = StarFunctor::from_fn(b.clone(), target.clone(), object_map, |y, y2, m| {
            Ok(f.apply(t.object(x, y), t.object(x, y2), &id.kron(m)))
        })?;
        slices.push(Arc::new(slice));
    }
    let mut arrows = BTreeMap::new();
    for (x, x2) in a.nonzero_pairs() {
        let mut list = Vec::new();
        for m in a.hom(x, x2).basis() {
            let components = (0..b.len())
                .map(|y| {
                    f.apply(
                        t.object(x, y),
                        t.object(x2, y),
                        &m.kron(&ComplexMatrix::identity(b.dim(y))),
                    )
                })
                .collect();
            list.push(NatTransform::new(slices[x].clone(), slices[x2].clone(), components)?);
        }
        arrows.insert((x, x2), list);
    }
    Ok(CurriedFunctor {
        tensor: t.clone(),
        target,
        slices,
        arrows,
    })
}

/// `F(a ⊗ b) = Φ(a)_{y'} · Φ(x)(b)` for `a: x → x'`, `b: y → y'`.
pub fn uncurry(c: &CurriedFunctor) -> Result<StarFunctor> {
    let t = &c.tensor;
    let object_map = (0..t.category.len())
        .map(|k| {
            let (x, y) = t.split(k);
            c.slices[x].map_object(y)
        })
        .collect();
    let mut images = BTreeMap::new();
    for (s, u) in t.category.nonzero_pairs() {
        let ((x, y), (x2, y2)) = (t.split(s), t.split(u));
        let transforms = c
            .arrows
            .get(&(x, x2))
            .ok_or_else(|| Error::InvalidFunctor(format!("no transformations for {x} -> {x2}")))?;
        let mut imgs = Vec::new();
        for alpha in transforms {
            for fb in c.slices[x].images(y, y2) {
                imgs.push(alpha.component(y2).matmul(fb)?);
            }
        }
        images.insert((s, u), imgs);
    }
    StarFunctor::new(t.category.clone(), c.target.clone(), object_map, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{op_norm, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn full(dims: &[usize]) -> Arc<MatCStarCategory> {
        let objs = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| MatObject::new(&format!("o{i}"), d))
            .collect();
        Arc::new(MatCStarCategory::full(objs).unwrap())
    }

    fn diagonal(d: usize) -> Arc<MatCStarCategory> {
        let basis = (0..d).map(|i| ComplexMatrix::unit(d, d, i, i)).collect();
        let spans: BTreeMap<_, _> = [((0, 0), basis)].into();
        Arc::new(MatCStarCategory::from_spans(vec![MatObject::new("d", d)], spans, &tol()).unwrap())
    }

    #[test]
    fn full_two_by_three() {
        let t = tensor_max(&full(&[2]), &full(&[3]), &tol()).unwrap();
        assert_eq!(t.category.len(), 1);
        assert_eq!(t.category.dim(0), 6);
        assert_eq!(t.category.hom_dim(0, 0), 36);
        assert!(validate_category(&t.category, &tol()).is_ok());
    }

    #[test]
    fn hom_dimensions_multiply() {
        let a = full(&[1, 2]);
        let b = diagonal(3);
        let t = tensor_max(&a, &b, &tol()).unwrap();
        for (x, x2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(
                t.category.hom_dim(t.object(x, 0), t.object(x2, 0)),
                a.hom_dim(x, x2) * 3
            );
        }
        assert!(validate_category(&t.category, &tol()).is_ok());
        let s = tensor_max(&b, &a, &tol()).unwrap();
        let mut ours: Vec<_> = t.category.hom_dims().concat();
        let mut swapped: Vec<_> = s.category.hom_dims().concat();
        ours.sort();
        swapped.sort();
        assert_eq!(ours, swapped);
    }

    #[test]
    fn unit_is_neutral() {
        let a = full(&[2, 3]);
        let t = tensor_max(&a, &Arc::new(MatCStarCategory::unit()), &tol()).unwrap();
        assert_eq!(t.category.hom_dims(), a.hom_dims());
        for x in 0..a.len() {
            assert_eq!(t.category.dim(x), a.dim(x));
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let objs = vec![MatObject::new("x", 2)];
        let mut homs = BTreeMap::new();
        homs.insert(
            (0, 0),
            Subspace::from_orthonormal(2, 2, vec![ComplexMatrix::unit(2, 2, 0, 1)], &tol()).unwrap(),
        );
        let bad = Arc::new(MatCStarCategory::new(objs, homs).unwrap());
        assert!(matches!(
            tensor_max(&bad, &full(&[1]), &tol()),
            Err(Error::InvalidCategory(_))
        ));
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let (a, b) = (full(&[1, 2]), diagonal(2));
        let t = tensor_max(&a, &b, &tol()).unwrap();
        let f = StarFunctor::identity(a.clone());
        let g = StarFunctor::identity(b.clone());
        let fg = tensor_functor(&t, &t, &f, &g).unwrap();
        assert!(fg.same_as(&StarFunctor::identity(t.category.clone()), &tol()));
        assert!(validate_functor(&fg, &tol()).is_ok());
    }

    #[test]
    fn curry_of_identity_on_unit_tensor() {
        let a = full(&[2]);
        let t = tensor_max(&a, &Arc::new(MatCStarCategory::unit()), &tol()).unwrap();
        let id = StarFunctor::identity(t.category.clone());
        let c = curry(&t, &id, &tol()).unwrap();
        // Φ(x) embeds the scalars as multiples of the identity.
        let img = c
            .slice(0)
            .apply(0, 0, &ComplexMatrix::identity(1).scale(C64::new(0.0, 2.0)));
        assert!(img.distance(&ComplexMatrix::identity(2).scale(C64::new(0.0, 2.0))) < 1e-12);
        assert!(uncurry(&c).unwrap().same_as(&id, &tol()));
    }

    #[test]
    fn round_trip_and_bound() {
        let (a, b) = (full(&[1, 2]), diagonal(2));
        let t = tensor_max(&a, &b, &tol()).unwrap();
        // Conjugating by a fixed unitary on the dim-4 objects gives a functor
        // that is not a tensor product of functors.
        let u = ComplexMatrix::from_real(2, 2, &[0.6, -0.8, 0.8, 0.6]).unwrap();
        let f = StarFunctor::identity(a.clone());
        let g = StarFunctor::from_fn(b.clone(), b.clone(), vec![0], |_, _, m| Ok(m.clone())).unwrap();
        let base = tensor_functor(&t, &t, &f, &g).unwrap();
        let w = |k: usize| {
            let d = t.category.dim(k);
            if d == 4 {
                ComplexMatrix::identity(2).kron(&u)
            } else {
                ComplexMatrix::identity(d)
            }
        };
        let dims: Vec<usize> = (0..t.category.len()).map(|k| t.category.dim(k)).collect();
        let target = full(&dims);
        let twisted = StarFunctor::from_fn(t.category.clone(), target, base.object_map().to_vec(), |s, r, m| {
            Ok(&(&w(r) * &base.apply(s, r, m)) * &w(s).adjoint())
        })
        .unwrap();
        let c = curry(&t, &twisted, &tol()).unwrap();
        let back = uncurry(&c).unwrap();
        assert!(back.max_distance(&twisted) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (x, x2) in a.nonzero_pairs() {
            for _ in 0..20 {
                let coords: Vec<C64> = (0..a.hom_dim(x, x2))
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let m = a.hom(x, x2).combine(&coords);
                let phi = c.transform(x, x2, &m).unwrap();
                assert!(phi.is_natural(&tol()));
                assert!(phi.sup_norm() <= op_norm(&m).unwrap() + 1e-9);
            }
        }
    }
}
