use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{MatCStarCategory, ValidationReport};
use crate::error::{Error, Result};
use crate::numlin::{svd, ComplexMatrix, Tolerance, C64, RANK_RTOL};

/// A *-functor between concrete C*-categories, stored as the images of the
/// source hom bases.
#[derive(Debug, Clone)]
pub struct StarFunctor {
    source: Arc<MatCStarCategory>,
    target: Arc<MatCStarCategory>,
    object_map: Vec<usize>,
    /// Indexed `x * n + y` for the source hom `x → y`.
    hom_maps: Vec<Vec<ComplexMatrix>>,
}

impl PartialEq for StarFunctor {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
            && self.object_map == other.object_map
            && self.hom_maps == other.hom_maps
    }
}

pub(crate) fn same_category(a: &Arc<MatCStarCategory>, b: &Arc<MatCStarCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl StarFunctor {
    pub fn new(
        source: Arc<MatCStarCategory>,
        target: Arc<MatCStarCategory>,
        object_map: Vec<usize>,
        mut images: BTreeMap<(usize, usize), Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        let n = source.len();
        if object_map.len() != n {
            return Err(Error::InvalidFunctor(format!(
                "object map has {} entries for {n} objects",
                object_map.len()
            )));
        }
        if let Some(&bad) = object_map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::InvalidFunctor(format!("object image {bad} out of range")));
        }
        let mut hom_maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let imgs = images.remove(&(x, y)).unwrap_or_default();
                let want = source.hom_dim(x, y);
                if imgs.len() != want {
                    return Err(Error::InvalidFunctor(format!(
                        "{} images for the {want}-dimensional hom {} -> {}",
                        imgs.len(),
                        source.name(x),
                        source.name(y)
                    )));
                }
                let shape = (target.dim(object_map[y]), target.dim(object_map[x]));
                if let Some(m) = imgs.iter().find(|m| m.shape() != shape) {
                    return Err(Error::ShapeMismatch(format!(
                        "image of shape {:?} on {} -> {}, expected {shape:?}",
                        m.shape(),
                        source.name(x),
                        source.name(y)
                    )));
                }
                hom_maps.push(imgs);
            }
        }
        if let Some(&(x, y)) = images.keys().next() {
            return Err(Error::InvalidFunctor(format!("images for unknown hom ({x}, {y})")));
        }
        Ok(StarFunctor {
            source,
            target,
            object_map,
            hom_maps,
        })
    }

    /// Images computed by `f(x, y, basis_element)` on every source basis element.
    pub fn from_fn(
        source: Arc<MatCStarCategory>,
        target: Arc<MatCStarCategory>,
        object_map: Vec<usize>,
        f: impl Fn(usize, usize, &ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (x, y) in source.nonzero_pairs() {
            let imgs = source
                .hom(x, y)
                .basis()
                .iter()
                .map(|b| f(x, y, b))
                .collect::<Result<Vec<_>>>()?;
            images.insert((x, y), imgs);
        }
        Self::new(source, target, object_map, images)
    }

    pub fn identity(a: Arc<MatCStarCategory>) -> Self {
        let object_map = (0..a.len()).collect();
        Self::from_fn(a.clone(), a, object_map, |_, _, b| Ok(b.clone())).expect("identity functor is well formed")
    }

    pub fn source(&self) -> &Arc<MatCStarCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatCStarCategory> {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn map_object(&self, x: usize) -> usize {
        self.object_map[x]
    }

    /// Images of the basis of the source hom `x → y`.
    pub fn images(&self, x: usize, y: usize) -> &[ComplexMatrix] {
        &self.hom_maps[x * self.source.len() + y]
    }

    /// `F(m)` for `m` in the source hom `x → y` (components of `m` outside the
    /// hom space are discarded).
    pub fn apply(&self, x: usize, y: usize, m: &ComplexMatrix) -> ComplexMatrix {
        let coords = self.source.hom(x, y).coordinates(m);
        self.apply_coords(x, y, &coords)
    }

    pub fn apply_coords(&self, x: usize, y: usize, coords: &[C64]) -> ComplexMatrix {
        let (fx, fy) = (self.object_map[x], self.object_map[y]);
        let mut out = ComplexMatrix::zeros(self.target.dim(fy), self.target.dim(fx));
        for (img, &c) in self.images(x, y).iter().zip(coords) {
            out.axpy(c, img);
        }
        out
    }

    /// Matrix of the linear map `hom(x, y) → hom(Fx, Fy)` in the two stored bases.
    pub fn hom_matrix(&self, x: usize, y: usize) -> ComplexMatrix {
        let tgt = self.target.hom(self.object_map[x], self.object_map[y]);
        let imgs = self.images(x, y);
        let mut m = ComplexMatrix::zeros(tgt.dim(), imgs.len());
        for (j, img) in imgs.iter().enumerate() {
            for (i, c) in tgt.coordinates(img).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    pub fn hom_rank(&self, x: usize, y: usize) -> usize {
        let m = self.hom_matrix(x, y);
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        svd(&m).map(|s| s.rank(RANK_RTOL)).unwrap_or(0)
    }

    /// A unit-norm element of `hom(x, y)` sent to zero, if any.
    pub fn kernel_witness(&self, x: usize, y: usize) -> Option<ComplexMatrix> {
        let m = self.hom_matrix(x, y);
        if m.cols() == 0 {
            return None;
        }
        let s = svd(&m).ok()?;
        let k = s.kernel(RANK_RTOL).into_iter().next()?;
        Some(self.source.hom(x, y).combine(&k))
    }

    /// Pairs of source objects whose hom map is not injective.
    pub fn non_injective_pairs(&self) -> Vec<(usize, usize)> {
        self.source
            .nonzero_pairs()
            .filter(|&(x, y)| self.hom_rank(x, y) < self.source.hom_dim(x, y))
            .collect()
    }

    /// Pairs of source objects whose hom map is not onto the target hom space.
    pub fn non_surjective_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.source.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| {
                let t = self.target.hom_dim(self.object_map[x], self.object_map[y]);
                self.hom_rank(x, y) < t
            })
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.non_injective_pairs().is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.non_surjective_pairs().is_empty()
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.is_faithful() && self.is_full()
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.object_map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.object_map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Source objects sent to `y`, in declaration order.
    pub fn preimages(&self, y: usize) -> Vec<usize> {
        (0..self.object_map.len())
            .filter(|&x| self.object_map[x] == y)
            .collect()
    }

    /// Minimum-norm `a ∈ hom(x, y)` with `F(a) ≈ m`, with its residual `‖F(a) − m‖_F`.
    pub fn preimage(&self, x: usize, y: usize, m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
        let (fx, fy) = (self.object_map[x], self.object_map[y]);
        if m.shape() != (self.target.dim(fy), self.target.dim(fx)) {
            return Err(Error::ShapeMismatch("preimage target has the wrong shape".into()));
        }
        let src = self.source.hom(x, y);
        if src.dim() == 0 {
            return Ok((
                ComplexMatrix::zeros(self.source.dim(y), self.source.dim(x)),
                m.frobenius_norm(),
            ));
        }
        let coords = self.target.hom(fx, fy).coordinates(m);
        let sol = svd(&self.hom_matrix(x, y))?.solve(&coords, RANK_RTOL);
        let a = src.combine(&sol);
        let residual = self.apply_coords(x, y, &sol).distance(m);
        Ok((a, residual))
    }

    /// `g ∘ f`.
    pub fn then(&self, g: &StarFunctor) -> Result<StarFunctor> {
        compose(g, self)
    }

    /// Object maps equal and images within `tol` on every basis element.
    pub fn same_as(&self, other: &StarFunctor, tol: &Tolerance) -> bool {
        same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
            && self.object_map == other.object_map
            && self.max_distance(other) <= tol.bound(1.0)
    }

    /// Largest Frobenius distance between corresponding basis images.
    pub fn max_distance(&self, other: &StarFunctor) -> f64 {
        self.hom_maps
            .iter()
            .zip(&other.hom_maps)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(m, n)| m.distance(n)))
            .fold(0.0, f64::max)
    }

    pub fn to_data(&self) -> FunctorData {
        let s = &self.source;
        let t = &self.target;
        FunctorData {
            object_map: (0..s.len())
                .map(|x| (s.name(x).to_string(), t.name(self.object_map[x]).to_string()))
                .collect(),
            hom_maps: s
                .nonzero_pairs()
                .map(|(x, y)| (format!("{}|{}", s.name(x), s.name(y)), self.images(x, y).to_vec()))
                .collect(),
        }
    }

    pub fn from_data(source: Arc<MatCStarCategory>, target: Arc<MatCStarCategory>, data: &FunctorData) -> Result<Self> {
        let object_map = (0..source.len())
            .map(|x| {
                let img = data
                    .object_map
                    .get(source.name(x))
                    .ok_or_else(|| Error::InvalidFunctor(format!("object {} is not mapped", source.name(x))))?;
                target.index_of(img)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images = BTreeMap::new();
        for (key, mats) in &data.hom_maps {
            let (x, y) = key
                .split_once('|')
                .ok_or_else(|| Error::InvalidFunctor(format!("bad hom key {key}")))?;
            images.insert((source.index_of(x)?, source.index_of(y)?), mats.clone());
        }
        Self::new(source, target, object_map, images)
    }
}

/// Serializable object and hom data of a functor, keyed by object names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctorData {
    pub object_map: BTreeMap<String, String>,
    #[serde(default)]
    pub hom_maps: BTreeMap<String, Vec<ComplexMatrix>>,
}

/// `g ∘ f`.
pub fn compose(g: &StarFunctor, f: &StarFunctor) -> Result<StarFunctor> {
    if !same_category(&f.target, &g.source) {
        return Err(Error::NotComposable(
            "target of the first functor is not the source of the second".into(),
        ));
    }
    let object_map = f.object_map.iter().map(|&y| g.object_map[y]).collect();
    StarFunctor::from_fn(f.source.clone(), g.target.clone(), object_map, |x, y, b| {
        Ok(g.apply(f.object_map[x], f.object_map[y], &f.apply(x, y, b)))
    })
}

/// Checks image membership, the unit law, multiplicativity on basis pairs and
/// compatibility with the involution on basis elements.
pub fn validate_functor(f: &StarFunctor, tol: &Tolerance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (s, t) = (&f.source, &f.target);
    let n = s.len();
    let name = |x: usize| s.name(x).to_string();
    for (x, y) in s.nonzero_pairs() {
        let tgt = t.hom(f.object_map[x], f.object_map[y]);
        for (k, img) in f.images(x, y).iter().enumerate() {
            let r = tgt.residual(img);
            report.record(
                "image membership",
                || format!("{} -> {} basis {k}", name(x), name(y)),
                r,
                tol.accepts(r, img.frobenius_norm()),
                || Some(img.clone()),
            );
        }
    }
    for x in 0..n {
        let one = f.apply(x, x, &ComplexMatrix::identity(s.dim(x)));
        let want = ComplexMatrix::identity(t.dim(f.object_map[x]));
        let r = one.distance(&want);
        report.record(
            "unit law",
            || name(x),
            r,
            tol.accepts(r, want.frobenius_norm()),
            || Some(one.clone()),
        );
    }
    for (x, y) in s.nonzero_pairs() {
        for (k, b) in s.hom(x, y).basis().iter().enumerate() {
            let lhs = f.apply(y, x, &b.adjoint());
            let rhs = f.images(x, y)[k].adjoint();
            let r = lhs.distance(&rhs);
            report.record(
                "involution",
                || format!("{} -> {} basis {k}", name(x), name(y)),
                r,
                tol.accepts(r, rhs.frobenius_norm()),
                || Some(lhs.clone()),
            );
        }
        for z in 0..n {
            for (j, g) in s.hom(y, z).basis().iter().enumerate() {
                for (i, a) in s.hom(x, y).basis().iter().enumerate() {
                    let lhs = f.apply(x, z, &(g * a));
                    let rhs = &f.images(y, z)[j] * &f.images(x, y)[i];
                    let r = lhs.distance(&rhs);
                    report.record(
                        "composition",
                        || format!("{} -> {} -> {} basis ({j}, {i})", name(x), name(y), name(z)),
                        r,
                        tol.accepts(r, rhs.frobenius_norm()),
                        || Some(lhs.clone()),
                    );
                }
            }
        }
    }
    report
}
