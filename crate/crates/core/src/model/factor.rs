use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcat::{uni_membership, MatCStarCategory, MatObject, StarFunctor};
use crate::numlin::{ComplexMatrix, Subspace, Tolerance};

/// `F = second ∘ first` through a finite midway category.
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub first: Arc<StarFunctor>,
    pub midway: Arc<MatCStarCategory>,
    pub second: Arc<StarFunctor>,
    /// `‖second ∘ first − F‖` on basis images; objects agree exactly.
    pub composite_residual: f64,
}

fn factorization(f: &StarFunctor, first: StarFunctor, second: StarFunctor) -> Result<FactorizationResult> {
    let composite = first.then(&second)?;
    if composite.object_map() != f.object_map() {
        return Err(Error::InvalidFunctor(
            "factorization does not agree with F on objects".into(),
        ));
    }
    Ok(FactorizationResult {
        composite_residual: composite.max_distance(f),
        midway: first.target().clone(),
        first: Arc::new(first),
        second: Arc::new(second),
    })
}

/// An object `(x, u, y)` of the path category: `x` in `A`, `u: Fx → y` unitary in `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTriple {
    pub source: usize,
    pub unitary: ComplexMatrix,
    pub target: usize,
}

/// The midway category of the path factorization. Its objects are all
/// triples `(x, u, y)`, so only the ones materialized so far are stored; the
/// hom from `(x, u, y)` to `(x', u', y')` is `A(x, x')`. The first `|ob A|`
/// entries are the constant paths `(x, 1, Fx)`.
#[derive(Debug)]
pub struct PathObject {
    functor: Arc<StarFunctor>,
    registry: Mutex<Vec<PathTriple>>,
}

pub fn factor_path(f: &Arc<StarFunctor>) -> PathObject {
    let constant = (0..f.source().len())
        .map(|x| {
            let fx = f.map_object(x);
            PathTriple {
                source: x,
                unitary: ComplexMatrix::identity(f.target().dim(fx)),
                target: fx,
            }
        })
        .collect();
    PathObject {
        functor: f.clone(),
        registry: Mutex::new(constant),
    }
}

impl PathObject {
    pub fn functor(&self) -> &Arc<StarFunctor> {
        &self.functor
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Vec<PathTriple>> {
        self.registry.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.lock().is_empty()
    }

    pub fn triples(&self) -> Vec<PathTriple> {
        self.lock().clone()
    }

    pub fn triple(&self, k: usize) -> Option<PathTriple> {
        self.lock().get(k).cloned()
    }

    /// Index of `(x, u, y)`, registering it if no stored triple matches within `tol`.
    pub fn materialize(&self, x: usize, u: &ComplexMatrix, y: usize, tol: &Tolerance) -> Result<usize> {
        let (a, b) = (self.functor.source(), self.functor.target());
        if x >= a.len() || y >= b.len() {
            return Err(Error::UnknownObject(format!("({x}, u, {y})")));
        }
        let fx = self.functor.map_object(x);
        if !uni_membership(b, fx, y, u, tol) {
            return Err(Error::NotUnitary(format!("{} -> {}", b.name(fx), b.name(y))));
        }
        let mut reg = self.lock();
        if let Some(k) = reg
            .iter()
            .position(|t| t.source == x && t.target == y && tol.accepts(t.unitary.distance(u), u.frobenius_norm()))
        {
            return Ok(k);
        }
        reg.push(PathTriple {
            source: x,
            unitary: u.clone(),
            target: y,
        });
        Ok(reg.len() - 1)
    }

    /// `Ã((x, u, y), (x', u', y')) = A(x, x')`.
    pub fn hom(&self, i: usize, j: usize) -> Result<Subspace> {
        let reg = self.lock();
        let (s, t) = (reg.get(i), reg.get(j));
        match (s, t) {
            (Some(s), Some(t)) => Ok(self.functor.source().hom(s.source, t.source).clone()),
            _ => Err(Error::UnknownObject(format!("path object {}", i.max(j)))),
        }
    }

    /// `P(a) = u'·F(a)·u*` for `a` in the hom from triple `i` to triple `j`.
    pub fn project(&self, i: usize, j: usize, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (s, t) = (
            self.triple(i)
                .ok_or_else(|| Error::UnknownObject(format!("path object {i}")))?,
            self.triple(j)
                .ok_or_else(|| Error::UnknownObject(format!("path object {j}")))?,
        );
        let fa = self.functor.apply(s.source, t.source, a);
        Ok(&(&t.unitary * &fa) * &s.unitary.adjoint())
    }

    /// Lift of a unitary `v: y → y'` at triple `k = (x, u, y)` along `P`: the
    /// triple `(x, v·u, y')` with the identity of `x` between them.
    pub fn lift_unitary(
        &self,
        k: usize,
        v: &ComplexMatrix,
        y2: usize,
        tol: &Tolerance,
    ) -> Result<(usize, ComplexMatrix)> {
        let t = self
            .triple(k)
            .ok_or_else(|| Error::UnknownObject(format!("path object {k}")))?;
        let b = self.functor.target();
        if !uni_membership(b, t.target, y2, v, tol) {
            return Err(Error::NotUnitary(format!("{} -> {}", b.name(t.target), b.name(y2))));
        }
        let idx = self.materialize(t.source, &(v * &t.unitary), y2, tol)?;
        Ok((idx, ComplexMatrix::identity(self.functor.source().dim(t.source))))
    }

    fn object_name(&self, k: usize, t: &PathTriple) -> String {
        let (a, b) = (self.functor.source(), self.functor.target());
        if k < a.len() {
            format!("({},1,{})", a.name(t.source), b.name(t.target))
        } else {
            format!("({},u{k},{})", a.name(t.source), b.name(t.target))
        }
    }

    /// The full subcategory on every triple materialized so far, with `I` and `P`.
    pub fn snapshot(&self) -> Result<FactorizationResult> {
        let f = &self.functor;
        let a = f.source();
        let reg = self.triples();
        let objects = reg
            .iter()
            .enumerate()
            .map(|(k, t)| MatObject::new(&self.object_name(k, t), a.dim(t.source)))
            .collect();
        let mut homs = BTreeMap::new();
        for (i, s) in reg.iter().enumerate() {
            for (j, t) in reg.iter().enumerate() {
                let h = a.hom(s.source, t.source);
                if h.dim() > 0 {
                    homs.insert((i, j), h.clone());
                }
            }
        }
        let midway = Arc::new(MatCStarCategory::new(objects, homs)?);
        let first = StarFunctor::from_fn(a.clone(), midway.clone(), (0..a.len()).collect(), |_, _, m| {
            Ok(m.clone())
        })?;
        let second = StarFunctor::from_fn(
            midway,
            f.target().clone(),
            reg.iter().map(|t| t.target).collect(),
            |i, j, m| {
                let fa = f.apply(reg[i].source, reg[j].source, m);
                Ok(&(&reg[j].unitary * &fa) * &reg[i].unitary.adjoint())
            },
        )?;
        factorization(f, first, second)
    }
}

/// The mapping-cylinder factorization `F = Q ∘ J` through `B̃` with objects
/// `0.x` for `x ∈ A` and `1.y` for `y ∈ B`, where `φ(0.x) = Fx`, `φ(1.y) = y`
/// and `B̃(k, k') = B(φk, φk')`.
pub fn factor_cylinder(f: &StarFunctor) -> Result<FactorizationResult> {
    let (a, b) = (f.source(), f.target());
    let phi: Vec<usize> = f.object_map().iter().copied().chain(0..b.len()).collect();
    let objects = (0..a.len())
        .map(|x| MatObject::new(&format!("0.{}", a.name(x)), b.dim(f.map_object(x))))
        .chain((0..b.len()).map(|y| MatObject::new(&format!("1.{}", b.name(y)), b.dim(y))))
        .collect();
    let mut homs = BTreeMap::new();
    for (i, &p) in phi.iter().enumerate() {
        for (j, &q) in phi.iter().enumerate() {
            if b.hom_dim(p, q) > 0 {
                homs.insert((i, j), b.hom(p, q).clone());
            }
        }
    }
    let midway = Arc::new(MatCStarCategory::new(objects, homs)?);
    let j = StarFunctor::from_fn(a.clone(), midway.clone(), (0..a.len()).collect(), |x, y, m| {
        Ok(f.apply(x, y, m))
    })?;
    let q = StarFunctor::from_fn(midway, b.clone(), phi, |_, _, m| Ok(m.clone()))?;
    factorization(f, j, q)
}

/// Object-level pushout-product of `F: A → B` and `F': A' → B'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushoutProductVerdict {
    /// Size of `ob(B × A') ⊔_{ob(A × A')} ob(A × B')`.
    pub pushout_size: usize,
    /// Size of `ob(B × B')`.
    pub target_size: usize,
    pub injective: bool,
    /// Two distinct pushout elements with the same image, named as pairs.
    pub collision: Option<(String, String)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.0[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Objects of a pushout of C*-categories form the pushout of object sets, so
/// `F □ F'` is injective on objects exactly when this set map is.
pub fn pushout_product_objects(f: &StarFunctor, f2: &StarFunctor) -> PushoutProductVerdict {
    let (a, b) = (f.source(), f.target());
    let (a2, b2) = (f2.source(), f2.target());
    let left = b.len() * a2.len();
    let total = left + a.len() * b2.len();
    let mut uf = UnionFind((0..total).collect());
    for x in 0..a.len() {
        for x2 in 0..a2.len() {
            uf.union(f.map_object(x) * a2.len() + x2, left + x * b2.len() + f2.map_object(x2));
        }
    }
    let describe = |k: usize| {
        if k < left {
            format!("({},{})", b.name(k / a2.len()), a2.name(k % a2.len()))
        } else {
            let k = k - left;
            format!("({},{})", a.name(k / b2.len()), b2.name(k % b2.len()))
        }
    };
    let image = |k: usize| {
        if k < left {
            (k / a2.len(), f2.map_object(k % a2.len()))
        } else {
            let k = k - left;
            (f.map_object(k / b2.len()), k % b2.len())
        }
    };
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut classes = 0;
    let mut collision = None;
    for k in 0..total {
        if uf.find(k) != k {
            continue;
        }
        classes += 1;
        if let Some(&other) = seen.get(&image(k)) {
            collision.get_or_insert_with(|| (describe(other), describe(k)));
        } else {
            seen.insert(image(k), k);
        }
    }
    PushoutProductVerdict {
        pushout_size: classes,
        target_size: b.len() * b2.len(),
        injective: collision.is_none(),
        collision,
    }
}
