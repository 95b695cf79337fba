use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numlin::{ComplexMatrix, Subspace, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatObject {
    pub name: String,
    pub dim: usize,
}

impl MatObject {
    pub fn new(name: &str, dim: usize) -> Self {
        MatObject { name: name.into(), dim }
    }
}

/// Concrete C*-category: objects are `C^d`, and the hom space `x → y` is a
/// subspace of `dim(y) × dim(x)` matrices. Every ordered pair has a stored
/// (possibly zero) subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct MatCStarCategory {
    objects: Vec<MatObject>,
    homs: Vec<Subspace>,
}

impl MatCStarCategory {
    /// Structural constructor: checks names, dimensions and ambient shapes.
    /// The C*-category axioms are checked by [`validate_category`].
    pub fn new(objects: Vec<MatObject>, mut homs: BTreeMap<(usize, usize), Subspace>) -> Result<Self> {
        let n = objects.len();
        for (i, o) in objects.iter().enumerate() {
            if o.dim == 0 {
                return Err(Error::InvalidCategory(format!("object {} has dimension 0", o.name)));
            }
            if objects[..i].iter().any(|p| p.name == o.name) {
                return Err(Error::InvalidCategory(format!("duplicate object {}", o.name)));
            }
        }
        if let Some(&(x, y)) = homs.keys().find(|&&(x, y)| x >= n || y >= n) {
            return Err(Error::InvalidCategory(format!("hom ({x}, {y}) out of range")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let shape = (objects[y].dim, objects[x].dim);
                let s = homs.remove(&(x, y)).unwrap_or_else(|| Subspace::zero(shape.0, shape.1));
                if s.ambient_shape() != shape {
                    return Err(Error::ShapeMismatch(format!(
                        "hom {} -> {} lives in {:?} matrices, expected {:?}",
                        objects[x].name,
                        objects[y].name,
                        s.ambient_shape(),
                        shape
                    )));
                }
                flat.push(s);
            }
        }
        Ok(MatCStarCategory { objects, homs: flat })
    }

    /// Hom spaces spanned by the given matrices (no closure is taken).
    pub fn from_spans(
        objects: Vec<MatObject>,
        spans: BTreeMap<(usize, usize), Vec<ComplexMatrix>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let mut homs = BTreeMap::new();
        for ((x, y), mats) in spans {
            let shape = match (objects.get(y), objects.get(x)) {
                (Some(oy), Some(ox)) => (oy.dim, ox.dim),
                _ => return Err(Error::InvalidCategory(format!("hom ({x}, {y}) out of range"))),
            };
            homs.insert((x, y), Subspace::span(&mats, Some(shape), tol)?);
        }
        Self::new(objects, homs)
    }

    /// Smallest concrete C*-category containing the given matrices: adds
    /// identities and closes under adjoints and composition.
    pub fn generated_by(
        objects: Vec<MatObject>,
        generators: BTreeMap<(usize, usize), Vec<ComplexMatrix>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let mut c = Self::from_spans(objects, generators, tol)?;
        let n = c.len();
        for x in 0..n {
            let id = ComplexMatrix::identity(c.objects[x].dim);
            c.homs[x * n + x].push(&id, tol);
        }
        loop {
            let mut grew = false;
            for x in 0..n {
                for y in 0..n {
                    let adjoints: Vec<ComplexMatrix> = c.hom(x, y).basis().iter().map(ComplexMatrix::adjoint).collect();
                    for a in &adjoints {
                        grew |= c.homs[y * n + x].push(a, tol);
                    }
                }
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let products: Vec<ComplexMatrix> = c
                            .hom(y, z)
                            .basis()
                            .iter()
                            .flat_map(|b| c.hom(x, y).basis().iter().map(move |a| b * a))
                            .collect();
                        for p in &products {
                            grew |= c.homs[x * n + z].push(p, tol);
                        }
                    }
                }
            }
            if !grew {
                return Ok(c);
            }
        }
    }

    /// Every hom space is the full matrix space.
    pub fn full(objects: Vec<MatObject>) -> Result<Self> {
        let mut homs = BTreeMap::new();
        for (x, ox) in objects.iter().enumerate() {
            for (y, oy) in objects.iter().enumerate() {
                homs.insert((x, y), Subspace::full(oy.dim, ox.dim));
            }
        }
        Self::new(objects, homs)
    }

    /// The unit category: one object `*` of dimension 1 with scalar endomorphisms.
    pub fn unit() -> Self {
        Self::full(vec![MatObject::new("*", 1)]).expect("unit category is well formed")
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[MatObject] {
        &self.objects
    }

    pub fn object(&self, x: usize) -> &MatObject {
        &self.objects[x]
    }

    pub fn dim(&self, x: usize) -> usize {
        self.objects[x].dim
    }

    pub fn name(&self, x: usize) -> &str {
        &self.objects[x].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o.name == name)
            .ok_or_else(|| Error::UnknownObject(name.into()))
    }

    /// Hom space `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> &Subspace {
        &self.homs[x * self.objects.len() + y]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).dim()
    }

    /// `hom_dim(x, y)` for all pairs, row `x`, column `y`.
    pub fn hom_dims(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.hom_dim(x, y)).collect())
            .collect()
    }

    /// Pairs `(x, y)` with a nonzero hom space, in index order.
    pub fn nonzero_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n)
            .flat_map(move |x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.hom_dim(x, y) > 0)
    }

    pub fn contains(&self, x: usize, y: usize, m: &ComplexMatrix, tol: &Tolerance) -> bool {
        self.hom(x, y).contains(m, tol)
    }

    /// Same objects and hom spaces, possibly with different bases.
    pub fn same_as(&self, other: &Self, tol: &Tolerance) -> bool {
        self.objects == other.objects && self.homs.iter().zip(&other.homs).all(|(a, b)| a.same_space(b, tol))
    }

    /// Full subcategory on the given objects, in the given order.
    pub fn full_subcategory(&self, keep: &[usize]) -> Result<Self> {
        let objects = keep.iter().map(|&x| self.objects[x].clone()).collect();
        let mut homs = BTreeMap::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                homs.insert((i, j), self.hom(x, y).clone());
            }
        }
        Self::new(objects, homs)
    }
}

/// One failed check of a category or functor law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub location: String,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Largest residual seen over all checks, failed or not.
    pub max_residual: f64,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn record(
        &mut self,
        check: &str,
        location: impl FnOnce() -> String,
        residual: f64,
        accepted: bool,
        witness: impl FnOnce() -> Option<ComplexMatrix>,
    ) {
        self.max_residual = self.max_residual.max(residual);
        if !accepted {
            self.violations.push(Violation {
                check: check.into(),
                location: location(),
                residual,
                witness: witness(),
            });
        }
    }

    pub fn into_result(self, wrap: impl FnOnce(String) -> Error) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(wrap(format!(
                "{} at {} (residual {:.3e})",
                v.check, v.location, v.residual
            ))),
        }
    }
}

/// Checks unitality, adjoint closure and composition closure of every hom
/// space on basis elements.
pub fn validate_category(a: &MatCStarCategory, tol: &Tolerance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = a.len();
    for x in 0..n {
        let id = ComplexMatrix::identity(a.dim(x));
        let r = a.hom(x, x).residual(&id);
        report.record(
            "unitality",
            || a.name(x).to_string(),
            r,
            tol.accepts(r, id.frobenius_norm()),
            || Some(id.clone()),
        );
    }
    for x in 0..n {
        for y in 0..n {
            for (k, b) in a.hom(x, y).basis().iter().enumerate() {
                let adj = b.adjoint();
                let r = a.hom(y, x).residual(&adj);
                report.record(
                    "adjoint closure",
                    || format!("{} -> {} basis {k}", a.name(x), a.name(y)),
                    r,
                    tol.accepts(r, 1.0),
                    || Some(adj.clone()),
                );
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if a.hom_dim(x, y) == 0 {
                continue;
            }
            for z in 0..n {
                let target = a.hom(x, z);
                for (j, g) in a.hom(y, z).basis().iter().enumerate() {
                    for (i, f) in a.hom(x, y).basis().iter().enumerate() {
                        let p = g * f;
                        let r = target.residual(&p);
                        report.record(
                            "composition closure",
                            || format!("{} -> {} -> {} basis ({j}, {i})", a.name(x), a.name(y), a.name(z)),
                            r,
                            tol.accepts(r, p.frobenius_norm()),
                            || Some(p.clone()),
                        );
                    }
                }
            }
        }
    }
    report
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CategoryWire {
    pub objects: Vec<MatObject>,
    #[serde(default)]
    pub homs: BTreeMap<String, Vec<ComplexMatrix>>,
}

impl MatCStarCategory {
    pub(crate) fn to_wire(&self) -> CategoryWire {
        let mut homs = BTreeMap::new();
        for (x, y) in self.nonzero_pairs() {
            homs.insert(
                format!("{}|{}", self.name(x), self.name(y)),
                self.hom(x, y).basis().to_vec(),
            );
        }
        CategoryWire {
            objects: self.objects.clone(),
            homs,
        }
    }

    pub(crate) fn from_wire(w: CategoryWire, tol: &Tolerance) -> Result<Self> {
        let index = |name: &str| {
            w.objects
                .iter()
                .position(|o| o.name == name)
                .ok_or_else(|| Error::UnknownObject(name.into()))
        };
        let mut spans = BTreeMap::new();
        for (key, mats) in &w.homs {
            let (x, y) = key
                .split_once('|')
                .ok_or_else(|| Error::InvalidCategory(format!("bad hom key {key}")))?;
            spans.insert((index(x)?, index(y)?), mats.clone());
        }
        Self::from_spans(w.objects.clone(), spans, tol)
    }
}

impl Serialize for MatCStarCategory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatCStarCategory {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CategoryWire::deserialize(d)?;
        Self::from_wire(w, &Tolerance::default()).map_err(serde::de::Error::custom)
    }
}
