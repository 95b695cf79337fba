use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::element::FreeStarElement;
use super::{Quiver, QuiverArrow};
use crate::error::{Error, Result};
use crate::numlin::{op_norm, ComplexMatrix, Tolerance};

/// Quiver plus equational relations and norm bounds on generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PresentationWire", into = "PresentationWire")]
pub struct PresentedStarCategory {
    quiver: Quiver,
    relations: Vec<(FreeStarElement, FreeStarElement)>,
    bounds: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct PresentationWire {
    objects: Vec<String>,
    arrows: Vec<QuiverArrow>,
    #[serde(default)]
    relations: Vec<(FreeStarElement, FreeStarElement)>,
    #[serde(default)]
    bounds: BTreeMap<String, f64>,
}

impl TryFrom<PresentationWire> for PresentedStarCategory {
    type Error = Error;

    fn try_from(w: PresentationWire) -> Result<Self> {
        PresentedStarCategory::new(
            Quiver {
                objects: w.objects,
                arrows: w.arrows,
            },
            w.relations,
            w.bounds,
        )
    }
}

impl From<PresentedStarCategory> for PresentationWire {
    fn from(p: PresentedStarCategory) -> Self {
        PresentationWire {
            objects: p.quiver.objects,
            arrows: p.quiver.arrows,
            relations: p.relations,
            bounds: p.bounds,
        }
    }
}

impl PresentedStarCategory {
    pub fn new(
        quiver: Quiver,
        relations: Vec<(FreeStarElement, FreeStarElement)>,
        bounds: BTreeMap<String, f64>,
    ) -> Result<Self> {
        quiver.validate()?;
        for (l, r) in &relations {
            if l.source() != r.source() || l.target() != r.target() {
                return Err(Error::NotParallel(format!("relation {l} = {r}")));
            }
            l.validate_in(&quiver)?;
            r.validate_in(&quiver)?;
        }
        for (name, &b) in &bounds {
            if quiver.arrow(name).is_none() {
                return Err(Error::InvalidQuiver(format!("bound on unknown arrow {name}")));
            }
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidParams(format!("bound {b} on {name}")));
            }
        }
        Ok(PresentedStarCategory {
            quiver,
            relations,
            bounds,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[(FreeStarElement, FreeStarElement)] {
        &self.relations
    }

    pub fn bounds(&self) -> &BTreeMap<String, f64> {
        &self.bounds
    }

    pub fn objects(&self) -> &[String] {
        &self.quiver.objects
    }

    pub fn generator(&self, name: &str) -> Result<FreeStarElement> {
        FreeStarElement::generator(&self.quiver, name)
    }

    pub fn with_bounds(mut self, bounds: BTreeMap<String, f64>) -> Result<Self> {
        self.bounds = bounds;
        Self::new(self.quiver, self.relations, self.bounds)
    }
}

pub fn free_star_category(q: &Quiver) -> Result<PresentedStarCategory> {
    PresentedStarCategory::new(q.clone(), Vec::new(), BTreeMap::new())
}

/// Presentation-level *-functor: objects to objects, generators to elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationMorphism {
    pub object_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, FreeStarElement>,
}

impl PresentationMorphism {
    pub fn identity(p: &PresentedStarCategory) -> Result<Self> {
        Ok(PresentationMorphism {
            object_map: p.objects().iter().map(|o| (o.clone(), o.clone())).collect(),
            arrow_map: p
                .quiver
                .arrows
                .iter()
                .map(|a| Ok((a.name.clone(), p.generator(&a.name)?)))
                .collect::<Result<_>>()?,
        })
    }

    /// Checks that the data types correctly from `source` to `target`.
    /// Relations are assumed, not checked: deciding them needs the word problem.
    pub fn validate(&self, source: &PresentedStarCategory, target: &PresentedStarCategory) -> Result<()> {
        for o in source.objects() {
            let img = self
                .object_map
                .get(o)
                .ok_or_else(|| Error::InvalidFunctor(format!("object {o} is not mapped")))?;
            if !target.quiver.has_object(img) {
                return Err(Error::InvalidFunctor(format!("{o} maps to unknown object {img}")));
            }
        }
        if self.object_map.len() != source.objects().len() {
            return Err(Error::InvalidFunctor("object map has extra entries".into()));
        }
        for a in &source.quiver.arrows {
            let img = self
                .arrow_map
                .get(&a.name)
                .ok_or_else(|| Error::InvalidFunctor(format!("arrow {} is not mapped", a.name)))?;
            img.validate_in(&target.quiver)?;
            if img.source() != self.object_map[&a.src] || img.target() != self.object_map[&a.tgt] {
                return Err(Error::InvalidFunctor(format!(
                    "image of {} runs {} -> {}",
                    a.name,
                    img.source(),
                    img.target()
                )));
            }
        }
        if self.arrow_map.len() != source.quiver.arrows.len() {
            return Err(Error::InvalidFunctor("arrow map has extra entries".into()));
        }
        Ok(())
    }

    pub fn apply(&self, e: &FreeStarElement) -> Result<FreeStarElement> {
        e.substitute(
            |o| {
                self.object_map
                    .get(o)
                    .cloned()
                    .ok_or_else(|| Error::UnknownObject(o.into()))
            },
            |g| {
                self.arrow_map
                    .get(g)
                    .cloned()
                    .ok_or_else(|| Error::InvalidFunctor(format!("generator {g} is not mapped")))
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenamePolicy {
    /// Names must already be disjoint.
    #[default]
    Strict,
    /// Every object and arrow of part `i` is renamed `i.name`.
    Prefix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coproduct {
    pub presentation: PresentedStarCategory,
    pub injections: Vec<PresentationMorphism>,
    /// Part index of each object, aligned with the object list.
    pub part_of_object: Vec<usize>,
}

impl Coproduct {
    /// Ordered pairs of objects from distinct parts; their hom spaces are zero.
    pub fn zero_hom_pairs(&self) -> Vec<(String, String)> {
        let objs = self.presentation.objects();
        let mut out = Vec::new();
        for (i, x) in objs.iter().enumerate() {
            for (j, y) in objs.iter().enumerate() {
                if self.part_of_object[i] != self.part_of_object[j] {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
        out
    }
}

/// Disjoint union of presentations.
pub fn coproduct(parts: &[PresentedStarCategory], policy: RenamePolicy) -> Result<Coproduct> {
    let rename = |i: usize, name: &str| match policy {
        RenamePolicy::Strict => name.to_string(),
        RenamePolicy::Prefix => format!("{i}.{name}"),
    };
    let mut quiver = Quiver::default();
    let mut relations = Vec::new();
    let mut bounds = BTreeMap::new();
    let mut injections = Vec::new();
    let mut part_of_object = Vec::new();
    let mut used_objects = BTreeMap::new();
    let mut used_arrows = BTreeMap::new();

    for (i, p) in parts.iter().enumerate() {
        let object_map: BTreeMap<String, String> = p.objects().iter().map(|o| (o.clone(), rename(i, o))).collect();
        for o in p.objects() {
            let new = object_map[o].clone();
            if let Some(j) = used_objects.insert(new.clone(), i) {
                return Err(Error::NameClash(format!("object {new} in parts {j} and {i}")));
            }
            quiver.objects.push(new);
            part_of_object.push(i);
        }
        let mut arrow_names = BTreeMap::new();
        for a in &p.quiver.arrows {
            let new = rename(i, &a.name);
            if let Some(j) = used_arrows.insert(new.clone(), i) {
                return Err(Error::NameClash(format!("arrow {new} in parts {j} and {i}")));
            }
            quiver.arrows.push(QuiverArrow {
                name: new.clone(),
                src: object_map[&a.src].clone(),
                tgt: object_map[&a.tgt].clone(),
            });
            if let Some(&b) = p.bounds.get(&a.name) {
                bounds.insert(new.clone(), b);
            }
            arrow_names.insert(a.name.clone(), new);
        }
        injections.push((object_map, arrow_names));
    }

    let injections: Vec<PresentationMorphism> = injections
        .into_iter()
        .map(|(object_map, names)| {
            Ok(PresentationMorphism {
                object_map,
                arrow_map: names
                    .into_iter()
                    .map(|(old, new)| Ok((old, FreeStarElement::generator(&quiver, &new)?)))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    for (p, inj) in parts.iter().zip(&injections) {
        for (l, r) in &p.relations {
            relations.push((inj.apply(l)?, inj.apply(r)?));
        }
    }
    Ok(Coproduct {
        presentation: PresentedStarCategory::new(quiver, relations, bounds)?,
        injections,
        part_of_object,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coequalizer {
    pub presentation: PresentedStarCategory,
    /// The quotient map from the common codomain.
    pub quotient: PresentationMorphism,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut k = i;
    while parent[k] != r {
        let next = parent[k];
        parent[k] = r;
        k = next;
    }
    r
}

/// Keeps the smaller index as the representative, so declaration order decides names.
fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

/// Coequalizer of two parallel presentation morphisms `source → target`.
///
/// Objects are glued along `f1(x) ∼ f2(x)`. Where both images of a generator
/// are plain generators those generators are merged (bounds take the minimum);
/// every other pair becomes a relation.
pub fn coequalizer(
    source: &PresentedStarCategory,
    target: &PresentedStarCategory,
    f1: &PresentationMorphism,
    f2: &PresentationMorphism,
) -> Result<Coequalizer> {
    for f in [f1, f2] {
        f.validate(source, target)
            .map_err(|e| Error::NotParallel(format!("morphism does not run source -> target: {e}")))?;
    }
    let objects = target.objects();
    let obj_index: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut obj_parent: Vec<usize> = (0..objects.len()).collect();
    for x in source.objects() {
        union(
            &mut obj_parent,
            obj_index[f1.object_map[x].as_str()],
            obj_index[f2.object_map[x].as_str()],
        );
    }

    let arrows = &target.quiver.arrows;
    let arrow_index: BTreeMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
    let mut arrow_parent: Vec<usize> = (0..arrows.len()).collect();
    let mut pending = Vec::new();
    for a in &source.quiver.arrows {
        let (e1, e2) = (&f1.arrow_map[&a.name], &f2.arrow_map[&a.name]);
        match (plain_generator(e1), plain_generator(e2)) {
            (Some(g1), Some(g2)) => {
                union(&mut arrow_parent, arrow_index[g1], arrow_index[g2]);
            }
            _ => pending.push((e1.clone(), e2.clone())),
        }
    }

    let rep_obj = |i: usize, parent: &mut Vec<usize>| objects[find(parent, i)].clone();
    let mut quiver = Quiver::default();
    for (i, o) in objects.iter().enumerate() {
        if find(&mut obj_parent, i) == i {
            quiver.objects.push(o.clone());
        }
    }
    let mut bounds: BTreeMap<String, f64> = BTreeMap::new();
    for (i, a) in arrows.iter().enumerate() {
        let r = find(&mut arrow_parent, i);
        if r == i {
            quiver.arrows.push(QuiverArrow {
                name: a.name.clone(),
                src: rep_obj(obj_index[a.src.as_str()], &mut obj_parent),
                tgt: rep_obj(obj_index[a.tgt.as_str()], &mut obj_parent),
            });
        }
        if let Some(&b) = target.bounds.get(&a.name) {
            let slot = bounds.entry(arrows[r].name.clone()).or_insert(b);
            *slot = slot.min(b);
        }
    }

    let mut object_map = BTreeMap::new();
    for (i, o) in objects.iter().enumerate() {
        object_map.insert(o.clone(), rep_obj(i, &mut obj_parent));
    }
    let mut arrow_map = BTreeMap::new();
    for (i, a) in arrows.iter().enumerate() {
        let r = find(&mut arrow_parent, i);
        arrow_map.insert(a.name.clone(), FreeStarElement::generator(&quiver, &arrows[r].name)?);
    }
    let quotient = PresentationMorphism { object_map, arrow_map };

    let mut relations = Vec::new();
    for (l, r) in target.relations.iter().chain(pending.iter()) {
        let (l, r) = (quotient.apply(l)?, quotient.apply(r)?);
        if l != r {
            relations.push((l, r));
        }
    }
    Ok(Coequalizer {
        presentation: PresentedStarCategory::new(quiver, relations, bounds)?,
        quotient,
    })
}

fn plain_generator(e: &FreeStarElement) -> Option<&str> {
    let mut it = e.terms().iter();
    match (it.next(), it.next()) {
        (Some((w, z)), None) if w.len() == 1 && !w[0].adj && *z == crate::numlin::ONE => Some(w[0].gen.as_str()),
        _ => None,
    }
}

/// `c(e) = Σ |z_w| · Π_{letters of w} bound(letter)`, with the empty word contributing 1.
pub fn norm_bound(e: &FreeStarElement, bounds: &BTreeMap<String, f64>) -> Result<f64> {
    let mut total = 0.0;
    for (w, z) in e.terms() {
        let mut prod = z.norm();
        for l in w {
            let b = bounds
                .get(&l.gen)
                .ok_or_else(|| Error::UnboundedGenerator(l.gen.clone()))?;
            prod *= b;
        }
        total += prod;
    }
    Ok(total)
}

/// Matrix data for a quiver: a dimension per object and a
/// `dim(tgt) × dim(src)` matrix per arrow.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Representation {
    pub dims: BTreeMap<String, usize>,
    pub images: BTreeMap<String, ComplexMatrix>,
}

impl Representation {
    fn check_shapes(&self, q: &Quiver) -> Result<()> {
        for o in &q.objects {
            match self.dims.get(o) {
                Some(&d) if d >= 1 => {}
                Some(_) => return Err(Error::InvalidParams(format!("object {o} has dimension 0"))),
                None => return Err(Error::UnknownObject(o.clone())),
            }
        }
        for a in &q.arrows {
            let m = self
                .images
                .get(&a.name)
                .ok_or_else(|| Error::InvalidParams(format!("no image for arrow {}", a.name)))?;
            let want = (self.dims[&a.tgt], self.dims[&a.src]);
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "image of {} is {}x{}, expected {}x{}",
                    a.name,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            m.check_finite()?;
        }
        Ok(())
    }
}

/// A representation certified against a presentation's relations and bounds.
#[derive(Debug, Clone)]
pub struct Evaluation {
    quiver: Quiver,
    rep: Representation,
}

impl Evaluation {
    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn eval(&self, e: &FreeStarElement) -> Result<ComplexMatrix> {
        e.validate_in(&self.quiver)?;
        let (src, tgt) = (self.rep.dims[e.source()], self.rep.dims[e.target()]);
        let mut out = ComplexMatrix::zeros(tgt, src);
        for (w, &z) in e.terms() {
            let mut acc = ComplexMatrix::identity(src);
            for l in w.iter().rev() {
                let img = &self.rep.images[&l.gen];
                acc = if l.adj {
                    img.adjoint().matmul(&acc)?
                } else {
                    img.matmul(&acc)?
                };
            }
            out.axpy(z, &acc);
        }
        Ok(out)
    }
}

/// Checks `rep` against every relation and bound of `p` and returns the evaluator.
pub fn evaluate(p: &PresentedStarCategory, rep: &Representation, tol: &Tolerance) -> Result<Evaluation> {
    rep.check_shapes(&p.quiver)?;
    let ev = Evaluation {
        quiver: p.quiver.clone(),
        rep: rep.clone(),
    };
    for (index, (l, r)) in p.relations.iter().enumerate() {
        let (ml, mr) = (ev.eval(l)?, ev.eval(r)?);
        let residual = op_norm(&(&ml - &mr))?;
        let scale = op_norm(&ml)?.max(op_norm(&mr)?);
        if !tol.accepts(residual, scale) {
            return Err(Error::RelationFailed { index, residual });
        }
    }
    for (arrow, &bound) in &p.bounds {
        let value = op_norm(&rep.images[arrow])?;
        if value > bound + tol.bound(bound) {
            return Err(Error::BoundFailed {
                arrow: arrow.clone(),
                value,
                bound,
            });
        }
    }
    Ok(ev)
}

impl PresentedStarCategory {
    pub fn evaluate(&self, rep: &Representation, tol: &Tolerance) -> Result<Evaluation> {
        evaluate(self, rep, tol)
    }

    pub fn describe_relations(&self) -> Vec<String> {
        self.relations.iter().map(|(l, r)| format!("{l} = {r}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::C64;
    use crate::starpres::Letter;

    fn obj(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn single(name: &str) -> PresentedStarCategory {
        free_star_category(&Quiver::new(obj(&[name]), vec![]).unwrap()).unwrap()
    }

    fn arrow01() -> PresentedStarCategory {
        free_star_category(&Quiver::new(obj(&["0", "1"]), vec![QuiverArrow::new("a", "0", "1")]).unwrap()).unwrap()
    }

    #[test]
    fn coproduct_counts() {
        let f = single("*");
        let c = coproduct(&[f.clone(), f.clone()], RenamePolicy::Prefix).unwrap();
        assert_eq!(c.presentation.objects().len(), 2);
        assert_eq!(c.zero_hom_pairs().len(), 2);
        assert!(matches!(
            coproduct(&[f.clone(), f.clone()], RenamePolicy::Strict),
            Err(Error::NameClash(_))
        ));

        let one = coproduct(&[arrow01()], RenamePolicy::Strict).unwrap();
        assert_eq!(one.presentation, arrow01());
        assert!(one.zero_hom_pairs().is_empty());

        let three = coproduct(&[single("p"), single("q"), single("r")], RenamePolicy::Strict).unwrap();
        assert_eq!(three.presentation.objects().len(), 3);
        assert_eq!(three.zero_hom_pairs().len(), 6);
        for (inj, p) in three.injections.iter().zip(["p", "q", "r"]) {
            inj.validate(&single(p), &three.presentation).unwrap();
        }
    }

    #[test]
    fn coequalizer_of_equal_maps_is_codomain() {
        let src = single("*");
        let tgt = arrow01();
        let f = PresentationMorphism {
            object_map: [("*".to_string(), "0".to_string())].into(),
            arrow_map: BTreeMap::new(),
        };
        let c = coequalizer(&src, &tgt, &f, &f).unwrap();
        assert_eq!(c.presentation, tgt);
    }

    #[test]
    fn coequalizer_glues_objects() {
        let src = single("*");
        let tgt = free_star_category(&Quiver::new(obj(&["p", "q"]), vec![]).unwrap()).unwrap();
        let to = |o: &str| PresentationMorphism {
            object_map: [("*".to_string(), o.to_string())].into(),
            arrow_map: BTreeMap::new(),
        };
        let c = coequalizer(&src, &tgt, &to("p"), &to("q")).unwrap();
        assert_eq!(c.presentation.objects(), &obj(&["p"]));
    }

    #[test]
    fn coequalizer_of_endpoints_makes_a_loop() {
        let src = single("*");
        let tgt = arrow01();
        let to = |o: &str| PresentationMorphism {
            object_map: [("*".to_string(), o.to_string())].into(),
            arrow_map: BTreeMap::new(),
        };
        let c = coequalizer(&src, &tgt, &to("0"), &to("1")).unwrap();
        // Hand-computed quotient quiver: one object 0 with a: 0 -> 0.
        assert_eq!(c.presentation.objects(), &obj(&["0"]));
        assert_eq!(c.presentation.quiver().arrows, vec![QuiverArrow::new("a", "0", "0")]);
        assert!(c.presentation.relations().is_empty());
    }

    #[test]
    fn coequalizer_rejects_ill_typed_maps() {
        let src = single("*");
        let tgt = arrow01();
        let bad = PresentationMorphism {
            object_map: [("*".to_string(), "nowhere".to_string())].into(),
            arrow_map: BTreeMap::new(),
        };
        let good = PresentationMorphism {
            object_map: [("*".to_string(), "0".to_string())].into(),
            arrow_map: BTreeMap::new(),
        };
        assert!(matches!(
            coequalizer(&src, &tgt, &good, &bad),
            Err(Error::NotParallel(_))
        ));
    }

    #[test]
    fn norm_bound_examples() {
        let q = Quiver::new(
            obj(&["x", "y", "z"]),
            vec![QuiverArrow::new("a", "x", "y"), QuiverArrow::new("b", "y", "z")],
        )
        .unwrap();
        let bounds: BTreeMap<String, f64> = [("a".to_string(), 1.0), ("b".to_string(), 3.0)].into();
        assert_eq!(norm_bound(&FreeStarElement::identity("x"), &bounds).unwrap(), 1.0);
        let ba = FreeStarElement::from_word(&q, vec![Letter::new("b"), Letter::new("a")], C64::new(2.0, 0.0)).unwrap();
        assert_eq!(norm_bound(&ba, &bounds).unwrap(), 6.0);
        let a = FreeStarElement::generator(&q, "a").unwrap();
        assert_eq!(norm_bound(&a.add(&a).unwrap(), &bounds).unwrap(), 2.0);
        assert_eq!(
            norm_bound(&ba, &[("a".to_string(), 1.0)].into()),
            Err(Error::UnboundedGenerator("b".into()))
        );
    }

    fn unitary_interval() -> PresentedStarCategory {
        let q = Quiver::new(obj(&["0", "1"]), vec![QuiverArrow::new("u", "0", "1")]).unwrap();
        let u = FreeStarElement::generator(&q, "u").unwrap();
        let rels = vec![
            (u.adjoint().compose(&u).unwrap(), FreeStarElement::identity("0")),
            (u.compose(&u.adjoint()).unwrap(), FreeStarElement::identity("1")),
        ];
        PresentedStarCategory::new(q, rels, BTreeMap::new()).unwrap()
    }

    #[test]
    fn evaluate_unitary_interval() {
        let p = unitary_interval();
        let swap = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        // Oracle: swap* swap = 1 and swap swap* = 1 entrywise.
        let prod = &swap.adjoint() * &swap;
        assert_eq!(prod, ComplexMatrix::identity(2));
        let rep = Representation {
            dims: [("0".to_string(), 2), ("1".to_string(), 2)].into(),
            images: [("u".to_string(), swap)].into(),
        };
        let ev = p.evaluate(&rep, &Tolerance::default()).unwrap();
        let u = p.generator("u").unwrap();
        let round = ev.eval(&u.adjoint().compose(&u).unwrap()).unwrap();
        assert!(round.distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn evaluate_reports_failures() {
        let q = Quiver::new(obj(&["x"]), vec![QuiverArrow::new("a", "x", "x")]).unwrap();
        let a = FreeStarElement::generator(&q, "a").unwrap();
        let iso = PresentedStarCategory::new(
            q.clone(),
            vec![(a.adjoint().compose(&a).unwrap(), FreeStarElement::identity("x"))],
            BTreeMap::new(),
        )
        .unwrap();
        let rep = |z: f64| Representation {
            dims: [("x".to_string(), 1)].into(),
            images: [("a".to_string(), ComplexMatrix::from_real(1, 1, &[z]).unwrap())].into(),
        };
        match iso.evaluate(&rep(2.0), &Tolerance::default()) {
            Err(Error::RelationFailed { index, residual }) => {
                assert_eq!(index, 0);
                assert!((residual - 3.0).abs() < 1e-12);
            }
            other => panic!("expected a relation failure, got {other:?}"),
        }

        let bounded = free_star_category(&q)
            .unwrap()
            .with_bounds([("a".to_string(), 1.0)].into())
            .unwrap();
        assert!(bounded.evaluate(&rep(1.0), &Tolerance::default()).is_ok());
        assert!(matches!(
            bounded.evaluate(&rep(1.5), &Tolerance::default()),
            Err(Error::BoundFailed { .. })
        ));
    }

    #[test]
    fn evaluate_checks_shapes() {
        let p = arrow01();
        let rep = Representation {
            dims: [("0".to_string(), 2), ("1".to_string(), 3)].into(),
            images: [("a".to_string(), ComplexMatrix::identity(2))].into(),
        };
        assert!(matches!(
            p.evaluate(&rep, &Tolerance::default()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn presentation_json_round_trip() {
        let p = unitary_interval().with_bounds([("u".to_string(), 1.0)].into()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: PresentedStarCategory = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
