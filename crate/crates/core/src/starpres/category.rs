use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FreeStarElement, PresentedStarCategory, Quiver, QuiverArrow};
use crate::error::{Error, Result};

/// A finite category given by its full composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CategoryWire", into = "CategoryWire")]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<QuiverArrow>,
    identities: BTreeMap<String, String>,
    /// `(g, f) ↦ g∘f` for every composable pair.
    compose: BTreeMap<(String, String), String>,
}

#[derive(Serialize, Deserialize)]
struct CategoryWire {
    objects: Vec<String>,
    arrows: Vec<QuiverArrow>,
    identities: BTreeMap<String, String>,
    compose: BTreeMap<String, String>,
}

impl TryFrom<CategoryWire> for FiniteCategory {
    type Error = Error;

    fn try_from(w: CategoryWire) -> Result<Self> {
        let compose = w
            .compose
            .into_iter()
            .map(|(k, v)| {
                let (g, f) = k
                    .split_once('|')
                    .ok_or_else(|| Error::InvalidCategory(format!("bad composition key {k}")))?;
                Ok(((g.to_string(), f.to_string()), v))
            })
            .collect::<Result<_>>()?;
        FiniteCategory::new(w.objects, w.arrows, w.identities, compose)
    }
}

impl From<FiniteCategory> for CategoryWire {
    fn from(c: FiniteCategory) -> Self {
        CategoryWire {
            objects: c.objects,
            arrows: c.arrows,
            identities: c.identities,
            compose: c
                .compose
                .into_iter()
                .map(|((g, f), h)| (format!("{g}|{f}"), h))
                .collect(),
        }
    }
}

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<QuiverArrow>,
        identities: BTreeMap<String, String>,
        compose: BTreeMap<(String, String), String>,
    ) -> Result<Self> {
        let c = FiniteCategory {
            objects,
            arrows,
            identities,
            compose,
        };
        c.validate()?;
        Ok(c)
    }

    /// One object `*` and its identity.
    pub fn terminal() -> Self {
        Self::ordinal(0)
    }

    /// The poset `0 → 1 → … → n`, with arrows named `i->j` for `i ≤ j`.
    pub fn ordinal(n: usize) -> Self {
        let name = |i: usize, j: usize| format!("{i}->{j}");
        let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        for i in 0..=n {
            for j in i..=n {
                arrows.push(QuiverArrow::new(&name(i, j), &objects[i], &objects[j]));
            }
        }
        let identities = (0..=n).map(|i| (objects[i].clone(), name(i, i))).collect();
        let mut compose = BTreeMap::new();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    compose.insert((name(j, k), name(i, j)), name(i, k));
                }
            }
        }
        FiniteCategory {
            objects,
            arrows,
            identities,
            compose,
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[QuiverArrow] {
        &self.arrows
    }

    pub fn identity(&self, object: &str) -> Option<&str> {
        self.identities.get(object).map(String::as_str)
    }

    pub fn is_identity(&self, arrow: &str) -> bool {
        self.identities.values().any(|i| i == arrow)
    }

    pub fn compose(&self, g: &str, f: &str) -> Option<&str> {
        self.compose.get(&(g.to_string(), f.to_string())).map(String::as_str)
    }

    pub fn arrow(&self, name: &str) -> Option<&QuiverArrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    /// Exhaustive check of typing, unit laws and associativity.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCategory(m));
        Quiver {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
        }
        .validate()
        .map_err(|e| Error::InvalidCategory(e.to_string()))?;
        for o in &self.objects {
            let Some(id) = self.identities.get(o) else {
                return bad(format!("object {o} has no identity"));
            };
            match self.arrow(id) {
                Some(a) if a.src == *o && a.tgt == *o => {}
                _ => return bad(format!("identity {id} of {o} is not an endomorphism of {o}")),
            }
        }
        let mut expected = 0;
        for f in &self.arrows {
            for g in self.arrows.iter().filter(|g| g.src == f.tgt) {
                expected += 1;
                let Some(h) = self.compose(&g.name, &f.name) else {
                    return bad(format!("{}∘{} is missing", g.name, f.name));
                };
                match self.arrow(h) {
                    Some(a) if a.src == f.src && a.tgt == g.tgt => {}
                    _ => return bad(format!("{}∘{} = {h} has the wrong type", g.name, f.name)),
                }
            }
            if self.compose(&self.identities[&f.tgt], &f.name) != Some(f.name.as_str())
                || self.compose(&f.name, &self.identities[&f.src]) != Some(f.name.as_str())
            {
                return bad(format!("unit law fails at {}", f.name));
            }
        }
        if expected != self.compose.len() {
            return bad("composition table has entries for non-composable pairs".into());
        }
        for f in &self.arrows {
            for g in self.arrows.iter().filter(|g| g.src == f.tgt) {
                for h in self.arrows.iter().filter(|h| h.src == g.tgt) {
                    let gf = self.compose(&g.name, &f.name).unwrap();
                    let hg = self.compose(&h.name, &g.name).unwrap();
                    if self.compose(&h.name, gf) != self.compose(hg, &f.name) {
                        return bad(format!("associativity fails at ({}, {}, {})", h.name, g.name, f.name));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Presentation whose representations are the functors `C → ism(A)`: one
/// generator per non-identity arrow, the composition table as relations and
/// `c*c = 1` for every arrow (identities included, where it reads `1*1 = 1`).
pub fn ism_presentation(c: &FiniteCategory) -> Result<PresentedStarCategory> {
    c.validate()?;
    let quiver = Quiver {
        objects: c.objects.clone(),
        arrows: c.arrows.iter().filter(|a| !c.is_identity(&a.name)).cloned().collect(),
    };
    let element = |name: &str| -> Result<FreeStarElement> {
        let a = c.arrow(name).expect("validated arrow");
        if c.is_identity(name) {
            Ok(FreeStarElement::identity(&a.src))
        } else {
            FreeStarElement::generator(&quiver, name)
        }
    };
    let mut relations = Vec::new();
    for a in &c.arrows {
        let e = element(&a.name)?;
        relations.push((e.adjoint().compose(&e)?, FreeStarElement::identity(&a.src)));
    }
    for ((g, f), h) in &c.compose {
        if c.is_identity(g) || c.is_identity(f) {
            continue;
        }
        relations.push((element(g)?.compose(&element(f)?)?, element(h)?));
    }
    PresentedStarCategory::new(quiver, relations, BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{ComplexMatrix, Tolerance};
    use crate::starpres::{Letter, Representation};

    #[test]
    fn ordinals_validate() {
        for n in 0..4 {
            let c = FiniteCategory::ordinal(n);
            c.validate().unwrap();
            assert_eq!(c.arrows().len(), (n + 1) * (n + 2) / 2);
        }
    }

    #[test]
    fn broken_tables_are_rejected() {
        let mut c = FiniteCategory::ordinal(1);
        c.compose.remove(&("0->1".to_string(), "0->0".to_string()));
        assert!(matches!(c.validate(), Err(Error::InvalidCategory(_))));

        let mut c = FiniteCategory::ordinal(2);
        c.compose
            .insert(("1->2".to_string(), "0->1".to_string()), "0->1".to_string());
        assert!(matches!(c.validate(), Err(Error::InvalidCategory(_))));
    }

    #[test]
    fn ism_of_terminal() {
        let p = ism_presentation(&FiniteCategory::terminal()).unwrap();
        assert_eq!(p.objects().len(), 1);
        assert!(p.quiver().arrows.is_empty());
        assert_eq!(p.relations().len(), 1);
        let (l, r) = &p.relations()[0];
        assert_eq!(l, &FreeStarElement::identity("0"));
        assert_eq!(r, &FreeStarElement::identity("0"));
    }

    #[test]
    fn ism_of_one_arrow() {
        let p = ism_presentation(&FiniteCategory::ordinal(1)).unwrap();
        let c = p.generator("0->1").unwrap();
        let cc = c.adjoint().compose(&c).unwrap();
        let nontrivial: Vec<_> = p.relations().iter().filter(|(l, r)| l != r).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0], &(cc, FreeStarElement::identity("0")));
        // c c* never appears.
        let co = vec![Letter::new("0->1"), Letter::star("0->1")];
        assert!(p
            .relations()
            .iter()
            .all(|(l, r)| l.coefficient(&co).norm() == 0.0 && r.coefficient(&co).norm() == 0.0));

        let tol = Tolerance::default();
        let rep = |m: ComplexMatrix| Representation {
            dims: [("0".to_string(), m.cols()), ("1".to_string(), m.rows())].into(),
            images: [("0->1".to_string(), m)].into(),
        };
        let col = ComplexMatrix::from_real(2, 1, &[1.0, 0.0]).unwrap();
        assert!(p.evaluate(&rep(col), &tol).is_ok());
        let short = ComplexMatrix::from_real(2, 1, &[0.5, 0.0]).unwrap();
        assert!(matches!(
            p.evaluate(&rep(short), &tol),
            Err(Error::RelationFailed { .. })
        ));
    }

    #[test]
    fn category_json_round_trip() {
        let c = FiniteCategory::ordinal(2);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(r#""1->2|0->1":"0->2""#));
        let back: FiniteCategory = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
