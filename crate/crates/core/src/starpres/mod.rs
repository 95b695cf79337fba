//! Presented *-categories: quivers, the free *-category on a quiver with words
//! kept in normal form, presentation-level colimits, norm-bound certificates
//! and evaluation in concrete matrix representations.

mod category;
mod element;
mod presentation;
mod rewrite;

pub use category::{ism_presentation, FiniteCategory};
pub use element::{FreeStarElement, Letter, StarWord, PRUNE};
pub use presentation::{
    coequalizer, coproduct, evaluate, free_star_category, norm_bound, Coequalizer, Coproduct, Evaluation,
    PresentationMorphism, PresentedStarCategory, RenamePolicy, Representation,
};
pub use rewrite::StarExpr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

impl QuiverArrow {
    pub fn new(name: &str, src: &str, tgt: &str) -> Self {
        QuiverArrow {
            name: name.into(),
            src: src.into(),
            tgt: tgt.into(),
        }
    }
}

/// Directed multigraph with named objects and arrows.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Quiver {
    pub objects: Vec<String>,
    pub arrows: Vec<QuiverArrow>,
}

impl Quiver {
    pub fn new(objects: Vec<String>, arrows: Vec<QuiverArrow>) -> Result<Self> {
        let q = Quiver { objects, arrows };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.as_str()) {
                return Err(Error::InvalidQuiver(format!("duplicate object {o}")));
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for a in &self.arrows {
            if !names.insert(a.name.as_str()) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow {}", a.name)));
            }
            for end in [&a.src, &a.tgt] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::InvalidQuiver(format!(
                        "arrow {} references unknown object {end}",
                        a.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.objects.iter().any(|o| o == name)
    }

    pub fn arrow(&self, name: &str) -> Option<&QuiverArrow> {
        self.arrows.iter().find(|a| a.name == name)
    }
}
