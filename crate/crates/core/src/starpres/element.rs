use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Quiver;
use crate::error::{Error, Result};
use crate::numlin::{C64, ONE};

/// Coefficients at or below this modulus are dropped.
pub const PRUNE: f64 = 1e-9;

/// A generator, possibly adjoint-marked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: String,
    pub adj: bool,
}

impl Letter {
    pub fn new(gen: &str) -> Self {
        Letter {
            gen: gen.into(),
            adj: false,
        }
    }

    pub fn star(gen: &str) -> Self {
        Letter {
            gen: gen.into(),
            adj: true,
        }
    }

    pub fn flip(&self) -> Self {
        Letter {
            gen: self.gen.clone(),
            adj: !self.adj,
        }
    }

    /// `(source, target)` in `q`; an adjoint letter reverses the arrow.
    pub fn ends<'q>(&self, q: &'q Quiver) -> Result<(&'q str, &'q str)> {
        let a = q
            .arrow(&self.gen)
            .ok_or_else(|| Error::InvalidQuiver(format!("unknown generator {}", self.gen)))?;
        Ok(if self.adj {
            (a.tgt.as_str(), a.src.as_str())
        } else {
            (a.src.as_str(), a.tgt.as_str())
        })
    }
}

/// Letters in written order: `[b, a]` is `b ∘ a`. The empty word is an identity.
pub type StarWord = Vec<Letter>;

fn adjoint_word(w: &[Letter]) -> StarWord {
    w.iter().rev().map(Letter::flip).collect()
}

/// Finite linear combination of parallel words in the free *-category.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeStarElement {
    source: String,
    target: String,
    terms: BTreeMap<StarWord, C64>,
}

impl FreeStarElement {
    pub fn zero(source: &str, target: &str) -> Self {
        FreeStarElement {
            source: source.into(),
            target: target.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(object: &str) -> Self {
        let mut e = Self::zero(object, object);
        e.terms.insert(Vec::new(), ONE);
        e
    }

    pub fn generator(q: &Quiver, name: &str) -> Result<Self> {
        Self::from_word(q, vec![Letter::new(name)], ONE)
    }

    /// A single nonempty word times `coef`, checked for composability in `q`.
    pub fn from_word(q: &Quiver, word: StarWord, coef: C64) -> Result<Self> {
        let (source, target) =
            word_ends(q, &word)?.ok_or_else(|| Error::InvalidParams("empty word has no endpoints".into()))?;
        let mut e = Self::zero(source, target);
        e.insert(word, coef);
        Ok(e)
    }

    /// Builds an element from raw terms after checking every word against `q`.
    pub fn from_terms(
        q: &Quiver,
        source: &str,
        target: &str,
        terms: impl IntoIterator<Item = (StarWord, C64)>,
    ) -> Result<Self> {
        let mut e = Self::zero(source, target);
        for (w, z) in terms {
            e.insert(w, z);
        }
        e.validate_in(q)?;
        Ok(e)
    }

    fn insert(&mut self, word: StarWord, z: C64) {
        let slot = self.terms.entry(word).or_insert(C64::new(0.0, 0.0));
        *slot += z;
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, z| z.norm() > PRUNE);
        self
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn terms(&self) -> &BTreeMap<StarWord, C64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[Letter]) -> C64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn generators(&self) -> BTreeSet<&str> {
        self.terms.keys().flatten().map(|l| l.gen.as_str()).collect()
    }

    /// Checks objects, word composability and endpoints against `q`.
    pub fn validate_in(&self, q: &Quiver) -> Result<()> {
        for o in [&self.source, &self.target] {
            if !q.has_object(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        for w in self.terms.keys() {
            match word_ends(q, w)? {
                None if self.source != self.target => {
                    return Err(Error::NotComposable(format!(
                        "identity term in an element {} -> {}",
                        self.source, self.target
                    )))
                }
                Some((s, t)) if s != self.source || t != self.target => {
                    return Err(Error::NotComposable(format!(
                        "word {} runs {s} -> {t}, element runs {} -> {}",
                        display_word(w),
                        self.source,
                        self.target
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotParallel(format!(
                "{} -> {} vs {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (w, &z) in &other.terms {
            out.insert(w.clone(), z);
        }
        Ok(out.pruned())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= z;
        }
        out.pruned()
    }

    /// `self ∘ other`; concatenation of words, with identities as neutral words.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::NotComposable(format!(
                "({} -> {}) after ({} -> {})",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut out = Self::zero(&other.source, &self.target);
        for (wl, &zl) in &self.terms {
            for (wr, &zr) in &other.terms {
                let mut w = wl.clone();
                w.extend(wr.iter().cloned());
                out.insert(w, zl * zr);
            }
        }
        Ok(out.pruned())
    }

    /// Reverses words, flips adjoint marks and conjugates coefficients. Exactly
    /// involutive: no arithmetic beyond conjugation is performed.
    pub fn adjoint(&self) -> Self {
        FreeStarElement {
            source: self.target.clone(),
            target: self.source.clone(),
            terms: self.terms.iter().map(|(w, z)| (adjoint_word(w), z.conj())).collect(),
        }
    }

    /// Replaces every generator by its image under `image`, composing the
    /// images along each word. `object` maps the endpoints.
    pub fn substitute(
        &self,
        object: impl Fn(&str) -> Result<String>,
        image: impl Fn(&str) -> Result<FreeStarElement>,
    ) -> Result<Self> {
        let src = object(&self.source)?;
        let tgt = object(&self.target)?;
        let mut out = Self::zero(&src, &tgt);
        for (w, &z) in &self.terms {
            let mut acc: Option<FreeStarElement> = None;
            for l in w.iter().rev() {
                let mut img = image(&l.gen)?;
                if l.adj {
                    img = img.adjoint();
                }
                acc = Some(match acc {
                    None => img,
                    Some(prev) => img.compose(&prev)?,
                });
            }
            let term = match acc {
                None => Self::identity(&src),
                Some(e) => e,
            };
            if term.source != src || term.target != tgt {
                return Err(Error::NotComposable(format!(
                    "image of {} runs {} -> {}, expected {src} -> {tgt}",
                    display_word(w),
                    term.source,
                    term.target
                )));
            }
            for (tw, &tz) in &term.terms {
                out.insert(tw.clone(), z * tz);
            }
        }
        Ok(out.pruned())
    }
}

/// Source and target of a nonempty word; `None` for the empty word.
pub(crate) fn word_ends<'q>(q: &'q Quiver, w: &[Letter]) -> Result<Option<(&'q str, &'q str)>> {
    let mut ends: Option<(&str, &str)> = None;
    for l in w.iter().rev() {
        let (s, t) = l.ends(q)?;
        ends = match ends {
            None => Some((s, t)),
            Some((s0, t0)) => {
                if s != t0 {
                    return Err(Error::NotComposable(format!(
                        "{} cannot follow a word ending at {t0}",
                        l.gen
                    )));
                }
                Some((s0, t))
            }
        };
    }
    Ok(ends)
}

pub(crate) fn display_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|l| if l.adj { format!("{}*", l.gen) } else { l.gen.clone() })
        .collect::<Vec<_>>()
        .join("·")
}

impl std::fmt::Display for FreeStarElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, z)| format!("({z})·{}", display_word(w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    word: StarWord,
    coef: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct ElementWire {
    src: String,
    tgt: String,
    terms: Vec<TermWire>,
}

impl Serialize for FreeStarElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementWire {
            src: self.source.clone(),
            tgt: self.target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, z)| TermWire {
                    word: w.clone(),
                    coef: [z.re, z.im],
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeStarElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ElementWire::deserialize(d)?;
        let mut e = FreeStarElement::zero(&wire.src, &wire.tgt);
        for t in wire.terms {
            if !t.coef[0].is_finite() || !t.coef[1].is_finite() {
                return Err(serde::de::Error::custom("non-finite coefficient"));
            }
            e.insert(t.word, C64::new(t.coef[0], t.coef[1]));
        }
        Ok(e.pruned())
    }
}
