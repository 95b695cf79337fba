//! Unnormalized *-expressions and the rewrite system that brings them to
//! normal form one redex at a time, in any order.

use super::{FreeStarElement, Quiver};
use crate::error::{Error, Result};
use crate::numlin::C64;

/// Syntax tree of a *-category expression. `Comp(b, a)` is `b ∘ a`.
#[derive(Debug, Clone, PartialEq)]
pub enum StarExpr {
    Gen(String),
    Id(String),
    Adj(Box<StarExpr>),
    Comp(Box<StarExpr>, Box<StarExpr>),
    Sum(Box<StarExpr>, Box<StarExpr>),
    Scale(C64, Box<StarExpr>),
}

use StarExpr::*;

fn bx(e: StarExpr) -> Box<StarExpr> {
    Box::new(e)
}

impl StarExpr {
    pub fn adj(e: StarExpr) -> Self {
        Adj(bx(e))
    }

    pub fn comp(b: StarExpr, a: StarExpr) -> Self {
        Comp(bx(b), bx(a))
    }

    pub fn sum(a: StarExpr, b: StarExpr) -> Self {
        Sum(bx(a), bx(b))
    }

    pub fn scale(z: C64, e: StarExpr) -> Self {
        Scale(z, bx(e))
    }

    /// `(source, target)`, type-checking the whole tree.
    pub fn ends(&self, q: &Quiver) -> Result<(String, String)> {
        match self {
            Gen(g) => {
                let a = q
                    .arrow(g)
                    .ok_or_else(|| Error::InvalidQuiver(format!("unknown generator {g}")))?;
                Ok((a.src.clone(), a.tgt.clone()))
            }
            Id(x) => {
                if !q.has_object(x) {
                    return Err(Error::UnknownObject(x.clone()));
                }
                Ok((x.clone(), x.clone()))
            }
            Adj(e) => e.ends(q).map(|(s, t)| (t, s)),
            Comp(b, a) => {
                let (sa, ta) = a.ends(q)?;
                let (sb, tb) = b.ends(q)?;
                if ta != sb {
                    return Err(Error::NotComposable(format!("{tb} <- {sb} after {ta} <- {sa}")));
                }
                Ok((sa, tb))
            }
            Sum(a, b) => {
                let ea = a.ends(q)?;
                if ea != b.ends(q)? {
                    return Err(Error::NotParallel("summands differ in type".into()));
                }
                Ok(ea)
            }
            Scale(_, e) => e.ends(q),
        }
    }

    /// Direct evaluation in the element algebra.
    pub fn to_element(&self, q: &Quiver) -> Result<FreeStarElement> {
        Ok(match self {
            Gen(g) => FreeStarElement::generator(q, g)?,
            Id(x) => {
                self.ends(q)?;
                FreeStarElement::identity(x)
            }
            Adj(e) => e.to_element(q)?.adjoint(),
            Comp(b, a) => b.to_element(q)?.compose(&a.to_element(q)?)?,
            Sum(a, b) => a.to_element(q)?.add(&b.to_element(q)?)?,
            Scale(z, e) => e.to_element(q)?.scale(*z),
        })
    }

    /// Results of every rule that applies at the root.
    fn local_rewrites(&self) -> Vec<StarExpr> {
        let mut out = Vec::new();
        match self {
            Adj(inner) => match inner.as_ref() {
                Adj(e) => out.push((**e).clone()),
                Comp(b, a) => out.push(Self::comp(Self::adj((**a).clone()), Self::adj((**b).clone()))),
                Sum(a, b) => out.push(Self::sum(Self::adj((**a).clone()), Self::adj((**b).clone()))),
                Scale(z, e) => out.push(Self::scale(z.conj(), Self::adj((**e).clone()))),
                Id(x) => out.push(Id(x.clone())),
                Gen(_) => {}
            },
            Comp(b, a) => {
                if let Id(_) = b.as_ref() {
                    out.push((**a).clone());
                }
                if let Id(_) = a.as_ref() {
                    out.push((**b).clone());
                }
                if let Sum(b1, b2) = b.as_ref() {
                    out.push(Self::sum(Comp(b1.clone(), a.clone()), Comp(b2.clone(), a.clone())));
                }
                if let Sum(a1, a2) = a.as_ref() {
                    out.push(Self::sum(Comp(b.clone(), a1.clone()), Comp(b.clone(), a2.clone())));
                }
                if let Scale(z, b1) = b.as_ref() {
                    out.push(Self::scale(*z, Comp(b1.clone(), a.clone())));
                }
                if let Scale(z, a1) = a.as_ref() {
                    out.push(Self::scale(*z, Comp(b.clone(), a1.clone())));
                }
            }
            Scale(z, e) => {
                if let Scale(w, inner) = e.as_ref() {
                    out.push(Scale(z * w, inner.clone()));
                }
            }
            Gen(_) | Id(_) | Sum(..) => {}
        }
        out
    }

    fn children(&self) -> Vec<&StarExpr> {
        match self {
            Gen(_) | Id(_) => vec![],
            Adj(e) | Scale(_, e) => vec![e],
            Comp(b, a) => vec![b, a],
            Sum(a, b) => vec![a, b],
        }
    }

    /// Number of (position, rule) redexes in the tree.
    pub fn redex_count(&self) -> usize {
        self.local_rewrites().len() + self.children().iter().map(|c| c.redex_count()).sum::<usize>()
    }

    pub fn is_normal(&self) -> bool {
        self.redex_count() == 0
    }

    /// Rewrites the `k`-th redex in pre-order.
    pub fn rewrite_at(&self, mut k: usize) -> Option<StarExpr> {
        let local = self.local_rewrites();
        if k < local.len() {
            return local.into_iter().nth(k);
        }
        k -= local.len();
        let rebuild = |i: usize, new: StarExpr| -> StarExpr {
            match (self, i) {
                (Adj(_), _) => Self::adj(new),
                (Scale(z, _), _) => Self::scale(*z, new),
                (Comp(_, a), 0) => Comp(bx(new), a.clone()),
                (Comp(b, _), _) => Comp(b.clone(), bx(new)),
                (Sum(_, b), 0) => Sum(bx(new), b.clone()),
                (Sum(a, _), _) => Sum(a.clone(), bx(new)),
                (Gen(_) | Id(_), _) => unreachable!("leaves have no children"),
            }
        };
        for (i, c) in self.children().into_iter().enumerate() {
            let n = c.redex_count();
            if k < n {
                return c.rewrite_at(k).map(|new| rebuild(i, new));
            }
            k -= n;
        }
        None
    }

    /// Rewrites until no redex remains, letting `pick(n)` choose among the `n`
    /// available redexes at each step.
    pub fn normalize_with(&self, mut pick: impl FnMut(usize) -> usize) -> StarExpr {
        let mut e = self.clone();
        loop {
            let n = e.redex_count();
            if n == 0 {
                return e;
            }
            e = e.rewrite_at(pick(n) % n).expect("redex index in range");
        }
    }
}
