use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcat::{iso_exists, IsoVerdict, NatTransform, NoIsoReason, StarFunctor};
use crate::numlin::{ComplexMatrix, Tolerance};

/// Injective on objects. Exact.
pub fn is_cofibration(f: &StarFunctor) -> bool {
    f.is_injective_on_objects()
}

/// Surjective on objects and bijective on every hom space.
pub fn is_trivial_fibration(f: &StarFunctor) -> bool {
    f.is_surjective_on_objects() && f.is_fully_faithful()
}

/// The three generating cofibrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `∅ → F`; lifting against it is surjectivity on objects.
    U,
    /// `F ⊔ F → 1`, the free arrow of norm one; lifting is fullness.
    V,
    /// `P → 1` identifying two parallel arrows; lifting is faithfulness.
    W,
}

pub fn rlp_generating(f: &StarFunctor, which: Generator) -> bool {
    match which {
        Generator::U => f.is_surjective_on_objects(),
        Generator::V => f.is_full(),
        Generator::W => f.is_faithful(),
    }
}

/// A chosen source object `x` and unitary `v: Fx → y` for one target object `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialWitness {
    pub source: usize,
    pub unitary: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeqObstruction {
    NotFaithful {
        x: usize,
        y: usize,
        kernel: ComplexMatrix,
    },
    NotFull {
        x: usize,
        y: usize,
    },
    /// No object is sent into the isomorphism class of `object`.
    NotEssentiallySurjective {
        object: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WeqVerdict {
    /// One witness per target object, in target order.
    Yes {
        witnesses: Vec<EssentialWitness>,
    },
    No {
        obstruction: WeqObstruction,
    },
    /// Full faithfulness holds but an isomorphism search for `object` only
    /// sampled singular elements.
    NoEvidence {
        object: usize,
        reason: NoIsoReason,
    },
}

impl WeqVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, WeqVerdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, WeqVerdict::No { .. })
    }

    pub fn witnesses(&self) -> Option<&[EssentialWitness]> {
        match self {
            WeqVerdict::Yes { witnesses } => Some(witnesses),
            _ => None,
        }
    }
}

/// Fully faithful and unitarily essentially surjective. Objects in the image
/// get their first preimage and an identity witness; the others are searched
/// against every `Fx` in declaration order.
pub fn is_weak_equivalence(f: &StarFunctor, seed: u64, tol: &Tolerance) -> Result<WeqVerdict> {
    if let Some(&(x, y)) = f.non_injective_pairs().first() {
        let kernel = f.kernel_witness(x, y).expect("non-injective pair has a kernel");
        return Ok(WeqVerdict::No {
            obstruction: WeqObstruction::NotFaithful { x, y, kernel },
        });
    }
    if let Some(&(x, y)) = f.non_surjective_pairs().first() {
        return Ok(WeqVerdict::No {
            obstruction: WeqObstruction::NotFull { x, y },
        });
    }
    let b = f.target();
    let mut witnesses = Vec::with_capacity(b.len());
    for y in 0..b.len() {
        if let Some(&x) = f.preimages(y).first() {
            witnesses.push(EssentialWitness {
                source: x,
                unitary: ComplexMatrix::identity(b.dim(y)),
            });
            continue;
        }
        let mut sampled = None;
        let mut found = None;
        for x in 0..f.source().len() {
            match iso_exists(b, f.map_object(x), y, seed, tol)? {
                IsoVerdict::Yes { unitary } => {
                    found = Some(EssentialWitness { source: x, unitary });
                    break;
                }
                IsoVerdict::NoEvidence(r) if !r.is_deterministic() => {
                    sampled.get_or_insert(r);
                }
                IsoVerdict::NoEvidence(_) => {}
            }
        }
        match (found, sampled) {
            (Some(w), _) => witnesses.push(w),
            (None, Some(reason)) => return Ok(WeqVerdict::NoEvidence { object: y, reason }),
            (None, None) => {
                return Ok(WeqVerdict::No {
                    obstruction: WeqObstruction::NotEssentiallySurjective { object: y },
                })
            }
        }
    }
    Ok(WeqVerdict::Yes { witnesses })
}

/// `G: B → A` with unitary natural isomorphisms `unit: GF ⇒ 1_A` and
/// `counit: FG ⇒ 1_B`.
#[derive(Debug, Clone)]
pub struct QuasiInverse {
    pub functor: Arc<StarFunctor>,
    pub unit: NatTransform,
    pub counit: NatTransform,
}

/// `Gy := x_y`, `Gb := F⁻¹(v_{y'}* b v_y)`, counit `v`, unit `F⁻¹(v_{Fx})`.
/// With `F` injective on objects the witnesses on the image are identities,
/// so `GF = 1` on objects and the unit is the identity.
pub fn quasi_inverse(f: &Arc<StarFunctor>, verdict: &WeqVerdict, tol: &Tolerance) -> Result<QuasiInverse> {
    let w = verdict
        .witnesses()
        .ok_or_else(|| Error::NotAWeakEquivalence("no essential-surjectivity witnesses".into()))?;
    let (a, b) = (f.source().clone(), f.target().clone());
    if w.len() != b.len() {
        return Err(Error::NotAWeakEquivalence(format!(
            "{} witnesses for {} target objects",
            w.len(),
            b.len()
        )));
    }
    let lift = |x: usize, x2: usize, m: &ComplexMatrix| -> Result<ComplexMatrix> {
        let (pre, r) = f.preimage(x, x2, m)?;
        if !tol.accepts(r, m.frobenius_norm()) {
            return Err(Error::NotAWeakEquivalence(format!(
                "no preimage on {} -> {} (residual {r:.3e})",
                a.name(x),
                a.name(x2)
            )));
        }
        Ok(pre)
    };
    let object_map: Vec<usize> = w.iter().map(|e| e.source).collect();
    let g = Arc::new(StarFunctor::from_fn(
        b.clone(),
        a.clone(),
        object_map.clone(),
        |y, y2, m| {
            lift(
                object_map[y],
                object_map[y2],
                &(&(&w[y2].unitary.adjoint() * m) * &w[y].unitary),
            )
        },
    )?);
    let gf = Arc::new(f.then(&g)?);
    let fg = Arc::new(g.then(f)?);
    let unit_components = (0..a.len())
        .map(|x| lift(object_map[f.map_object(x)], x, &w[f.map_object(x)].unitary))
        .collect::<Result<Vec<_>>>()?;
    let unit = NatTransform::new(gf, Arc::new(StarFunctor::identity(a)), unit_components)?;
    let counit = NatTransform::new(
        fg,
        Arc::new(StarFunctor::identity(b)),
        w.iter().map(|e| e.unitary.clone()).collect(),
    )?;
    Ok(QuasiInverse {
        functor: g,
        unit,
        counit,
    })
}
