use std::sync::Arc;

use super::simplicial::{FiniteSimplicialSet, SimplicialMap};
use crate::error::{Error, Result};
use crate::gpd::{
    adjunction_extend, cstar_max, fundamental_groupoid, normalize_fp, FPGroupoid, FpLetter, GroupoidCStar,
    GroupoidFunctor, NormalizedGroupoid, UniFunctor,
};
use crate::matcat::{
    nat_space, same_category, tensor_max, BoundedNatSpace, MatCStarCategory, NatTransform, StarFunctor, TensorMax,
};
use crate::numlin::Tolerance;

/// `πK = C*_max(ΠK)` together with the finite model of `ΠK` it was built from.
#[derive(Debug, Clone)]
pub struct PiCategory {
    pub presentation: FPGroupoid,
    pub normalized: NormalizedGroupoid,
    pub cstar: GroupoidCStar,
    /// Generator of `ΠK` for each edge of `K`, `None` on degenerate edges.
    pub edge_generators: Vec<Option<usize>>,
}

impl PiCategory {
    pub fn category(&self) -> &Arc<MatCStarCategory> {
        &self.cstar.category
    }
}

pub fn pi(k: &FiniteSimplicialSet, budget: usize) -> Result<PiCategory> {
    let presentation = fundamental_groupoid(k)?;
    let normalized = normalize_fp(&presentation, budget)?.finite()?;
    let cstar = cstar_max(&normalized.groupoid);
    let mut next = 0;
    let edge_generators = k
        .level(1)
        .iter()
        .map(|e| {
            (!e.degenerate).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Ok(PiCategory {
        presentation,
        normalized,
        cstar,
        edge_generators,
    })
}

/// The functor `ΠK → ΠL` induced by `f`, on the normalized finite groupoids.
pub fn induced_groupoid_functor(f: &SimplicialMap, pk: &PiCategory, pl: &PiCategory) -> Result<GroupoidFunctor> {
    let gk = &pk.normalized.groupoid;
    let gl = &pl.normalized.groupoid;
    let object_map = f.levels.first().cloned().unwrap_or_default();
    if object_map.len() != gk.object_count() {
        return Err(Error::InvalidSimplicialSet("map does not cover the vertices".into()));
    }
    // Image arrow of each generator of ΠK.
    let mut gen_image = vec![usize::MAX; pk.presentation.generators().len()];
    for (e, g) in pk.edge_generators.iter().enumerate() {
        let Some(g) = *g else { continue };
        let target_edge = *f
            .levels
            .get(1)
            .and_then(|l| l.get(e))
            .ok_or_else(|| Error::InvalidSimplicialSet("map does not cover the edges".into()))?;
        gen_image[g] = match pl.edge_generators[target_edge] {
            Some(h) => pl.normalized.generator_images[h],
            None => gl.identity(object_map[pk.presentation.letter_ends(FpLetter::new(g)).0]),
        };
    }
    let arrow_map = (0..gk.arrow_count())
        .map(|a| {
            let mut acc = gl.identity(object_map[gk.src(a)]);
            for l in pk.normalized.arrow_words[a].iter().rev() {
                let b = gen_image[l.gen];
                acc = gl.compose(if l.inv { gl.inverse(b) } else { b }, acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let functor = GroupoidFunctor { object_map, arrow_map };
    functor.validate(gk, gl)?;
    Ok(functor)
}

/// `π(f): πK → πL`.
pub fn pi_map(f: &SimplicialMap, pk: &PiCategory, pl: &PiCategory, tol: &Tolerance) -> Result<StarFunctor> {
    let phi = induced_groupoid_functor(f, pk, pl)?;
    let uni = UniFunctor {
        object_map: phi.object_map.clone(),
        images: phi.arrow_map.iter().map(|&b| pl.cstar.unitary(b).clone()).collect(),
    };
    adjunction_extend(&pk.cstar, pl.category(), &uni, tol)
}

/// `A ⊗ K := A ⊗_max πK`.
pub fn tensor_with_sset(
    a: &Arc<MatCStarCategory>,
    k: &FiniteSimplicialSet,
    budget: usize,
    tol: &Tolerance,
) -> Result<TensorMax> {
    let p = pi(k, budget)?;
    tensor_max(a, p.category(), tol)
}

/// Hom data of `A^K = C*(πK, A)` on a finite set of probe functors: the
/// natural-transformation space for every ordered pair of probes.
pub fn cotensor(pk: &PiCategory, probes: &[Arc<StarFunctor>]) -> Result<Vec<((usize, usize), BoundedNatSpace)>> {
    for p in probes {
        if !same_category(p.source(), pk.category()) {
            return Err(Error::InvalidFunctor("probe is not defined on πK".into()));
        }
    }
    let mut out = Vec::new();
    for (i, f) in probes.iter().enumerate() {
        for (j, g) in probes.iter().enumerate() {
            out.push(((i, j), nat_space(f, g)?));
        }
    }
    Ok(out)
}

/// Whether `functors[0] → … → functors[n]` with `chain[i]: functors[i] → functors[i+1]`
/// is an `n`-simplex of the nerve of unitary isomorphisms: every transformation
/// natural and unitary.
pub fn map_simplex_check(functors: &[Arc<StarFunctor>], chain: &[NatTransform], tol: &Tolerance) -> Result<bool> {
    if functors.is_empty() || chain.len() + 1 != functors.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} transformations between {} functors",
            chain.len(),
            functors.len()
        )));
    }
    let first = &functors[0];
    for f in &functors[1..] {
        if !same_category(f.source(), first.source()) || !same_category(f.target(), first.target()) {
            return Err(Error::ShapeMismatch("functors are not parallel".into()));
        }
    }
    for (i, t) in chain.iter().enumerate() {
        if **t.source() != *functors[i] || **t.target() != *functors[i + 1] {
            return Err(Error::ShapeMismatch(format!(
                "transformation {i} has the wrong endpoints"
            )));
        }
    }
    Ok(chain.iter().all(|t| t.is_natural(tol) && t.is_unitary(tol)))
}
