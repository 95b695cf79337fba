use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::groupoid::{product_groupoid, FiniteGroupoid};
use crate::error::{Error, Result};
use crate::matcat::{
    same_category, tensor_max, uni_membership, validate_functor, MatCStarCategory, MatObject, StarFunctor, TensorMax,
};
use crate::numlin::{ComplexMatrix, Subspace, Tolerance};

/// `C*_max(G)` in the regular representation, with the unitary image of every arrow.
#[derive(Debug, Clone)]
pub struct GroupoidCStar {
    pub groupoid: FiniteGroupoid,
    pub category: Arc<MatCStarCategory>,
    /// Arrows into each object, in carrier order.
    pub carriers: Vec<Vec<usize>>,
    /// `ρ(g)` for every arrow `g`, indexed like the groupoid's arrows.
    pub embedding: Vec<ComplexMatrix>,
}

impl GroupoidCStar {
    pub fn unitary(&self, g: usize) -> &ComplexMatrix {
        &self.embedding[g]
    }

    /// Coordinates of `ρ(g)` in the stored basis of its hom space.
    fn basis_position(&self, g: usize) -> usize {
        let (x, y) = (self.groupoid.src(g), self.groupoid.tgt(g));
        self.groupoid
            .hom(x, y)
            .iter()
            .position(|&h| h == g)
            .expect("arrow lies in its hom")
    }
}

/// Regular representation: object `x` acts on the span of the arrows into
/// `x`, sorted by `(source name, arrow name)`, and `g: x → y` acts by
/// post-composition. The hom basis of `x → y` is `ρ(g)/√dim x` over `G(x, y)`
/// in declaration order.
pub fn cstar_max(g: &FiniteGroupoid) -> GroupoidCStar {
    let n = g.object_count();
    let carriers: Vec<Vec<usize>> = (0..n).map(|x| g.arrows_into(x)).collect();
    let position: Vec<BTreeMap<usize, usize>> = carriers
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, &h)| (h, i)).collect())
        .collect();
    let embedding: Vec<ComplexMatrix> = (0..g.arrow_count())
        .map(|a| {
            let (x, y) = (g.src(a), g.tgt(a));
            let mut m = ComplexMatrix::zeros(carriers[y].len(), carriers[x].len());
            for (j, &h) in carriers[x].iter().enumerate() {
                let gh = g.compose(a, h).expect("post-composition is defined");
                m[(position[y][&gh], j)] = 1.0.into();
            }
            m
        })
        .collect();
    let objects = (0..n)
        .map(|x| MatObject::new(&g.objects()[x], carriers[x].len()))
        .collect();
    let mut homs = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let arrows = g.hom(x, y);
            if arrows.is_empty() {
                continue;
            }
            let scale = 1.0 / (carriers[x].len() as f64).sqrt();
            let basis = arrows.iter().map(|&a| embedding[a].scale_real(scale)).collect();
            let space = Subspace::from_orthonormal(carriers[y].len(), carriers[x].len(), basis, &Tolerance::default())
                .expect("regular representation images are orthogonal");
            homs.insert((x, y), space);
        }
    }
    GroupoidCStar {
        groupoid: g.clone(),
        category: Arc::new(MatCStarCategory::new(objects, homs).expect("regular representation is closed")),
        carriers,
        embedding,
    }
}

/// A functor from a groupoid into the unitaries of a C*-category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniFunctor {
    pub object_map: Vec<usize>,
    /// Image of every groupoid arrow.
    pub images: Vec<ComplexMatrix>,
}

impl UniFunctor {
    pub fn max_distance(&self, other: &UniFunctor) -> f64 {
        if self.object_map != other.object_map {
            return f64::INFINITY;
        }
        self.images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                if a.shape() == b.shape() {
                    a.distance(b)
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// The *-functor `C*_max(G) → A` extending `φ` linearly.
pub fn adjunction_extend(
    gc: &GroupoidCStar,
    target: &Arc<MatCStarCategory>,
    phi: &UniFunctor,
    tol: &Tolerance,
) -> Result<StarFunctor> {
    let g = &gc.groupoid;
    if phi.object_map.len() != g.object_count() || phi.images.len() != g.arrow_count() {
        return Err(Error::InvalidFunctor("data does not match the groupoid".into()));
    }
    if let Some(&bad) = phi.object_map.iter().find(|&&y| y >= target.len()) {
        return Err(Error::InvalidFunctor(format!("object image {bad} out of range")));
    }
    for a in 0..g.arrow_count() {
        let (x, y) = (phi.object_map[g.src(a)], phi.object_map[g.tgt(a)]);
        if !uni_membership(target, x, y, &phi.images[a], tol) {
            return Err(Error::NotUnitary(g.name(a).into()));
        }
    }
    for a in 0..g.arrow_count() {
        for &b in g.arrows_into(g.src(a)).iter() {
            let ab = g.compose(a, b)?;
            let prod = phi.images[a].matmul(&phi.images[b])?;
            let scale = prod.frobenius_norm().max(1.0);
            if !tol.accepts(prod.distance(&phi.images[ab]), scale) {
                return Err(Error::InvalidFunctor(format!(
                    "composition {} ∘ {} is not preserved",
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }
    let mut images = BTreeMap::new();
    for x in 0..g.object_count() {
        for y in 0..g.object_count() {
            let arrows = g.hom(x, y);
            if arrows.is_empty() {
                continue;
            }
            let scale = 1.0 / (gc.carriers[x].len() as f64).sqrt();
            images.insert(
                (x, y),
                arrows.iter().map(|&a| phi.images[a].scale_real(scale)).collect(),
            );
        }
    }
    StarFunctor::new(gc.category.clone(), target.clone(), phi.object_map.clone(), images)
}

/// `F ↦ F ∘ ρ`, the groupoid functor into the unitaries of the target.
pub fn adjunction_restrict(gc: &GroupoidCStar, f: &StarFunctor, tol: &Tolerance) -> Result<UniFunctor> {
    if !same_category(f.source(), &gc.category) {
        return Err(Error::InvalidFunctor(
            "functor is not defined on this groupoid C*-category".into(),
        ));
    }
    validate_functor(f, tol).into_result(Error::InvalidFunctor)?;
    let g = &gc.groupoid;
    let images = (0..g.arrow_count())
        .map(|a| {
            let (x, y) = (g.src(a), g.tgt(a));
            let scale = (gc.carriers[x].len() as f64).sqrt();
            f.images(x, y)[gc.basis_position(a)].scale_real(scale)
        })
        .collect();
    Ok(UniFunctor {
        object_map: f.object_map().to_vec(),
        images,
    })
}

/// Outcome of the checks that certify the comparison functor is an isomorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub objects_bijective: bool,
    pub hom_dims_match: bool,
    pub hom_maps_full_rank: bool,
    /// Worst residual of the involution and composition checks.
    pub functor_residual: f64,
    pub functor_valid: bool,
}

impl ComparisonVerdict {
    pub fn is_isomorphism(&self) -> bool {
        self.objects_bijective && self.hom_dims_match && self.hom_maps_full_rank && self.functor_valid
    }
}

/// The comparison data for `C*_max(G₁ × G₂) → C*_max G₁ ⊗ C*_max G₂`.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub source: GroupoidCStar,
    pub tensor: TensorMax,
    pub functor: StarFunctor,
    pub verdict: ComparisonVerdict,
}

/// `(g₁, g₂) ↦ ρ(g₁) ⊗ ρ(g₂)`, extended linearly.
pub fn comparison_functor(g1: &FiniteGroupoid, g2: &FiniteGroupoid, tol: &Tolerance) -> Result<Comparison> {
    let (c1, c2) = (cstar_max(g1), cstar_max(g2));
    let tensor = tensor_max(&c1.category, &c2.category, tol)?;
    let source = cstar_max(&product_groupoid(g1, g2));
    let a2 = g2.arrow_count();
    let phi = UniFunctor {
        // Object and arrow indices of the product follow the same pairing as the tensor.
        object_map: (0..source.groupoid.object_count()).collect(),
        images: (0..source.groupoid.arrow_count())
            .map(|a| c1.unitary(a / a2).kron(c2.unitary(a % a2)))
            .collect(),
    };
    let functor = adjunction_extend(&source, &tensor.category, &phi, tol)?;
    let report = validate_functor(&functor, tol);
    let n = source.category.len();
    let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));
    let hom_dims_match = pairs().all(|(x, y)| {
        let (x1, x2) = tensor.split(x);
        let (y1, y2) = tensor.split(y);
        source.category.hom_dim(x, y) == c1.category.hom_dim(x1, y1) * c2.category.hom_dim(x2, y2)
            && tensor.category.hom_dim(x, y) == source.category.hom_dim(x, y)
    });
    let verdict = ComparisonVerdict {
        objects_bijective: functor.is_injective_on_objects() && functor.is_surjective_on_objects(),
        hom_dims_match,
        hom_maps_full_rank: functor.is_fully_faithful(),
        functor_residual: report.max_residual,
        functor_valid: report.is_ok(),
    };
    Ok(Comparison {
        source,
        tensor,
        functor,
        verdict,
    })
}
