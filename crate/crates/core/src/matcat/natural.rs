use std::sync::Arc;

use super::functor::{same_category, StarFunctor};
use crate::error::{Error, Result};
use crate::numlin::{is_unitary, op_norm, r_factor, svd, ComplexMatrix, Tolerance, C64, RANK_RTOL};

/// A family `α_x : F x → F' x` indexed by the common source's objects.
#[derive(Debug, Clone)]
pub struct NatTransform {
    source: Arc<StarFunctor>,
    target: Arc<StarFunctor>,
    components: Vec<ComplexMatrix>,
}

fn check_parallel(f: &StarFunctor, g: &StarFunctor) -> Result<()> {
    if !same_category(f.source(), g.source()) || !same_category(f.target(), g.target()) {
        return Err(Error::NotParallel(
            "functors have different source or target categories".into(),
        ));
    }
    Ok(())
}

impl NatTransform {
    /// Checks parallelism and component shapes, not naturality.
    pub fn new(source: Arc<StarFunctor>, target: Arc<StarFunctor>, components: Vec<ComplexMatrix>) -> Result<Self> {
        check_parallel(&source, &target)?;
        let a = source.source();
        let c = source.target();
        if components.len() != a.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} components for {} objects",
                components.len(),
                a.len()
            )));
        }
        for (x, m) in components.iter().enumerate() {
            let want = (c.dim(target.map_object(x)), c.dim(source.map_object(x)));
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "component at {} is {:?}, expected {want:?}",
                    a.name(x),
                    m.shape()
                )));
            }
        }
        Ok(NatTransform {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: Arc<StarFunctor>) -> Self {
        let components = (0..f.source().len())
            .map(|x| ComplexMatrix::identity(f.target().dim(f.map_object(x))))
            .collect();
        NatTransform {
            source: f.clone(),
            target: f,
            components,
        }
    }

    pub fn source(&self) -> &Arc<StarFunctor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StarFunctor> {
        &self.target
    }

    pub fn components(&self) -> &[ComplexMatrix] {
        &self.components
    }

    pub fn component(&self, x: usize) -> &ComplexMatrix {
        &self.components[x]
    }

    /// Largest `‖α_y F(a) − F'(a) α_x‖_F` over source basis arrows `a: x → y`.
    pub fn naturality_residual(&self) -> f64 {
        let a = self.source.source();
        let mut worst: f64 = 0.0;
        for (x, y) in a.nonzero_pairs() {
            for (fa, ga) in self.source.images(x, y).iter().zip(self.target.images(x, y)) {
                let lhs = &self.components[y] * fa;
                let rhs = ga * &self.components[x];
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        worst
    }

    pub fn is_natural(&self, tol: &Tolerance) -> bool {
        tol.accepts(self.naturality_residual(), self.sup_norm())
    }

    pub fn is_unitary(&self, tol: &Tolerance) -> bool {
        self.components.iter().all(|m| is_unitary(m, tol))
    }

    /// `max_x ‖α_x‖`.
    pub fn sup_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|m| op_norm(m).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// `β ∘ α` where `α: F → G` is `self` and `β: G → H`.
    pub fn then(&self, beta: &NatTransform) -> Result<NatTransform> {
        nat_compose(beta, self)
    }

    /// `α*: F' → F`.
    pub fn involute(&self) -> NatTransform {
        NatTransform {
            source: self.target.clone(),
            target: self.source.clone(),
            components: self.components.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    pub fn max_distance(&self, other: &NatTransform) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
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

/// `β ∘ α`.
pub fn nat_compose(beta: &NatTransform, alpha: &NatTransform) -> Result<NatTransform> {
    if alpha.target.object_map() != beta.source.object_map()
        || !same_category(alpha.target.target(), beta.source.target())
    {
        return Err(Error::ShapeMismatch("transformations are not composable".into()));
    }
    let components = beta
        .components
        .iter()
        .zip(&alpha.components)
        .map(|(b, a)| b.matmul(a))
        .collect::<Result<_>>()?;
    NatTransform::new(alpha.source.clone(), beta.target.clone(), components)
}

/// `z α + β` for parallel `α`, `β`.
pub fn nat_scale_add(z: C64, alpha: &NatTransform, beta: &NatTransform) -> Result<NatTransform> {
    if alpha.source.object_map() != beta.source.object_map()
        || alpha.target.object_map() != beta.target.object_map()
        || alpha.components.len() != beta.components.len()
    {
        return Err(Error::ShapeMismatch("transformations are not parallel".into()));
    }
    let components = alpha
        .components
        .iter()
        .zip(&beta.components)
        .map(|(a, b)| {
            let mut m = b.clone();
            m.axpy(z, a);
            m
        })
        .collect();
    NatTransform::new(alpha.source.clone(), alpha.target.clone(), components)
}

/// The space of natural transformations `F → F'`, as an orthonormal basis of
/// the solution space of the naturality equations on basis arrows.
#[derive(Debug, Clone)]
pub struct BoundedNatSpace {
    source: Arc<StarFunctor>,
    target: Arc<StarFunctor>,
    basis: Vec<NatTransform>,
}

impl BoundedNatSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[NatTransform] {
        &self.basis
    }

    pub fn source(&self) -> &Arc<StarFunctor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StarFunctor> {
        &self.target
    }

    pub fn combine(&self, coeffs: &[C64]) -> NatTransform {
        let mut components: Vec<ComplexMatrix> = (0..self.source.source().len())
            .map(|x| {
                let c = self.source.target();
                ComplexMatrix::zeros(c.dim(self.target.map_object(x)), c.dim(self.source.map_object(x)))
            })
            .collect();
        for (b, &z) in self.basis.iter().zip(coeffs) {
            for (acc, m) in components.iter_mut().zip(&b.components) {
                acc.axpy(z, m);
            }
        }
        NatTransform {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    /// Sup-norm of the combination with the given coefficients.
    pub fn sup_norm(&self, coeffs: &[C64]) -> f64 {
        self.combine(coeffs).sup_norm()
    }
}

/// Solves `α_y F(a) = F'(a) α_x` over all source basis arrows `a: x → y`.
pub fn nat_space(f: &Arc<StarFunctor>, g: &Arc<StarFunctor>) -> Result<BoundedNatSpace> {
    check_parallel(f, g)?;
    let a = f.source();
    let c = f.target();
    let n = a.len();
    // Unknown block for α_x: rows dim(Gx), cols dim(Fx), row-major.
    let shapes: Vec<(usize, usize)> = (0..n)
        .map(|x| (c.dim(g.map_object(x)), c.dim(f.map_object(x))))
        .collect();
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for &(r, k) in &shapes {
        offsets.push(total);
        total += r * k;
    }
    let mut rows: Vec<Vec<(usize, C64)>> = Vec::new();
    for (x, y) in a.nonzero_pairs() {
        let (ry, ky) = shapes[y];
        let (rx, kx) = shapes[x];
        for (fa, ga) in f.images(x, y).iter().zip(g.images(x, y)) {
            // Entry (i, j) of α_y·F(a) − G(a)·α_x.
            for i in 0..ry {
                for j in 0..kx {
                    let mut row = Vec::new();
                    for k in 0..ky {
                        let z = fa[(k, j)];
                        if z.norm() > 0.0 {
                            row.push((offsets[y] + i * ky + k, z));
                        }
                    }
                    for k in 0..rx {
                        let z = ga[(i, k)];
                        if z.norm() > 0.0 {
                            row.push((offsets[x] + k * kx + j, -z));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let kernel: Vec<Vec<C64>> = if total == 0 {
        Vec::new()
    } else if rows.is_empty() {
        (0..total)
            .map(|i| {
                (0..total)
                    .map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                    .collect()
            })
            .collect()
    } else {
        let system = compress_rows(&rows, total);
        svd(&system)?.kernel(RANK_RTOL)
    };
    let basis = kernel
        .into_iter()
        .map(|v| {
            let components = shapes
                .iter()
                .zip(&offsets)
                .map(|(&(r, k), &off)| {
                    ComplexMatrix::from_vec(r, k, v[off..off + r * k].to_vec()).expect("finite kernel vector")
                })
                .collect();
            NatTransform {
                source: f.clone(),
                target: g.clone(),
                components,
            }
        })
        .collect();
    Ok(BoundedNatSpace {
        source: f.clone(),
        target: g.clone(),
        basis,
    })
}

/// Row-compresses a tall sparse system to a triangular one with the same
/// kernel, feeding rows through Householder QR in blocks.
fn compress_rows(rows: &[Vec<(usize, C64)>], cols: usize) -> ComplexMatrix {
    let block = (4 * cols).max(16);
    let mut r = ComplexMatrix::zeros(0, cols);
    for chunk in rows.chunks(block) {
        let mut stacked = ComplexMatrix::zeros(r.rows() + chunk.len(), cols);
        stacked.set_block(0, 0, &r);
        for (i, row) in chunk.iter().enumerate() {
            for &(j, z) in row {
                stacked[(r.rows() + i, j)] += z;
            }
        }
        r = r_factor(&stacked);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcat::{coproduct, MatCStarCategory, MatObject};
    use crate::starpres::RenamePolicy;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalars() {
        for n in 1..4 {
            let a = Arc::new(MatCStarCategory::full(vec![MatObject::new("x", n)]).unwrap());
            let id = Arc::new(StarFunctor::identity(a));
            let space = nat_space(&id, &id).unwrap();
            assert_eq!(space.dim(), 1);
            // Oracle: the only matrices commuting with every e_ij are multiples of 1.
            let m = space.basis()[0].component(0);
            let z = m[(0, 0)];
            assert!(m.distance(&ComplexMatrix::identity(n).scale(z)) < 1e-12);
        }
    }

    #[test]
    fn coproduct_gives_componentwise_freedom() {
        let f = MatCStarCategory::unit();
        let c = coproduct(&[f.clone(), f], RenamePolicy::Prefix).unwrap();
        let id = Arc::new(StarFunctor::identity(c.category.clone()));
        assert_eq!(nat_space(&id, &id).unwrap().dim(), 2);
    }

    #[test]
    fn rigid_pair_has_only_zero() {
        // Two non-equivalent characters of the diagonal algebra intertwine only by 0.
        let spans = [(
            (0, 0),
            vec![ComplexMatrix::unit(2, 2, 0, 0), ComplexMatrix::unit(2, 2, 1, 1)],
        )]
        .into();
        let a = Arc::new(MatCStarCategory::from_spans(vec![MatObject::new("x", 2)], spans, &tol()).unwrap());
        let unit = Arc::new(MatCStarCategory::unit());
        let chi = |k: usize| {
            Arc::new(
                StarFunctor::from_fn(a.clone(), unit.clone(), vec![0], move |_, _, b| {
                    Ok(ComplexMatrix::from_vec(1, 1, vec![b[(k, k)]]).unwrap())
                })
                .unwrap(),
            )
        };
        assert_eq!(nat_space(&chi(0), &chi(1)).unwrap().dim(), 0);
        assert_eq!(nat_space(&chi(0), &chi(0)).unwrap().dim(), 1);
    }

    #[test]
    fn algebra_operations() {
        let a = Arc::new(MatCStarCategory::full(vec![MatObject::new("x", 2), MatObject::new("y", 2)]).unwrap());
        let id = Arc::new(StarFunctor::identity(a));
        let one = NatTransform::identity(id.clone());
        assert!(one.involute().max_distance(&one) == 0.0);
        let s = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let u = NatTransform::new(id.clone(), id.clone(), vec![s.clone(), s.clone()]).unwrap();
        let back = u.then(&u.involute()).unwrap();
        assert!(back.max_distance(&one) < 1e-15);
        let sum = nat_scale_add(C64::new(2.0, 0.0), &u, &one).unwrap();
        let want = &s.scale_real(2.0) + &ComplexMatrix::identity(2);
        assert!(sum.component(1).distance(&want) < 1e-15);
        assert!(one.is_natural(&tol()) && one.is_unitary(&tol()));
        assert!(!u.is_natural(&tol()));
    }
}
