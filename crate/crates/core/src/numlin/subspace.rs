use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::{min_singular_value, Tolerance};
use crate::error::{Error, Result};

/// Tighter than any user tolerance: inputs this close to orthonormal are kept verbatim.
const VERBATIM_SLACK: f64 = 1e-13;

/// A linear subspace of `rows × cols` complex matrices, held as a
/// Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    rows: usize,
    cols: usize,
    basis: Vec<ComplexMatrix>,
}

impl Subspace {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Subspace {
            rows,
            cols,
            basis: Vec::new(),
        }
    }

    /// All `rows × cols` matrices, spanned by matrix units in row-major order.
    pub fn full(rows: usize, cols: usize) -> Self {
        let basis = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| ComplexMatrix::unit(rows, cols, i, j)))
            .collect();
        Subspace { rows, cols, basis }
    }

    /// Orthonormalizes `mats` (modified Gram–Schmidt, applied twice). Inputs that
    /// are already orthonormal are kept bit-for-bit.
    pub fn span(mats: &[ComplexMatrix], shape: Option<(usize, usize)>, tol: &Tolerance) -> Result<Self> {
        let (rows, cols) = match (shape, mats.first()) {
            (Some(s), _) => s,
            (None, Some(m)) => m.shape(),
            (None, None) => return Err(Error::MissingShape),
        };
        if let Some(bad) = mats.iter().find(|m| m.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix in a span of {rows}x{cols} matrices",
                bad.rows(),
                bad.cols()
            )));
        }
        for m in mats {
            m.check_finite()?;
        }
        if is_orthonormal(mats, VERBATIM_SLACK) {
            return Ok(Subspace {
                rows,
                cols,
                basis: mats.to_vec(),
            });
        }
        let mut space = Subspace::zero(rows, cols);
        for m in mats {
            space.push(m, tol);
        }
        Ok(space)
    }

    /// Takes `basis` as given after checking it is orthonormal within `tol`.
    pub fn from_orthonormal(rows: usize, cols: usize, basis: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        if basis.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch("basis element of the wrong shape".into()));
        }
        if !is_orthonormal(&basis, tol.bound(1.0)) {
            return Err(Error::InvalidMatrix("basis is not orthonormal".into()));
        }
        Ok(Subspace { rows, cols, basis })
    }

    /// Adds `m` to the span; returns whether the dimension grew.
    pub fn push(&mut self, m: &ComplexMatrix, tol: &Tolerance) -> bool {
        let norm = m.frobenius_norm();
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.hs_inner(&r);
                r.axpy(-c, b);
            }
        }
        let rn = r.frobenius_norm();
        if rn <= tol.bound(norm) {
            return false;
        }
        self.basis.push(r.scale_real(1.0 / rn));
        true
    }

    pub fn ambient_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Coordinates of the orthogonal projection of `m` onto the space.
    pub fn coordinates(&self, m: &ComplexMatrix) -> Vec<C64> {
        self.basis.iter().map(|b| b.hs_inner(m)).collect()
    }

    pub fn combine(&self, coeffs: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != ZERO {
                out.axpy(c, b);
            }
        }
        out
    }

    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.combine(&self.coordinates(m))
    }

    /// Hilbert–Schmidt distance from `m` to the space.
    pub fn residual(&self, m: &ComplexMatrix) -> f64 {
        if m.shape() != (self.rows, self.cols) {
            return f64::INFINITY;
        }
        m.distance(&self.project(m))
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: &Tolerance) -> bool {
        tol.accepts(self.residual(m), m.frobenius_norm())
    }

    pub fn contains_space(&self, other: &Subspace, tol: &Tolerance) -> bool {
        other.basis.iter().all(|b| self.contains(b, tol))
    }

    /// Mutual containment.
    pub fn same_space(&self, other: &Subspace, tol: &Tolerance) -> bool {
        self.ambient_shape() == other.ambient_shape()
            && self.dim() == other.dim()
            && self.contains_space(other, tol)
            && other.contains_space(self, tol)
    }

    /// `{ L b R : b ∈ self }` for fixed matrices `L`, `R` (e.g. unitary conjugation).
    pub fn conjugate(&self, left: &ComplexMatrix, right: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let mats = self
            .basis
            .iter()
            .map(|b| left.matmul(b)?.matmul(right))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&mats, Some((left.rows(), right.cols())), tol)
    }
}

fn is_orthonormal(mats: &[ComplexMatrix], slack: f64) -> bool {
    mats.iter().enumerate().all(|(i, a)| {
        mats[i..].iter().enumerate().all(|(k, b)| {
            let g = a.hs_inner(b);
            let target = if k == 0 { 1.0 } else { 0.0 };
            (g - C64::new(target, 0.0)).norm() <= slack
        })
    })
}

/// Outcome of a seeded search for an invertible element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum InvertibleSearch {
    Found {
        matrix: ComplexMatrix,
        min_singular_value: f64,
    },
    /// Every sampled combination was singular. Not a proof of absence.
    NoEvidence { samples: usize, seed: u64 },
}

impl InvertibleSearch {
    pub fn found(&self) -> Option<&ComplexMatrix> {
        match self {
            InvertibleSearch::Found { matrix, .. } => Some(matrix),
            InvertibleSearch::NoEvidence { .. } => None,
        }
    }
}

/// Looks for an invertible element of a space of square matrices by sampling
/// Gaussian coefficient vectors. The determinant is a polynomial in the
/// coefficients, so a single nonvanishing sample certifies existence.
pub fn find_invertible(space: &Subspace, seed: u64, samples: usize, tol: &Tolerance) -> Result<InvertibleSearch> {
    let (rows, cols) = space.ambient_shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    if space.dim() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let coeffs: Vec<C64> = (0..space.dim())
                .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let candidate = space.combine(&coeffs);
            let smin = min_singular_value(&candidate)?;
            if smin > tol.eps_abs {
                return Ok(InvertibleSearch::Found {
                    matrix: candidate,
                    min_singular_value: smin,
                });
            }
        }
    }
    Ok(InvertibleSearch::NoEvidence { samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::svd;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Rank of a list of matrices flattened to vectors, by SVD of the stacked matrix.
    fn rank_oracle(mats: &[ComplexMatrix]) -> usize {
        let n = mats[0].rows() * mats[0].cols();
        let mut stacked = ComplexMatrix::zeros(n, mats.len());
        for (j, m) in mats.iter().enumerate() {
            for (i, &z) in m.as_slice().iter().enumerate() {
                stacked[(i, j)] = z;
            }
        }
        svd(&stacked).unwrap().rank(1e-9)
    }

    #[test]
    fn span_examples() {
        let i2 = ComplexMatrix::identity(2);
        let s = Subspace::span(&[i2.clone(), i2.scale_real(2.0)], None, &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&i2, &tol()));

        let empty = Subspace::span(&[], Some((2, 2)), &tol()).unwrap();
        assert_eq!(empty.dim(), 0);
        assert_eq!(Subspace::span(&[], None, &tol()), Err(Error::MissingShape));

        let units: Vec<_> = (0..2)
            .flat_map(|i| (0..2).map(move |j| ComplexMatrix::unit(2, 2, i, j)))
            .collect();
        assert_eq!(rank_oracle(&units), 4);
        assert_eq!(Subspace::span(&units, None, &tol()).unwrap().dim(), 4);
    }

    #[test]
    fn span_shape_mismatch() {
        let r = Subspace::span(&[ComplexMatrix::identity(2), ComplexMatrix::identity(3)], None, &tol());
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn find_invertible_examples() {
        let line = Subspace::span(&[ComplexMatrix::identity(2)], None, &tol()).unwrap();
        let found = find_invertible(&line, 3, 4, &tol()).unwrap();
        let m = found.found().expect("identity line has invertibles");
        assert!(line.contains(m, &tol()));
        let z = m[(0, 0)];
        assert!(z.norm() > 0.0);
        assert!(m.distance(&ComplexMatrix::identity(2).scale(z)) < 1e-14);

        let nil = Subspace::span(&[ComplexMatrix::unit(2, 2, 0, 1)], None, &tol()).unwrap();
        assert_eq!(
            find_invertible(&nil, 3, 16, &tol()).unwrap(),
            InvertibleSearch::NoEvidence { samples: 16, seed: 3 }
        );

        // Oracle: the identity is a 0/1 combination of the basis with nonzero
        // determinant, so the determinant polynomial is not identically zero.
        let all = Subspace::full(2, 2);
        let coeffs = [1.0, 0.0, 0.0, 1.0].map(|x| C64::new(x, 0.0));
        let ident = all.combine(&coeffs);
        let det = ident[(0, 0)] * ident[(1, 1)] - ident[(0, 1)] * ident[(1, 0)];
        assert!(det.norm() > 0.5);
        assert!(find_invertible(&all, 11, 1, &tol()).unwrap().found().is_some());

        let rect = Subspace::full(2, 3);
        assert!(matches!(
            find_invertible(&rect, 0, 1, &tol()),
            Err(Error::NotSquare { .. })
        ));
    }
}
