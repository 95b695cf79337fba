//! Hermitian eigendecomposition by cyclic Jacobi rotations, and one-sided
//! (Hestenes) Jacobi for singular values, which is the same rotation scheme
//! applied implicitly to `A*A`.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// `H = V · diag(values) · V*` with `V` unitary; eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Rotation `G = D·P` zeroing the `(p,q)` entry of the 2x2 Hermitian block
/// `[[app, apq], [conj(apq), aqq]]`. Returned as `(c, s, phase)` where the
/// columns transform as `p' = c·p − s·phase·q`, `q' = s·p + c·phase·q`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let r = apq.norm();
    let phase = (apq / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    h.check_finite()?;
    let n = h.rows();
    // Symmetrize so tiny asymmetries from upstream arithmetic do not bias the result.
    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                // a <- a·G on columns p, q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)] * phase;
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                // a <- G*·a on rows p, q.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)] * phase.conj();
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)] * phase;
                    v[(k, p)] = vkp * c - vkq * s;
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let fl = f(lambda);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * fl;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Thin singular value decomposition `A·V = U·Σ` as produced by one-sided Jacobi.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values, descending; length = number of columns of `A`.
    pub values: Vec<f64>,
    /// Right singular vectors as columns (`cols × cols`, unitary).
    pub right: ComplexMatrix,
    /// Left singular vectors for the nonzero singular values (`rows × cols`;
    /// columns for zero singular values are zero).
    pub left: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    a.check_finite()?;
    let (m, n) = a.shape();
    // Work column-major for cache-friendly column rotations.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(ZERO, |acc, (x, y)| acc + x.conj() * y);
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let xp = *x;
                    let yq = *y * phase;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
                let (left, right) = v.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let xp = *x;
                    let yq = *y * phase;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut right = ComplexMatrix::zeros(n, n);
    let mut left = ComplexMatrix::zeros(m, n);
    let mut values = Vec::with_capacity(n);
    for (new, &old) in order.iter().enumerate() {
        let sigma = norms[old];
        values.push(sigma);
        for k in 0..n {
            right[(k, new)] = v[old][k];
        }
        if sigma > 0.0 {
            for k in 0..m {
                left[(k, new)] = cols[old][k] / sigma;
            }
        }
    }
    Ok(Svd { values, right, left })
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rtol · max(1, σ_max)`.
    pub fn rank(&self, rtol: f64) -> usize {
        let cut = rtol * self.largest().max(1.0);
        self.values.iter().filter(|&&s| s > cut).count()
    }

    /// Right singular vectors spanning the numerical kernel.
    pub fn kernel(&self, rtol: f64) -> Vec<Vec<C64>> {
        let r = self.rank(rtol);
        let n = self.right.rows();
        (r..self.values.len())
            .map(|k| (0..n).map(|i| self.right[(i, k)]).collect())
            .collect()
    }

    /// Minimum-norm least-squares solution of `A x = b`, treating singular
    /// values below the rank cut as zero.
    pub fn solve(&self, b: &[C64], rtol: f64) -> Vec<C64> {
        let r = self.rank(rtol);
        let n = self.right.rows();
        let m = self.left.rows();
        let mut x = vec![ZERO; n];
        for k in 0..r {
            let coeff: C64 = (0..m).fold(ZERO, |acc, i| acc + self.left[(i, k)].conj() * b[i]) / self.values[k];
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += self.right[(i, k)] * coeff;
            }
        }
        x
    }
}

/// Triangular factor `R` of a Householder QR of `a`: `min(rows, cols) × cols`
/// with `R*R = A*A`, so it has the singular values and kernel of `a`.
pub fn r_factor(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let steps = m.min(n);
    for k in 0..steps {
        let norm: f64 = (k..m).map(|i| w[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = w[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k..m).map(|i| w[(i, k)]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        for j in k..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .fold(ZERO, |acc, (t, vi)| acc + vi.conj() * w[(k + t, j)]);
            for (t, vi) in v.iter().enumerate() {
                w[(k + t, j)] -= *vi * dot * 2.0;
            }
        }
        for i in (k + 1)..m {
            w[(i, k)] = ZERO;
        }
    }
    w.block(0, 0, steps, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &HermitianEigen) -> ComplexMatrix {
        e.apply(|x| x)
    }

    #[test]
    fn diagonalizes_complex_hermitian() {
        let h = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                C64::new(2.0, 0.0),
                C64::new(1.0, 1.0),
                C64::new(0.0, -0.5),
                C64::new(1.0, -1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.3, 0.0),
                C64::new(0.0, 0.5),
                C64::new(0.3, 0.0),
                C64::new(4.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert!(reconstruct(&e).distance(&h) < 1e-12);
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!(vv.distance(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn r_factor_preserves_gram() {
        let a = ComplexMatrix::from_vec(
            3,
            2,
            vec![
                C64::new(1.0, 2.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(3.0, -1.0),
                C64::new(0.5, 0.5),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let r = r_factor(&a);
        assert_eq!(r.shape(), (2, 2));
        assert!(r[(1, 0)].norm() == 0.0);
        let lhs = &r.adjoint() * &r;
        let rhs = &a.adjoint() * &a;
        assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn svd_of_nilpotent() {
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let s = svd(&n).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-15);
        assert!(s.values[1].abs() < 1e-15);
        assert_eq!(s.rank(1e-7), 1);
        let k = s.kernel(1e-7);
        assert_eq!(k.len(), 1);
        assert!(k[0][1].norm() < 1e-15);
    }

    #[test]
    fn svd_solves_wide_systems() {
        let a = ComplexMatrix::from_vec(
            2,
            3,
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 1.0),
            ],
        )
        .unwrap();
        let b = [C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let s = svd(&a).unwrap();
        let x = s.solve(&b, 1e-7);
        let ax = &a * &ComplexMatrix::column(&x);
        assert!((ax[(0, 0)] - b[0]).norm() < 1e-12);
        assert!((ax[(1, 0)] - b[1]).norm() < 1e-12);
        assert_eq!(s.kernel(1e-7).len(), 1);
    }
}
