use serde::{Deserialize, Serialize};

use super::category::MatCStarCategory;
use crate::error::{Error, Result};
use crate::numlin::{
    find_invertible, is_isometry, is_unitary, polar_unitary, ComplexMatrix, InvertibleSearch, Tolerance,
};

/// `a (a*a)^{-1/2}` for an invertible `a` in `hom(x, y)`.
pub fn unitarize(
    cat: &MatCStarCategory,
    x: usize,
    y: usize,
    a: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if cat.dim(x) != cat.dim(y) {
        return Err(Error::NotInvertible(format!(
            "{} and {} have dimensions {} and {}",
            cat.name(x),
            cat.name(y),
            cat.dim(x),
            cat.dim(y)
        )));
    }
    if a.shape() != (cat.dim(y), cat.dim(x)) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix for the hom {} -> {}",
            a.rows(),
            a.cols(),
            cat.name(x),
            cat.name(y)
        )));
    }
    polar_unitary(a, tol)
}

/// Why an isomorphism search came back empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NoIsoReason {
    /// Dimensions differ, so no invertible matrix exists at all.
    DimensionMismatch { dim_x: usize, dim_y: usize },
    /// The hom space is zero.
    EmptyHom,
    /// Every sampled element was singular. Not a proof.
    Sampling { samples: usize, seed: u64 },
}

impl NoIsoReason {
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, NoIsoReason::Sampling { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    Yes { unitary: ComplexMatrix },
    NoEvidence(NoIsoReason),
}

impl IsoVerdict {
    pub fn unitary(&self) -> Option<&ComplexMatrix> {
        match self {
            IsoVerdict::Yes { unitary } => Some(unitary),
            IsoVerdict::NoEvidence(_) => None,
        }
    }
}

/// Default number of seeded draws in an isomorphism search.
pub const ISO_SAMPLES: usize = 8;

/// Searches `hom(x, y)` for a unitary: a seeded invertible element, unitarized.
pub fn iso_exists(cat: &MatCStarCategory, x: usize, y: usize, seed: u64, tol: &Tolerance) -> Result<IsoVerdict> {
    if x == y {
        return Ok(IsoVerdict::Yes {
            unitary: ComplexMatrix::identity(cat.dim(x)),
        });
    }
    let (dim_x, dim_y) = (cat.dim(x), cat.dim(y));
    if dim_x != dim_y {
        return Ok(IsoVerdict::NoEvidence(NoIsoReason::DimensionMismatch { dim_x, dim_y }));
    }
    let hom = cat.hom(x, y);
    if hom.dim() == 0 {
        return Ok(IsoVerdict::NoEvidence(NoIsoReason::EmptyHom));
    }
    // A unitary basis element is already a witness; try those first so simple
    // categories get exact answers.
    if let Some(u) = hom
        .basis()
        .iter()
        .find(|b| is_unitary(&b.scale_real((dim_x as f64).sqrt()), tol))
    {
        return Ok(IsoVerdict::Yes {
            unitary: u.scale_real((dim_x as f64).sqrt()),
        });
    }
    match find_invertible(hom, seed, ISO_SAMPLES, tol)? {
        InvertibleSearch::Found { matrix, .. } => Ok(IsoVerdict::Yes {
            unitary: unitarize(cat, x, y, &matrix, tol)?,
        }),
        InvertibleSearch::NoEvidence { samples, seed } => {
            Ok(IsoVerdict::NoEvidence(NoIsoReason::Sampling { samples, seed }))
        }
    }
}

/// `a` lies in the hom `x → y` and is unitary.
pub fn uni_membership(cat: &MatCStarCategory, x: usize, y: usize, a: &ComplexMatrix, tol: &Tolerance) -> bool {
    a.shape() == (cat.dim(y), cat.dim(x)) && cat.contains(x, y, a, tol) && is_unitary(a, tol)
}

/// `a` lies in the hom `x → y` and is an isometry.
pub fn ism_membership(cat: &MatCStarCategory, x: usize, y: usize, a: &ComplexMatrix, tol: &Tolerance) -> bool {
    a.shape() == (cat.dim(y), cat.dim(x)) && cat.contains(x, y, a, tol) && is_isometry(a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcat::MatObject;
    use crate::numlin::{unitary_defect, C64};
    use std::collections::BTreeMap;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn m2() -> MatCStarCategory {
        MatCStarCategory::full(vec![
            MatObject::new("x", 2),
            MatObject::new("y", 2),
            MatObject::new("z", 3),
        ])
        .unwrap()
    }

    #[test]
    fn unitarize_examples() {
        let c = m2();
        let id = ComplexMatrix::identity(2);
        assert!(unitarize(&c, 0, 0, &id, &tol()).unwrap().distance(&id) < 1e-15);
        let d = ComplexMatrix::diag_real(&[2.0, -3.0]);
        // (a*a)^{-1/2} = diag(1/2, 1/3), so a(a*a)^{-1/2} = diag(1, -1).
        let oracle = &d * &ComplexMatrix::diag_real(&[0.5, 1.0 / 3.0]);
        let u = unitarize(&c, 0, 1, &d, &tol()).unwrap();
        assert!(u.distance(&oracle) < 1e-15);
        let v = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(unitarize(&c, 0, 1, &v.scale_real(2.0), &tol()).unwrap().distance(&v) < 1e-15);
        assert!(matches!(
            unitarize(&c, 0, 2, &ComplexMatrix::zeros(3, 2), &tol()),
            Err(Error::NotInvertible(_))
        ));
        assert!(matches!(
            unitarize(&c, 0, 1, &ComplexMatrix::unit(2, 2, 0, 1), &tol()),
            Err(Error::SingularOperand { .. })
        ));
    }

    #[test]
    fn iso_examples() {
        let c = m2();
        let yes = iso_exists(&c, 0, 0, 1, &tol()).unwrap();
        assert_eq!(yes.unitary(), Some(&ComplexMatrix::identity(2)));
        assert_eq!(
            iso_exists(&c, 0, 2, 1, &tol()).unwrap(),
            IsoVerdict::NoEvidence(NoIsoReason::DimensionMismatch { dim_x: 2, dim_y: 3 })
        );
        let u = iso_exists(&c, 0, 1, 5, &tol()).unwrap();
        assert!(unitary_defect(u.unitary().unwrap()) < 1e-12);

        let objects = vec![MatObject::new("x", 2), MatObject::new("y", 2)];
        let n = ComplexMatrix::unit(2, 2, 0, 1);
        let spans: BTreeMap<_, _> = [((0, 1), vec![n])].into();
        let nil = MatCStarCategory::from_spans(objects, spans, &tol()).unwrap();
        assert!(matches!(
            iso_exists(&nil, 0, 1, 5, &tol()).unwrap(),
            IsoVerdict::NoEvidence(NoIsoReason::Sampling { .. })
        ));
        assert_eq!(
            iso_exists(&nil, 1, 0, 5, &tol()).unwrap(),
            IsoVerdict::NoEvidence(NoIsoReason::EmptyHom)
        );
    }

    #[test]
    fn membership_examples() {
        let c = MatCStarCategory::full(vec![MatObject::new("x", 1), MatObject::new("y", 2)]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(uni_membership(&c, 1, 1, &id, &tol()) && ism_membership(&c, 1, 1, &id, &tol()));
        let col = ComplexMatrix::from_real(2, 1, &[1.0, 0.0]).unwrap();
        assert!(ism_membership(&c, 0, 1, &col, &tol()));
        assert!(!uni_membership(&c, 0, 1, &col, &tol()));
        let d = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(uni_membership(&c, 1, 1, &d, &tol()) && ism_membership(&c, 1, 1, &d, &tol()));
    }
}
