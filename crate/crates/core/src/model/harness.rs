use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::factor::{factor_cylinder, factor_path};
use super::predicates::{
    is_cofibration, is_trivial_fibration, is_weak_equivalence, rlp_generating, Generator, WeqVerdict,
};
use crate::error::Result;
use crate::matcat::{validate_category, StarFunctor};
use crate::numlin::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unknown,
}

/// One harness outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: CheckStatus) -> Self {
        Check {
            name: name.into(),
            status,
            residual: None,
            witness: None,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { CheckStatus::Pass } else { CheckStatus::Fail })
    }

    /// Passes when `residual` is within `tol` at unit scale.
    pub fn from_residual(name: impl Into<String>, residual: f64, tol: &Tolerance) -> Self {
        let mut c = Self::from_bool(name, tol.accepts(residual, 1.0));
        c.residual = Some(residual);
        c
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Overall status: fail if anything failed, else unknown if anything was
/// unknown, else pass.
pub fn summarize(checks: &[Check]) -> CheckStatus {
    checks
        .iter()
        .map(|c| c.status)
        .fold(CheckStatus::Pass, |acc, s| match (acc, s) {
            (CheckStatus::Fail, _) | (_, CheckStatus::Fail) => CheckStatus::Fail,
            (CheckStatus::Unknown, _) | (_, CheckStatus::Unknown) => CheckStatus::Unknown,
            _ => CheckStatus::Pass,
        })
}

fn verdict_label(v: &WeqVerdict) -> &'static str {
    match v {
        WeqVerdict::Yes { .. } => "yes",
        WeqVerdict::No { .. } => "no",
        WeqVerdict::NoEvidence { .. } => "no evidence",
    }
}

/// Whenever two of `F`, `G`, `G∘F` are weak equivalences, so is the third.
pub fn check_two_of_three(f: &StarFunctor, g: &StarFunctor, seed: u64, tol: &Tolerance) -> Result<Check> {
    let gf = f.then(g)?;
    let verdicts = [
        is_weak_equivalence(f, seed, tol)?,
        is_weak_equivalence(g, seed, tol)?,
        is_weak_equivalence(&gf, seed, tol)?,
    ];
    let yes = verdicts.iter().filter(|v| v.is_yes()).count();
    let witness = format!(
        "F: {}, G: {}, GF: {}",
        verdict_label(&verdicts[0]),
        verdict_label(&verdicts[1]),
        verdict_label(&verdicts[2])
    );
    let status = if yes != 2 {
        CheckStatus::Pass
    } else if verdicts.iter().any(|v| v.is_no()) {
        CheckStatus::Fail
    } else {
        CheckStatus::Unknown
    };
    Ok(Check::new("two_of_three", status).with_witness(witness))
}

/// `F': A' → B'` as a retract of `F: A → B` via `i: A' → A`, `r: A → A'`,
/// `j: B' → B`, `s: B → B'`.
#[derive(Debug, Clone)]
pub struct RetractDiagram {
    pub original: Arc<StarFunctor>,
    pub retract: Arc<StarFunctor>,
    pub i: Arc<StarFunctor>,
    pub r: Arc<StarFunctor>,
    pub j: Arc<StarFunctor>,
    pub s: Arc<StarFunctor>,
}

impl RetractDiagram {
    /// Largest residual of `ri = 1`, `sj = 1`, `Fi = jF'` and `F'r = sF`;
    /// infinite when an object map disagrees.
    pub fn residual(&self) -> Result<f64> {
        let gap = |p: &StarFunctor, q: &StarFunctor| {
            if p.object_map() == q.object_map() {
                p.max_distance(q)
            } else {
                f64::INFINITY
            }
        };
        let id_a2 = StarFunctor::identity(self.i.source().clone());
        let id_b2 = StarFunctor::identity(self.j.source().clone());
        Ok([
            gap(&self.i.then(&self.r)?, &id_a2),
            gap(&self.j.then(&self.s)?, &id_b2),
            gap(&self.i.then(&self.original)?, &self.retract.then(&self.j)?),
            gap(&self.r.then(&self.retract)?, &self.original.then(&self.s)?),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }
}

/// A retract of a weak equivalence is a weak equivalence.
pub fn check_retract(d: &RetractDiagram, seed: u64, tol: &Tolerance) -> Result<Check> {
    let residual = d.residual()?;
    if !tol.accepts(residual, 1.0) {
        let mut c = Check::new("retract", CheckStatus::Fail).with_witness("diagram does not commute");
        c.residual = Some(residual);
        return Ok(c);
    }
    let outer = is_weak_equivalence(&d.original, seed, tol)?;
    let inner = is_weak_equivalence(&d.retract, seed, tol)?;
    let status = match (&outer, &inner) {
        (WeqVerdict::Yes { .. }, WeqVerdict::No { .. }) => CheckStatus::Fail,
        (WeqVerdict::Yes { .. }, WeqVerdict::NoEvidence { .. }) => CheckStatus::Unknown,
        _ => CheckStatus::Pass,
    };
    let mut c = Check::new("retract", status).with_witness(format!(
        "F: {}, retract: {}",
        verdict_label(&outer),
        verdict_label(&inner)
    ));
    c.residual = Some(residual);
    Ok(c)
}

/// Both factorizations compose back to `F`, have first legs that are
/// cofibrations and the expected second legs, and finite midway categories
/// that validate.
pub fn check_factor_roundtrip(f: &Arc<StarFunctor>, seed: u64, tol: &Tolerance) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let path = factor_path(f).snapshot()?;
    out.push(Check::from_residual("path: P∘I = F", path.composite_residual, tol));
    out.push(Check::from_bool(
        "path: I is a cofibration",
        is_cofibration(&path.first),
    ));
    let weq = is_weak_equivalence(&path.first, seed, tol)?;
    out.push(Check::new(
        "path: I is a weak equivalence",
        match weq {
            WeqVerdict::Yes { .. } => CheckStatus::Pass,
            WeqVerdict::No { .. } => CheckStatus::Fail,
            WeqVerdict::NoEvidence { .. } => CheckStatus::Unknown,
        },
    ));
    let rep = validate_category(&path.midway, tol);
    out.push(Check::from_residual("path: snapshot validates", rep.max_residual, tol).status_if(rep.is_ok()));
    let cyl = factor_cylinder(f)?;
    out.push(Check::from_residual("cylinder: Q∘J = F", cyl.composite_residual, tol));
    out.push(Check::from_bool(
        "cylinder: J is a cofibration",
        is_cofibration(&cyl.first),
    ));
    out.push(Check::from_bool(
        "cylinder: Q is a trivial fibration",
        is_trivial_fibration(&cyl.second),
    ));
    let rep = validate_category(&cyl.midway, tol);
    out.push(Check::from_residual("cylinder: midway validates", rep.max_residual, tol).status_if(rep.is_ok()));
    Ok(out)
}

impl Check {
    fn status_if(mut self, ok: bool) -> Self {
        self.status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self
    }
}

/// Trivial fibration iff the right lifting property against `U`, `V` and `W`.
pub fn check_rlp_equiv(f: &StarFunctor) -> Check {
    let tfib = is_trivial_fibration(f);
    let rlp = [Generator::U, Generator::V, Generator::W].map(|g| rlp_generating(f, g));
    Check::from_bool("rlp_equiv", tfib == rlp.iter().all(|&b| b)).with_witness(format!(
        "trivial fibration: {tfib}, U: {}, V: {}, W: {}",
        rlp[0], rlp[1], rlp[2]
    ))
}
