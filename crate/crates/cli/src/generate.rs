use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use unitary_model::gen::{random_groupoid, random_matcat, random_weq};
use unitary_model::matcat::{validate_category, validate_functor};
use unitary_model::model::{is_weak_equivalence, Check, CheckStatus};

use crate::commands::{validation_checks, weq_check};
use crate::io::FunctorFile;
use crate::{CliError, CliResult, GenerateParams, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GenerateKind {
    RandomGroupoid,
    RandomMatcat,
    RandomWeq,
}

pub fn generate(cfg: &RunConfig, p: &GenerateParams) -> CliResult<(Vec<Check>, Option<Value>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tol = &cfg.tolerance;
    let to_value = |v: serde_json::Result<Value>| v.expect("instances serialize");
    match p.kind {
        GenerateKind::RandomGroupoid => {
            // The constructor checks the groupoid axioms exhaustively.
            let g = random_groupoid(&mut rng, p.objects, p.order)?;
            let c = Check::new("groupoid", CheckStatus::Pass).with_witness(format!(
                "{} objects, {} arrows",
                g.object_count(),
                g.arrow_count()
            ));
            Ok((vec![c], Some(to_value(serde_json::to_value(&g)))))
        }
        GenerateKind::RandomMatcat => {
            let a = random_matcat(&mut rng, &p.dims)?;
            let checks = validation_checks("category", &validate_category(&a.category, tol));
            Ok((checks, Some(to_value(serde_json::to_value(&*a.category)))))
        }
        GenerateKind::RandomWeq => {
            if p.objects < p.dims.len() {
                return Err(CliError::Usage(format!(
                    "--objects {} is smaller than the {} source objects",
                    p.objects,
                    p.dims.len()
                )));
            }
            let a = random_matcat(&mut rng, &p.dims)?;
            let (_, f) = random_weq(&mut rng, &a, p.objects)?;
            let mut checks = validation_checks("source", &validate_category(f.source(), tol));
            checks.extend(validation_checks("target", &validate_category(f.target(), tol)));
            checks.extend(validation_checks("functor", &validate_functor(&f, tol)));
            checks.push(weq_check("weak equivalence", &is_weak_equivalence(&f, cfg.seed, tol)?));
            Ok((checks, Some(to_value(serde_json::to_value(FunctorFile::inline(&f))))))
        }
    }
}
