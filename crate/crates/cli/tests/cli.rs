use std::path::Path;
use std::process::Command as Process;

use serde_json::Value;
use unitary_model::gpd::FiniteGroupoid;
use unitary_model::matcat::MatCStarCategory;
use unitary_model::model::CheckStatus;
use unitary_model::sset::FiniteSimplicialSet;
use unitary_model_cli::io::{parse_text, FunctorFile, GeneratorFile, SquareFile};
use unitary_model_cli::{
    run, run_with, Command, Files, GenerateKind, GenerateParams, Report, RunConfig, Suite, BUNDLED, EXIT_FAIL,
    EXIT_UNKNOWN, EXIT_USAGE,
};

fn bundled_run(command: Command) -> Report {
    run_with(&RunConfig::new(command), &Files::bundled()).unwrap()
}

fn umodel(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_umodel"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn round_trip<T>(name: &str, text: &str)
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
{
    let first: T = parse_text(name, text).unwrap();
    let again: T = parse_text(name, &serde_json::to_string(&first).unwrap()).unwrap();
    assert_eq!(first, again, "{name}");
}

#[test]
fn bundled_files_round_trip() {
    for (name, text) in BUNDLED {
        let v: Value = serde_json::from_str(text).unwrap();
        if name.starts_with("square") {
            round_trip::<SquareFile>(name, text);
        } else if *name == "generator.json" {
            round_trip::<GeneratorFile>(name, text);
        } else if v.get("object_map").is_some() {
            round_trip::<FunctorFile>(name, text);
        } else if v.get("dim_cap").is_some() {
            round_trip::<FiniteSimplicialSet>(name, text);
        } else if v.get("compose").is_some() {
            round_trip::<FiniteGroupoid>(name, text);
        } else {
            round_trip::<MatCStarCategory>(name, text);
        }
    }
}

#[test]
fn every_bundled_instance_validates() {
    for (name, _) in BUNDLED {
        if name.starts_with("square") || *name == "generator.json" {
            continue;
        }
        let r = bundled_run(Command::Validate { input: name.into() });
        assert_eq!(r.status, CheckStatus::Pass, "{name}: {:?}", r.entries);
    }
}

#[test]
fn mc_suite_passes_on_seed_seven() {
    let mut cfg = RunConfig::new(Command::VerifyAxioms { suite: Suite::Mc });
    cfg.seed = 7;
    let r = run(&cfg).unwrap();
    assert_eq!(
        r.status,
        CheckStatus::Pass,
        "{:?}",
        r.entries.iter().find(|c| !c.passed())
    );
}

#[test]
fn all_suites_pass() {
    for suite in [Suite::Monoidal, Suite::Simplicial, Suite::Adjunctions] {
        let r = bundled_run(Command::VerifyAxioms { suite });
        assert_eq!(
            r.status,
            CheckStatus::Pass,
            "{}: {:?}",
            suite.name(),
            r.entries.iter().find(|c| !c.passed())
        );
    }
}

#[test]
fn groupoid_cstar_of_z2_has_two_dimensional_hom() {
    let r = bundled_run(Command::GroupoidCstar {
        input: "z2.json".into(),
    });
    assert_eq!(r.status, CheckStatus::Pass);
    let cat: MatCStarCategory = serde_json::from_value(r.result.unwrap()).unwrap();
    assert_eq!(cat.hom_dims(), vec![vec![2]]);
}

#[test]
fn pi_of_the_boundary_is_unknown() {
    let r = bundled_run(Command::Pi {
        input: "boundary2.json".into(),
    });
    assert_eq!(r.status, CheckStatus::Unknown);
    assert!(r.entries[0]
        .witness
        .as_deref()
        .unwrap()
        .contains("NotFiniteWithinBound"));
    assert_eq!(r.exit_code(), EXIT_UNKNOWN);
}

#[test]
fn fundamental_groupoid_of_the_horn_is_codiscrete() {
    let r = bundled_run(Command::FundamentalGroupoid {
        input: "horn21.json".into(),
    });
    assert_eq!(r.status, CheckStatus::Pass);
    let g: FiniteGroupoid = serde_json::from_value(r.result.unwrap()["groupoid"].clone()).unwrap();
    assert_eq!(g.hom_sizes(), vec![vec![1; 3]; 3]);
}

#[test]
fn nerve_levels() {
    let mut cfg = RunConfig::new(Command::Nerve {
        input: "interval.json".into(),
    });
    cfg.dim_cap = 2;
    let r = run_with(&cfg, &Files::bundled()).unwrap();
    let k: FiniteSimplicialSet = serde_json::from_value(r.result.unwrap()).unwrap();
    // Strings of composable arrows in a groupoid with 4 arrows, 2 per source.
    assert_eq!((k.count(0), k.count(1), k.count(2)), (2, 4, 8));
}

#[test]
fn factorizations_and_lifts_on_bundled_instances() {
    use unitary_model_cli::{FactorMode, LiftMode};
    for mode in [FactorMode::Path, FactorMode::Cylinder] {
        for input in ["scalar.json", "collapse.json", "diagonal_collapse.json"] {
            let r = bundled_run(Command::Factorize {
                mode,
                input: input.into(),
                triples: None,
            });
            assert_eq!(r.status, CheckStatus::Pass, "{input}: {:?}", r.entries);
        }
    }
    for (mode, input) in [
        (LiftMode::CofTfib, "square_cof_tfib.json"),
        (LiftMode::TcofFib, "square_tcof_fib.json"),
        (LiftMode::Generator, "generator.json"),
    ] {
        let r = bundled_run(Command::Lift {
            mode,
            input: input.into(),
        });
        assert_eq!(r.status, CheckStatus::Pass, "{input}: {:?}", r.entries);
    }
    // The scalar inclusion is not a weak equivalence, so it has no lift against a fibration.
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad_square.json"),
        r#"{"top": "scalar.json", "left": "scalar.json", "right": "id.json", "bottom": "id.json"}"#,
    )
    .unwrap();
    let m2 = unitary_model_cli::io::bundled("m2.json").unwrap();
    std::fs::write(dir.path().join("m2.json"), m2).unwrap();
    let id: Value = serde_json::from_str(unitary_model_cli::io::bundled("square_cof_tfib.json").unwrap()).unwrap();
    std::fs::write(dir.path().join("id.json"), id["bottom"].to_string()).unwrap();
    std::fs::write(
        dir.path().join("scalar.json"),
        unitary_model_cli::io::bundled("scalar.json").unwrap(),
    )
    .unwrap();
    std::fs::write(
        dir.path().join("point.json"),
        unitary_model_cli::io::bundled("point.json").unwrap(),
    )
    .unwrap();
    let cfg = RunConfig::new(Command::Lift {
        mode: LiftMode::TcofFib,
        input: "bad_square.json".into(),
    });
    let r = run_with(&cfg, &Files::in_dir(dir.path().to_path_buf())).unwrap();
    assert_eq!(r.status, CheckStatus::Fail);
}

#[test]
fn generators_meet_their_contracts() {
    let gen = |kind, objects, order, dims: Vec<usize>| {
        let mut cfg = RunConfig::new(Command::Generate(GenerateParams {
            kind,
            objects,
            order,
            dims,
        }));
        cfg.seed = 1;
        run(&cfg)
    };
    let r = gen(GenerateKind::RandomGroupoid, 2, 2, vec![]).unwrap();
    assert_eq!(r.status, CheckStatus::Pass);
    let g: FiniteGroupoid = serde_json::from_value(r.result.unwrap()).unwrap();
    assert_eq!(g.object_count(), 2);

    let r = gen(GenerateKind::RandomMatcat, 2, 2, vec![2, 3]).unwrap();
    assert_eq!(r.status, CheckStatus::Pass);

    let r = gen(GenerateKind::RandomWeq, 1, 2, vec![2]).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.entries);
    assert!(r.entries.iter().any(|c| c.name == "weak equivalence" && c.passed()));

    assert!(gen(GenerateKind::RandomGroupoid, 6, 2, vec![]).is_err());
    assert!(gen(GenerateKind::RandomMatcat, 2, 2, vec![7]).is_err());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for suite in [Suite::Mc, Suite::Monoidal, Suite::Simplicial, Suite::Adjunctions] {
        let mut cfg = RunConfig::new(Command::VerifyAxioms { suite });
        cfg.seed = 11;
        assert_eq!(run(&cfg).unwrap().to_json(), run(&cfg).unwrap().to_json());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let (code, out, _) = umodel(&["validate", "m2.json"], p);
    assert_eq!(code, 0, "{out}");

    // A hom space without the identity.
    std::fs::write(
        p.join("broken.json"),
        r#"{"objects": [{"name": "x", "dim": 2}], "homs": {"x|x": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}}"#,
    )
    .unwrap();
    let (code, out, _) = umodel(&["validate", "broken.json"], p);
    assert_eq!(code, EXIT_FAIL, "{out}");

    let (code, _, _) = umodel(&["pi", "boundary2.json"], p);
    assert_eq!(code, EXIT_UNKNOWN);

    let (code, _, err) = umodel(&["validate", "missing.json"], p);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("missing.json"));

    std::fs::write(p.join("garbage.json"), "{not json").unwrap();
    let (code, _, _) = umodel(&["validate", "garbage.json"], p);
    assert_eq!(code, EXIT_USAGE);

    let (code, _, _) = umodel(&["factorize", "--mode", "sideways", "scalar.json"], p);
    assert_eq!(code, EXIT_USAGE);

    let (code, _, _) = umodel(&["generate", "--kind", "random_groupoid", "--objects", "9"], p);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn output_and_artifact_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let (code, stdout, _) = umodel(
        &[
            "generate",
            "--kind",
            "random_weq",
            "--seed",
            "5",
            "--output",
            "report.json",
            "--artifact",
            "weq.json",
        ],
        p,
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(p.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.status, CheckStatus::Pass);
    // The generated functor is self-contained and validates on its own.
    let (code, out, _) = umodel(&["validate", "weq.json"], p);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = umodel(&["factorize", "--mode", "cylinder", "weq.json"], p);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn path_references_resolve_next_to_the_referring_file() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("cats");
    std::fs::create_dir(&sub).unwrap();
    for name in ["point.json", "m2.json"] {
        std::fs::write(sub.join(name), unitary_model_cli::io::bundled(name).unwrap()).unwrap();
    }
    std::fs::write(
        sub.join("f.json"),
        unitary_model_cli::io::bundled("scalar.json").unwrap(),
    )
    .unwrap();
    std::fs::write(
        dir.path().join("triples.json"),
        r#"[{"x": "*", "u": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], "y": "x"}]"#,
    )
    .unwrap();
    let (code, out, _) = umodel(
        &["factorize", "--mode", "path", "cats/f.json", "triples.json"],
        dir.path(),
    );
    assert_eq!(code, 0, "{out}");
    let report: Report = serde_json::from_str(&out).unwrap();
    let midway: MatCStarCategory = serde_json::from_value(report.result.unwrap()["midway"].clone()).unwrap();
    assert_eq!(midway.len(), 2);
}
