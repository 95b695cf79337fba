//! File formats and loading. A functor file names its source and target
//! either inline or by a path relative to the functor file; lifting squares
//! refer to functor files the same way.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use unitary_model::gpd::FiniteGroupoid;
use unitary_model::matcat::{FunctorData, MatCStarCategory, StarFunctor};
use unitary_model::numlin::ComplexMatrix;
use unitary_model::sset::FiniteSimplicialSet;

use crate::{CliError, CliResult};

/// Example instances shipped with the binary, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("boundary2.json", include_str!("../data/boundary2.json")),
    ("collapse.json", include_str!("../data/collapse.json")),
    ("delta2.json", include_str!("../data/delta2.json")),
    ("diagonal.json", include_str!("../data/diagonal.json")),
    ("diagonal_collapse.json", include_str!("../data/diagonal_collapse.json")),
    ("generator.json", include_str!("../data/generator.json")),
    ("horn21.json", include_str!("../data/horn21.json")),
    ("include.json", include_str!("../data/include.json")),
    ("interval.json", include_str!("../data/interval.json")),
    ("m2.json", include_str!("../data/m2.json")),
    ("pair.json", include_str!("../data/pair.json")),
    ("point.json", include_str!("../data/point.json")),
    ("scalar.json", include_str!("../data/scalar.json")),
    ("square_cof_tfib.json", include_str!("../data/square_cof_tfib.json")),
    ("square_tcof_fib.json", include_str!("../data/square_tcof_fib.json")),
    ("top.json", include_str!("../data/top.json")),
    ("z2.json", include_str!("../data/z2.json")),
    ("z3.json", include_str!("../data/z3.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// An inline value or a path to a file holding it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for Ref<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => Ok(Ref::Path(s)),
            v => serde_json::from_value(v).map(Ref::Inline).map_err(D::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctorFile {
    pub source: Ref<MatCStarCategory>,
    pub target: Ref<MatCStarCategory>,
    #[serde(flatten)]
    pub data: FunctorData,
}

impl FunctorFile {
    /// Self-contained file for `f`.
    pub fn inline(f: &StarFunctor) -> Self {
        FunctorFile {
            source: Ref::Inline((**f.source()).clone()),
            target: Ref::Inline((**f.target()).clone()),
            data: f.to_data(),
        }
    }
}

/// `top: A → C`, `left: A → B`, `right: C → D`, `bottom: B → D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareFile {
    pub top: Ref<FunctorFile>,
    pub left: Ref<FunctorFile>,
    pub right: Ref<FunctorFile>,
    pub bottom: Ref<FunctorFile>,
}

/// A unitary `v: F(x) → y` to be lifted along `F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub x: String,
    pub v: ComplexMatrix,
    #[serde(rename = "F")]
    pub functor: Ref<FunctorFile>,
    /// Codomain object of `v` in the target of `F`.
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleFile {
    pub x: String,
    pub u: ComplexMatrix,
    pub y: String,
}

/// Any file `validate` understands.
#[derive(Debug, Clone)]
pub enum Instance {
    Category(Arc<MatCStarCategory>),
    Functor(StarFunctor),
    Groupoid(FiniteGroupoid),
    SimplicialSet(FiniteSimplicialSet),
}

/// Where relative paths are looked up: a directory on disk (falling back to
/// the bundled files) or the bundled files alone.
#[derive(Debug, Clone)]
pub struct Files {
    dir: Option<PathBuf>,
}

impl Files {
    pub fn working_dir() -> Self {
        Self::in_dir(PathBuf::from("."))
    }

    pub fn in_dir(dir: PathBuf) -> Self {
        Files { dir: Some(dir) }
    }

    pub fn bundled() -> Self {
        Files { dir: None }
    }

    fn locate(&self, name: &Path) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let p = dir.join(name);
        p.exists().then_some(p)
    }

    /// Contents of `name` and the context for paths found inside it.
    pub fn read(&self, name: &Path) -> CliResult<(String, Files)> {
        let label = name.display().to_string();
        if let Some(p) = self.locate(name) {
            let text = std::fs::read_to_string(&p).map_err(|source| CliError::Io { path: label, source })?;
            let dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
            return Ok((text, Files { dir: Some(dir) }));
        }
        let file_name = name.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        match bundled(file_name) {
            Some(text) if name.components().count() == 1 => Ok((text.to_string(), Files::bundled())),
            _ => Err(CliError::Io {
                path: label,
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
            }),
        }
    }

    pub fn parse<T: DeserializeOwned>(&self, name: &Path) -> CliResult<(T, Files)> {
        let (text, ctx) = self.read(name)?;
        let value = parse_text(&name.display().to_string(), &text)?;
        Ok((value, ctx))
    }

    pub fn category(&self, r: &Ref<MatCStarCategory>) -> CliResult<Arc<MatCStarCategory>> {
        match r {
            Ref::Inline(c) => Ok(Arc::new(c.clone())),
            Ref::Path(p) => Ok(Arc::new(self.parse::<MatCStarCategory>(Path::new(p))?.0)),
        }
    }

    pub fn functor(&self, r: &Ref<FunctorFile>) -> CliResult<StarFunctor> {
        match r {
            Ref::Inline(f) => self.build_functor(f, "inline functor"),
            Ref::Path(p) => {
                let (f, ctx) = self.parse::<FunctorFile>(Path::new(p))?;
                ctx.build_functor(&f, p)
            }
        }
    }

    fn build_functor(&self, f: &FunctorFile, label: &str) -> CliResult<StarFunctor> {
        let source = self.category(&f.source)?;
        let target = self.category(&f.target)?;
        StarFunctor::from_data(source, target, &f.data).map_err(|e| CliError::Parse {
            path: label.into(),
            message: e.to_string(),
        })
    }

    /// Reads any instance file, telling the kinds apart by their fields.
    pub fn instance(&self, name: &Path) -> CliResult<Instance> {
        let label = name.display().to_string();
        let (text, ctx) = self.read(name)?;
        let value: Value = parse_text(&label, &text)?;
        let has = |k: &str| value.get(k).is_some();
        let parse_err = |e: serde_json::Error| CliError::Parse {
            path: label.clone(),
            message: e.to_string(),
        };
        if has("object_map") {
            let f: FunctorFile = serde_json::from_value(value).map_err(parse_err)?;
            Ok(Instance::Functor(ctx.build_functor(&f, &label)?))
        } else if has("dim_cap") {
            Ok(Instance::SimplicialSet(
                serde_json::from_value(value).map_err(parse_err)?,
            ))
        } else if has("compose") {
            Ok(Instance::Groupoid(serde_json::from_value(value).map_err(parse_err)?))
        } else if has("objects") {
            Ok(Instance::Category(Arc::new(
                serde_json::from_value(value).map_err(parse_err)?,
            )))
        } else {
            Err(CliError::Parse {
                path: label,
                message: "not a category, functor, groupoid or simplicial set".into(),
            })
        }
    }
}

pub fn parse_text<T: DeserializeOwned>(path: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.into(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("instances serialize");
    s.push('\n');
    s
}
