use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex with the indices of its faces `d₀, …, dₙ` in the level below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub name: String,
    pub faces: Vec<usize>,
    pub degenerate: bool,
}

/// Simplices by dimension up to `dim_cap`. Standard constructions list only
/// nondegenerate simplices; degenerate ones appear when a face needs them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SSetWire", into = "SSetWire")]
pub struct FiniteSimplicialSet {
    dim_cap: usize,
    levels: Vec<Vec<Simplex>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SimplexWire {
    Vertex(String),
    Full {
        name: String,
        #[serde(default)]
        faces: Vec<String>,
        #[serde(default)]
        degenerate: bool,
    },
}

#[derive(Serialize, Deserialize)]
struct SSetWire {
    dim_cap: usize,
    simplices: BTreeMap<String, Vec<SimplexWire>>,
}

impl TryFrom<SSetWire> for FiniteSimplicialSet {
    type Error = Error;

    fn try_from(w: SSetWire) -> Result<Self> {
        let bad = |m: String| Error::InvalidSimplicialSet(m);
        let mut named: Vec<Vec<(String, Vec<String>, bool)>> = vec![Vec::new(); w.dim_cap + 1];
        for (key, list) in w.simplices {
            let n: usize = key
                .parse()
                .map_err(|_| bad(format!("level key {key} is not a number")))?;
            if n > w.dim_cap {
                return Err(bad(format!("level {n} exceeds dim_cap {}", w.dim_cap)));
            }
            named[n] = list
                .into_iter()
                .map(|s| match s {
                    SimplexWire::Vertex(name) => (name, Vec::new(), false),
                    SimplexWire::Full {
                        name,
                        faces,
                        degenerate,
                    } => (name, faces, degenerate),
                })
                .collect();
        }
        FiniteSimplicialSet::from_names(w.dim_cap, named)
    }
}

impl From<FiniteSimplicialSet> for SSetWire {
    fn from(k: FiniteSimplicialSet) -> Self {
        let mut simplices = BTreeMap::new();
        for (n, level) in k.levels.iter().enumerate() {
            let list = level
                .iter()
                .map(|s| {
                    if n == 0 {
                        SimplexWire::Vertex(s.name.clone())
                    } else {
                        SimplexWire::Full {
                            name: s.name.clone(),
                            faces: s.faces.iter().map(|&f| k.levels[n - 1][f].name.clone()).collect(),
                            degenerate: s.degenerate,
                        }
                    }
                })
                .collect();
            simplices.insert(n.to_string(), list);
        }
        SSetWire {
            dim_cap: k.dim_cap,
            simplices,
        }
    }
}

impl FiniteSimplicialSet {
    /// Checks face arities, the simplicial identities `dᵢdⱼ = dⱼ₋₁dᵢ` for
    /// `i < j`, and that every degenerate simplex has two equal adjacent faces.
    pub fn new(dim_cap: usize, mut levels: Vec<Vec<Simplex>>) -> Result<Self> {
        let bad = |m: String| Error::InvalidSimplicialSet(m);
        if levels.len() > dim_cap + 1 {
            return Err(bad(format!("{} levels for dim_cap {dim_cap}", levels.len())));
        }
        levels.resize(dim_cap + 1, Vec::new());
        for (n, level) in levels.iter().enumerate() {
            let mut names = std::collections::HashSet::new();
            for s in level {
                if !names.insert(s.name.as_str()) {
                    return Err(Error::NameClash(format!("{n}-simplex {}", s.name)));
                }
                let arity = if n == 0 { 0 } else { n + 1 };
                if s.faces.len() != arity {
                    return Err(bad(format!("{n}-simplex {} has {} faces", s.name, s.faces.len())));
                }
                if n > 0 && s.faces.iter().any(|&f| f >= levels[n - 1].len()) {
                    return Err(bad(format!("{n}-simplex {} has a missing face", s.name)));
                }
                if s.degenerate && (n == 0 || !s.faces.windows(2).any(|w| w[0] == w[1])) {
                    return Err(bad(format!("{n}-simplex {} cannot be degenerate", s.name)));
                }
            }
        }
        let k = FiniteSimplicialSet { dim_cap, levels };
        for n in 2..=dim_cap {
            for s in &k.levels[n] {
                for j in 0..=n {
                    for i in 0..j {
                        let lhs = k.levels[n - 1][s.faces[j]].faces[i];
                        let rhs = k.levels[n - 1][s.faces[i]].faces[j - 1];
                        if lhs != rhs {
                            return Err(bad(format!("d{i}d{j} != d{}d{i} on {}", j - 1, s.name)));
                        }
                    }
                }
            }
        }
        Ok(k)
    }

    /// Like [`FiniteSimplicialSet::new`] with faces given by name.
    pub fn from_names(dim_cap: usize, levels: Vec<Vec<(String, Vec<String>, bool)>>) -> Result<Self> {
        let mut out: Vec<Vec<Simplex>> = Vec::with_capacity(levels.len());
        for (n, level) in levels.iter().enumerate() {
            let below: HashMap<&str, usize> = if n == 0 {
                HashMap::new()
            } else {
                levels[n - 1]
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.0.as_str(), i))
                    .collect()
            };
            let list = level
                .iter()
                .map(|(name, faces, degenerate)| {
                    let faces = faces
                        .iter()
                        .map(|f| {
                            below.get(f.as_str()).copied().ok_or_else(|| {
                                Error::InvalidSimplicialSet(format!("face {f} of {name} is not a {}-simplex", n - 1))
                            })
                        })
                        .collect::<Result<_>>()?;
                    Ok(Simplex {
                        name: name.clone(),
                        faces,
                        degenerate: *degenerate,
                    })
                })
                .collect::<Result<_>>()?;
            out.push(list);
        }
        Self::new(dim_cap, out)
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Simplices of dimension `n`; empty above `dim_cap`.
    pub fn level(&self, n: usize) -> &[Simplex] {
        self.levels.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, n: usize) -> usize {
        self.level(n).len()
    }

    pub fn nondegenerate_count(&self, n: usize) -> usize {
        self.level(n).iter().filter(|s| !s.degenerate).count()
    }

    pub fn index_of(&self, n: usize, name: &str) -> Result<usize> {
        self.level(n)
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::InvalidSimplicialSet(format!("no {n}-simplex named {name}")))
    }

    /// `dᵢ` of the `n`-simplex `s`.
    pub fn face(&self, n: usize, s: usize, i: usize) -> usize {
        self.levels[n][s].faces[i]
    }
}

/// Which standard simplicial set to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    Delta(usize),
    Horn(usize, usize),
    Boundary(usize),
}

/// `Δ[n]`, `Λᵏ[n]` or `∂Δ[n]` truncated at `dim_cap`. Simplices are the
/// allowed nonempty subsets of `{0, …, n}`, named like `0,1,2`, and
/// `dᵢ` drops the `i`-th vertex.
pub fn standard(kind: StandardKind, dim_cap: usize) -> Result<FiniteSimplicialSet> {
    let (n, omitted): (usize, Vec<u64>) = match kind {
        StandardKind::Delta(n) => (n, Vec::new()),
        StandardKind::Horn(n, k) => {
            if n == 0 || k > n {
                return Err(Error::InvalidParams(format!("horn Λ^{k}[{n}] needs n ≥ 1 and k ≤ n")));
            }
            let full = (1u64 << (n + 1)) - 1;
            (n, vec![full, full & !(1 << k)])
        }
        StandardKind::Boundary(n) => (n, vec![(1u64 << (n + 1)) - 1]),
    };
    if n > 16 {
        return Err(Error::InvalidParams(format!(
            "standard simplex of dimension {n} is too large"
        )));
    }
    let mut levels: Vec<Vec<Simplex>> = Vec::new();
    let mut index: Vec<HashMap<u64, usize>> = Vec::new();
    for m in 0..=n.min(dim_cap) {
        let mut level = Vec::new();
        let mut idx = HashMap::new();
        for mask in subsets_of_size(n + 1, m + 1) {
            if omitted.contains(&mask) {
                continue;
            }
            let verts: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
            let faces = if m == 0 {
                Vec::new()
            } else {
                verts.iter().map(|&v| index[m - 1][&(mask & !(1 << v))]).collect()
            };
            idx.insert(mask, level.len());
            level.push(Simplex {
                name: verts.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
                faces,
                degenerate: false,
            });
        }
        levels.push(level);
        index.push(idx);
    }
    FiniteSimplicialSet::new(dim_cap, levels)
}

/// Bitmasks with `k` of the low `n` bits set, in increasing numeric order of
/// their sorted vertex lists.
fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    fn go(start: usize, n: usize, k: usize, mask: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for v in start..n {
            if n - v >= k {
                go(v + 1, n, k - 1, mask | (1 << v), out);
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, k, 0, &mut out);
    out
}

/// A map of simplicial sets, as simplex indices per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialMap {
    pub levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    /// The map sending each simplex of `k` to the simplex of `l` with the same name.
    pub fn inclusion(k: &FiniteSimplicialSet, l: &FiniteSimplicialSet) -> Result<Self> {
        let levels = (0..=k.dim_cap())
            .map(|n| k.level(n).iter().map(|s| l.index_of(n, &s.name)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let f = SimplicialMap { levels };
        f.validate(k, l)?;
        Ok(f)
    }

    /// Checks that faces commute with the map at every level of `k`.
    pub fn validate(&self, k: &FiniteSimplicialSet, l: &FiniteSimplicialSet) -> Result<()> {
        let bad = |m: String| Error::InvalidSimplicialSet(m);
        if self.levels.len() != k.dim_cap() + 1 {
            return Err(bad("map has the wrong number of levels".into()));
        }
        for n in 0..=k.dim_cap() {
            if self.levels[n].len() != k.count(n) || self.levels[n].iter().any(|&t| t >= l.count(n)) {
                return Err(bad(format!("level {n} of the map is malformed")));
            }
            if n == 0 {
                continue;
            }
            for (s, simplex) in k.level(n).iter().enumerate() {
                let t = self.levels[n][s];
                for (i, &f) in simplex.faces.iter().enumerate() {
                    if l.face(n, t, i) != self.levels[n - 1][f] {
                        return Err(bad(format!("map does not commute with d{i} on {}", simplex.name)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(k: &FiniteSimplicialSet) -> Vec<usize> {
        (0..=k.dim_cap()).map(|n| k.nondegenerate_count(n)).collect()
    }

    #[test]
    fn standard_counts() {
        assert_eq!(counts(&standard(StandardKind::Delta(2), 2).unwrap()), vec![3, 3, 1]);
        assert_eq!(counts(&standard(StandardKind::Horn(2, 1), 2).unwrap()), vec![3, 2, 0]);
        assert_eq!(counts(&standard(StandardKind::Boundary(2), 2).unwrap()), vec![3, 3, 0]);
        assert_eq!(counts(&standard(StandardKind::Delta(3), 3).unwrap()), vec![4, 6, 4, 1]);
        assert_eq!(
            counts(&standard(StandardKind::Horn(3, 0), 3).unwrap()),
            vec![4, 6, 3, 0]
        );
        assert_eq!(counts(&standard(StandardKind::Delta(3), 2).unwrap()), vec![4, 6, 4]);
        assert!(matches!(
            standard(StandardKind::Horn(2, 3), 2),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            standard(StandardKind::Horn(0, 0), 2),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn horn_omits_the_right_face() {
        let h = standard(StandardKind::Horn(2, 1), 2).unwrap();
        let edges: Vec<&str> = h.level(1).iter().map(|s| s.name.as_str()).collect();
        assert_eq!(edges, vec!["0,1", "1,2"]);
        let d = standard(StandardKind::Delta(2), 2).unwrap();
        let t = &d.level(2)[0];
        let names: Vec<&str> = t.faces.iter().map(|&f| d.level(1)[f].name.as_str()).collect();
        assert_eq!(names, vec!["1,2", "0,2", "0,1"]);
    }

    #[test]
    fn inclusion_and_bad_maps() {
        let h = standard(StandardKind::Horn(3, 2), 3).unwrap();
        let d = standard(StandardKind::Delta(3), 3).unwrap();
        let f = SimplicialMap::inclusion(&h, &d).unwrap();
        assert_eq!(f.levels[1].len(), 6);
        let mut g = f.clone();
        g.levels[0].swap(0, 1);
        assert!(g.validate(&h, &d).is_err());
    }

    #[test]
    fn identities_are_enforced() {
        // A triangle whose faces do not close up.
        let levels = vec![
            vec![
                ("a".into(), vec![], false),
                ("b".into(), vec![], false),
                ("c".into(), vec![], false),
            ],
            vec![
                ("ab".into(), vec!["b".into(), "a".into()], false),
                ("bc".into(), vec!["c".into(), "b".into()], false),
                ("ac".into(), vec!["c".into(), "a".into()], false),
            ],
            vec![("t".into(), vec!["bc".into(), "ac".into(), "ab".into()], false)],
        ];
        FiniteSimplicialSet::from_names(2, levels.clone()).unwrap();
        let mut broken = levels;
        broken[2][0].1 = vec!["ab".into(), "ac".into(), "bc".into()];
        assert!(matches!(
            FiniteSimplicialSet::from_names(2, broken),
            Err(Error::InvalidSimplicialSet(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = standard(StandardKind::Boundary(2), 2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains(r#""0":["0","1","2"]"#));
        let back: FiniteSimplicialSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
