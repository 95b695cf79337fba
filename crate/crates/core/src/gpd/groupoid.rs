use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidArrow {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub inv: String,
}

/// A finite groupoid given by its full composition table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupoidWire", into = "GroupoidWire")]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    inv: Vec<usize>,
    identities: Vec<usize>,
    /// `(g, f) ↦ g ∘ f` for every composable pair.
    table: HashMap<(usize, usize), usize>,
    /// Arrows grouped by `(src, tgt)`, indexed `src * n + tgt`.
    homs: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidWire {
    objects: Vec<String>,
    arrows: Vec<GroupoidArrow>,
    compose: BTreeMap<String, String>,
}

impl TryFrom<GroupoidWire> for FiniteGroupoid {
    type Error = Error;

    fn try_from(w: GroupoidWire) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (k, v) in w.compose {
            let (g, f) = k
                .split_once('|')
                .ok_or_else(|| Error::InvalidGroupoid(format!("composition key {k} is not of the form g|f")))?;
            table.insert((g.to_string(), f.to_string()), v);
        }
        FiniteGroupoid::new(w.objects, w.arrows, &table)
    }
}

impl From<FiniteGroupoid> for GroupoidWire {
    fn from(g: FiniteGroupoid) -> Self {
        let arrows = (0..g.arrow_count())
            .map(|a| GroupoidArrow {
                name: g.names[a].clone(),
                src: g.objects[g.src[a]].clone(),
                tgt: g.objects[g.tgt[a]].clone(),
                inv: g.names[g.inv[a]].clone(),
            })
            .collect();
        let compose = g
            .table
            .iter()
            .map(|(&(h, f), &c)| (format!("{}|{}", g.names[h], g.names[f]), g.names[c].clone()))
            .collect();
        GroupoidWire {
            objects: g.objects,
            arrows,
            compose,
        }
    }
}

impl FiniteGroupoid {
    /// Builds and exhaustively checks a groupoid. `compose` maps `(g, f)` to
    /// `g ∘ f` and must cover every composable pair.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<GroupoidArrow>,
        compose: &BTreeMap<(String, String), String>,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidGroupoid(m);
        let obj_index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj_index.len() != objects.len() {
            return Err(Error::NameClash("duplicate object name".into()));
        }
        let arrow_index: HashMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        if arrow_index.len() != arrows.len() {
            return Err(Error::NameClash("duplicate arrow name".into()));
        }
        let obj = |o: &str| obj_index.get(o).copied().ok_or_else(|| Error::UnknownObject(o.into()));
        let arr = |a: &str| {
            arrow_index
                .get(a)
                .copied()
                .ok_or_else(|| bad(format!("unknown arrow {a}")))
        };
        let src = arrows.iter().map(|a| obj(&a.src)).collect::<Result<Vec<_>>>()?;
        let tgt = arrows.iter().map(|a| obj(&a.tgt)).collect::<Result<Vec<_>>>()?;
        let inv = arrows.iter().map(|a| arr(&a.inv)).collect::<Result<Vec<_>>>()?;
        let mut table = HashMap::new();
        for ((g, f), h) in compose {
            let (g, f, h) = (arr(g)?, arr(f)?, arr(h)?);
            if src[g] != tgt[f] {
                return Err(bad(format!(
                    "{} ∘ {} is not composable",
                    arrows[g].name, arrows[f].name
                )));
            }
            if src[h] != src[f] || tgt[h] != tgt[g] {
                return Err(bad(format!(
                    "{} ∘ {} = {} has the wrong endpoints",
                    arrows[g].name, arrows[f].name, arrows[h].name
                )));
            }
            table.insert((g, f), h);
        }
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for a in 0..arrows.len() {
            homs[src[a] * n + tgt[a]].push(a);
        }
        for g in 0..arrows.len() {
            for &f in &homs_into(&homs, n, src[g]) {
                if !table.contains_key(&(g, f)) {
                    return Err(bad(format!("{} ∘ {} is missing", arrows[g].name, arrows[f].name)));
                }
            }
        }
        // Identities: the idempotent endomorphisms.
        let mut identities = Vec::with_capacity(n);
        for x in 0..n {
            let ids: Vec<usize> = homs[x * n + x]
                .iter()
                .copied()
                .filter(|&e| table[&(e, e)] == e)
                .collect();
            match ids.as_slice() {
                [e] => identities.push(*e),
                _ => return Err(bad(format!("object {} has {} idempotents", objects[x], ids.len()))),
            }
        }
        let g = FiniteGroupoid {
            objects,
            names: arrows.into_iter().map(|a| a.name).collect(),
            src,
            tgt,
            inv,
            identities,
            table,
            homs,
        };
        g.check_axioms()?;
        Ok(g)
    }

    fn check_axioms(&self) -> Result<()> {
        let bad = |m: String| Error::InvalidGroupoid(m);
        for f in 0..self.arrow_count() {
            let (x, y) = (self.src[f], self.tgt[f]);
            if self.table[&(self.identities[y], f)] != f || self.table[&(f, self.identities[x])] != f {
                return Err(bad(format!("identities are not neutral for {}", self.names[f])));
            }
            let i = self.inv[f];
            if self.src[i] != y
                || self.tgt[i] != x
                || self.table[&(i, f)] != self.identities[x]
                || self.table[&(f, i)] != self.identities[y]
            {
                return Err(bad(format!(
                    "{} is not a two-sided inverse of {}",
                    self.names[i], self.names[f]
                )));
            }
        }
        for f in 0..self.arrow_count() {
            for &g in &self.out_of(self.tgt[f]) {
                for &h in &self.out_of(self.tgt[g]) {
                    let hg = self.table[&(h, g)];
                    let gf = self.table[&(g, f)];
                    if self.table[&(hg, f)] != self.table[&(h, gf)] {
                        return Err(bad(format!(
                            "composition is not associative on ({}, {}, {})",
                            self.names[h], self.names[g], self.names[f]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a groupoid from a closed composition rule on arrow indices.
    /// Arrows are `(name, src, tgt)` with `inverse` and `compose` given as
    /// index functions; the result is checked like any other groupoid.
    pub fn from_fns(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        inverse: impl Fn(usize) -> usize,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let list: Vec<GroupoidArrow> = arrows
            .iter()
            .enumerate()
            .map(|(i, (name, s, t))| GroupoidArrow {
                name: name.clone(),
                src: objects[*s].clone(),
                tgt: objects[*t].clone(),
                inv: arrows[inverse(i)].0.clone(),
            })
            .collect();
        let mut table = BTreeMap::new();
        for (g, (gn, gs, _)) in arrows.iter().enumerate() {
            for (f, (fname, _, ft)) in arrows.iter().enumerate() {
                if gs == ft {
                    table.insert((gn.clone(), fname.clone()), arrows[compose(g, f)].0.clone());
                }
            }
        }
        Self::new(objects, list, &table)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identities[self.src[a]] == a
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: usize, f: usize) -> Result<usize> {
        self.table
            .get(&(g, f))
            .copied()
            .ok_or_else(|| Error::NotComposable(format!("{} ∘ {}", self.names[g], self.names[f])))
    }

    /// Arrows `x → y` in declaration order.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Arrows with target `x`, sorted by `(source name, arrow name)`.
    pub fn arrows_into(&self, x: usize) -> Vec<usize> {
        let mut v = homs_into(&self.homs, self.objects.len(), x);
        v.sort_by(|&a, &b| {
            (&self.objects[self.src[a]], &self.names[a]).cmp(&(&self.objects[self.src[b]], &self.names[b]))
        });
        v
    }

    fn out_of(&self, x: usize) -> Vec<usize> {
        let n = self.objects.len();
        (0..n).flat_map(|y| self.homs[x * n + y].iter().copied()).collect()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.into()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::InvalidGroupoid(format!("unknown arrow {name}")))
    }

    /// Component index of each object, numbered in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            comp[start] = next;
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if comp[y] == usize::MAX && !self.hom(x, y).is_empty() {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// `|G(x, y)|` for all pairs.
    pub fn hom_sizes(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        (0..n).map(|x| (0..n).map(|y| self.hom(x, y).len()).collect()).collect()
    }
}

fn homs_into(homs: &[Vec<usize>], n: usize, x: usize) -> Vec<usize> {
    (0..n).flat_map(|z| homs[z * n + x].iter().copied()).collect()
}

/// One object `*` with the single arrow `id_*`.
pub fn terminal_groupoid() -> FiniteGroupoid {
    cyclic_group(1)
}

/// Objects `0`, `1` with a single isomorphism `0->1` between them.
pub fn interval_groupoid() -> FiniteGroupoid {
    codiscrete_groupoid(&["0", "1"])
}

/// One arrow `x->y` between every ordered pair; identities are named `id_x`.
pub fn codiscrete_groupoid(objects: &[&str]) -> FiniteGroupoid {
    let n = objects.len();
    let arrows = (0..n)
        .flat_map(|x| {
            (0..n).map(move |y| {
                let name = if x == y {
                    format!("id_{}", objects[x])
                } else {
                    format!("{}->{}", objects[x], objects[y])
                };
                (name, x, y)
            })
        })
        .collect();
    FiniteGroupoid::from_fns(
        objects.iter().map(|s| s.to_string()).collect(),
        arrows,
        |a| (a % n) * n + a / n,
        |g, f| (f / n) * n + g % n,
    )
    .expect("codiscrete groupoid is well formed")
}

pub fn discrete_groupoid(objects: &[&str]) -> FiniteGroupoid {
    let arrows = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (format!("id_{o}"), i, i))
        .collect();
    FiniteGroupoid::from_fns(objects.iter().map(|s| s.to_string()).collect(), arrows, |a| a, |g, _| g)
        .expect("discrete groupoid is well formed")
}

/// `ℤ/n` on one object `*`: arrows `id_*`, `g`, `g^2`, …
pub fn cyclic_group(n: usize) -> FiniteGroupoid {
    assert!(n >= 1, "cyclic group of order zero");
    let name = |k: usize| match k {
        0 => "id_*".to_string(),
        1 => "g".to_string(),
        _ => format!("g^{k}"),
    };
    FiniteGroupoid::from_fns(
        vec!["*".into()],
        (0..n).map(|k| (name(k), 0, 0)).collect(),
        |a| (n - a) % n,
        |g, f| (g + f) % n,
    )
    .expect("cyclic group is well formed")
}

/// The group generated by the given permutations of `0..degree`, on one
/// object `*`. Elements are named `id_*`, `p1`, `p2`, … in breadth-first order
/// from the generators; composition is `(σ ∘ τ)(i) = σ(τ(i))`.
pub fn permutation_group(generators: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let degree = generators.first().map_or(0, Vec::len);
    for p in generators {
        let mut seen = vec![false; degree];
        if p.len() != degree || !p.iter().all(|&i| i < degree && !std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidParams(format!(
                "{p:?} is not a permutation of 0..{degree}"
            )));
        }
    }
    let id: Vec<usize> = (0..degree).collect();
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(e) = queue.pop_front() {
        for p in generators {
            let q: Vec<usize> = elements[e].iter().map(|&i| p[i]).collect();
            if !index.contains_key(&q) {
                if elements.len() >= 5040 {
                    return Err(Error::InvalidParams("permutation group is too large".into()));
                }
                index.insert(q.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(q);
            }
        }
    }
    let compose = |g: usize, f: usize| {
        let q: Vec<usize> = elements[f].iter().map(|&i| elements[g][i]).collect();
        index[&q]
    };
    let inverse = |g: usize| {
        let mut q = vec![0; degree];
        for (i, &j) in elements[g].iter().enumerate() {
            q[j] = i;
        }
        index[&q]
    };
    let arrows = (0..elements.len())
        .map(|k| (if k == 0 { "id_*".to_string() } else { format!("p{k}") }, 0, 0))
        .collect();
    FiniteGroupoid::from_fns(vec!["*".into()], arrows, inverse, compose)
}

/// `G₁ × G₂`: object `(x, y)` has index `x·|ob G₂| + y`, arrow `(g, h)` has
/// index `g·|arr G₂| + h`.
pub fn product_groupoid(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> FiniteGroupoid {
    let (n2, a2) = (g2.object_count(), g2.arrow_count());
    let objects = g1
        .objects
        .iter()
        .flat_map(|x| g2.objects.iter().map(move |y| format!("({x},{y})")))
        .collect();
    let arrows = (0..g1.arrow_count())
        .flat_map(|g| {
            (0..a2).map(move |h| {
                (
                    format!("({},{})", g1.names[g], g2.names[h]),
                    g1.src[g] * n2 + g2.src[h],
                    g1.tgt[g] * n2 + g2.tgt[h],
                )
            })
        })
        .collect();
    FiniteGroupoid::from_fns(
        objects,
        arrows,
        |a| g1.inv[a / a2] * a2 + g2.inv[a % a2],
        |g, f| g1.table[&(g / a2, f / a2)] * a2 + g2.table[&(g % a2, f % a2)],
    )
    .expect("product of groupoids is a groupoid")
}

/// Disjoint union; every name in part `i` is prefixed `i.`.
pub fn disjoint_union(parts: &[FiniteGroupoid]) -> FiniteGroupoid {
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    let mut owner = Vec::new();
    let (mut obj_off, mut arr_off) = (Vec::new(), Vec::new());
    for (i, p) in parts.iter().enumerate() {
        obj_off.push(objects.len());
        arr_off.push(arrows.len());
        objects.extend(p.objects.iter().map(|o| format!("{i}.{o}")));
        for a in 0..p.arrow_count() {
            arrows.push((
                format!("{i}.{}", p.names[a]),
                obj_off[i] + p.src[a],
                obj_off[i] + p.tgt[a],
            ));
            owner.push((i, a));
        }
    }
    FiniteGroupoid::from_fns(
        objects,
        arrows,
        |a| {
            let (i, local) = owner[a];
            arr_off[i] + parts[i].inv[local]
        },
        |g, f| {
            let ((i, lg), (_, lf)) = (owner[g], owner[f]);
            arr_off[i] + parts[i].table[&(lg, lf)]
        },
    )
    .expect("disjoint union of groupoids is a groupoid")
}

/// A functor of groupoids, by object and arrow indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidFunctor {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidFunctor {
            object_map: (0..g.object_count()).collect(),
            arrow_map: (0..g.arrow_count()).collect(),
        }
    }

    /// Exhaustive check of endpoints, identities and composition.
    pub fn validate(&self, source: &FiniteGroupoid, target: &FiniteGroupoid) -> Result<()> {
        let bad = |m: String| Error::InvalidFunctor(m);
        if self.object_map.len() != source.object_count() || self.arrow_map.len() != source.arrow_count() {
            return Err(bad("map sizes do not match the source".into()));
        }
        if self.object_map.iter().any(|&y| y >= target.object_count())
            || self.arrow_map.iter().any(|&b| b >= target.arrow_count())
        {
            return Err(bad("image out of range".into()));
        }
        for a in 0..source.arrow_count() {
            let b = self.arrow_map[a];
            if target.src(b) != self.object_map[source.src(a)] || target.tgt(b) != self.object_map[source.tgt(a)] {
                return Err(bad(format!("image of {} has the wrong endpoints", source.name(a))));
            }
        }
        for x in 0..source.object_count() {
            if self.arrow_map[source.identity(x)] != target.identity(self.object_map[x]) {
                return Err(bad(format!("identity of {} is not preserved", source.objects[x])));
            }
        }
        for (&(g, f), &h) in &source.table {
            if target.table[&(self.arrow_map[g], self.arrow_map[f])] != self.arrow_map[h] {
                return Err(bad(format!("{} ∘ {} is not preserved", source.name(g), source.name(f))));
            }
        }
        Ok(())
    }

    pub fn then(&self, next: &GroupoidFunctor) -> GroupoidFunctor {
        GroupoidFunctor {
            object_map: self.object_map.iter().map(|&y| next.object_map[y]).collect(),
            arrow_map: self.arrow_map.iter().map(|&b| next.arrow_map[b]).collect(),
        }
    }

    /// Bijective on objects and on arrows, which for a functor makes it an isomorphism.
    pub fn is_bijective(&self, target: &FiniteGroupoid) -> bool {
        let bij = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        bij(&self.object_map, target.object_count()) && bij(&self.arrow_map, target.arrow_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_has_a_single_isomorphism() {
        let i = interval_groupoid();
        assert_eq!(i.object_count(), 2);
        assert_eq!(i.arrow_count(), 4);
        assert_eq!(i.hom(0, 1).len(), 1);
        let a = i.hom(0, 1)[0];
        assert_eq!(i.compose(i.inverse(a), a).unwrap(), i.identity(0));
    }

    #[test]
    fn product_counts() {
        let p = product_groupoid(&cyclic_group(2), &cyclic_group(3));
        assert_eq!(p.arrow_count(), 6);
        let t = product_groupoid(&interval_groupoid(), &terminal_groupoid());
        assert_eq!(t.hom_sizes(), interval_groupoid().hom_sizes());
        assert_eq!(
            product_groupoid(&interval_groupoid(), &cyclic_group(2)).arrow_count(),
            8
        );
    }

    #[test]
    fn permutation_group_of_s3() {
        let s3 = permutation_group(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.arrow_count(), 6);
        // Non-abelian: some pair does not commute.
        let noncommuting = (0..6).any(|a| (0..6).any(|b| s3.compose(a, b).unwrap() != s3.compose(b, a).unwrap()));
        assert!(noncommuting);
        assert!(permutation_group(&[vec![0, 0]]).is_err());
    }

    #[test]
    fn rejects_broken_tables() {
        let g = cyclic_group(3);
        let mut wire = GroupoidWire::from(g);
        wire.compose.insert("g|g".into(), "g".into());
        assert!(matches!(FiniteGroupoid::try_from(wire), Err(Error::InvalidGroupoid(_))));

        let mut wire = GroupoidWire::from(cyclic_group(2));
        wire.compose.remove("g|g");
        assert!(FiniteGroupoid::try_from(wire).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = product_groupoid(&interval_groupoid(), &cyclic_group(2));
        let s = serde_json::to_string(&g).unwrap();
        let back: FiniteGroupoid = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn functor_checks() {
        let i = interval_groupoid();
        let t = terminal_groupoid();
        let collapse = GroupoidFunctor {
            object_map: vec![0, 0],
            arrow_map: vec![0; 4],
        };
        collapse.validate(&i, &t).unwrap();
        assert!(!collapse.is_bijective(&t));
        let z2 = cyclic_group(2);
        let bad = GroupoidFunctor {
            object_map: vec![0],
            arrow_map: vec![0, 0],
        };
        bad.validate(&z2, &z2).unwrap();
        let not_a_functor = GroupoidFunctor {
            object_map: vec![0],
            arrow_map: vec![1, 1],
        };
        assert!(not_a_functor.validate(&z2, &z2).is_err());
        assert!(GroupoidFunctor::identity(&z2).is_bijective(&z2));
    }

    #[test]
    fn components_and_arrows_into() {
        let g = disjoint_union(&[interval_groupoid(), cyclic_group(2)]);
        assert_eq!(g.components(), vec![0, 0, 1]);
        let into = g.arrows_into(1);
        let names: Vec<&str> = into.iter().map(|&a| g.name(a)).collect();
        assert_eq!(names, vec!["0.0->1", "0.id_1"]);
    }
}
