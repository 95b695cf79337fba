use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::groupoid::FiniteGroupoid;
use crate::error::{Error, Result};
use crate::sset::FiniteSimplicialSet;
use crate::starpres::QuiverArrow;

/// A generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpLetter {
    pub gen: usize,
    pub inv: bool,
}

impl FpLetter {
    pub fn new(gen: usize) -> Self {
        FpLetter { gen, inv: false }
    }

    pub fn inverse(self) -> Self {
        FpLetter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// Letters in composition order: `[b, a]` is `b ∘ a`.
pub type FpWord = Vec<FpLetter>;

pub fn inverse_word(w: &[FpLetter]) -> FpWord {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Cancels adjacent `k k⁻¹` pairs.
pub fn reduce_word(w: &[FpLetter]) -> FpWord {
    let mut out: FpWord = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `lhs = rhs` as arrows `src → tgt`. Empty words denote the identity of `src`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpRelation {
    pub src: usize,
    pub tgt: usize,
    pub lhs: FpWord,
    pub rhs: FpWord,
}

/// A groupoid presented by generating isomorphisms and relations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FpWire", into = "FpWire")]
pub struct FPGroupoid {
    objects: Vec<String>,
    generators: Vec<QuiverArrow>,
    ends: Vec<(usize, usize)>,
    relations: Vec<FpRelation>,
}

#[derive(Serialize, Deserialize)]
struct FpRelationWire {
    src: String,
    tgt: String,
    lhs: Vec<String>,
    rhs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FpWire {
    objects: Vec<String>,
    generators: Vec<QuiverArrow>,
    #[serde(default)]
    relations: Vec<FpRelationWire>,
}

impl TryFrom<FpWire> for FPGroupoid {
    type Error = Error;

    fn try_from(w: FpWire) -> Result<Self> {
        let obj = |o: &str| {
            w.objects
                .iter()
                .position(|x| x == o)
                .ok_or_else(|| Error::UnknownObject(o.into()))
        };
        let letter = |s: &str| {
            let (name, inv) = match s.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (s, false),
            };
            w.generators
                .iter()
                .position(|g| g.name == name)
                .map(|gen| FpLetter { gen, inv })
                .ok_or_else(|| Error::InvalidGroupoid(format!("unknown generator {name}")))
        };
        let word = |v: &[String]| v.iter().map(|s| letter(s)).collect::<Result<FpWord>>();
        let relations = w
            .relations
            .iter()
            .map(|r| {
                Ok(FpRelation {
                    src: obj(&r.src)?,
                    tgt: obj(&r.tgt)?,
                    lhs: word(&r.lhs)?,
                    rhs: word(&r.rhs)?,
                })
            })
            .collect::<Result<_>>()?;
        FPGroupoid::new(w.objects.clone(), w.generators.clone(), relations)
    }
}

impl From<FPGroupoid> for FpWire {
    fn from(p: FPGroupoid) -> Self {
        let relations = p
            .relations
            .iter()
            .map(|r| FpRelationWire {
                src: p.objects[r.src].clone(),
                tgt: p.objects[r.tgt].clone(),
                lhs: r.lhs.iter().map(|&l| p.letter_name(l)).collect(),
                rhs: r.rhs.iter().map(|&l| p.letter_name(l)).collect(),
            })
            .collect();
        FpWire {
            objects: p.objects,
            generators: p.generators,
            relations,
        }
    }
}

impl FPGroupoid {
    pub fn new(objects: Vec<String>, generators: Vec<QuiverArrow>, relations: Vec<FpRelation>) -> Result<Self> {
        let obj = |o: &str| {
            objects
                .iter()
                .position(|x| x == o)
                .ok_or_else(|| Error::UnknownObject(o.into()))
        };
        let mut seen = std::collections::HashSet::new();
        if !objects.iter().all(|o| seen.insert(o.as_str())) {
            return Err(Error::NameClash("duplicate object name".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if !generators.iter().all(|g| seen.insert(g.name.as_str())) {
            return Err(Error::NameClash("duplicate generator name".into()));
        }
        let ends = generators
            .iter()
            .map(|g| Ok((obj(&g.src)?, obj(&g.tgt)?)))
            .collect::<Result<Vec<_>>>()?;
        let p = FPGroupoid {
            objects,
            generators,
            ends,
            relations: Vec::new(),
        };
        for (i, r) in relations.iter().enumerate() {
            if r.src >= p.objects.len() || r.tgt >= p.objects.len() {
                return Err(Error::InvalidGroupoid(format!("relation {i} has unknown endpoints")));
            }
            for w in [&r.lhs, &r.rhs] {
                if p.word_target(r.src, w) != Some(r.tgt) {
                    return Err(Error::InvalidGroupoid(format!(
                        "relation {i}: word is not composable from {} to {}",
                        p.objects[r.src], p.objects[r.tgt]
                    )));
                }
            }
        }
        Ok(FPGroupoid { relations, ..p })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[QuiverArrow] {
        &self.generators
    }

    pub fn relations(&self) -> &[FpRelation] {
        &self.relations
    }

    /// `(source, target)` of a letter.
    pub fn letter_ends(&self, l: FpLetter) -> (usize, usize) {
        let (s, t) = self.ends[l.gen];
        if l.inv {
            (t, s)
        } else {
            (s, t)
        }
    }

    pub fn letter_name(&self, l: FpLetter) -> String {
        let name = &self.generators[l.gen].name;
        if l.inv {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    /// Endpoint of `w` read from `src`, if it is composable.
    pub fn word_target(&self, src: usize, w: &[FpLetter]) -> Option<usize> {
        let mut at = src;
        for &l in w.iter().rev() {
            let (s, t) = self.letter_ends(l);
            if s != at {
                return None;
            }
            at = t;
        }
        Some(at)
    }

    pub fn display_word(&self, w: &[FpLetter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(".")
    }
}

/// `Π(K)`: vertices, nondegenerate edges `k: d₁k → d₀k`, and one relation
/// `d₀ℓ · d₂ℓ = d₁ℓ` per nondegenerate triangle. Degenerate edges are identities.
pub fn fundamental_groupoid(k: &FiniteSimplicialSet) -> Result<FPGroupoid> {
    let bad = |m: String| Error::InvalidSimplicialSet(m);
    let objects: Vec<String> = k.level(0).iter().map(|s| s.name.clone()).collect();
    let mut generators = Vec::new();
    let mut edge_word: Vec<FpWord> = Vec::new();
    for e in k.level(1) {
        if e.faces.len() != 2 {
            return Err(bad(format!("edge {} has {} faces", e.name, e.faces.len())));
        }
        if e.degenerate {
            if e.faces[0] != e.faces[1] {
                return Err(bad(format!("degenerate edge {} has distinct endpoints", e.name)));
            }
            edge_word.push(Vec::new());
        } else {
            edge_word.push(vec![FpLetter::new(generators.len())]);
            generators.push(QuiverArrow {
                name: e.name.clone(),
                src: objects[e.faces[1]].clone(),
                tgt: objects[e.faces[0]].clone(),
            });
        }
    }
    let mut relations = Vec::new();
    for t in k.level(2).iter().filter(|t| !t.degenerate) {
        if t.faces.len() != 3 {
            return Err(bad(format!("triangle {} has {} faces", t.name, t.faces.len())));
        }
        let (d0, d1, d2) = (t.faces[0], t.faces[1], t.faces[2]);
        let src = k.level(1)[d2].faces[1];
        let tgt = k.level(1)[d0].faces[0];
        let mut lhs = edge_word[d0].clone();
        lhs.extend(&edge_word[d2]);
        relations.push(FpRelation {
            src,
            tgt,
            lhs,
            rhs: edge_word[d1].clone(),
        });
    }
    FPGroupoid::new(objects, generators, relations).map_err(|e| bad(e.to_string()))
}

/// Default coset budget for [`normalize_fp`].
pub const COSET_BUDGET: usize = 10_000;

/// A finite groupoid equivalent to a presentation, with the comparison data.
#[derive(Debug, Clone)]
pub struct NormalizedGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Arrow of `groupoid` assigned to each generator.
    pub generator_images: Vec<usize>,
    /// A word in the generators for each arrow of `groupoid`.
    pub arrow_words: Vec<FpWord>,
    /// Order of the vertex group of each connected component.
    pub vertex_group_orders: Vec<usize>,
}

impl NormalizedGroupoid {
    /// Value of a word read from `src`.
    pub fn evaluate(&self, src: usize, w: &[FpLetter]) -> Result<usize> {
        let g = &self.groupoid;
        let mut acc = g.identity(src);
        for &l in w.iter().rev() {
            let a = self.generator_images[l.gen];
            let a = if l.inv { g.inverse(a) } else { a };
            acc = g.compose(a, acc)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone)]
pub enum Normalization {
    Finite(Box<NormalizedGroupoid>),
    /// Coset enumeration for the vertex group at `root` ran past `budget`.
    NotFiniteWithinBound {
        budget: usize,
        root: String,
    },
}

impl Normalization {
    pub fn finite(self) -> Result<NormalizedGroupoid> {
        match self {
            Normalization::Finite(n) => Ok(*n),
            Normalization::NotFiniteWithinBound { budget, .. } => Err(Error::NotFiniteWithinBound { budget }),
        }
    }
}

/// Reduces each connected component to a presentation of its vertex group
/// along a breadth-first spanning tree, then enumerates that group by
/// Hasse–Lindemann–Todd coset enumeration with at most `budget` cosets.
pub fn normalize_fp(p: &FPGroupoid, budget: usize) -> Result<Normalization> {
    if budget == 0 {
        return Err(Error::InvalidParams("coset budget must be positive".into()));
    }
    let n = p.objects.len();
    let ng = p.generators.len();
    // Spanning forest: tree_word[x] runs from the component root to x.
    let mut comp = vec![usize::MAX; n];
    let mut tree_word: Vec<FpWord> = vec![Vec::new(); n];
    let mut is_tree = vec![false; ng];
    let mut roots = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = roots.len();
        roots.push(start);
        comp[start] = c;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for k in 0..ng {
                for l in [FpLetter::new(k), FpLetter::new(k).inverse()] {
                    let (s, t) = p.letter_ends(l);
                    if s == x && comp[t] == usize::MAX {
                        comp[t] = c;
                        is_tree[k] = true;
                        let mut w = vec![l];
                        w.extend(&tree_word[x]);
                        tree_word[t] = w;
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    // Loop generators of each component's vertex group.
    let mut loop_index = vec![usize::MAX; ng];
    let mut loops: Vec<Vec<usize>> = vec![Vec::new(); roots.len()];
    for k in 0..ng {
        if !is_tree[k] {
            let c = comp[p.ends[k].0];
            loop_index[k] = loops[c].len();
            loops[c].push(k);
        }
    }
    let to_group = |w: &[FpLetter]| -> Vec<usize> {
        w.iter()
            .filter(|l| !is_tree[l.gen])
            .map(|l| 2 * loop_index[l.gen] + usize::from(l.inv))
            .collect()
    };
    let mut relators: Vec<Vec<Vec<usize>>> = vec![Vec::new(); roots.len()];
    for r in &p.relations {
        let mut w = to_group(&r.lhs);
        w.extend(to_group(&inverse_word(&r.rhs)));
        let w = reduce_columns(&w);
        if !w.is_empty() {
            relators[comp[r.src]].push(w);
        }
    }
    let mut groups = Vec::with_capacity(roots.len());
    for c in 0..roots.len() {
        match enumerate_cosets(loops[c].len(), &relators[c], budget) {
            Some(g) => groups.push(g),
            None => {
                return Ok(Normalization::NotFiniteWithinBound {
                    budget,
                    root: p.objects[roots[c]].clone(),
                })
            }
        }
    }

    // Arrows (x, y, h) for x, y in one component and h in its vertex group.
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if comp[x] == comp[y] {
                for h in 0..groups[comp[x]].order() {
                    triples.push((x, y, h));
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let expand_loop = |c: usize, col: usize| -> FpWord {
        let k = loops[c][col / 2];
        let (a, b) = p.ends[k];
        let mut w = inverse_word(&tree_word[b]);
        w.push(FpLetter::new(k));
        w.extend(&tree_word[a]);
        if col % 2 == 1 {
            inverse_word(&w)
        } else {
            w
        }
    };
    let group_word_name = |c: usize, h: usize| -> String {
        groups[c].reps[h]
            .iter()
            .map(|&col| {
                let name = &p.generators[loops[c][col / 2]].name;
                if col % 2 == 1 {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    };
    let mut arrows = Vec::with_capacity(triples.len());
    let mut arrow_words = Vec::with_capacity(triples.len());
    for &(x, y, h) in &triples {
        let c = comp[x];
        let (ox, oy) = (&p.objects[x], &p.objects[y]);
        let name = if x == y && h == 0 {
            format!("id_{ox}")
        } else if groups[c].order() == 1 {
            format!("{ox}->{oy}")
        } else if h == 0 {
            format!("{ox}->{oy}:1")
        } else {
            format!("{ox}->{oy}:{}", group_word_name(c, h))
        };
        arrows.push((name, x, y));
        let mut w = tree_word[y].clone();
        for &col in &groups[c].reps[h] {
            w.extend(expand_loop(c, col));
        }
        w.extend(inverse_word(&tree_word[x]));
        arrow_words.push(reduce_word(&w));
    }
    let groupoid = FiniteGroupoid::from_fns(
        p.objects.clone(),
        arrows,
        |a| {
            let (x, y, h) = triples[a];
            index[&(y, x, groups[comp[x]].inverse(h))]
        },
        |g, f| {
            let ((_, z, h2), (x, _, h1)) = (triples[g], triples[f]);
            index[&(x, z, groups[comp[x]].multiply(h2, h1))]
        },
    )?;
    let generator_images = (0..ng)
        .map(|k| {
            let (a, b) = p.ends[k];
            let h = if is_tree[k] {
                0
            } else {
                groups[comp[a]].table[0][2 * loop_index[k]]
            };
            index[&(a, b, h)]
        })
        .collect();
    Ok(Normalization::Finite(Box::new(NormalizedGroupoid {
        groupoid,
        generator_images,
        arrow_words,
        vertex_group_orders: groups.iter().map(FiniteGroup::order).collect(),
    })))
}

fn reduce_columns(w: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&(x ^ 1)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // Cyclic reduction.
    let (mut i, mut j) = (0, out.len());
    while j > i + 1 && out[i] == out[j - 1] ^ 1 {
        i += 1;
        j -= 1;
    }
    out[i..j].to_vec()
}

/// A finite group from a complete coset table over the trivial subgroup.
/// Column `2j` is generator `j`, column `2j + 1` its inverse; element 0 is
/// the identity and `table[a][x]` is `a · x`.
struct FiniteGroup {
    table: Vec<Vec<usize>>,
    /// Shortest-first representative word of each element.
    reps: Vec<Vec<usize>>,
}

impl FiniteGroup {
    fn order(&self) -> usize {
        self.table.len()
    }

    fn act(&self, mut a: usize, word: &[usize]) -> usize {
        for &x in word {
            a = self.table[a][x];
        }
        a
    }

    /// `a · b`.
    fn multiply(&self, a: usize, b: usize) -> usize {
        self.act(a, &self.reps[b])
    }

    fn inverse(&self, a: usize) -> usize {
        let w: Vec<usize> = self.reps[a].iter().rev().map(|&x| x ^ 1).collect();
        self.act(0, &w)
    }
}

const NONE: usize = usize::MAX;

struct CosetTable {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    defined: usize,
    budget: usize,
}

struct BudgetExceeded;

impl CosetTable {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> std::result::Result<(), BudgetExceeded> {
        if self.defined >= self.budget {
            return Err(BudgetExceeded);
        }
        self.defined += 1;
        let n = self.table.len();
        let cols = self.table[c].len();
        self.table.push(vec![NONE; cols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][x ^ 1] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, lose) = (a.min(b), a.max(b));
        self.parent[lose] = keep;
        queue.push(lose);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.table[e].len() {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][x ^ 1] = NONE;
                let (m, n) = (self.rep(e), self.rep(f));
                if self.table[m][x] != NONE {
                    let t = self.table[m][x];
                    self.merge(n, t, &mut queue);
                } else if self.table[n][x ^ 1] != NONE {
                    let t = self.table[n][x ^ 1];
                    self.merge(m, t, &mut queue);
                } else {
                    self.table[m][x] = n;
                    self.table[n][x ^ 1] = m;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> std::result::Result<(), BudgetExceeded> {
        let (mut f, mut b) = (c, c);
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][w[j - 1] ^ 1] != NONE {
                b = self.table[b][w[j - 1] ^ 1];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i + 1 {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// HLT enumeration of `⟨gens | relators⟩` over the trivial subgroup.
fn enumerate_cosets(gens: usize, relators: &[Vec<usize>], budget: usize) -> Option<FiniteGroup> {
    let cols = 2 * gens;
    let mut t = CosetTable {
        table: vec![vec![NONE; cols]],
        parent: vec![0],
        defined: 1,
        budget,
    };
    let mut c = 0;
    while c < t.table.len() {
        if t.live(c) {
            for r in relators {
                t.scan_and_fill(c, r).ok()?;
                if !t.live(c) {
                    break;
                }
            }
            if t.live(c) {
                for x in 0..cols {
                    if t.table[c][x] == NONE {
                        t.define(c, x).ok()?;
                    }
                }
            }
        }
        c += 1;
    }
    // Renumber live cosets breadth first from the identity.
    let mut order = vec![NONE; t.table.len()];
    let mut reps: Vec<Vec<usize>> = vec![Vec::new()];
    let mut seq = vec![0];
    order[0] = 0;
    let mut k = 0;
    while k < seq.len() {
        let a = seq[k];
        for x in 0..cols {
            let b = t.rep(t.table[a][x]);
            if order[b] == NONE {
                order[b] = seq.len();
                let mut w = reps[k].clone();
                w.push(x);
                reps.push(w);
                seq.push(b);
            }
        }
        k += 1;
    }
    let table = seq
        .iter()
        .map(|&a| (0..cols).map(|x| order[t.rep(t.table[a][x])]).collect())
        .collect();
    Some(FiniteGroup { table, reps })
}
