use std::collections::HashMap;

use super::groupoid::FiniteGroupoid;
use crate::sset::{FiniteSimplicialSet, Simplex};

/// The nerve up to `dim_cap`. An `n`-simplex is a composable string
/// `x₀ → x₁ → … → xₙ` named `g₁|g₂|…|gₙ`; `d₀` drops the first arrow, `dₙ`
/// the last, and the inner faces compose neighbours. Strings containing an
/// identity are flagged degenerate.
pub fn nerve(g: &FiniteGroupoid, dim_cap: usize) -> FiniteSimplicialSet {
    let mut strings: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim_cap + 1);
    strings.push(Vec::new());
    if dim_cap >= 1 {
        strings.push((0..g.arrow_count()).map(|a| vec![a]).collect());
    }
    for n in 2..=dim_cap {
        let next = strings[n - 1]
            .iter()
            .flat_map(|s| {
                let end = g.tgt(*s.last().expect("nonempty string"));
                (0..g.arrow_count()).filter(move |&a| g.src(a) == end).map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
        strings.push(next);
    }
    let index: Vec<HashMap<&[usize], usize>> = strings
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();
    let mut levels = vec![g
        .objects()
        .iter()
        .map(|o| Simplex {
            name: o.clone(),
            faces: Vec::new(),
            degenerate: false,
        })
        .collect::<Vec<_>>()];
    for n in 1..=dim_cap {
        let level = strings[n]
            .iter()
            .map(|s| {
                let faces = if n == 1 {
                    vec![g.tgt(s[0]), g.src(s[0])]
                } else {
                    (0..=n)
                        .map(|i| {
                            let face: Vec<usize> = if i == 0 {
                                s[1..].to_vec()
                            } else if i == n {
                                s[..n - 1].to_vec()
                            } else {
                                let mut f = s[..i - 1].to_vec();
                                f.push(g.compose(s[i], s[i - 1]).expect("string is composable"));
                                f.extend(&s[i + 1..]);
                                f
                            };
                            index[n - 1][face.as_slice()]
                        })
                        .collect()
                };
                Simplex {
                    name: s.iter().map(|&a| g.name(a)).collect::<Vec<_>>().join("|"),
                    faces,
                    degenerate: s.iter().any(|&a| g.is_identity(a)),
                }
            })
            .collect();
        levels.push(level);
    }
    FiniteSimplicialSet::new(dim_cap, levels).expect("nerve satisfies the simplicial identities")
}
