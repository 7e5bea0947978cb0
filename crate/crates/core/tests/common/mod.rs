//! Test support: label-only oracles and random diagram generators.
//!
//! The oracles read nothing but the PD quadruples, so they share no code
//! with the library's dart and face machinery.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use twistcert::braid::{braid_closure, half_twist_word};
use twistcert::diagram::Diagram;
use twistcert::twist::RegionAnnotation;

pub fn quads(d: &Diagram) -> Vec<[u32; 4]> {
    d.crossings().iter().map(|c| c.arcs).collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn groups(parent: &mut [usize]) -> Vec<Vec<usize>> {
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..parent.len() {
        let r = find(parent, x);
        by_root.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
    out.sort();
    out
}

/// Twist regions by brute force: crossings x ≠ y are joined when arcs
/// (a, b) are consecutive counterclockwise at x and appear as (b, a) at y.
pub fn oracle_regions(pd: &[[u32; 4]]) -> Vec<Vec<usize>> {
    let n = pd.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for x in 0..n {
        for k in 0..4 {
            let (a, b) = (pd[x][k], pd[x][(k + 1) % 4]);
            if a == b {
                continue;
            }
            for y in (0..n).filter(|&y| y != x) {
                for j in 0..4 {
                    if pd[y][j] == b && pd[y][(j + 1) % 4] == a {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        parent[rx] = ry;
                    }
                }
            }
        }
    }
    groups(&mut parent)
}

/// Number of faces: orbits of corners, where the corner after slot k at x
/// leads to the corner after the far end of the arc in slot k + 1.
pub fn oracle_face_count(pd: &[[u32; 4]]) -> usize {
    if pd.is_empty() {
        return 2;
    }
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, q) in pd.iter().enumerate() {
        for (s, &l) in q.iter().enumerate() {
            ends.entry(l).or_default().push((x, s));
        }
    }
    let far = |x: usize, s: usize| -> (usize, usize) {
        let e = &ends[&pd[x][s]];
        if e[0] == (x, s) {
            e[1]
        } else {
            e[0]
        }
    };
    let mut seen = vec![[false; 4]; pd.len()];
    let mut faces = 0;
    for x in 0..pd.len() {
        for k in 0..4 {
            if seen[x][k] {
                continue;
            }
            faces += 1;
            let (mut cx, mut ck) = (x, k);
            while !seen[cx][ck] {
                seen[cx][ck] = true;
                (cx, ck) = far(cx, (ck + 1) % 4);
            }
        }
    }
    faces
}

/// Link components: arcs meeting opposite slots of a crossing belong to
/// the same strand.
pub fn oracle_components(pd: &[[u32; 4]]) -> usize {
    if pd.is_empty() {
        return 1;
    }
    let labels: Vec<u32> = {
        let mut v: Vec<u32> = pd.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    for q in pd {
        for s in 0..2 {
            let (a, b) = (index[&q[s]], index[&q[s + 2]]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    groups(&mut parent).len()
}

/// A braid word on `strands` strands in which every generator occurs, so
/// the closure is connected.
pub fn connected_word(
    max_strands: usize,
    max_extra: usize,
) -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2..=max_strands).prop_flat_map(move |n| {
        let layer = proptest::collection::vec(any::<bool>(), n - 1);
        let extra = proptest::collection::vec((1..n as i32, any::<bool>()), 0..=max_extra);
        let order = any::<proptest::sample::Index>();
        (Just(n), layer, extra, order).prop_map(|(n, layer, extra, at)| {
            let mut word: Vec<i32> = extra
                .into_iter()
                .map(|(g, pos)| if pos { g } else { -g })
                .collect();
            let insert = at.index(word.len() + 1);
            let tail = word.split_off(insert);
            word.extend(layer.iter().enumerate().map(|(i, &pos)| {
                if pos {
                    i as i32 + 1
                } else {
                    -(i as i32 + 1)
                }
            }));
            word.extend(tail);
            (n, word)
        })
    })
}

pub fn closure(n: usize, word: &[i32]) -> Diagram {
    braid_closure(n, word).expect("connected words close up")
}

/// One block of c half twists of either handedness on m strands at the
/// left of n > m strands, followed by positive layers σ1…σ(n−1).
/// Returns the diagram and the block's annotation.
pub fn annotated_block() -> impl Strategy<Value = (Diagram, RegionAnnotation, usize, usize)> {
    let shape = (
        2usize..=5,
        1usize..=4,
        1usize..=3,
        1usize..=2,
        any::<bool>(),
    );
    shape.prop_map(|(m, c, spare, layers, positive)| {
        let n = m + spare;
        let sign = if positive { 1 } else { -1 };
        let delta: Vec<i32> = half_twist_word(m).into_iter().map(|g| sign * g).collect();
        let mut word = Vec::new();
        for _ in 0..c {
            word.extend(&delta);
        }
        let block = word.len();
        for _ in 0..layers {
            word.extend((1..n as i32).collect::<Vec<_>>());
        }
        let d = closure(n, &word);
        let ann = RegionAnnotation {
            crossing_ids: (0..block).collect(),
            strand_count: m,
            declared_half_twists: c,
        };
        (d, ann, m, c)
    })
}
