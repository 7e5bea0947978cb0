//! Generalized augmentation: one crossing circle per twist region, full
//! twists removed, at most one half twist left behind.
//!
//! Two-strand regions that form a bigon chain are edited in place: the
//! circle goes around the two strands at the free end of the chain and
//! crossings are cancelled in consecutive pairs, so an odd region keeps its
//! last original crossing. Other regions are cut out along their boundary
//! and replaced by a fresh tangle: a circle around m parallel strands,
//! followed by one half twist Δ when c is odd.
//!
//! Export convention: the circle crosses each strand twice, over on the
//! side nearer the region and under on the far side.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagram::{link_components, Dart, Diagram, DiagramError};
use crate::map::{Grid, PlanarMap};
use crate::twist::{
    bigon_passthrough, chain_of, fingerprint, Chain, RegionSign, TwistRegion, TwistSelection,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("diagram has no twist regions to augment")]
    NoRegions,
    #[error("selection was built for a different diagram")]
    SelectionMismatch,
    #[error("region {region} is not a disk tangle")]
    NotDisk { region: usize },
    #[error("strands of region {region} do not connect like {half_twists} half-twists")]
    Pairing { region: usize, half_twists: usize },
    #[error("augmentation leaves {loops} crossingless loop(s)")]
    FreeLoops { loops: usize },
    #[error("augmented diagram is invalid: {0}")]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingCircle {
    /// 1-based circle number.
    pub id: usize,
    pub region_id: usize,
    /// Residual half-twist flag, c mod 2.
    pub epsilon: u8,
    pub strand_count: usize,
    pub half_twists: u64,
    /// Full twists restored by the filling, |n|.
    pub filling_n: u64,
    pub sign: RegionSign,
    /// Component index of the circle in the exported diagram.
    pub component: usize,
    /// Crossings of the exported diagram on this circle.
    pub crossing_ids: Vec<usize>,
}

impl CrossingCircle {
    /// Curves of the reflection surface on the boundary of this circle's
    /// cusp.
    pub fn reflection_curves(&self) -> u8 {
        2 - self.epsilon
    }
}

/// The components of K once the full twists are gone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatComponents {
    pub component_count: usize,
    /// Residual crossings per circle, as ids of the exported diagram.
    pub residual: Vec<Vec<usize>>,
}

impl FlatComponents {
    pub fn crossing_count(&self) -> usize {
        self.residual.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedLink {
    circles: Vec<CrossingCircle>,
    flat: FlatComponents,
    diagram: Diagram,
    removed: Vec<usize>,
    source: u64,
}

impl AugmentedLink {
    pub fn circles(&self) -> &[CrossingCircle] {
        &self.circles
    }

    pub fn flat_components(&self) -> &FlatComponents {
        &self.flat
    }

    /// PD export of the augmented link.
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn tw(&self) -> usize {
        self.circles.len()
    }

    /// Original crossings deleted for each circle.
    pub fn removed_crossings(&self) -> &[usize] {
        &self.removed
    }

    pub fn half_twists(&self) -> Vec<u64> {
        self.circles.iter().map(|c| c.half_twists).collect()
    }

    pub fn is_from(&self, sel: &TwistSelection, d: &Diagram) -> bool {
        sel.belongs_to(d) && self.source == fingerprint(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionData {
    /// Curves of P ∩ ∂N(C_i), by circle.
    pub curve_counts: Vec<u8>,
}

impl ReflectionData {
    /// Every circle meets the surface in two curves, so the fixed surface
    /// is the projection plane.
    pub fn is_planar(&self) -> bool {
        self.curve_counts.iter().all(|&n| n == 2)
    }
}

pub fn reflection_data(al: &AugmentedLink) -> ReflectionData {
    ReflectionData {
        curve_counts: al
            .circles
            .iter()
            .map(CrossingCircle::reflection_curves)
            .collect(),
    }
}

/// Filling coefficient and residual flag for c half twists.
pub fn filling_slope(c: u64) -> (u64, u8) {
    if c.is_multiple_of(2) {
        (c / 2, 0)
    } else {
        (c.div_ceil(2), 1)
    }
}

/// Half twists restored by filling with coefficient n at a circle with
/// residual flag ε.
pub fn half_twists_from_filling(n: u64, epsilon: u8) -> u64 {
    if epsilon == 0 {
        2 * n
    } else {
        2 * n - 1
    }
}

struct Placed {
    /// Circle vertices with the slot the circle occupies there.
    circle: Vec<(usize, usize)>,
    residual: Vec<usize>,
}

pub fn augment(d: &Diagram, sel: &TwistSelection) -> Result<AugmentedLink, AugmentError> {
    if !sel.belongs_to(d) {
        return Err(AugmentError::SelectionMismatch);
    }
    if sel.tw() == 0 {
        return Err(AugmentError::NoRegions);
    }
    d.require_connected()?;
    let mut map = PlanarMap::from_diagram(d);
    let mut placed = Vec::with_capacity(sel.tw());
    let mut loops = 0;
    for region in sel.regions() {
        let chain = (region.strand_count == 2)
            .then(|| chain_of(d, &region.crossing_ids).ok())
            .flatten();
        let p = match chain {
            Some(chain) => along_chain(&mut map, chain, &mut loops)?,
            None => regenerate(&mut map, d, region)?,
        };
        placed.push(p);
    }
    if loops > 0 {
        return Err(AugmentError::FreeLoops { loops });
    }
    let name = d.name().map(|n| format!("{n}-augmented"));
    let export = map.export(name)?;
    let crossing_of: BTreeMap<usize, usize> = export
        .order
        .iter()
        .enumerate()
        .map(|(id, &v)| (v, id))
        .collect();
    let comps = link_components(&export.diagram);
    let mut circles = Vec::with_capacity(placed.len());
    let mut residual = Vec::with_capacity(placed.len());
    for (i, (p, region)) in placed.iter().zip(sel.regions()).enumerate() {
        let (v, slot) = p.circle[0];
        let label = export.labels[&Dart::new(v, slot)];
        let c = region.half_twists as u64;
        let (n, epsilon) = filling_slope(c);
        let mut ids: Vec<usize> = p.circle.iter().map(|(v, _)| crossing_of[v]).collect();
        ids.sort_unstable();
        circles.push(CrossingCircle {
            id: i + 1,
            region_id: region.id,
            epsilon,
            strand_count: region.strand_count,
            half_twists: c,
            filling_n: n,
            sign: region.sign,
            component: comps.assignment[&label],
            crossing_ids: ids,
        });
        let mut res: Vec<usize> = p.residual.iter().map(|v| crossing_of[v]).collect();
        res.sort_unstable();
        residual.push(res);
    }
    let circle_components: BTreeSet<usize> = circles.iter().map(|c| c.component).collect();
    let flat = FlatComponents {
        component_count: comps.component_count - circle_components.len(),
        residual,
    };
    let removed = sel
        .regions()
        .iter()
        .zip(&flat.residual)
        .map(|(r, res)| r.crossing_ids.len() - res.len())
        .collect();
    Ok(AugmentedLink {
        circles,
        flat,
        diagram: export.diagram,
        removed,
        source: fingerprint(d),
    })
}

fn along_chain(
    map: &mut PlanarMap,
    chain: Chain,
    loops: &mut usize,
) -> Result<Placed, AugmentError> {
    let last = *chain.links.last().unwrap();
    let u = Dart::new(last.crossing, last.next_corner);
    let v = u.ccw();
    let x2 = map.subdivide(u, 1);
    let x1 = map.subdivide(u, 0);
    let y2 = map.subdivide(v, 1);
    let y1 = map.subdivide(v, 0);
    // near ring over both strands, far ring under
    for (a, b) in [(x1, y1), (x2, y2)] {
        map.link(Dart::new(a, 1), Dart::new(b, 3));
    }
    map.link(Dart::new(y1, 1), Dart::new(y2, 1));
    map.link(Dart::new(x2, 3), Dart::new(x1, 3));
    for (w, into) in [(x1, 3), (y1, 3), (y2, 1), (x2, 1)] {
        map.set_incoming(Dart::new(w, into), true);
        map.set_incoming(Dart::new(w, into + 2), false);
    }
    let links = &chain.links;
    for pair in links.chunks_exact(2) {
        let pass = bigon_passthrough(map, pair[0].crossing, pair[0].next_corner, pair[1].crossing)
            .expect("consecutive chain crossings share a bigon");
        *loops += map.splice_out(&[pair[0].crossing, pair[1].crossing], &pass);
    }
    let residual = if links.len() % 2 == 1 {
        vec![last.crossing]
    } else {
        Vec::new()
    };
    Ok(Placed {
        circle: [x1, y1, y2, x2].into_iter().map(|w| (w, 1)).collect(),
        residual,
    })
}

/// Boundary darts of a region in counterclockwise order, each with the
/// number of outside corners up to the next one.
fn boundary_walk(d: &Diagram, region: &TwistRegion) -> Result<Vec<(Dart, usize)>, AugmentError> {
    let inside = |x: usize| region.crossing_ids.contains(&x);
    let boundary: BTreeSet<Dart> = region
        .crossing_ids
        .iter()
        .flat_map(|&x| (0..4).map(move |s| Dart::new(x, s)))
        .filter(|&dart| !inside(d.partner(dart).crossing))
        .collect();
    let start = *boundary
        .iter()
        .next()
        .ok_or(AugmentError::NotDisk { region: region.id })?;
    let mut walk = Vec::with_capacity(boundary.len());
    let mut cur = start;
    loop {
        let mut corners = 1;
        let mut next = cur.ccw();
        while inside(d.partner(next).crossing) {
            next = d.partner(next).ccw();
            corners += 1;
        }
        walk.push((cur, corners));
        cur = next;
        if cur == start || walk.len() > boundary.len() {
            break;
        }
    }
    if cur != start || walk.len() != boundary.len() {
        return Err(AugmentError::NotDisk { region: region.id });
    }
    Ok(walk)
}

fn regenerate(
    map: &mut PlanarMap,
    d: &Diagram,
    region: &TwistRegion,
) -> Result<Placed, AugmentError> {
    let m = region.strand_count;
    let c = region.half_twists;
    let walk = boundary_walk(d, region)?;
    if walk.len() != 2 * m {
        return Err(AugmentError::NotDisk { region: region.id });
    }
    let side = |s: usize| walk[(s + m - 1) % (2 * m)].1 + walk[(s + 2 * m - 1) % (2 * m)].1;
    let s = (0..m)
        .max_by_key(|&s| (side(s), std::cmp::Reverse(s)))
        .unwrap();
    let b: Vec<Dart> = (0..2 * m).map(|j| walk[(s + j) % (2 * m)].0).collect();

    // which boundary dart each strand leaves through
    let position: BTreeMap<Dart, usize> =
        b.iter().enumerate().map(|(j, &dart)| (dart, j)).collect();
    for (j, &dart) in b.iter().enumerate() {
        let mut cur = dart;
        let exit = loop {
            let out = cur.opposite();
            if position.contains_key(&out) {
                break out;
            }
            cur = d.partner(out);
        };
        let want = if c.is_multiple_of(2) {
            2 * m - 1 - j
        } else {
            (j + m) % (2 * m)
        };
        if position[&exit] != want {
            return Err(AugmentError::Pairing {
                region: region.id,
                half_twists: c,
            });
        }
    }

    let outer: Vec<Dart> = b.iter().map(|&dart| map.partner(dart)).collect();
    for &x in &region.crossing_ids {
        map.verts[x].alive = false;
    }
    let mut grid = Grid::new(m);
    let circle = grid.crossing_circle(map);
    let positive = region.sign != RegionSign::Negative;
    let mut residual = Vec::new();
    if c % 2 == 1 {
        for g in crate::braid::half_twist_word(m) {
            residual.push(grid.generator(map, g as usize - 1, positive));
        }
    }
    let ends = grid
        .boundary_ccw()
        .expect("every position is crossed by the circle");
    for (g, o) in ends.into_iter().zip(outer) {
        map.link(g, o);
    }
    map.complete_orientation();
    if let Some(want) = region.sign.as_sign() {
        let wrong = residual.iter().filter(|&&v| map.sign(v) != want).count();
        if 2 * wrong > residual.len() {
            for &v in &residual {
                map.flip_crossing(v);
            }
        }
    }
    Ok(Placed {
        circle: circle.into_iter().map(|v| (v, 0)).collect(),
        residual,
    })
}
