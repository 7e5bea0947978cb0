//! Twist regions and maximal twist region selections.
//!
//! Two-strand regions are found automatically as maximal chains of bigon
//! faces. Regions of three or more strands are supplied as annotations and
//! checked combinatorially: crossing count, sign, boundary strand count and
//! the pairwise crossing pattern of a braid of half twists.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagram::{compute_faces, Corner, Dart, Diagram, DiagramError, Sign, UnionFind};
use crate::map::PlanarMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionSign {
    Positive,
    Negative,
    Mixed,
}

impl RegionSign {
    fn of(signs: impl IntoIterator<Item = Sign>) -> RegionSign {
        let mut seen = (false, false);
        for s in signs {
            match s {
                Sign::Positive => seen.0 = true,
                Sign::Negative => seen.1 = true,
            }
        }
        match seen {
            (true, false) => RegionSign::Positive,
            (false, true) => RegionSign::Negative,
            _ => RegionSign::Mixed,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            RegionSign::Positive => 1,
            RegionSign::Negative => -1,
            RegionSign::Mixed => 0,
        }
    }

    pub fn as_sign(self) -> Option<Sign> {
        match self {
            RegionSign::Positive => Some(Sign::Positive),
            RegionSign::Negative => Some(Sign::Negative),
            RegionSign::Mixed => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionSource {
    /// A maximal bigon chain found in the diagram.
    Detected,
    /// Annotation number `n` of the input.
    Annotated(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistRegion {
    pub id: usize,
    pub crossing_ids: BTreeSet<usize>,
    pub strand_count: usize,
    pub half_twists: usize,
    pub sign: RegionSign,
    pub source: RegionSource,
}

impl TwistRegion {
    pub fn is_alternating(&self) -> bool {
        self.sign != RegionSign::Mixed
    }

    /// Crossings in one half twist of this region.
    pub fn crossings_per_half_twist(&self) -> usize {
        self.strand_count * (self.strand_count - 1) / 2
    }
}

/// A user-declared generalized twist region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionAnnotation {
    pub crossing_ids: BTreeSet<usize>,
    pub strand_count: usize,
    pub declared_half_twists: usize,
}

/// A partition of every crossing of a diagram into twist regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSelection {
    regions: Vec<TwistRegion>,
    crossing_count: usize,
    fingerprint: u64,
}

impl TwistSelection {
    pub fn regions(&self) -> &[TwistRegion] {
        &self.regions
    }

    /// Number of regions, tw(D).
    pub fn tw(&self) -> usize {
        self.regions.len()
    }

    pub fn region_of(&self, crossing: usize) -> Option<&TwistRegion> {
        self.regions
            .iter()
            .find(|r| r.crossing_ids.contains(&crossing))
    }

    /// Whether this selection was built for `d`.
    pub fn belongs_to(&self, d: &Diagram) -> bool {
        self.crossing_count == d.crossing_count() && self.fingerprint == fingerprint(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("strand count must be at least 2, found {0}")]
    StrandCount(usize),
    #[error("a region needs at least one half-twist")]
    NoHalfTwists,
    #[error("crossing {0} does not exist")]
    UnknownCrossing(usize),
    #[error("expected {expected} crossings ({half_twists} half-twists of {strands} strands), found {found}")]
    CrossingCount {
        expected: usize,
        found: usize,
        strands: usize,
        half_twists: usize,
    },
    #[error("crossing signs are mixed: positive {positive:?}, negative {negative:?}")]
    MixedSigns {
        positive: Vec<usize>,
        negative: Vec<usize>,
    },
    #[error("expected {expected} strand ends leaving the region, found {found}")]
    Boundary { expected: usize, found: usize },
    #[error("a strand closes up inside the region through crossings {0:?}")]
    ClosedStrand(Vec<usize>),
    #[error("crossing {0} is a self-crossing of one strand of the region")]
    SelfCrossing(usize),
    #[error("strands {first} and {second} cross {found} times, expected {expected}")]
    PairCrossings {
        first: usize,
        second: usize,
        found: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("annotation {index}: {error}")]
    Annotation {
        index: usize,
        error: AnnotationError,
    },
    #[error("annotations {first} and {second} overlap in crossings {crossings:?}")]
    Overlap {
        first: usize,
        second: usize,
        crossings: Vec<usize>,
    },
    #[error("twist region on crossings {crossings:?} is not alternating; reduce it first")]
    NonAlternating { crossings: Vec<usize> },
    #[error("twist region on crossings {crossings:?} is already alternating")]
    AlreadyAlternating { crossings: Vec<usize> },
    #[error("crossings {crossings:?} do not form a chain of bigons")]
    NotAChain { crossings: Vec<usize> },
    #[error(
        "cancelling crossings leaves {loops} crossingless component(s) that a PD code cannot carry"
    )]
    FreeLoops { loops: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A face of degree two whose corners lie at two distinct crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bigon {
    pub corners: [Corner; 2],
}

pub fn bigons(d: &Diagram) -> Vec<Bigon> {
    compute_faces(d)
        .into_iter()
        .filter(|f| f.degree() == 2 && f.boundary[0].crossing != f.boundary[1].crossing)
        .map(|f| Bigon {
            corners: [f.boundary[0], f.boundary[1]],
        })
        .collect()
}

/// Maximal bigon chains, each a two-strand twist region.
///
/// Crossings touching no bigon become one-crossing regions. Regions are
/// ordered by their smallest crossing id.
pub fn detect_bigon_chains(d: &Diagram) -> Vec<TwistRegion> {
    detect_within(d, |_| true)
}

fn detect_within(d: &Diagram, allowed: impl Fn(usize) -> bool) -> Vec<TwistRegion> {
    let n = d.crossing_count();
    let mut uf = UnionFind::new(n);
    for b in bigons(d) {
        let (x, y) = (b.corners[0].crossing, b.corners[1].crossing);
        if allowed(x) && allowed(y) {
            uf.union(x, y);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for x in (0..n).filter(|&x| allowed(x)) {
        groups.entry(uf.find(x)).or_default().insert(x);
    }
    let mut sets: Vec<BTreeSet<usize>> = groups.into_values().collect();
    sets.sort_by_key(|s| *s.iter().next().unwrap());
    sets.into_iter()
        .enumerate()
        .map(|(id, crossing_ids)| TwistRegion {
            id,
            half_twists: crossing_ids.len(),
            sign: RegionSign::of(crossing_ids.iter().map(|&x| d.crossing(x).sign)),
            crossing_ids,
            strand_count: 2,
            source: RegionSource::Detected,
        })
        .collect()
}

/// One crossing of an ordered bigon chain together with the corner facing
/// the next crossing. For the last crossing of an open chain this is the
/// free end corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLink {
    pub crossing: usize,
    pub next_corner: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub links: Vec<ChainLink>,
    pub cyclic: bool,
}

/// Orders the crossings of a two-strand region along its bigons.
///
/// Open chains start at the end with the smaller crossing id; closed
/// chains start at their smallest crossing.
pub fn chain_of(d: &Diagram, members: &BTreeSet<usize>) -> Result<Chain, TwistError> {
    let not_chain = || TwistError::NotAChain {
        crossings: members.iter().copied().collect(),
    };
    let faces = compute_faces(d);
    let mut face_of: BTreeMap<Corner, usize> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &c in &f.boundary {
            face_of.insert(c, i);
        }
    }
    let bigon_at = |x: usize, k: usize| -> Option<Corner> {
        let f = &faces[face_of[&Corner {
            crossing: x,
            index: k,
        }]];
        if f.degree() != 2 {
            return None;
        }
        let other = if f.boundary[0].crossing == x && f.boundary[0].index == k {
            f.boundary[1]
        } else {
            f.boundary[0]
        };
        (other.crossing != x && members.contains(&other.crossing)).then_some(other)
    };

    if members.len() == 1 {
        let x = *members.iter().next().unwrap();
        let k = (0..4)
            .find(|&k| d.partner(Dart::new(x, k)) != Dart::new(x, k + 1))
            .unwrap_or(0);
        return Ok(Chain {
            links: vec![ChainLink {
                crossing: x,
                next_corner: k,
            }],
            cyclic: false,
        });
    }

    for &start in members {
        for k in 0..4 {
            if bigon_at(start, k).is_none() {
                continue;
            }
            let mut links = vec![ChainLink {
                crossing: start,
                next_corner: k,
            }];
            let mut visited = BTreeSet::from([start]);
            let mut cyclic = false;
            let mut ok = true;
            let (mut x, mut kx) = (start, k);
            while let Some(other) = bigon_at(x, kx) {
                if other.crossing == start {
                    cyclic = other.index == (k + 2) % 4;
                    ok = cyclic;
                    break;
                }
                if !visited.insert(other.crossing) {
                    ok = false;
                    break;
                }
                let next = (other.index + 2) % 4;
                links.push(ChainLink {
                    crossing: other.crossing,
                    next_corner: next,
                });
                x = other.crossing;
                kx = next;
            }
            if ok && visited.len() == members.len() {
                return Ok(Chain { links, cyclic });
            }
        }
    }
    Err(not_chain())
}

/// Result of cancelling opposite-sign crossing pairs in a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub diagram: Diagram,
    /// New id of every old crossing, `None` for cancelled ones.
    pub crossing_map: Vec<Option<usize>>,
    pub cancelled_pairs: usize,
}

/// Cancels adjacent opposite-sign crossings of a non-alternating bigon
/// chain by Reidemeister II moves until the chain is alternating.
pub fn reduce_twist_region(d: &Diagram, region: &TwistRegion) -> Result<Reduction, TwistError> {
    let crossings: Vec<usize> = region.crossing_ids.iter().copied().collect();
    if region.is_alternating() {
        return Err(TwistError::AlreadyAlternating { crossings });
    }
    let chain = chain_of(d, &region.crossing_ids)?;
    let mut map = PlanarMap::from_diagram(d);
    let mut links = chain.links;
    let cyclic = chain.cyclic;
    let sign_of = |l: &ChainLink| d.crossing(l.crossing).sign;
    let mut loops = 0;
    let mut cancelled = 0;
    loop {
        let len = links.len();
        let pairs = if cyclic && len > 2 {
            len
        } else {
            len.saturating_sub(1)
        };
        let Some(j) = (0..pairs).find(|&j| sign_of(&links[j]) != sign_of(&links[(j + 1) % len]))
        else {
            break;
        };
        let (first, second) = (links[j], links[(j + 1) % len]);
        let pass = bigon_passthrough(&map, first.crossing, first.next_corner, second.crossing)
            .ok_or_else(|| TwistError::NotAChain {
                crossings: crossings.clone(),
            })?;
        loops += map.splice_out(&[first.crossing, second.crossing], &pass);
        cancelled += 1;
        links.retain(|l| l.crossing != first.crossing && l.crossing != second.crossing);
    }
    let diagram = if map.alive_count() == 0 && loops == 1 {
        Diagram::unknot().with_name(d.name().map(str::to_owned))
    } else if loops > 0 {
        return Err(TwistError::FreeLoops { loops });
    } else {
        map.export(d.name().map(str::to_owned))?.diagram
    };
    let mut crossing_map = vec![None; d.crossing_count()];
    for (new, old) in map.alive().enumerate() {
        crossing_map[old] = Some(new);
    }
    Ok(Reduction {
        diagram,
        crossing_map,
        cancelled_pairs: cancelled,
    })
}

/// Strand pass-through for removing vertices `x` and `y` that share the
/// bigon at corner `corner` of `x`.
pub(crate) fn bigon_passthrough(
    map: &PlanarMap,
    x: usize,
    corner: usize,
    y: usize,
) -> Option<BTreeMap<Dart, Dart>> {
    let a = Dart::new(x, corner);
    let b = Dart::new(x, corner + 1);
    let (qa, qb) = (map.partner(a), map.partner(b));
    if qa.crossing != y || qb.crossing != y {
        return None;
    }
    let mut pass = BTreeMap::new();
    for (from, to) in [(a.opposite(), qa.opposite()), (b.opposite(), qb.opposite())] {
        pass.insert(from, to);
        pass.insert(to, from);
    }
    Some(pass)
}

/// Segments of the strands running through a crossing set, each a list of
/// (crossing, strand axis) passages, together with the boundary darts.
struct Strands {
    boundary: Vec<Dart>,
    segments: Vec<Vec<(usize, usize)>>,
}

fn trace_strands(d: &Diagram, region: &BTreeSet<usize>) -> Strands {
    let mut boundary = Vec::new();
    for &x in region {
        for s in 0..4 {
            let dart = Dart::new(x, s);
            if !region.contains(&d.partner(dart).crossing) {
                boundary.push(dart);
            }
        }
    }
    let mut used = BTreeSet::new();
    let mut segments = Vec::new();
    for &b in &boundary {
        if used.contains(&b) {
            continue;
        }
        used.insert(b);
        let mut seg = Vec::new();
        let mut enter = b;
        loop {
            seg.push((enter.crossing, enter.slot % 2));
            let exit = enter.opposite();
            if !region.contains(&d.partner(exit).crossing) {
                used.insert(exit);
                break;
            }
            enter = d.partner(exit);
        }
        segments.push(seg);
    }
    Strands { boundary, segments }
}

/// Checks an annotated generalized twist region.
///
/// Beyond the counts (c half-twists of m strands use c·m(m−1)/2 crossings,
/// 2m strand ends leave the region, one sign throughout) the strands
/// through the region are traced: there must be no closed strand and no
/// self-crossing, and every pair of strands must cross exactly c times, as
/// in a braid of c half twists. Two-strand regions that form a bigon chain
/// are accepted as they are, closed chains included.
pub fn validate_generalized_region(
    d: &Diagram,
    a: &RegionAnnotation,
) -> Result<TwistRegion, AnnotationError> {
    let m = a.strand_count;
    let c = a.declared_half_twists;
    if m < 2 {
        return Err(AnnotationError::StrandCount(m));
    }
    if c == 0 {
        return Err(AnnotationError::NoHalfTwists);
    }
    if let Some(&x) = a.crossing_ids.iter().find(|&&x| x >= d.crossing_count()) {
        return Err(AnnotationError::UnknownCrossing(x));
    }
    let expected = c * m * (m - 1) / 2;
    if a.crossing_ids.len() != expected {
        return Err(AnnotationError::CrossingCount {
            expected,
            found: a.crossing_ids.len(),
            strands: m,
            half_twists: c,
        });
    }
    let sign = RegionSign::of(a.crossing_ids.iter().map(|&x| d.crossing(x).sign));
    if sign == RegionSign::Mixed {
        let (positive, negative): (Vec<usize>, Vec<usize>) = a
            .crossing_ids
            .iter()
            .partition(|&&x| d.crossing(x).sign == Sign::Positive);
        return Err(AnnotationError::MixedSigns { positive, negative });
    }
    let region = TwistRegion {
        id: 0,
        crossing_ids: a.crossing_ids.clone(),
        strand_count: m,
        half_twists: c,
        sign,
        source: RegionSource::Detected,
    };
    // a closed chain has no boundary ends but is still a twist region
    if m == 2 && chain_of(d, &a.crossing_ids).is_ok() {
        return Ok(region);
    }
    let strands = trace_strands(d, &a.crossing_ids);
    if strands.boundary.len() != 2 * m {
        return Err(AnnotationError::Boundary {
            expected: 2 * m,
            found: strands.boundary.len(),
        });
    }
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, seg) in strands.segments.iter().enumerate() {
        for &p in seg {
            owner.insert(p, i);
        }
    }
    let missing: Vec<usize> = a
        .crossing_ids
        .iter()
        .copied()
        .filter(|&x| !owner.contains_key(&(x, 0)) || !owner.contains_key(&(x, 1)))
        .collect();
    if !missing.is_empty() {
        return Err(AnnotationError::ClosedStrand(missing));
    }
    let mut pair_count = vec![vec![0usize; m]; m];
    for &x in &a.crossing_ids {
        let (s, t) = (owner[&(x, 0)], owner[&(x, 1)]);
        if s == t {
            return Err(AnnotationError::SelfCrossing(x));
        }
        pair_count[s.min(t)][s.max(t)] += 1;
    }
    for s in 0..m {
        for t in s + 1..m {
            if pair_count[s][t] != c {
                return Err(AnnotationError::PairCrossings {
                    first: s,
                    second: t,
                    found: pair_count[s][t],
                    expected: c,
                });
            }
        }
    }
    Ok(region)
}

/// Builds a maximal twist region selection: annotated regions first, the
/// rest covered by bigon chains among the unannotated crossings.
pub fn build_selection(
    d: &Diagram,
    annotations: &[RegionAnnotation],
) -> Result<TwistSelection, TwistError> {
    d.require_connected()?;
    for i in 0..annotations.len() {
        for j in i + 1..annotations.len() {
            let shared: Vec<usize> = annotations[i]
                .crossing_ids
                .intersection(&annotations[j].crossing_ids)
                .copied()
                .collect();
            if !shared.is_empty() {
                return Err(TwistError::Overlap {
                    first: i,
                    second: j,
                    crossings: shared,
                });
            }
        }
    }
    let mut regions = Vec::new();
    for (index, a) in annotations.iter().enumerate() {
        let mut r = validate_generalized_region(d, a)
            .map_err(|error| TwistError::Annotation { index, error })?;
        r.source = RegionSource::Annotated(index);
        regions.push(r);
    }
    let annotated: BTreeSet<usize> = annotations
        .iter()
        .flat_map(|a| a.crossing_ids.iter().copied())
        .collect();
    for r in detect_within(d, |x| !annotated.contains(&x)) {
        if !r.is_alternating() {
            return Err(TwistError::NonAlternating {
                crossings: r.crossing_ids.into_iter().collect(),
            });
        }
        regions.push(r);
    }
    regions.sort_by_key(|r| *r.crossing_ids.iter().next().unwrap());
    for (id, r) in regions.iter_mut().enumerate() {
        r.id = id;
    }
    let covered: usize = regions.iter().map(|r| r.crossing_ids.len()).sum();
    assert_eq!(
        covered,
        d.crossing_count(),
        "twist regions must partition the crossings"
    );
    Ok(TwistSelection {
        regions,
        crossing_count: d.crossing_count(),
        fingerprint: fingerprint(d),
    })
}

/// A diagram with every non-alternating unannotated bigon chain reduced,
/// and the annotations renumbered to match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepared {
    pub diagram: Diagram,
    pub annotations: Vec<RegionAnnotation>,
    pub reductions: Vec<Reduction>,
}

pub fn reduce_to_alternating(
    d: &Diagram,
    annotations: &[RegionAnnotation],
) -> Result<Prepared, TwistError> {
    let mut diagram = d.clone();
    let mut annotations = annotations.to_vec();
    let mut reductions = Vec::new();
    loop {
        let annotated: BTreeSet<usize> = annotations
            .iter()
            .flat_map(|a| a.crossing_ids.iter().copied())
            .collect();
        let Some(region) = detect_within(&diagram, |x| !annotated.contains(&x))
            .into_iter()
            .find(|r| !r.is_alternating())
        else {
            break;
        };
        let red = reduce_twist_region(&diagram, &region)?;
        for a in &mut annotations {
            a.crossing_ids = a
                .crossing_ids
                .iter()
                .map(|&x| red.crossing_map[x].expect("annotated crossings survive reduction"))
                .collect();
        }
        diagram = red.diagram.clone();
        reductions.push(red);
    }
    Ok(Prepared {
        diagram,
        annotations,
        reductions,
    })
}

/// FNV-1a over the PD code.
pub(crate) fn fingerprint(d: &Diagram) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in d.crossings() {
        for &a in &c.arcs {
            for b in a.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}
