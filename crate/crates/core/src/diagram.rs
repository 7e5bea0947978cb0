//! Planar diagram (PD) codes and the 4-valent plane graph they describe.
//!
//! A crossing is a quadruple of arc labels listed counterclockwise, starting
//! with the incoming under-strand. Slots 0 and 2 carry the under-strand
//! (in, out), slots 1 and 3 the over-strand. The over-strand direction is
//! recovered by following link components; it fixes the crossing sign:
//! positive when the over-strand runs from slot 3 to slot 1.
//!
//! The cyclic order of the quadruple is the rotation system of the plane
//! graph, so faces come from the usual "turn at every vertex" traversal.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub type ArcLabel = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Positive => write!(f, "+1"),
            Sign::Negative => write!(f, "-1"),
        }
    }
}

/// One end of an arc: a crossing together with the slot (0..4) the arc occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub crossing: usize,
    pub slot: usize,
}

impl Dart {
    pub fn new(crossing: usize, slot: usize) -> Dart {
        Dart {
            crossing,
            slot: slot % 4,
        }
    }

    /// The slot on the far side of the crossing, i.e. where the strand continues.
    pub fn opposite(self) -> Dart {
        Dart::new(self.crossing, self.slot + 2)
    }

    pub fn ccw(self) -> Dart {
        Dart::new(self.crossing, self.slot + 1)
    }

    pub fn cw(self) -> Dart {
        Dart::new(self.crossing, self.slot + 3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub id: usize,
    pub arcs: [ArcLabel; 4],
    pub sign: Sign,
}

/// A corner of a crossing: the sector between slot `index` and slot `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub crossing: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<Corner>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.boundary.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMap {
    pub assignment: BTreeMap<ArcLabel, usize>,
    pub component_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("crossing {crossing}: expected 4 arc labels, found {found}")]
    NotQuadruple { crossing: usize, found: usize },
    #[error("crossing {crossing}: arc label {label} is not a positive integer")]
    InvalidLabel { crossing: usize, label: i64 },
    #[error("arc label {label} is used {count} times; every arc must appear exactly twice")]
    ArcMultiplicity { label: ArcLabel, count: usize },
    #[error("inconsistent strand orientation along arc {label}")]
    Orientation { label: ArcLabel },
    #[error("{found} signs given for {expected} crossings")]
    SignCount { expected: usize, found: usize },
    #[error("crossing {crossing}: sign must be +1 or -1, found {value}")]
    InvalidSign { crossing: usize, value: i64 },
    #[error("crossing {crossing}: declared sign {declared} contradicts the strand orientation")]
    SignMismatch { crossing: usize, declared: Sign },
    #[error(
        "not a plane diagram: a connected piece with {vertices} crossings has {faces} faces \
         (V - E + F = {chi}, expected 2)"
    )]
    NonPlanar {
        vertices: usize,
        faces: usize,
        chi: i64,
    },
    #[error("diagram is disconnected ({pieces} pieces); a connected diagram is required")]
    Disconnected { pieces: usize },
}

/// A validated link diagram.
///
/// Immutable once built; all derived structure (arc partners, strand
/// orientation) is computed at construction.
#[derive(Debug, Clone)]
pub struct Diagram {
    name: Option<String>,
    crossings: Vec<Crossing>,
    partner: Vec<[Dart; 4]>,
    incoming: Vec<[bool; 4]>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.crossings == other.crossings
    }
}

impl Eq for Diagram {}

impl Diagram {
    /// The crossingless unknot.
    pub fn unknot() -> Diagram {
        Diagram {
            name: None,
            crossings: Vec::new(),
            partner: Vec::new(),
            incoming: Vec::new(),
        }
    }

    /// Builds and validates a diagram from raw PD quadruples.
    ///
    /// When `signs` is given it must agree with the orientation the PD code
    /// forces; components that never pass under anything take their
    /// direction from the declared sign of their first crossing, or failing
    /// that from the label-succession rule (`j == l + 1 || l > j + 1`).
    pub fn from_pd(
        name: Option<String>,
        pd: &[Vec<i64>],
        signs: Option<&[i64]>,
    ) -> Result<Diagram, DiagramError> {
        let mut quads = Vec::with_capacity(pd.len());
        for (i, q) in pd.iter().enumerate() {
            if q.len() != 4 {
                return Err(DiagramError::NotQuadruple {
                    crossing: i,
                    found: q.len(),
                });
            }
            let mut arcs = [0 as ArcLabel; 4];
            for (slot, &label) in q.iter().enumerate() {
                if label <= 0 || label > ArcLabel::MAX as i64 {
                    return Err(DiagramError::InvalidLabel { crossing: i, label });
                }
                arcs[slot] = label as ArcLabel;
            }
            quads.push(arcs);
        }
        let declared = match signs {
            None => None,
            Some(s) => {
                if s.len() != quads.len() {
                    return Err(DiagramError::SignCount {
                        expected: quads.len(),
                        found: s.len(),
                    });
                }
                let mut out = Vec::with_capacity(s.len());
                for (i, &v) in s.iter().enumerate() {
                    out.push(Sign::from_value(v).ok_or(DiagramError::InvalidSign {
                        crossing: i,
                        value: v,
                    })?);
                }
                Some(out)
            }
        };
        Diagram::from_quads(name, quads, declared.as_deref())
    }

    pub(crate) fn from_quads(
        name: Option<String>,
        quads: Vec<[ArcLabel; 4]>,
        declared: Option<&[Sign]>,
    ) -> Result<Diagram, DiagramError> {
        let partner = arc_partners(&quads)?;
        let incoming = orient(&quads, &partner, declared)?;
        let mut crossings = Vec::with_capacity(quads.len());
        for (id, arcs) in quads.into_iter().enumerate() {
            let sign = if incoming[id][3] {
                Sign::Positive
            } else {
                Sign::Negative
            };
            if let Some(d) = declared {
                if d[id] != sign {
                    return Err(DiagramError::SignMismatch {
                        crossing: id,
                        declared: d[id],
                    });
                }
            }
            crossings.push(Crossing { id, arcs, sign });
        }
        let diagram = Diagram {
            name,
            crossings,
            partner,
            incoming,
        };
        diagram.check_euler()?;
        Ok(diagram)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: Option<String>) -> Diagram {
        self.name = name;
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: usize) -> &Crossing {
        &self.crossings[id]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn is_unknot(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The other end of the arc leaving `d`.
    pub fn partner(&self, d: Dart) -> Dart {
        self.partner[d.crossing][d.slot]
    }

    /// Whether the arc at `d` is oriented into the crossing.
    pub fn is_incoming(&self, d: Dart) -> bool {
        self.incoming[d.crossing][d.slot]
    }

    pub fn arc_at(&self, d: Dart) -> ArcLabel {
        self.crossings[d.crossing].arcs[d.slot]
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.crossings.iter().map(|c| c.sign).collect()
    }

    /// Connected pieces of the underlying graph, as sorted crossing lists.
    pub fn pieces(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for (x, slots) in self.partner.iter().enumerate() {
            for d in slots {
                uf.union(x, d.crossing);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            groups.entry(uf.find(x)).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.pieces().len() <= 1
    }

    pub fn require_connected(&self) -> Result<(), DiagramError> {
        let pieces = self.pieces().len();
        if pieces > 1 {
            Err(DiagramError::Disconnected { pieces })
        } else {
            Ok(())
        }
    }

    fn check_euler(&self) -> Result<(), DiagramError> {
        let faces = compute_faces(self);
        let pieces = self.pieces();
        let mut piece_of = vec![0usize; self.crossings.len()];
        for (i, p) in pieces.iter().enumerate() {
            for &x in p {
                piece_of[x] = i;
            }
        }
        let mut face_count = vec![0usize; pieces.len()];
        for f in &faces {
            if let Some(c) = f.boundary.first() {
                face_count[piece_of[c.crossing]] += 1;
            }
        }
        for (p, &f) in pieces.iter().zip(&face_count) {
            let v = p.len() as i64;
            let chi = v - 2 * v + f as i64;
            if chi != 2 {
                return Err(DiagramError::NonPlanar {
                    vertices: p.len(),
                    faces: f,
                    chi,
                });
            }
        }
        Ok(())
    }
}

fn arc_partners(quads: &[[ArcLabel; 4]]) -> Result<Vec<[Dart; 4]>, DiagramError> {
    let mut ends: BTreeMap<ArcLabel, Vec<Dart>> = BTreeMap::new();
    for (x, q) in quads.iter().enumerate() {
        for (s, &label) in q.iter().enumerate() {
            ends.entry(label).or_default().push(Dart::new(x, s));
        }
    }
    let mut partner = vec![[Dart::new(0, 0); 4]; quads.len()];
    for (&label, darts) in &ends {
        if darts.len() != 2 {
            return Err(DiagramError::ArcMultiplicity {
                label,
                count: darts.len(),
            });
        }
        let (a, b) = (darts[0], darts[1]);
        partner[a.crossing][a.slot] = b;
        partner[b.crossing][b.slot] = a;
    }
    Ok(partner)
}

fn orient(
    quads: &[[ArcLabel; 4]],
    partner: &[[Dart; 4]],
    declared: Option<&[Sign]>,
) -> Result<Vec<[bool; 4]>, DiagramError> {
    let n = quads.len();
    let mut dir: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let assign = |dir: &mut Vec<[Option<bool>; 4]>, start: Dart, value: bool| {
        let mut stack = vec![(start, value)];
        while let Some((d, v)) = stack.pop() {
            match dir[d.crossing][d.slot] {
                Some(existing) if existing == v => continue,
                Some(_) => {
                    return Err(DiagramError::Orientation {
                        label: quads[d.crossing][d.slot],
                    })
                }
                None => {}
            }
            dir[d.crossing][d.slot] = Some(v);
            stack.push((partner[d.crossing][d.slot], !v));
            stack.push((d.opposite(), !v));
        }
        Ok(())
    };
    for x in 0..n {
        assign(&mut dir, Dart::new(x, 0), true)?;
    }
    // Components that only ever pass over.
    for x in 0..n {
        if dir[x][3].is_some() {
            continue;
        }
        let into_slot3 = match declared {
            Some(signs) => signs[x] == Sign::Positive,
            None => {
                let (j, l) = (quads[x][1], quads[x][3]);
                j == l + 1 || l > j + 1
            }
        };
        assign(&mut dir, Dart::new(x, 3), into_slot3)?;
    }
    Ok(dir
        .into_iter()
        .map(|slots| slots.map(|s| s.expect("every strand is oriented")))
        .collect())
}

/// Faces of the plane graph.
///
/// Each face is the cycle of corners met by leaving along a slot, arriving
/// at the partner slot `q`, and leaving again along `q - 1`. Every corner of
/// every crossing lies on exactly one face. The crossingless unknot has two
/// faces with empty boundary.
pub fn compute_faces(d: &Diagram) -> Vec<Face> {
    let n = d.crossing_count();
    if n == 0 {
        return vec![
            Face {
                boundary: Vec::new(),
            },
            Face {
                boundary: Vec::new(),
            },
        ];
    }
    let mut seen = vec![[false; 4]; n];
    let mut faces = Vec::new();
    for x in 0..n {
        for s in 0..4 {
            if seen[x][s] {
                continue;
            }
            let start = Dart::new(x, s);
            let mut cur = start;
            let mut boundary = Vec::new();
            loop {
                seen[cur.crossing][cur.slot] = true;
                boundary.push(Corner {
                    crossing: cur.crossing,
                    index: cur.slot,
                });
                cur = d.partner(cur).cw();
                if cur == start {
                    break;
                }
            }
            faces.push(Face { boundary });
        }
    }
    faces
}

/// Link components, indexed in order of their smallest arc label.
pub fn link_components(d: &Diagram) -> ComponentMap {
    if d.is_unknot() {
        return ComponentMap {
            assignment: BTreeMap::new(),
            component_count: 1,
        };
    }
    let labels: Vec<ArcLabel> = {
        let mut v: Vec<ArcLabel> = d.crossings.iter().flat_map(|c| c.arcs).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let index: BTreeMap<ArcLabel, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for c in &d.crossings {
        uf.union(index[&c.arcs[0]], index[&c.arcs[2]]);
        uf.union(index[&c.arcs[1]], index[&c.arcs[3]]);
    }
    let mut root_to_component: BTreeMap<usize, usize> = BTreeMap::new();
    let mut assignment = BTreeMap::new();
    for (i, &label) in labels.iter().enumerate() {
        let next = root_to_component.len();
        let comp = *root_to_component.entry(uf.find(i)).or_insert(next);
        assignment.insert(label, comp);
    }
    ComponentMap {
        component_count: root_to_component.len(),
        assignment,
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pd(rows: &[[i64; 4]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    fn trefoil() -> Diagram {
        Diagram::from_pd(None, &pd(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]), None).unwrap()
    }

    fn figure_eight() -> Diagram {
        Diagram::from_pd(
            None,
            &pd(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]),
            None,
        )
        .unwrap()
    }

    fn degrees(d: &Diagram) -> Vec<usize> {
        let mut v: Vec<usize> = compute_faces(d).iter().map(Face::degree).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn trefoil_faces_and_signs() {
        let t = trefoil();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.arc_count(), 6);
        // two triangles, three bigons
        assert_eq!(degrees(&t), vec![2, 2, 2, 3, 3]);
        assert!(t.signs().iter().all(|&s| s == Sign::Negative));
        assert_eq!(link_components(&t).component_count, 1);
    }

    #[test]
    fn figure_eight_faces() {
        let f = figure_eight();
        assert_eq!(degrees(&f), vec![2, 2, 3, 3, 3, 3]);
        assert_eq!(
            f.signs(),
            vec![
                Sign::Positive,
                Sign::Positive,
                Sign::Negative,
                Sign::Negative
            ]
        );
    }

    #[test]
    fn hopf_link_has_two_components() {
        let h = Diagram::from_pd(None, &pd(&[[2, 4, 1, 3], [4, 2, 3, 1]]), None).unwrap();
        assert_eq!(link_components(&h).component_count, 2);
        assert_eq!(degrees(&h), vec![2, 2, 2, 2]);
        assert_eq!(h.signs()[0], h.signs()[1]);
    }

    #[test]
    fn kinked_unknot() {
        let k = Diagram::from_pd(None, &pd(&[[1, 2, 2, 1]]), None).unwrap();
        assert_eq!(degrees(&k), vec![1, 1, 2]);
        assert_eq!(link_components(&k).component_count, 1);
    }

    #[test]
    fn unknot_conventions() {
        let u = Diagram::unknot();
        assert_eq!(compute_faces(&u).len(), 2);
        assert!(compute_faces(&u).iter().all(|f| f.degree() == 0));
        assert_eq!(link_components(&u).component_count, 1);
        assert!(u.is_connected());
    }

    #[test]
    fn rejects_bad_multiplicity() {
        let err = Diagram::from_pd(None, &pd(&[[1, 2, 3, 4]]), None).unwrap_err();
        assert!(matches!(err, DiagramError::ArcMultiplicity { .. }));
    }

    #[test]
    fn rejects_virtual_code() {
        // A single crossing whose two loops join opposite slots is not planar.
        let err = Diagram::from_pd(None, &pd(&[[1, 2, 1, 2]]), None).unwrap_err();
        assert!(
            matches!(
                err,
                DiagramError::NonPlanar { .. } | DiagramError::Orientation { .. }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn rejects_non_planar_two_crossing_code() {
        // Hopf link with the rotation at one crossing reversed.
        let err = Diagram::from_pd(None, &pd(&[[2, 4, 1, 3], [4, 3, 2, 1]]), None).unwrap_err();
        assert!(matches!(err, DiagramError::NonPlanar { .. }), "{err:?}");
    }

    #[test]
    fn declared_signs_must_match() {
        let rows = pd(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        assert!(Diagram::from_pd(None, &rows, Some(&[-1, -1, -1])).is_ok());
        let err = Diagram::from_pd(None, &rows, Some(&[-1, 1, -1])).unwrap_err();
        assert_eq!(
            err,
            DiagramError::SignMismatch {
                crossing: 1,
                declared: Sign::Positive
            }
        );
    }

    #[test]
    fn hopf_signs_are_forced_by_orientation() {
        let rows = pd(&[[2, 4, 1, 3], [4, 2, 3, 1]]);
        let h = Diagram::from_pd(None, &rows, None).unwrap();
        let s = h.signs()[0].value() as i64;
        assert!(Diagram::from_pd(None, &rows, Some(&[s, s])).is_ok());
        assert!(Diagram::from_pd(None, &rows, Some(&[-s, -s])).is_err());
    }

    #[test]
    fn split_diagram_is_detected() {
        let rows = pd(&[[1, 2, 2, 1], [3, 4, 4, 3]]);
        let d = Diagram::from_pd(None, &rows, None).unwrap();
        assert_eq!(d.pieces().len(), 2);
        assert_eq!(
            d.require_connected(),
            Err(DiagramError::Disconnected { pieces: 2 })
        );
    }
}
