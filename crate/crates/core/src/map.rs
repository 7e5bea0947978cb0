//! Editable rotation-system model of a diagram.
//!
//! Vertices carry four slots in counterclockwise order, a partner dart per
//! slot, an orientation flag per slot and the axis (slots {0,2} or {1,3})
//! of the under-strand. Edits keep slot positions of surviving vertices
//! fixed, so corners computed before an edit stay meaningful after it.
//! Export relabels arcs along components and re-validates through
//! [`Diagram::from_quads`].

use std::collections::BTreeMap;

use crate::diagram::{ArcLabel, Dart, Diagram, DiagramError, Sign};

#[derive(Debug, Clone)]
pub(crate) struct Vertex {
    pub link: [Dart; 4],
    pub incoming: [Option<bool>; 4],
    /// 0: under-strand on slots {0,2}; 1: on slots {1,3}.
    pub under_axis: usize,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct PlanarMap {
    pub verts: Vec<Vertex>,
}

const UNLINKED: Dart = Dart {
    crossing: usize::MAX,
    slot: 0,
};

impl PlanarMap {
    pub fn new() -> PlanarMap {
        PlanarMap { verts: Vec::new() }
    }

    pub fn from_diagram(d: &Diagram) -> PlanarMap {
        let verts = (0..d.crossing_count())
            .map(|x| {
                let mut link = [UNLINKED; 4];
                let mut incoming = [None; 4];
                for s in 0..4 {
                    let dart = Dart::new(x, s);
                    link[s] = d.partner(dart);
                    incoming[s] = Some(d.is_incoming(dart));
                }
                Vertex {
                    link,
                    incoming,
                    under_axis: 0,
                    alive: true,
                }
            })
            .collect();
        PlanarMap { verts }
    }

    pub fn add_vertex(&mut self, under_axis: usize) -> usize {
        self.verts.push(Vertex {
            link: [UNLINKED; 4],
            incoming: [None; 4],
            under_axis,
            alive: true,
        });
        self.verts.len() - 1
    }

    pub fn link(&mut self, a: Dart, b: Dart) {
        self.verts[a.crossing].link[a.slot] = b;
        self.verts[b.crossing].link[b.slot] = a;
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.verts[d.crossing].link[d.slot]
    }

    pub fn incoming(&self, d: Dart) -> Option<bool> {
        self.verts[d.crossing].incoming[d.slot]
    }

    pub fn set_incoming(&mut self, d: Dart, v: bool) {
        self.verts[d.crossing].incoming[d.slot] = Some(v);
    }

    pub fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.verts.len()).filter(|&v| self.verts[v].alive)
    }

    pub fn alive_count(&self) -> usize {
        self.alive().count()
    }

    /// Inserts a vertex on the edge leaving `near`, adjacent to `near`.
    ///
    /// The new vertex has slots `[toward far end, left, toward near, right]`
    /// where left and right are taken looking from `near` toward the far
    /// end. The two side slots are left unlinked.
    pub fn subdivide(&mut self, near: Dart, under_axis: usize) -> usize {
        let far = self.partner(near);
        let near_in = self.incoming(near);
        let w = self.add_vertex(under_axis);
        self.link(near, Dart::new(w, 2));
        self.link(Dart::new(w, 0), far);
        if let Some(inc) = near_in {
            // edge pointed into `near` means it flows far -> w -> near
            self.set_incoming(Dart::new(w, 0), inc);
            self.set_incoming(Dart::new(w, 2), !inc);
        }
        w
    }

    /// Deletes `removed` vertices, splicing strands through them.
    ///
    /// `pass` maps every removed dart whose edge leaves the removed set (or
    /// is a loop inside it that a strand must follow) to the removed dart
    /// the strand exits through. Returns the number of closed loops that no
    /// longer meet any surviving vertex.
    pub fn splice_out(&mut self, removed: &[usize], pass: &BTreeMap<Dart, Dart>) -> usize {
        let is_removed = |m: &PlanarMap, v: usize| !m.verts[v].alive || removed.contains(&v);
        let mut new_links: Vec<(Dart, Dart)> = Vec::new();
        let mut used: BTreeMap<Dart, bool> = BTreeMap::new();
        for &v in removed {
            for s in 0..4 {
                let d = Dart::new(v, s);
                if !pass.contains_key(&d) {
                    continue;
                }
                let outer = self.partner(d);
                if is_removed(self, outer.crossing) || used.contains_key(&outer) {
                    continue;
                }
                let mut cur = d;
                let end = loop {
                    used.insert(cur, true);
                    let exit = pass[&cur];
                    used.insert(exit, true);
                    let next = self.partner(exit);
                    if !is_removed(self, next.crossing) {
                        break next;
                    }
                    cur = next;
                };
                used.insert(outer, true);
                used.insert(end, true);
                new_links.push((outer, end));
            }
        }
        // Strands left running only through removed vertices.
        let mut loops = 0;
        for &d in pass.keys() {
            if used.contains_key(&d) {
                continue;
            }
            loops += 1;
            let mut cur = d;
            while !used.contains_key(&cur) {
                used.insert(cur, true);
                let exit = pass[&cur];
                used.insert(exit, true);
                cur = self.partner(exit);
            }
        }
        for &v in removed {
            self.verts[v].alive = false;
        }
        for (a, b) in new_links {
            self.link(a, b);
        }
        loops
    }

    /// Propagates orientation along strands from every oriented dart; closed
    /// curves that carry no orientation at all are oriented from their first
    /// dart in vertex order.
    pub fn complete_orientation(&mut self) {
        let alive: Vec<usize> = self.alive().collect();
        let mut stack: Vec<(Dart, bool)> = Vec::new();
        for &v in &alive {
            for s in 0..4 {
                if let Some(f) = self.verts[v].incoming[s] {
                    stack.push((Dart::new(v, s), f));
                }
            }
        }
        self.flood(stack);
        for &v in &alive {
            for s in 0..4 {
                if self.verts[v].incoming[s].is_none() {
                    self.flood(vec![(Dart::new(v, s), true)]);
                }
            }
        }
    }

    fn flood(&mut self, mut stack: Vec<(Dart, bool)>) {
        while let Some((d, f)) = stack.pop() {
            self.verts[d.crossing].incoming[d.slot] = Some(f);
            for (next, val) in [(self.partner(d), !f), (d.opposite(), !f)] {
                match self.incoming(next) {
                    None => stack.push((next, val)),
                    Some(existing) => debug_assert_eq!(existing, val, "orientation clash"),
                }
            }
        }
    }

    /// Sign of an oriented vertex.
    pub fn sign(&self, v: usize) -> Sign {
        let vert = &self.verts[v];
        let a = vert.under_axis;
        let start = if vert.incoming[a] == Some(true) {
            a
        } else {
            a + 2
        };
        if vert.incoming[(start + 3) % 4] == Some(true) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn flip_crossing(&mut self, v: usize) {
        self.verts[v].under_axis = 1 - self.verts[v].under_axis;
    }

    /// Serializes the surviving vertices (in index order) into a validated
    /// diagram. Arcs are numbered consecutively along each component.
    pub fn export(&mut self, name: Option<String>) -> Result<Export, DiagramError> {
        self.complete_orientation();
        let order: Vec<usize> = self.alive().collect();
        let mut label: BTreeMap<Dart, ArcLabel> = BTreeMap::new();
        let mut next: ArcLabel = 1;
        for &v in &order {
            for s in 0..4 {
                let d = Dart::new(v, s);
                if label.contains_key(&d) {
                    continue;
                }
                // Walk the component forward from an outgoing dart.
                let start = if self.incoming(d) == Some(false) {
                    d
                } else {
                    d.opposite()
                };
                let mut cur = start;
                loop {
                    let head = self.partner(cur);
                    label.insert(cur, next);
                    label.insert(head, next);
                    next += 1;
                    cur = head.opposite();
                    if cur == start {
                        break;
                    }
                }
            }
        }
        let mut quads = Vec::with_capacity(order.len());
        let mut signs = Vec::with_capacity(order.len());
        for &v in &order {
            let vert = &self.verts[v];
            let a = vert.under_axis;
            let s0 = if vert.incoming[a] == Some(true) {
                a
            } else {
                a + 2
            };
            let mut q = [0; 4];
            for (k, slot) in q.iter_mut().enumerate() {
                *slot = label[&Dart::new(v, s0 + k)];
            }
            quads.push(q);
            signs.push(self.sign(v));
        }
        let diagram = Diagram::from_quads(name, quads, Some(&signs))?;
        Ok(Export {
            diagram,
            order,
            labels: label,
        })
    }
}

pub(crate) struct Export {
    pub diagram: Diagram,
    /// Vertex index behind each crossing id.
    pub order: Vec<usize>,
    pub labels: BTreeMap<Dart, ArcLabel>,
}

/// Layered construction of braid-like tangles.
///
/// Positions run left to right; strands run top to bottom. Generator
/// vertices use slots `[up-right, up-left, down-left, down-right]`, circle
/// crossings use `[right, up, left, down]`.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    pub width: usize,
    /// Upward-facing dart of the topmost vertex at each position.
    pub top: Vec<Option<Dart>>,
    /// Downward-facing dart still waiting for a partner at each position.
    pub open: Vec<Option<Dart>>,
}

impl Grid {
    pub fn new(width: usize) -> Grid {
        Grid {
            width,
            top: vec![None; width],
            open: vec![None; width],
        }
    }

    fn attach(&mut self, map: &mut PlanarMap, pos: usize, up: Dart, down: Dart) {
        match self.open[pos] {
            Some(prev) => map.link(prev, up),
            None => self.top[pos] = Some(up),
        }
        self.open[pos] = Some(down);
    }

    /// A crossing between positions `i` and `i + 1`; `positive` gives a
    /// positive crossing when both strands run downward.
    pub fn generator(&mut self, map: &mut PlanarMap, i: usize, positive: bool) -> usize {
        let v = map.add_vertex(if positive { 1 } else { 0 });
        self.attach(map, i, Dart::new(v, 1), Dart::new(v, 2));
        self.attach(map, i + 1, Dart::new(v, 0), Dart::new(v, 3));
        v
    }

    /// A horizontal closed curve crossing every position twice: over all
    /// strands on its upper line and under them on its lower line.
    /// Oriented left to right along the upper line.
    pub fn crossing_circle(&mut self, map: &mut PlanarMap) -> Vec<usize> {
        let w = self.width;
        let upper: Vec<usize> = (0..w)
            .map(|p| {
                let v = map.add_vertex(1);
                self.attach(map, p, Dart::new(v, 1), Dart::new(v, 3));
                v
            })
            .collect();
        let lower: Vec<usize> = (0..w)
            .map(|p| {
                let v = map.add_vertex(0);
                self.attach(map, p, Dart::new(v, 1), Dart::new(v, 3));
                v
            })
            .collect();
        for p in 0..w - 1 {
            map.link(Dart::new(upper[p], 0), Dart::new(upper[p + 1], 2));
            map.link(Dart::new(lower[p], 0), Dart::new(lower[p + 1], 2));
        }
        map.link(Dart::new(upper[0], 2), Dart::new(lower[0], 2));
        map.link(Dart::new(upper[w - 1], 0), Dart::new(lower[w - 1], 0));
        for &v in &upper {
            map.set_incoming(Dart::new(v, 2), true);
            map.set_incoming(Dart::new(v, 0), false);
        }
        for &v in &lower {
            map.set_incoming(Dart::new(v, 0), true);
            map.set_incoming(Dart::new(v, 2), false);
        }
        upper.into_iter().chain(lower).collect()
    }

    /// Boundary darts in counterclockwise order around the tangle box:
    /// the top from right to left, then the bottom from left to right.
    pub fn boundary_ccw(&self) -> Option<Vec<Dart>> {
        let mut out = Vec::with_capacity(2 * self.width);
        for p in (0..self.width).rev() {
            out.push(self.top[p]?);
        }
        for p in 0..self.width {
            out.push(self.open[p]?);
        }
        Some(out)
    }
}
