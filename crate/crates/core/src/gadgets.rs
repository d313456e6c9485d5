//! Incremental construction of plane graphs by gluing blocks into the
//! outer face, plus the named gadgets used throughout the tests: a terrible
//! face and bad 6-, 7- and 8-vertices.

use crate::graph::PlaneGraph;

/// A small plane graph with a dart `(tail, head)` on its outer face.
#[derive(Debug, Clone)]
pub struct Block {
    rot: Vec<Vec<usize>>,
    outer: (usize, usize),
}

impl Block {
    pub fn edge() -> Self {
        Block { rot: vec![vec![1], vec![0]], outer: (0, 1) }
    }

    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3);
        let rot = (0..len).map(|i| vec![(i + 1) % len, (i + len - 1) % len]).collect();
        Block { rot, outer: (1, 0) }
    }

    /// A patch of the hexagonal lattice made of the given hexagons (axial
    /// coordinates). The outer face is the longest face.
    pub fn hex_patch(hexes: &[(i32, i32)]) -> Self {
        let mut points: Vec<(i64, i64)> = Vec::new();
        let mut coords: Vec<(f64, f64)> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let sqrt3 = 3f64.sqrt();
        let id_of = |x: f64, y: f64, points: &mut Vec<(i64, i64)>, coords: &mut Vec<(f64, f64)>| {
            let key = ((x * 1000.0).round() as i64, (y * 1000.0).round() as i64);
            match points.iter().position(|&p| p == key) {
                Some(i) => i,
                None => {
                    points.push(key);
                    coords.push((x, y));
                    points.len() - 1
                }
            }
        };
        for &(q, r) in hexes {
            let cx = sqrt3 * (q as f64 + r as f64 / 2.0);
            let cy = 1.5 * r as f64;
            let corners: Vec<usize> = (0..6)
                .map(|k| {
                    let a = std::f64::consts::PI / 180.0 * (60.0 * k as f64 + 30.0);
                    id_of(cx + a.cos(), cy + a.sin(), &mut points, &mut coords)
                })
                .collect();
            for k in 0..6 {
                let (u, v) = (corners[k], corners[(k + 1) % 6]);
                let e = (u.min(v), u.max(v));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        let mut rot = vec![Vec::new(); points.len()];
        for &(u, v) in &edges {
            rot[u].push(v);
            rot[v].push(u);
        }
        for (v, r) in rot.iter_mut().enumerate() {
            let (x, y) = coords[v];
            r.sort_by(|&a, &b| {
                let ta = (coords[a].1 - y).atan2(coords[a].0 - x);
                let tb = (coords[b].1 - y).atan2(coords[b].0 - x);
                ta.partial_cmp(&tb).unwrap()
            });
        }
        let g = PlaneGraph::from_rotation(rot.clone()).expect("hexagonal patch is plane");
        let outer_face = (0..g.faces().len()).max_by_key(|&f| (g.face_degree(f), usize::MAX - f)).unwrap();
        let d = g.face(outer_face).darts()[0];
        Block { rot, outer: (g.dart_tail(d), g.dart_head(d)) }
    }

    pub fn from_builder(b: &PlaneBuilder) -> Self {
        Block { rot: b.rot.clone(), outer: b.outer.expect("block needs an edge") }
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    /// Vertices on the outer face, in walk order (without repetition).
    pub fn outer_vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (t, _) in outer_walk(&self.rot, self.outer) {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }
}

fn next(rot: &[Vec<usize>], (u, v): (usize, usize)) -> (usize, usize) {
    let r = &rot[v];
    let i = r.iter().position(|&w| w == u).unwrap();
    (v, r[(i + 1) % r.len()])
}

fn outer_walk(rot: &[Vec<usize>], start: (usize, usize)) -> Vec<(usize, usize)> {
    let mut out = vec![start];
    let mut d = next(rot, start);
    while d != start {
        out.push(d);
        d = next(rot, d);
    }
    out
}

/// Builds plane graphs by gluing blocks at vertices into the outer face, so
/// that every bounded face of every glued block stays a face.
#[derive(Debug, Clone, Default)]
pub struct PlaneBuilder {
    rot: Vec<Vec<usize>>,
    outer: Option<(usize, usize)>,
}

impl PlaneBuilder {
    /// A builder holding a single vertex `0`.
    pub fn new() -> Self {
        PlaneBuilder { rot: vec![Vec::new()], outer: None }
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    /// Index `i` such that the outer face passes through the angle after
    /// `rot[v][i]` at `v`.
    fn outer_angle(&self, v: usize) -> Option<usize> {
        let start = self.outer?;
        outer_walk(&self.rot, start)
            .into_iter()
            .find(|&(_, h)| h == v)
            .map(|(t, _)| self.rot[v].iter().position(|&w| w == t).unwrap())
    }

    /// Glues `block` by identifying its vertex `at_block` with host vertex
    /// `at`. Returns the host ids of the block's vertices.
    pub fn glue(&mut self, at: usize, block: &Block, at_block: usize) -> Vec<usize> {
        let mut map = vec![usize::MAX; block.n()];
        map[at_block] = at;
        for (b, slot) in map.iter_mut().enumerate() {
            if b != at_block {
                *slot = self.rot.len();
                self.rot.push(Vec::new());
            }
        }
        for b in 0..block.n() {
            if b != at_block {
                self.rot[map[b]] = block.rot[b].iter().map(|&u| map[u]).collect();
            }
        }
        // the block's own rotation at the glue vertex, opened at its outer angle
        let r = &block.rot[at_block];
        let (enter, _) = outer_walk(&block.rot, block.outer)
            .into_iter()
            .find(|&(_, h)| h == at_block)
            .expect("glue vertex must lie on the block's outer face");
        let j = r.iter().position(|&w| w == enter).unwrap();
        let opened: Vec<usize> = (1..=r.len()).map(|k| map[r[(j + k) % r.len()]]).collect();
        match self.outer_angle(at) {
            Some(i) => {
                self.rot[at].splice(i + 1..i + 1, opened);
            }
            None => {
                assert!(self.rot[at].is_empty(), "vertex {at} is not on the outer face");
                self.rot[at] = opened;
            }
        }
        if self.outer.is_none() {
            self.outer = Some((map[block.outer.0], map[block.outer.1]));
        }
        map
    }

    /// Vertices on the outer face, in walk order; vertex 0 alone before
    /// anything has been glued.
    pub fn outer_vertices(&self) -> Vec<usize> {
        match self.outer {
            None => vec![0],
            Some(start) => {
                let mut out = Vec::new();
                for (t, _) in outer_walk(&self.rot, start) {
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
                out
            }
        }
    }

    pub fn pendant(&mut self, v: usize) -> usize {
        self.glue(v, &Block::edge(), 0)[1]
    }

    pub fn leaves(&mut self, v: usize, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.pendant(v)).collect()
    }

    /// Glues a triangle at `v` and returns its two new vertices.
    pub fn triangle(&mut self, v: usize) -> (usize, usize) {
        let map = self.glue(v, &Block::cycle(3), 0);
        (map[1], map[2])
    }

    pub fn build(&self) -> PlaneGraph {
        PlaneGraph::from_rotation(self.rot.clone()).expect("glued blocks form a plane graph")
    }
}

/// Id of the 3-face with the given vertex set.
pub fn triangle_face(g: &PlaneGraph, a: usize, b: usize, c: usize) -> usize {
    (0..g.faces().len())
        .find(|&f| {
            let face = g.face(f);
            face.degree() == 3 && face.contains(a) && face.contains(b) && face.contains(c)
        })
        .expect("triangle is a face")
}

/// Triangle `c a b` with `deg(a) = deg(b) = 3`, pendent neighbors of degree
/// `pa` and `pb`, and `deg(c) = dc`. Returns the graph and the triangle face.
pub fn triangle_with_pendent_degrees(pa: usize, pb: usize, dc: usize) -> (PlaneGraph, usize) {
    let mut b = PlaneBuilder::new();
    let c = 0;
    let (x, y) = b.triangle(c);
    let xp = b.pendant(x);
    let yp = b.pendant(y);
    b.leaves(xp, pa - 1);
    b.leaves(yp, pb - 1);
    b.leaves(c, dc - 2);
    let g = b.build();
    let f = triangle_face(&g, c, x, y);
    (g, f)
}

/// The terrible-face picture: a `(3,3,6)`-face whose 3-vertices both have
/// pendent 1-vertices.
pub fn terrible_face() -> (PlaneGraph, usize) {
    triangle_with_pendent_degrees(1, 1, 6)
}

/// A `(2,6,6)`-face whose 6-vertices carry leaves.
pub fn two_six_six_face() -> (PlaneGraph, usize) {
    let mut b = PlaneBuilder::new();
    let x = 0;
    let (p, q) = b.triangle(x);
    b.leaves(p, 4);
    b.leaves(q, 4);
    let g = b.build();
    let f = triangle_face(&g, x, p, q);
    (g, f)
}

/// Roles of a bad-vertex gadget: the vertex, its terrible faces as
/// `(x, x', y, y')`, and the non-terrible face `(u, w)` with `deg(u) = 2`.
#[derive(Debug, Clone)]
pub struct BadGadget {
    pub v: usize,
    pub terrible: Vec<(usize, usize, usize, usize)>,
    pub other_face: (usize, usize),
    pub off_face: Vec<usize>,
}

pub fn bad_vertex_builder(d: usize) -> (PlaneBuilder, BadGadget) {
    assert!((6..=8).contains(&d));
    let mut b = PlaneBuilder::new();
    let v = 0;
    let mut terrible = Vec::new();
    for _ in 0..d - 5 {
        let (x, y) = b.triangle(v);
        let xp = b.pendant(x);
        let yp = b.pendant(y);
        terrible.push((x, xp, y, yp));
    }
    let (u, w) = b.triangle(v);
    b.pendant(w);
    let off_face = b.leaves(v, 8 - d);
    (b, BadGadget { v, terrible, other_face: (u, w), off_face })
}

/// A bad `d`-vertex: `d-5` terrible faces, one `(2,3,d)`-face, and `8-d`
/// leaf neighbors.
pub fn bad_vertex(d: usize) -> (PlaneGraph, usize) {
    let (b, roles) = bad_vertex_builder(d);
    (b.build(), roles.v)
}

/// [`bad_vertex`] with one off-face neighbor raised to a 4-vertex
/// (`d` in 6..=7, where off-face neighbors exist).
pub fn bad_vertex_with_upgrade(d: usize) -> (PlaneGraph, usize) {
    let (mut b, roles) = bad_vertex_builder(d);
    b.leaves(roles.off_face[0], 3);
    (b.build(), roles.v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::class_membership;

    #[test]
    fn glued_triangles_stay_faces() {
        let mut b = PlaneBuilder::new();
        let (x, y) = b.triangle(0);
        let (p, q) = b.triangle(x);
        b.triangle(y);
        b.triangle(0);
        b.pendant(p);
        b.pendant(q);
        let g = b.build();
        let triangles = g.faces().iter().filter(|f| f.degree() == 3).count();
        assert_eq!(triangles, 4);
        assert_eq!(g.faces().len(), 5);
    }

    #[test]
    fn hex_patches_have_hexagonal_inner_faces() {
        let blk = Block::hex_patch(&[(0, 0), (1, 0), (0, 1)]);
        let g = PlaneGraph::from_rotation(blk.rot.clone()).unwrap();
        assert_eq!(g.n(), 13);
        let degs: Vec<usize> = g.faces().iter().map(|f| f.degree()).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 6).count(), 3);
        assert_eq!(degs.len(), 4);
        assert!(class_membership(&g).in_class);
    }

    #[test]
    fn gluing_a_hex_patch_keeps_its_hexagons() {
        let blk = Block::hex_patch(&[(0, 0), (1, 0)]);
        let mut b = PlaneBuilder::new();
        b.triangle(0);
        let at = blk.outer_vertices()[3];
        b.glue(0, &blk, at);
        let g = b.build();
        let sixes = g.faces().iter().filter(|f| f.degree() == 6).count();
        assert_eq!(sixes, 2);
        assert_eq!(g.faces().len(), 4);
    }

    #[test]
    fn gadgets_are_class_members() {
        for d in 6..=8 {
            assert!(class_membership(&bad_vertex(d).0).in_class);
        }
        assert!(class_membership(&terrible_face().0).in_class);
    }
}
