//! Combinatorial plane graphs.
//!
//! A [`PlaneGraph`] is a simple graph together with a rotation system: for
//! every vertex the cyclic order of its neighbors. Faces are derived by
//! tracing darts; the successor of dart `u -> v` is `v -> w` where `w`
//! follows `u` in the rotation at `v`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::embed;
use crate::error::{Error, Result};

/// A face boundary walk. `vertices[i]` is the tail of `darts[i]`; a cut
/// vertex may appear more than once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    darts: Vec<usize>,
    vertices: Vec<usize>,
}

impl Face {
    pub fn darts(&self) -> &[usize] {
        &self.darts
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of dart steps on the walk; a bridge contributes two.
    pub fn degree(&self) -> usize {
        self.darts.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }
}

#[derive(Debug, Clone)]
pub struct PlaneGraph {
    rot: Vec<Vec<usize>>,
    sorted: Vec<Vec<usize>>,
    offset: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    twin: Vec<usize>,
    dart_face: Vec<usize>,
    faces: Vec<Face>,
}

impl PartialEq for PlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rot == other.rot
    }
}

impl Eq for PlaneGraph {}

impl PlaneGraph {
    /// Builds a plane graph from an edge list, computing an embedding.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let adj = adjacency(n, edges)?;
        let rot = embed::embed_planar(&adj)?;
        Self::from_rotation(rot)
    }

    /// Builds a plane graph from an explicit rotation system.
    pub fn from_rotation(rot: Vec<Vec<usize>>) -> Result<Self> {
        let n = rot.len();
        for (v, nbrs) in rot.iter().enumerate() {
            for &u in nbrs {
                if u >= n {
                    return Err(Error::VertexOutOfRange { vertex: u, n });
                }
                if u == v {
                    return Err(Error::Loop(v));
                }
            }
        }
        let mut sorted: Vec<Vec<usize>> = rot.clone();
        for (v, s) in sorted.iter_mut().enumerate() {
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::MultiEdge(v, w[0]));
            }
        }
        for (v, s) in sorted.iter().enumerate() {
            for &u in s {
                if sorted[u].binary_search(&v).is_err() {
                    return Err(Error::InconsistentRotation(format!(
                        "{u} appears in the rotation of {v} but not vice versa"
                    )));
                }
            }
        }

        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for nbrs in &rot {
            offset.push(acc);
            acc += nbrs.len();
        }
        offset.push(acc);
        let darts = acc;
        let mut tail = vec![0; darts];
        let mut head = vec![0; darts];
        let mut index: HashMap<(usize, usize), usize> = HashMap::with_capacity(darts);
        for (v, nbrs) in rot.iter().enumerate() {
            for (i, &u) in nbrs.iter().enumerate() {
                let d = offset[v] + i;
                tail[d] = v;
                head[d] = u;
                index.insert((v, u), d);
            }
        }
        let twin: Vec<usize> = (0..darts).map(|d| index[&(head[d], tail[d])]).collect();

        let mut g = PlaneGraph {
            rot,
            sorted,
            offset,
            tail,
            head,
            twin,
            dart_face: vec![usize::MAX; darts],
            faces: Vec::new(),
        };
        g.trace_faces();
        g.check_genus()?;
        Ok(g)
    }

    fn next_dart(&self, d: usize) -> usize {
        let v = self.head[d];
        let back = self.twin[d] - self.offset[v];
        let deg = self.rot[v].len();
        self.offset[v] + (back + 1) % deg
    }

    fn trace_faces(&mut self) {
        let mut faces = Vec::new();
        for start in 0..self.tail.len() {
            if self.dart_face[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                self.dart_face[d] = id;
                darts.push(d);
                d = self.next_dart(d);
                if d == start {
                    break;
                }
            }
            let vertices = darts.iter().map(|&d| self.tail[d]).collect();
            faces.push(Face { darts, vertices });
        }
        if self.tail.is_empty() && !self.rot.is_empty() {
            faces.push(Face {
                darts: Vec::new(),
                vertices: Vec::new(),
            });
        }
        self.faces = faces;
    }

    fn check_genus(&self) -> Result<()> {
        if self.tail.is_empty() {
            return Ok(());
        }
        for comp in self.components() {
            if comp.len() == 1 {
                continue;
            }
            let v = comp.len() as i64;
            let e: usize = comp.iter().map(|&x| self.rot[x].len()).sum::<usize>() / 2;
            let mut seen = std::collections::BTreeSet::new();
            for &x in &comp {
                for d in self.offset[x]..self.offset[x + 1] {
                    seen.insert(self.dart_face[d]);
                }
            }
            let f = seen.len() as i64;
            if v - e as i64 + f != 2 {
                return Err(Error::InconsistentRotation(format!(
                    "rotation is not plane: V - E + F = {} on the component of vertex {}",
                    v - e as i64 + f,
                    comp[0]
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn m(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    /// Neighbors of `v` in rotation order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.sorted[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, s) in self.sorted.iter().enumerate() {
            out.extend(s.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.sorted
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.faces[f].degree()
    }

    pub fn dart_tail(&self, d: usize) -> usize {
        self.tail[d]
    }

    pub fn dart_head(&self, d: usize) -> usize {
        self.head[d]
    }

    pub fn dart_face(&self, d: usize) -> usize {
        self.dart_face[d]
    }

    /// Faces met around `v`, one entry per outgoing dart (rotation order).
    pub fn faces_around(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (self.offset[v]..self.offset[v + 1]).map(move |d| self.dart_face[d])
    }

    /// Distinct 3-faces incident with `v`, ascending.
    pub fn triangles_at(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .faces_around(v)
            .filter(|&f| self.faces[f].degree() == 3)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    /// Connected components as ascending vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.sorted)
    }

    /// Subgraph induced by `keep` with the inherited rotation. Returns the
    /// graph and the map from new ids to old ids (ascending).
    pub fn induced(&self, keep: &[usize]) -> (PlaneGraph, Vec<usize>) {
        let mut map: Vec<usize> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let rot = map
            .iter()
            .map(|&v| {
                self.rot[v]
                    .iter()
                    .filter(|&&u| new_id[u] != usize::MAX)
                    .map(|&u| new_id[u])
                    .collect()
            })
            .collect();
        let g = PlaneGraph::from_rotation(rot).expect("induced subgraph of a plane graph is plane");
        (g, map)
    }

    pub fn without_vertex(&self, x: usize) -> (PlaneGraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n()).filter(|&v| v != x).collect();
        self.induced(&keep)
    }

    pub fn has_cycle_of_length(&self, k: usize) -> bool {
        has_cycle_of_length(&self.sorted, k)
    }

    /// Breadth-first distances from `src` (`usize::MAX` when unreachable).
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.sorted[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Validated adjacency lists (sorted) for an edge list.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for (v, a) in adj.iter_mut().enumerate() {
        a.sort_unstable();
        if let Some(w) = a.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MultiEdge(v, w[0]));
        }
    }
    Ok(adj)
}

pub fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether the graph has a cycle of exactly `k` vertices (`k >= 3`).
///
/// Bounded DFS over simple paths whose vertices all exceed the start vertex.
pub fn has_cycle_of_length(adj: &[Vec<usize>], k: usize) -> bool {
    if k < 3 {
        return false;
    }
    fn extend(adj: &[Vec<usize>], start: usize, path: &mut Vec<usize>, on: &mut [bool], k: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == k {
            return adj[last].binary_search(&start).is_ok();
        }
        for &u in &adj[last] {
            if u > start && !on[u] {
                on[u] = true;
                path.push(u);
                let found = extend(adj, start, path, on, k);
                path.pop();
                on[u] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let n = adj.len();
    let mut on = vec![false; n];
    let mut path = Vec::with_capacity(k);
    for s in 0..n {
        on[s] = true;
        path.push(s);
        let found = extend(adj, s, &mut path, &mut on, k);
        path.pop();
        on[s] = false;
        if found {
            return true;
        }
    }
    false
}

/// Membership in the class of planar graphs without 4-cycles and 5-cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub is_planar: bool,
    pub has_4_cycle: bool,
    pub has_5_cycle: bool,
    pub is_connected: bool,
    pub in_class: bool,
}

impl ClassReport {
    pub fn of(g: &PlaneGraph) -> Self {
        Self::from_parts(true, g.adjacency())
    }

    /// Class report for an abstract graph; planarity is decided by embedding.
    pub fn of_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let adj = adjacency(n, edges)?;
        let planar = match embed::embed_planar(&adj) {
            Ok(_) => true,
            Err(Error::NonPlanar) => false,
            Err(e) => return Err(e),
        };
        Ok(Self::from_parts(planar, &adj))
    }

    fn from_parts(is_planar: bool, adj: &[Vec<usize>]) -> Self {
        let has_4_cycle = has_cycle_of_length(adj, 4);
        let has_5_cycle = has_cycle_of_length(adj, 5);
        ClassReport {
            is_planar,
            has_4_cycle,
            has_5_cycle,
            is_connected: !adj.is_empty() && components(adj).len() == 1,
            in_class: is_planar && !has_4_cycle && !has_5_cycle,
        }
    }
}

pub fn class_membership(g: &PlaneGraph) -> ClassReport {
    ClassReport::of(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    fn k(n: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        e
    }

    #[test]
    fn k4_has_four_triangular_faces() {
        let g = PlaneGraph::from_edges(4, &k(4)).unwrap();
        assert_eq!(g.faces().len(), 4);
        assert!(g.faces().iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn hexagon_has_two_six_faces() {
        let g = PlaneGraph::from_edges(6, &cycle(6)).unwrap();
        let degs: Vec<usize> = g.faces().iter().map(Face::degree).collect();
        assert_eq!(degs, vec![6, 6]);
    }

    #[test]
    fn k5_is_rejected() {
        assert_eq!(PlaneGraph::from_edges(5, &k(5)), Err(Error::NonPlanar));
    }

    #[test]
    fn non_simple_input_is_rejected() {
        assert_eq!(PlaneGraph::from_edges(2, &[(0, 1), (1, 0)]), Err(Error::MultiEdge(0, 1)));
        assert_eq!(PlaneGraph::from_edges(2, &[(1, 1)]), Err(Error::Loop(1)));
    }

    #[test]
    fn asymmetric_rotation_is_rejected() {
        let r = PlaneGraph::from_rotation(vec![vec![1], vec![]]);
        assert!(matches!(r, Err(Error::InconsistentRotation(_))));
    }

    #[test]
    fn toroidal_rotation_is_rejected() {
        // reversing one rotation of a plane K4 gives a toroidal map
        let g = PlaneGraph::from_edges(4, &k(4)).unwrap();
        let mut rot = g.rotation().to_vec();
        rot[0].swap(0, 1);
        let r = PlaneGraph::from_rotation(rot);
        assert!(matches!(r, Err(Error::InconsistentRotation(_))));
    }

    #[test]
    fn tree_has_single_face_of_twice_the_edges() {
        let g = PlaneGraph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.face_degree(0), 8);
    }

    #[test]
    fn cube_has_six_square_faces() {
        let mut e = Vec::new();
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    e.push((u, v));
                }
            }
        }
        let g = PlaneGraph::from_edges(8, &e).unwrap();
        assert_eq!(g.faces().len(), 6);
        assert!(g.faces().iter().all(|f| f.degree() == 4));
    }

    #[test]
    fn k33_is_rejected() {
        let mut e = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                e.push((u, v));
            }
        }
        assert_eq!(PlaneGraph::from_edges(6, &e), Err(Error::NonPlanar));
    }

    #[test]
    fn single_vertex_has_one_empty_face() {
        let g = PlaneGraph::from_edges(1, &[]).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.face_degree(0), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn cycle_length_queries() {
        let c6 = PlaneGraph::from_edges(6, &cycle(6)).unwrap();
        assert!(!c6.has_cycle_of_length(4));
        assert!(c6.has_cycle_of_length(6));
        let k4 = PlaneGraph::from_edges(4, &k(4)).unwrap();
        assert!(k4.has_cycle_of_length(4));
        // triangle with a pendant path 2-3-4-5
        let g = PlaneGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(g.has_cycle_of_length(3));
        assert!(!g.has_cycle_of_length(4));
        assert!(!g.has_cycle_of_length(5));
        assert!(!g.has_cycle_of_length(6));
    }

    #[test]
    fn class_membership_examples() {
        let k3 = PlaneGraph::from_edges(3, &cycle(3)).unwrap();
        assert!(class_membership(&k3).in_class);
        let k4 = PlaneGraph::from_edges(4, &k(4)).unwrap();
        let r = class_membership(&k4);
        assert!(r.has_4_cycle && !r.in_class);
        let k5 = ClassReport::of_edges(5, &k(5)).unwrap();
        assert!(!k5.is_planar && !k5.in_class);
    }

    #[test]
    fn dodecahedron_is_out_of_class() {
        // outer 5-cycle 0..5, middle 10-cycle 5..15, inner 5-cycle 15..20
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, 5 + 2 * i));
            e.push((15 + i, 15 + (i + 1) % 5));
            e.push((15 + i, 5 + 2 * i + 1));
        }
        for i in 0..10 {
            e.push((5 + i, 5 + (i + 1) % 10));
        }
        let g = PlaneGraph::from_edges(20, &e).unwrap();
        assert_eq!(g.faces().len(), 12);
        assert!(g.faces().iter().all(|f| f.degree() == 5));
        let r = class_membership(&g);
        assert!(r.has_5_cycle && !r.in_class);
    }

    #[test]
    fn deleting_a_vertex_keeps_the_inherited_embedding() {
        let g = PlaneGraph::from_edges(4, &k(4)).unwrap();
        let (h, map) = g.without_vertex(2);
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(h.m(), 3);
        assert_eq!(h.faces().len(), 2);
    }
}
