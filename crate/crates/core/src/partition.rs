//! Two-part vertex partitions where each part induces a graph of bounded
//! maximum degree, optionally also a forest.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartKind {
    Forest,
    BoundedDegree,
}

/// `F_d` (forest of maximum degree at most `d`) or `Δ_d`; `d = None` means
/// no degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartSpec {
    pub kind: PartKind,
    pub d: Option<usize>,
}

impl PartSpec {
    pub const fn forest(d: usize) -> Self {
        PartSpec { kind: PartKind::Forest, d: Some(d) }
    }

    pub const fn bounded(d: usize) -> Self {
        PartSpec { kind: PartKind::BoundedDegree, d: Some(d) }
    }

    pub fn is_forest(&self) -> bool {
        self.kind == PartKind::Forest
    }

    fn allows(&self, degree: usize) -> bool {
        self.d.map_or(true, |d| degree <= d)
    }
}

pub const F3_F4: [PartSpec; 2] = [PartSpec::forest(3), PartSpec::forest(4)];

impl fmt::Display for PartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.is_forest() { 'F' } else { 'D' };
        match self.d {
            Some(d) => write!(f, "{k}{d}"),
            None => write!(f, "{k}inf"),
        }
    }
}

impl FromStr for PartSpec {
    type Err = Error;

    /// `F3`, `D4`, `Finf`, or `I` for an independent set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "I" {
            return Ok(PartSpec::forest(0));
        }
        let bad = || Error::InvalidArgument(format!("bad part spec `{s}`; expected e.g. F3, D4, Finf, I"));
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('F') => PartKind::Forest,
            Some('D') | Some('Δ') => PartKind::BoundedDegree,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let d = match rest {
            "inf" | "∞" => None,
            _ => Some(rest.parse().map_err(|_| bad())?),
        };
        Ok(PartSpec { kind, d })
    }
}

/// Parses `F3,F4`.
pub fn parse_specs(s: &str) -> Result<[PartSpec; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!("expected two comma-separated specs, got `{s}`")));
    }
    Ok([parts[0].parse()?, parts[1].parse()?])
}

/// An assignment of vertices to parts 0 and 1, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<Option<u8>>,
}

impl Partition {
    pub fn unassigned(n: usize) -> Self {
        Partition { assignment: vec![None; n] }
    }

    /// Panics if a part index is not 0 or 1.
    pub fn from_parts(parts: &[u8]) -> Self {
        assert!(parts.iter().all(|&p| p < 2), "part index out of range");
        Partition { assignment: parts.iter().map(|&p| Some(p)).collect() }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn get(&self, v: usize) -> Option<u8> {
        self.assignment[v]
    }

    pub fn set(&mut self, v: usize, part: u8) {
        debug_assert!(part < 2);
        self.assignment[v] = Some(part);
    }

    pub fn unset(&mut self, v: usize) {
        self.assignment[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn first_unassigned(&self) -> Option<usize> {
        self.assignment.iter().position(Option::is_none)
    }

    pub fn part(&self, p: u8) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.assignment[v] == Some(p)).collect()
    }

    pub fn assignment(&self) -> &[Option<u8>] {
        &self.assignment
    }

    /// One character per vertex: `0`, `1`, or `.` when unassigned.
    pub fn to_line(&self) -> String {
        self.assignment
            .iter()
            .map(|p| match p {
                Some(0) => '0',
                Some(_) => '1',
                None => '.',
            })
            .collect()
    }

    pub fn from_line(s: &str) -> Result<Self> {
        let assignment = s
            .trim()
            .char_indices()
            .map(|(i, c)| match c {
                '0' => Ok(Some(0)),
                '1' => Ok(Some(1)),
                '.' => Ok(None),
                _ => Err(Error::Parse { offset: i, message: format!("unexpected `{c}` in partition line") }),
            })
            .collect::<Result<_>>()?;
        Ok(Partition { assignment })
    }

    /// Accepts either the line format or JSON `{"part0": [...], "part1": [...]}`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let t = text.trim_start();
        if t.starts_with('{') {
            let raw: PartsJson = serde_json::from_str(t).map_err(|e| Error::Parse {
                offset: 0,
                message: e.to_string(),
            })?;
            let mut p = Partition::unassigned(n);
            for (part, vs) in [(0u8, raw.part0), (1u8, raw.part1)] {
                for v in vs {
                    if v >= n {
                        return Err(Error::VertexOutOfRange { vertex: v, n });
                    }
                    p.set(v, part);
                }
            }
            Ok(p)
        } else {
            let mut p = Partition::from_line(t)?;
            if p.n() != n {
                p.assignment.resize(n, None);
            }
            Ok(p)
        }
    }

    /// Keeps the vertices listed in `map` (new id → old id).
    pub fn restrict(&self, map: &[usize]) -> Partition {
        Partition { assignment: map.iter().map(|&old| self.assignment[old]).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct PartsJson {
    part0: Vec<usize>,
    part1: Vec<usize>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartsJson { part0: self.part(0), part1: self.part(1) }.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Violation {
    Degree { vertex: usize, part: u8, degree: usize, bound: usize },
    Cycle { part: u8, cycle: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree { vertex, part, degree, bound } => {
                write!(f, "vertex {vertex} has degree {degree} in part {part}, bound {bound}")
            }
            Violation::Cycle { part, cycle } => write!(f, "part {part} contains the cycle {cycle:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Check {
    Valid,
    Violation(Violation),
}

impl Check {
    pub fn is_valid(&self) -> bool {
        matches!(self, Check::Valid)
    }
}

pub fn verify(g: &PlaneGraph, p: &Partition, specs: &[PartSpec; 2]) -> Result<Check> {
    verify_adj(g.adjacency(), p, specs)
}

/// `verify` on plain sorted adjacency lists.
pub fn verify_adj(adj: &[Vec<usize>], p: &Partition, specs: &[PartSpec; 2]) -> Result<Check> {
    if p.n() != adj.len() {
        return Err(Error::PartialAssignment(p.n().min(adj.len())));
    }
    if let Some(v) = p.first_unassigned() {
        return Err(Error::PartialAssignment(v));
    }
    Ok(first_violation(adj, p, specs).map_or(Check::Valid, Check::Violation))
}

/// The first violation among assigned vertices; unassigned ones are ignored.
pub fn first_violation(adj: &[Vec<usize>], p: &Partition, specs: &[PartSpec; 2]) -> Option<Violation> {
    let n = adj.len();
    for v in 0..n {
        let Some(part) = p.get(v) else { continue };
        let spec = specs[part as usize];
        let degree = adj[v].iter().filter(|&&u| p.get(u) == Some(part)).count();
        if !spec.allows(degree) {
            return Some(Violation::Degree { vertex: v, part, degree, bound: spec.d.unwrap_or(usize::MAX) });
        }
    }
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        let Some(part) = p.get(u) else { continue };
        if !specs[part as usize].is_forest() {
            continue;
        }
        for &v in adj[u].iter().filter(|&&v| v > u && p.get(v) == Some(part)) {
            if !uf.union(u, v) {
                return Some(Violation::Cycle { part, cycle: cycle_through(adj, p, part, u, v) });
            }
        }
    }
    None
}

/// A cycle through the edge `uv` inside `part`, starting at `u`.
fn cycle_through(adj: &[Vec<usize>], p: &Partition, part: u8, u: usize, v: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[u] = u;
    let mut queue = std::collections::VecDeque::from([u]);
    while let Some(a) = queue.pop_front() {
        if a == v {
            break;
        }
        for &b in &adj[a] {
            if (a, b) == (u, v) || prev[b] != usize::MAX || p.get(b) != Some(part) {
                continue;
            }
            prev[b] = a;
            queue.push_back(b);
        }
    }
    let mut path = vec![v];
    let mut x = v;
    while x != u {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    path
}

/// Union-find with rollback; union by size, no path compression.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    pub(crate) fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// False if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push((a, b));
        true
    }

    pub(crate) fn checkpoint(&self) -> usize {
        self.history.len()
    }

    pub(crate) fn rollback(&mut self, to: usize) {
        while self.history.len() > to {
            let (a, b) = self.history.pop().unwrap();
            self.parent[b] = b;
            self.size[a] -= self.size[b];
        }
    }
}

pub const DEFAULT_CAP: usize = 26;

/// Exact search for a partition; `None` means none exists.
pub fn solve(g: &PlaneGraph, specs: &[PartSpec; 2], cap: usize) -> Result<Option<Partition>> {
    solve_adj(g.adjacency(), specs, cap)
}

pub fn solve_adj(adj: &[Vec<usize>], specs: &[PartSpec; 2], cap: usize) -> Result<Option<Partition>> {
    let n = adj.len();
    if n > cap {
        return Err(Error::TooLarge { n, limit: cap });
    }
    let mut fixed = Partition::unassigned(n);
    if n > 0 && specs[0] == specs[1] {
        fixed.set(0, 0);
    }
    Ok(search(adj, specs, fixed))
}

/// Exact search that keeps every vertex already assigned in `fixed` where
/// it is. `cap` bounds the number of free vertices.
pub fn solve_with_fixed(
    adj: &[Vec<usize>],
    specs: &[PartSpec; 2],
    fixed: &Partition,
    cap: usize,
) -> Result<Option<Partition>> {
    if fixed.n() != adj.len() {
        return Err(Error::InvalidArgument(format!("partition has {} vertices, graph has {}", fixed.n(), adj.len())));
    }
    let free = fixed.assignment.iter().filter(|p| p.is_none()).count();
    if free > cap {
        return Err(Error::TooLarge { n: free, limit: cap });
    }
    Ok(search(adj, specs, fixed.clone()))
}

/// Vertices in degeneracy removal order (minimum degree first, ties by id).
pub fn degeneracy_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<(usize, usize)>> =
        (0..n).map(|v| std::cmp::Reverse((deg[v], v))).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
        if removed[v] || d != deg[v] {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                deg[u] -= 1;
                heap.push(std::cmp::Reverse((deg[u], u)));
            }
        }
    }
    order
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    specs: &'a [PartSpec; 2],
    part: Vec<Option<u8>>,
    inner: Vec<usize>,
    uf: UnionFind,
}

impl Search<'_> {
    /// Places `v` into `p` if that keeps every constraint; returns the
    /// union-find checkpoint to roll back to.
    fn place(&mut self, v: usize, p: u8) -> Option<usize> {
        let spec = self.specs[p as usize];
        let same: Vec<usize> = self.adj[v].iter().copied().filter(|&u| self.part[u] == Some(p)).collect();
        if !spec.allows(same.len()) || same.iter().any(|&u| !spec.allows(self.inner[u] + 1)) {
            return None;
        }
        let mark = self.uf.checkpoint();
        if spec.is_forest() {
            for &u in &same {
                if !self.uf.union(v, u) {
                    self.uf.rollback(mark);
                    return None;
                }
            }
        }
        self.part[v] = Some(p);
        self.inner[v] = same.len();
        for &u in &same {
            self.inner[u] += 1;
        }
        Some(mark)
    }

    fn remove(&mut self, v: usize, mark: usize) {
        let p = self.part[v].take();
        for &u in &self.adj[v] {
            if self.part[u].is_some() && self.part[u] == p {
                self.inner[u] -= 1;
            }
        }
        self.inner[v] = 0;
        self.uf.rollback(mark);
    }

    fn run(&mut self, order: &[usize]) -> bool {
        let Some((&v, rest)) = order.split_first() else { return true };
        for p in 0..2 {
            if let Some(mark) = self.place(v, p) {
                if self.run(rest) {
                    return true;
                }
                self.remove(v, mark);
            }
        }
        false
    }
}

fn search(adj: &[Vec<usize>], specs: &[PartSpec; 2], fixed: Partition) -> Option<Partition> {
    let n = adj.len();
    let mut s = Search {
        adj,
        specs,
        part: vec![None; n],
        inner: vec![0; n],
        uf: UnionFind::new(n),
    };
    for v in 0..n {
        if let Some(p) = fixed.get(v) {
            s.place(v, p)?;
        }
    }
    let mut order = degeneracy_order(adj);
    order.reverse();
    order.retain(|&v| fixed.get(v).is_none());
    if s.run(&order) {
        Some(Partition { assignment: s.part })
    } else {
        None
    }
}

pub const ENUMERATION_LIMIT: usize = 20;

/// Counts valid partitions by trying all `2^n` assignments, returning up to
/// `limit` of them in lexicographic order of the 0/1 line.
pub fn count_or_enumerate(g: &PlaneGraph, specs: &[PartSpec; 2], limit: usize) -> Result<(u64, Vec<Partition>)> {
    let adj = g.adjacency();
    let n = adj.len();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    let mut count = 0u64;
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let parts: Vec<u8> = (0..n).map(|v| ((mask >> (n - 1 - v)) & 1) as u8).collect();
        let p = Partition::from_parts(&parts);
        if first_violation(adj, &p, specs).is_none() {
            count += 1;
            if found.len() < limit {
                found.push(p);
            }
        }
    }
    Ok((count, found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> PlaneGraph {
        PlaneGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn specs_parse_and_print() {
        assert_eq!(parse_specs("F3,F4").unwrap(), F3_F4);
        assert_eq!("D4".parse::<PartSpec>().unwrap(), PartSpec::bounded(4));
        assert_eq!("I".parse::<PartSpec>().unwrap(), PartSpec::forest(0));
        assert_eq!("Finf".parse::<PartSpec>().unwrap().d, None);
        assert_eq!(PartSpec::bounded(2).to_string(), "D2");
        assert!("X3".parse::<PartSpec>().is_err());
        assert!(parse_specs("F3").is_err());
    }

    #[test]
    fn hexagon_path_plus_singleton_is_valid() {
        let p = Partition::from_parts(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(verify(&cycle(6), &p, &F3_F4).unwrap(), Check::Valid);
    }

    #[test]
    fn hexagon_in_one_part_is_a_cycle() {
        let p = Partition::from_parts(&[0; 6]);
        match verify(&cycle(6), &p, &F3_F4).unwrap() {
            Check::Violation(Violation::Cycle { part: 0, cycle }) => {
                let mut c = cycle.clone();
                c.sort_unstable();
                assert_eq!(c, vec![0, 1, 2, 3, 4, 5]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn triangle_split_one_two_is_valid() {
        let p = Partition::from_parts(&[0, 1, 1]);
        assert!(verify(&cycle(3), &p, &F3_F4).unwrap().is_valid());
    }

    #[test]
    fn degree_violation_names_the_vertex() {
        let star = PlaneGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = Partition::from_parts(&[0; 5]);
        assert_eq!(
            verify(&star, &p, &F3_F4).unwrap(),
            Check::Violation(Violation::Degree { vertex: 0, part: 0, degree: 4, bound: 3 })
        );
        assert!(verify(&star, &p, &[PartSpec::forest(4), PartSpec::forest(4)]).unwrap().is_valid());
    }

    #[test]
    fn partial_assignment_is_an_error() {
        let mut p = Partition::from_parts(&[0, 1, 1]);
        p.unset(1);
        assert_eq!(verify(&cycle(3), &p, &F3_F4), Err(Error::PartialAssignment(1)));
    }

    #[test]
    fn triangle_is_not_two_independent_sets() {
        let d0 = [PartSpec::bounded(0), PartSpec::bounded(0)];
        assert_eq!(solve(&cycle(3), &d0, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn hexagon_solves() {
        let g = cycle(6);
        let p = solve(&g, &F3_F4, DEFAULT_CAP).unwrap().unwrap();
        assert!(verify(&g, &p, &F3_F4).unwrap().is_valid());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(solve(&cycle(7), &F3_F4, 6), Err(Error::TooLarge { n: 7, limit: 6 }));
    }

    #[test]
    fn small_counts() {
        let k1 = PlaneGraph::from_edges(1, &[]).unwrap();
        assert_eq!(count_or_enumerate(&k1, &F3_F4, 10).unwrap().0, 2);
        let k2 = PlaneGraph::from_edges(2, &[(0, 1)]).unwrap();
        let f0 = [PartSpec::forest(0), PartSpec::forest(0)];
        assert_eq!(count_or_enumerate(&k2, &f0, 10).unwrap().0, 2);
        let (count, list) = count_or_enumerate(&cycle(3), &F3_F4, 10).unwrap();
        assert_eq!(count, 6);
        assert_eq!(list.len(), 6);
        assert!(!list.contains(&Partition::from_parts(&[0, 0, 0])));
    }

    #[test]
    fn fixed_vertices_stay_put() {
        let g = cycle(6);
        let mut fixed = Partition::unassigned(6);
        fixed.set(2, 1);
        fixed.set(3, 1);
        let p = solve_with_fixed(g.adjacency(), &F3_F4, &fixed, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!((p.get(2), p.get(3)), (Some(1), Some(1)));
        assert!(verify(&g, &p, &F3_F4).unwrap().is_valid());

        let mut all = Partition::from_parts(&[0; 6]);
        all.unset(5);
        let d1 = [PartSpec::forest(1), PartSpec::forest(1)];
        assert_eq!(solve_with_fixed(g.adjacency(), &d1, &all, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn line_and_json_formats() {
        let p = Partition::from_parts(&[0, 1, 1, 0]);
        assert_eq!(p.to_line(), "0110");
        assert_eq!(Partition::from_line("0110").unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"part0":[0,3],"part1":[1,2]}"#);
        assert_eq!(Partition::parse(&json, 4).unwrap(), p);
        assert!(Partition::from_line("01x").is_err());
    }

    #[test]
    fn union_find_rolls_back() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        let mark = uf.checkpoint();
        assert!(uf.union(1, 2));
        assert!(!uf.union(0, 2));
        uf.rollback(mark);
        assert_ne!(uf.find(0), uf.find(2));
        assert_eq!(uf.find(0), uf.find(1));
    }

    #[test]
    fn degeneracy_order_of_a_path() {
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(degeneracy_order(&adj), vec![0, 1, 2]);
    }
}
