//! Detectors for the thirteen reducible configurations C1–C13.

use std::fmt;

use serde::Serialize;

use crate::classify::{face_degrees, pendent_neighbor, terrible_anchors, Classification};
use crate::graph::PlaneGraph;

/// Upper bound on witnesses reported per kind by [`detect`].
pub const WITNESS_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConfigKind {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
}

impl ConfigKind {
    pub const ALL: [ConfigKind; 13] = [
        ConfigKind::C1,
        ConfigKind::C2,
        ConfigKind::C3,
        ConfigKind::C4,
        ConfigKind::C5,
        ConfigKind::C6,
        ConfigKind::C7,
        ConfigKind::C8,
        ConfigKind::C9,
        ConfigKind::C10,
        ConfigKind::C11,
        ConfigKind::C12,
        ConfigKind::C13,
    ];

    /// Search order used by [`find_any`]: cheap detectors first.
    pub const SEARCH_ORDER: [ConfigKind; 13] = [
        ConfigKind::C2,
        ConfigKind::C3,
        ConfigKind::C1,
        ConfigKind::C4,
        ConfigKind::C5,
        ConfigKind::C6,
        ConfigKind::C7,
        ConfigKind::C8,
        ConfigKind::C9,
        ConfigKind::C10,
        ConfigKind::C11,
        ConfigKind::C12,
        ConfigKind::C13,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index())
    }
}

impl std::str::FromStr for ConfigKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let idx: usize = s
            .trim()
            .strip_prefix(['C', 'c'])
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| format!("unknown configuration `{s}`"))?;
        ConfigKind::ALL
            .get(idx.wrapping_sub(1))
            .copied()
            .ok_or_else(|| format!("unknown configuration `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Role {
    pub role: String,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigWitness {
    pub kind: ConfigKind,
    pub roles: Vec<Role>,
    pub faces: Vec<usize>,
    pub delete_vertex: Option<usize>,
}

impl ConfigWitness {
    fn new(kind: ConfigKind, roles: &[(&str, usize)], faces: Vec<usize>, delete_vertex: Option<usize>) -> Self {
        ConfigWitness {
            kind,
            roles: roles.iter().map(|&(r, v)| Role { role: r.to_string(), vertex: v }).collect(),
            faces,
            delete_vertex,
        }
    }

    pub fn role(&self, name: &str) -> Option<usize> {
        self.roles.iter().find(|r| r.role == name).map(|r| r.vertex)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.roles.iter().map(|r| r.vertex).collect()
    }
}

fn deg(g: &PlaneGraph, v: usize) -> usize {
    g.degree(v)
}

/// The designated terrible-face roles `(x, x', y, y')` of a terrible face
/// at `v`: `x` is a 3-vertex with a pendent 4⁻-neighbor `x'`.
pub(crate) fn terrible_roles(g: &PlaneGraph, f: usize, v: usize) -> Option<(usize, usize, usize, usize)> {
    let anchors = terrible_anchors(g, f);
    let x = anchors.into_iter().find(|&a| a != v)?;
    let y = *g.face(f).vertices().iter().find(|&&u| u != v && u != x)?;
    let xp = pendent_neighbor(g, x, f)?;
    let yp = pendent_neighbor(g, y, f).unwrap_or(usize::MAX);
    Some((x, xp, y, yp))
}

fn terrible_faces_at(g: &PlaneGraph, cls: &Classification, v: usize) -> Vec<usize> {
    g.triangles_at(v).into_iter().filter(|&f| cls.is_terrible(f)).collect()
}

fn push_terrible(roles: &mut Vec<(String, usize)>, suffix: &str, (x, xp, y, yp): (usize, usize, usize, usize)) {
    roles.push((format!("x{suffix}"), x));
    roles.push((format!("x{suffix}'"), xp));
    roles.push((format!("y{suffix}"), y));
    if yp != usize::MAX {
        roles.push((format!("y{suffix}'"), yp));
    }
}

fn owned(kind: ConfigKind, roles: Vec<(String, usize)>, faces: Vec<usize>, delete: Option<usize>) -> ConfigWitness {
    ConfigWitness {
        kind,
        roles: roles.into_iter().map(|(role, vertex)| Role { role, vertex }).collect(),
        faces,
        delete_vertex: delete,
    }
}

/// Witness for a vertex `v` built around its terrible face `f`.
fn around_terrible(kind: ConfigKind, g: &PlaneGraph, v: usize, f: usize, extra: &[(&str, usize)], mut faces: Vec<usize>) -> Option<ConfigWitness> {
    let t = terrible_roles(g, f, v)?;
    let mut roles = vec![("v".to_string(), v)];
    roles.extend(extra.iter().map(|&(r, u)| (r.to_string(), u)));
    push_terrible(&mut roles, "", t);
    faces.insert(0, f);
    faces.dedup();
    Some(owned(kind, roles, faces, Some(t.0)))
}

/// All matches of one configuration kind, ordered by witness vertex ids,
/// at most [`WITNESS_CAP`] of them.
pub fn detect(g: &PlaneGraph, cls: &Classification, kind: ConfigKind) -> Vec<ConfigWitness> {
    detect_limited(g, cls, kind, WITNESS_CAP)
}

fn detect_limited(g: &PlaneGraph, cls: &Classification, kind: ConfigKind, limit: usize) -> Vec<ConfigWitness> {
    let n = g.n();
    let nf = g.faces().len();
    let tri = |f: usize| g.face_degree(f) == 3;
    let mut out: Vec<ConfigWitness> = Vec::new();
    let full = |out: &Vec<ConfigWitness>| out.len() >= limit;

    match kind {
        ConfigKind::C1 => {
            for f in 0..nf {
                let d = g.face_degree(f);
                if d < 7 {
                    continue;
                }
                let twos: Vec<usize> = g
                    .face(f)
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&w| deg(g, w) == 2 && g.faces_around(w).any(|h| cls.is_f2(h)))
                    .collect();
                if twos.len() >= d - 5 {
                    let roles: Vec<(String, usize)> = twos.iter().enumerate().map(|(i, &w)| (format!("w{}", i + 1), w)).collect();
                    out.push(owned(kind, roles, vec![f], None));
                }
                if full(&out) {
                    break;
                }
            }
        }
        ConfigKind::C2 => {
            for v in (0..n).filter(|&v| deg(g, v) <= 1) {
                out.push(ConfigWitness::new(kind, &[("v", v)], vec![], Some(v)));
                if full(&out) {
                    break;
                }
            }
        }
        ConfigKind::C3 => {
            for v in (0..n).filter(|&v| deg(g, v) == 2) {
                if let Some(&u) = g.adjacency()[v].iter().find(|&&u| deg(g, u) <= 4) {
                    out.push(ConfigWitness::new(kind, &[("v", v), ("u", u)], vec![], Some(v)));
                    if full(&out) {
                        break;
                    }
                }
            }
        }
        ConfigKind::C4 => {
            for f in (0..nf).filter(|&f| tri(f)) {
                let vs = g.face(f).vertices();
                let found = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).find(|&(i, j)| {
                    i != j && deg(g, vs[i]) == 2 && deg(g, vs[j]) == 5 && deg(g, vs[3 - i - j]) <= 6
                });
                if let Some((i, j)) = found {
                    let (x, y, z) = (vs[i], vs[j], vs[3 - i - j]);
                    out.push(ConfigWitness::new(kind, &[("x", x), ("y", y), ("z", z)], vec![f], Some(x)));
                    if full(&out) {
                        break;
                    }
                }
            }
        }
        ConfigKind::C5 => {
            'faces: for f in (0..nf).filter(|&f| tri(f)) {
                let vs = g.face(f).vertices();
                for i in 0..3 {
                    let x = vs[i];
                    let (y, z) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
                    if deg(g, x) != 3 || deg(g, y) > 5 || deg(g, z) > 5 {
                        continue;
                    }
                    if let Some(xp) = pendent_neighbor(g, x, f).filter(|&w| deg(g, w) <= 4) {
                        out.push(ConfigWitness::new(kind, &[("x", x), ("y", y), ("z", z), ("x'", xp)], vec![f], Some(x)));
                        if full(&out) {
                            break 'faces;
                        }
                    }
                }
            }
        }
        ConfigKind::C6 => {
            for v in (0..n).filter(|&v| deg(g, v) == 5) {
                let nb = &g.adjacency()[v];
                if nb.iter().any(|&u| deg(g, u) > 3) {
                    continue;
                }
                if let Some(&x1) = nb.iter().find(|&&u| cls.is_w2(u)) {
                    let y1 = *g.neighbors(x1).iter().find(|&&w| w != v).unwrap();
                    out.push(ConfigWitness::new(kind, &[("v", v), ("x1", x1), ("y1", y1)], vec![], Some(x1)));
                    if full(&out) {
                        break;
                    }
                }
            }
        }
        ConfigKind::C7 => {
            for v in (0..n).filter(|&v| deg(g, v) == 5) {
                let mut roles = vec![("v".to_string(), v)];
                let mut faces = Vec::new();
                let mut small = 0;
                let mut ok = true;
                for (i, &x) in g.adjacency()[v].iter().enumerate() {
                    let recs: Vec<usize> = cls.pendent_of(v).filter(|r| r.anchor == x).map(|r| r.face).collect();
                    let is_small = |f: usize| face_degrees(g, f)[2] <= 5;
                    let pick = recs.iter().copied().find(|&f| is_small(f)).or_else(|| recs.first().copied());
                    let Some(f) = pick else {
                        ok = false;
                        break;
                    };
                    if is_small(f) {
                        small += 1;
                    }
                    let others: Vec<usize> = g.face(f).vertices().iter().copied().filter(|&w| w != x).collect();
                    roles.push((format!("x{}", i + 1), x));
                    roles.push((format!("y{}", i + 1), others[0]));
                    roles.push((format!("z{}", i + 1), others[1]));
                    faces.push(f);
                }
                if ok && small >= 4 {
                    out.push(owned(kind, roles, faces, Some(v)));
                    if full(&out) {
                        break;
                    }
                }
            }
        }
        ConfigKind::C8 => {
            for &v in &cls.bad {
                if g.neighbors(v).iter().all(|&u| deg(g, u) <= 6) {
                    let t = terrible_faces_at(g, cls, v);
                    if let Some(w) = t.first().and_then(|&f| around_terrible(kind, g, v, f, &[], vec![])) {
                        out.push(w);
                    }
                }
                if full(&out) {
                    break;
                }
            }
        }
        ConfigKind::C9 => {
            for f in (0..nf).filter(|&f| tri(f) && cls.is_f23(f)) {
                let bad: Vec<usize> = g.face(f).vertices().iter().copied().filter(|&u| cls.is_bad(u)).collect();
                if bad.len() < 2 {
                    continue;
                }
                let (v, w) = (bad[0].min(bad[1]), bad[0].max(bad[1]));
                let u = *g.face(f).vertices().iter().find(|&&u| u != v && u != w).unwrap();
                let t = terrible_faces_at(g, cls, v);
                if let Some(wit) = t.first().and_then(|&tf| around_terrible(kind, g, v, tf, &[("w", w), ("u", u)], vec![f])) {
                    out.push(wit);
                }
                if full(&out) {
                    break;
                }
            }
        }
        ConfigKind::C10 | ConfigKind::C11 | ConfigKind::C12 => {
            for v in 0..n {
                let d = deg(g, v);
                let terr = terrible_faces_at(g, cls, v);
                let matches = match kind {
                    ConfigKind::C10 => d == 6 && g.triangles_at(v).len() >= 3 && !terr.is_empty(),
                    ConfigKind::C11 => (6..=10).contains(&d) && terr.len() >= d - 4,
                    _ => (6..=10).contains(&d) && terr.len() >= d - 5 && g.neighbors(v).iter().all(|&u| deg(g, u) <= 3),
                };
                if !matches {
                    continue;
                }
                let extra: Vec<usize> = terr.iter().skip(1).copied().collect();
                if let Some(mut wit) = terr.first().and_then(|&f| around_terrible(kind, g, v, f, &[], vec![])) {
                    let mut roles: Vec<(String, usize)> = wit.roles.drain(..).map(|r| (r.role, r.vertex)).collect();
                    for (j, &f) in extra.iter().enumerate() {
                        if let Some(t) = terrible_roles(g, f, v) {
                            push_terrible(&mut roles, &(j + 2).to_string(), t);
                            wit.faces.push(f);
                        }
                    }
                    wit.roles = roles.into_iter().map(|(role, vertex)| Role { role, vertex }).collect();
                    out.push(wit);
                }
                if full(&out) {
                    break;
                }
            }
        }
        ConfigKind::C13 => {
            for v in 0..n {
                let d = deg(g, v);
                if !(7..=10).contains(&d) || cls.is_bad(v) {
                    continue;
                }
                let tris = g.triangles_at(v);
                let Some(&f1) = tris.iter().find(|&&f| cls.is_f2_star(f)) else {
                    continue;
                };
                let others: Vec<usize> = tris
                    .iter()
                    .copied()
                    .filter(|&f| f != f1 && (cls.is_terrible(f) || cls.is_f2_star(f)))
                    .collect();
                if others.len() < d - 6 {
                    continue;
                }
                let (x1, y1) = star_roles(g, f1, v);
                let mut roles = vec![("v".to_string(), v), ("x1".to_string(), x1), ("y1".to_string(), y1)];
                let mut faces = vec![f1];
                for (j, &f) in others.iter().enumerate() {
                    let s = (j + 2).to_string();
                    if cls.is_f2_star(f) {
                        let (x, y) = star_roles(g, f, v);
                        roles.push((format!("x{s}"), x));
                        roles.push((format!("y{s}"), y));
                    } else if let Some(t) = terrible_roles(g, f, v) {
                        push_terrible(&mut roles, &s, t);
                    }
                    faces.push(f);
                }
                out.push(owned(kind, roles, faces, Some(x1)));
                if full(&out) {
                    break;
                }
            }
        }
    }
    out.sort_by(|a, b| a.vertices().cmp(&b.vertices()));
    out.truncate(limit);
    out
}

/// Roles of an `F2*`-face at `v`: the 2-vertex `x` and the remaining vertex `y`.
pub(crate) fn star_roles(g: &PlaneGraph, f: usize, v: usize) -> (usize, usize) {
    let vs = g.face(f).vertices();
    let x = vs.iter().copied().filter(|&u| u != v && g.degree(u) == 2).min().expect("F2 face has a 2-vertex");
    let y = *vs.iter().find(|&&u| u != v && u != x).unwrap();
    (x, y)
}

/// The first witness in [`ConfigKind::SEARCH_ORDER`], if any.
pub fn find_any(g: &PlaneGraph, cls: &Classification) -> Option<ConfigWitness> {
    ConfigKind::SEARCH_ORDER
        .iter()
        .find_map(|&k| detect_limited(g, cls, k, 1).into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::gadgets;

    fn graph(n: usize, e: &[(usize, usize)]) -> PlaneGraph {
        PlaneGraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn single_edge_has_two_leaf_witnesses() {
        let g = graph(2, &[(0, 1)]);
        let w = detect(&g, &classify(&g).unwrap(), ConfigKind::C2);
        assert_eq!(w.iter().map(|w| w.delete_vertex).collect::<Vec<_>>(), vec![Some(0), Some(1)]);
    }

    #[test]
    fn path_has_c3_at_middle() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let w = detect(&g, &classify(&g).unwrap(), ConfigKind::C3);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].role("v"), Some(1));
    }

    #[test]
    fn terrible_gadget_has_c5_only_when_small() {
        let (g, f) = gadgets::terrible_face();
        let c = classify(&g).unwrap();
        // (3,3,6): the 6-vertex rules out C5
        assert!(detect(&g, &c, ConfigKind::C5).is_empty());
        let (g, f5) = gadgets::triangle_with_pendent_degrees(1, 1, 5);
        let c = classify(&g).unwrap();
        assert!(c.terrible.contains(&f5));
        let w = detect(&g, &c, ConfigKind::C5);
        assert!(!w.is_empty());
        assert_eq!(w[0].faces, vec![f5]);
        let _ = f;
    }

    #[test]
    fn tree_and_cycle_configurations() {
        let g = graph(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(find_any(&g, &classify(&g).unwrap()).unwrap().kind, ConfigKind::C2);
        let c6 = graph(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>());
        assert_eq!(find_any(&c6, &classify(&c6).unwrap()).unwrap().kind, ConfigKind::C3);
    }

    #[test]
    fn bad_six_with_small_neighbors_is_c8_and_c12() {
        let (g, v) = gadgets::bad_vertex(6);
        let c = classify(&g).unwrap();
        let w8 = detect(&g, &c, ConfigKind::C8);
        assert_eq!(w8.len(), 1);
        assert_eq!(w8[0].role("v"), Some(v));
        let x = w8[0].role("x").unwrap();
        assert_eq!(w8[0].delete_vertex, Some(x));
        assert_eq!(g.degree(x), 3);
        let w12 = detect(&g, &c, ConfigKind::C12);
        assert_eq!(w12.len(), 1);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("C13".parse::<ConfigKind>(), Ok(ConfigKind::C13));
        assert_eq!("c1".parse::<ConfigKind>(), Ok(ConfigKind::C1));
        assert!("C14".parse::<ConfigKind>().is_err());
        assert!("C0".parse::<ConfigKind>().is_err());
        assert_eq!(ConfigKind::C7.to_string(), "C7");
    }
}
