//! Structural classification of vertices and 3-faces: the sets `W2`, `F2`,
//! `F3`, terrible faces, bad vertices, `F2*` and pendent relations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;

/// A 3-vertex `anchor` on the 3-face `face` whose neighbor `owner` is off
/// the face: `face` is a pendent face of `owner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PendentRecord {
    pub owner: usize,
    pub anchor: usize,
    pub face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub w2: Vec<usize>,
    pub f2: Vec<usize>,
    pub f3: Vec<usize>,
    pub terrible: Vec<usize>,
    pub bad: Vec<usize>,
    pub f2_star: Vec<usize>,
    pub pendent: Vec<PendentRecord>,
    #[serde(skip)]
    masks: Masks,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Masks {
    w2: Vec<bool>,
    bad: Vec<bool>,
    f2: Vec<bool>,
    f3: Vec<bool>,
    terrible: Vec<bool>,
    f2_star: Vec<bool>,
    pendent_of: Vec<Vec<usize>>,
}

impl Classification {
    pub fn is_w2(&self, v: usize) -> bool {
        self.masks.w2[v]
    }

    pub fn is_bad(&self, v: usize) -> bool {
        self.masks.bad[v]
    }

    pub fn is_f2(&self, f: usize) -> bool {
        self.masks.f2[f]
    }

    pub fn is_f3(&self, f: usize) -> bool {
        self.masks.f3[f]
    }

    pub fn is_f23(&self, f: usize) -> bool {
        self.masks.f2[f] || self.masks.f3[f]
    }

    pub fn is_terrible(&self, f: usize) -> bool {
        self.masks.terrible[f]
    }

    pub fn is_f2_star(&self, f: usize) -> bool {
        self.masks.f2_star[f]
    }

    /// Pendent records whose owner is `v`.
    pub fn pendent_of(&self, v: usize) -> impl Iterator<Item = &PendentRecord> + '_ {
        self.masks.pendent_of[v].iter().map(|&i| &self.pendent[i])
    }
}

/// The unique neighbor of a 3-vertex `u` that is off the 3-face `f`.
pub fn pendent_neighbor(g: &PlaneGraph, u: usize, f: usize) -> Option<usize> {
    let face = g.face(f);
    if g.degree(u) != 3 || face.degree() != 3 || !face.contains(u) {
        return None;
    }
    g.neighbors(u).iter().copied().find(|&w| !face.contains(w))
}

/// Vertex degrees on a face, ascending.
pub fn face_degrees(g: &PlaneGraph, f: usize) -> Vec<usize> {
    let mut d: Vec<usize> = g.face(f).vertices().iter().map(|&v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

fn has_degree_on(g: &PlaneGraph, f: usize, deg: usize) -> bool {
    g.face(f).vertices().iter().any(|&v| g.degree(v) == deg)
}

/// The 3-vertices of a terrible face whose pendent neighbor is a 4⁻-vertex.
pub fn terrible_anchors(g: &PlaneGraph, f: usize) -> Vec<usize> {
    if g.face_degree(f) != 3 {
        return Vec::new();
    }
    let threes = g.face(f).vertices().iter().filter(|&&v| g.degree(v) == 3).count();
    if threes < 2 {
        return Vec::new();
    }
    let mut out: Vec<usize> = g
        .face(f)
        .vertices()
        .iter()
        .copied()
        .filter(|&u| g.degree(u) == 3 && pendent_neighbor(g, u, f).is_some_and(|w| g.degree(w) <= 4))
        .collect();
    out.sort_unstable();
    out
}

/// A `(3,3,d)`-face one of whose 3-vertices has a pendent 4⁻-neighbor.
pub fn is_terrible(g: &PlaneGraph, f: usize) -> Result<bool> {
    if g.face_degree(f) != 3 {
        return Err(Error::NotATriangle(f));
    }
    Ok(!terrible_anchors(g, f).is_empty())
}

fn in_f23(g: &PlaneGraph, f: usize) -> bool {
    g.face_degree(f) == 3 && (has_degree_on(g, f, 2) || has_degree_on(g, f, 3))
}

fn bad_with(g: &PlaneGraph, v: usize, terrible: impl Fn(usize) -> bool) -> bool {
    let d = g.degree(v);
    if !(6..=8).contains(&d) {
        return false;
    }
    let tris = g.triangles_at(v);
    let (terr, rest): (Vec<usize>, Vec<usize>) = tris.into_iter().partition(|&f| terrible(f));
    let others: Vec<usize> = rest.into_iter().filter(|&f| in_f23(g, f)).collect();
    if terr.len() != d - 5 || others.len() != 1 {
        return false;
    }
    let covered = |u: usize| terr.iter().chain(&others).any(|&f| g.face(f).contains(u));
    g.neighbors(v).iter().all(|&u| covered(u) || g.degree(u) <= 3)
}

/// A `d`-vertex, `d` in 6..=8, on exactly `d-5` terrible faces and one
/// non-terrible `(F2 ∪ F3)`-face, whose remaining neighbors are 3⁻-vertices.
pub fn is_bad(g: &PlaneGraph, v: usize) -> bool {
    bad_with(g, v, |f| !terrible_anchors(g, f).is_empty())
}

pub fn classify(g: &PlaneGraph) -> Result<Classification> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = g.n();
    let nf = g.faces().len();
    let tri = |f: usize| g.face_degree(f) == 3;

    let on_triangle: Vec<bool> = (0..n).map(|v| g.faces_around(v).any(tri)).collect();
    let w2m: Vec<bool> = (0..n).map(|v| g.degree(v) == 2 && !on_triangle[v]).collect();
    let f2m: Vec<bool> = (0..nf).map(|f| tri(f) && has_degree_on(g, f, 2)).collect();
    let f3m: Vec<bool> = (0..nf).map(|f| tri(f) && has_degree_on(g, f, 3)).collect();
    let term: Vec<bool> = (0..nf).map(|f| f3m[f] && !terrible_anchors(g, f).is_empty()).collect();
    let badm: Vec<bool> = (0..n).map(|v| bad_with(g, v, |f| term[f])).collect();
    let starm: Vec<bool> = (0..nf)
        .map(|f| f2m[f] && g.face(f).vertices().iter().any(|&v| g.degree(v) == 5 || badm[v]))
        .collect();

    let mut pendent = Vec::new();
    for f in (0..nf).filter(|&f| tri(f)) {
        for &u in g.face(f).vertices() {
            if let Some(owner) = pendent_neighbor(g, u, f) {
                pendent.push(PendentRecord { owner, anchor: u, face: f });
            }
        }
    }
    pendent.sort_unstable();
    let mut pendent_of = vec![Vec::new(); n];
    for (i, r) in pendent.iter().enumerate() {
        pendent_of[r.owner].push(i);
    }

    let ids = |m: &[bool]| m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect::<Vec<_>>();
    Ok(Classification {
        w2: ids(&w2m),
        f2: ids(&f2m),
        f3: ids(&f3m),
        terrible: ids(&term),
        bad: ids(&badm),
        f2_star: ids(&starm),
        pendent,
        masks: Masks {
            w2: w2m,
            bad: badm,
            f2: f2m,
            f3: f3m,
            terrible: term,
            f2_star: starm,
            pendent_of,
        },
    })
}
