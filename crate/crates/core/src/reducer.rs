//! Constructive `(F3, F4)`-partitions: delete the designated vertex of a
//! reducible configuration, partition what is left, and put the vertex back
//! using short sequences of part moves taken from the reducibility proofs.
//!
//! Part 0 plays the role of `A3` (forest, maximum degree 3) and part 1 the
//! role of `A4`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classify::{classify, pendent_neighbor, terrible_anchors, Classification};
use crate::configs::{find_any, ConfigKind, ConfigWitness, Role};
use crate::error::{Error, Result};
use crate::graph::{class_membership, PlaneGraph};
use crate::partition::{first_violation, solve_adj, solve_with_fixed, Partition, DEFAULT_CAP, F3_F4};

const A3: u8 = 0;
const A4: u8 = 1;

/// Moved vertices must stay within this distance of the re-inserted vertex.
pub const TEMPLATE_RADIUS: usize = 3;

/// A named sequence of part moves; later moves override earlier ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveTemplate {
    pub name: String,
    pub bindings: Vec<(String, Vec<usize>)>,
    pub moves: Vec<(usize, u8)>,
}

impl MoveTemplate {
    fn new(name: &str) -> Self {
        MoveTemplate { name: name.to_string(), bindings: Vec::new(), moves: Vec::new() }
    }

    fn bind(mut self, role: &str, vs: &[usize]) -> Self {
        self.bindings.push((role.to_string(), vs.to_vec()));
        self
    }

    fn to(mut self, part: u8, vs: &[usize]) -> Self {
        self.moves.extend(vs.iter().map(|&v| (v, part)));
        self
    }

    fn after(mut self, prefix: &[(usize, u8)]) -> Self {
        let mut moves = prefix.to_vec();
        moves.append(&mut self.moves);
        self.moves = moves;
        self
    }

    pub fn apply(&self, p: &Partition) -> Partition {
        let mut q = p.clone();
        for &(v, part) in &self.moves {
            q.set(v, part);
        }
        q
    }

    pub fn touched(&self) -> impl Iterator<Item = usize> + '_ {
        self.moves.iter().map(|&(v, _)| v)
    }
}

/// What to do when no template re-inserts a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    /// Solve the current instance exactly if it is within the solver cap,
    /// otherwise as `Local`.
    #[default]
    Full,
    /// Re-solve the ball of radius 3 around the vertex with everything else
    /// frozen.
    Local,
    Abort,
}

impl FromStr for Fallback {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Fallback::Full),
            "local" => Ok(Fallback::Local),
            "abort" => Ok(Fallback::Abort),
            _ => Err(Error::InvalidArgument(format!("unknown fallback `{s}`; expected full, local or abort"))),
        }
    }
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fallback::Full => "full",
            Fallback::Local => "local",
            Fallback::Abort => "abort",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceOptions {
    pub base_case_size: usize,
    pub fallback: Fallback,
    /// Vertex limit for exact solves in fallbacks.
    pub cap: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { base_case_size: 8, fallback: Fallback::Full, cap: DEFAULT_CAP }
    }
}

/// How a fallback re-inserted a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FallbackUsed {
    Full,
    Local,
}

/// One reduction. Vertex ids refer to the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: ConfigKind,
    pub roles: Vec<Role>,
    pub deleted: usize,
    pub template: Option<String>,
    pub fallback: Option<FallbackUsed>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ReduceTrace {
    pub steps: Vec<TraceStep>,
    pub base_case_size: usize,
    pub base_cases: usize,
}

impl ReduceTrace {
    pub fn fallback_count(&self) -> usize {
        self.steps.iter().filter(|s| s.fallback.is_some()).count()
    }
}

pub fn partition_constructively(g: &PlaneGraph) -> Result<(Partition, ReduceTrace)> {
    partition_constructively_with(g, &ReduceOptions::default())
}

/// Components are reduced independently.
pub fn partition_constructively_with(g: &PlaneGraph, opts: &ReduceOptions) -> Result<(Partition, ReduceTrace)> {
    if !class_membership(g).in_class {
        return Err(Error::NotInClass);
    }
    let mut trace = ReduceTrace { base_case_size: opts.base_case_size, ..Default::default() };
    let mut out = Partition::unassigned(g.n());
    for comp in g.components() {
        let (c, map) = g.induced(&comp);
        let p = reduce(&c, &map, opts, &mut trace)?;
        for (i, &old) in map.iter().enumerate() {
            out.set(old, p.get(i).expect("reduction returns total partitions"));
        }
    }
    Ok((out, trace))
}

fn reduce(g: &PlaneGraph, map: &[usize], opts: &ReduceOptions, trace: &mut ReduceTrace) -> Result<Partition> {
    if g.n() <= opts.base_case_size {
        trace.base_cases += 1;
        return solve_adj(g.adjacency(), &F3_F4, g.n())?
            .ok_or_else(|| Error::InternalInconsistency(format!("base case on {} vertices has no partition", g.n())));
    }
    let cls = classify(g)?;
    let w = find_any(g, &cls).ok_or_else(|| {
        Error::InternalInconsistency(format!("no reducible configuration in a class member on {} vertices", g.n()))
    })?;
    if w.kind == ConfigKind::C1 {
        return Err(Error::InternalInconsistency("C1 found in a class member".into()));
    }
    let x = w
        .delete_vertex
        .ok_or_else(|| Error::InternalInconsistency(format!("{} witness without a vertex to delete", w.kind)))?;

    let step = trace.steps.len();
    trace.steps.push(TraceStep {
        kind: w.kind,
        roles: w.roles.iter().map(|r| Role { role: r.role.clone(), vertex: map[r.vertex] }).collect(),
        deleted: map[x],
        template: None,
        fallback: None,
    });

    let (h, hmap) = g.without_vertex(x);
    let mut sub = Partition::unassigned(h.n());
    for comp in h.components() {
        let (c, cmap) = h.induced(&comp);
        let orig: Vec<usize> = cmap.iter().map(|&i| map[hmap[i]]).collect();
        let p = reduce(&c, &orig, opts, trace)?;
        for (i, &hv) in cmap.iter().enumerate() {
            sub.set(hv, p.get(i).expect("reduction returns total partitions"));
        }
    }

    let lifted = lift(&sub, x, g.n());
    if let Some((p, t)) = extend_lifted(g, &cls, x, &lifted, &w)? {
        trace.steps[step].template = Some(t.name);
        return Ok(p);
    }
    let (p, used) = fall_back(g, x, &lifted, opts)?;
    trace.steps[step].fallback = Some(used);
    Ok(p)
}

fn fall_back(g: &PlaneGraph, x: usize, lifted: &Partition, opts: &ReduceOptions) -> Result<(Partition, FallbackUsed)> {
    if opts.fallback == Fallback::Abort {
        return Err(Error::NoTemplateApplied(x));
    }
    if opts.fallback == Fallback::Full && g.n() <= opts.cap {
        let p = solve_adj(g.adjacency(), &F3_F4, opts.cap)?
            .ok_or_else(|| Error::InternalInconsistency(format!("class member on {} vertices has no partition", g.n())))?;
        return Ok((p, FallbackUsed::Full));
    }
    let dist = g.distances(x);
    for radius in (1..=TEMPLATE_RADIUS).rev() {
        let mut fixed = lifted.clone();
        let mut free = 0;
        for (v, &d) in dist.iter().enumerate() {
            if d <= radius {
                fixed.unset(v);
                free += 1;
            }
        }
        if free > opts.cap {
            continue;
        }
        if let Some(p) = solve_with_fixed(g.adjacency(), &F3_F4, &fixed, opts.cap)? {
            return Ok((p, FallbackUsed::Local));
        }
    }
    Err(Error::NoTemplateApplied(x))
}

/// `sub` on `g - x` (ids as in [`PlaneGraph::without_vertex`]) as a
/// partition of `g` leaving `x` unassigned.
fn lift(sub: &Partition, x: usize, n: usize) -> Partition {
    let mut p = Partition::unassigned(n);
    for v in (0..n).filter(|&v| v != x) {
        let i = if v < x { v } else { v - 1 };
        if let Some(part) = sub.get(i) {
            p.set(v, part);
        }
    }
    p
}

/// Re-inserts `deleted` into a valid partition of `g - deleted`.
pub fn extend(
    g: &PlaneGraph,
    deleted: usize,
    sub_partition: &Partition,
    witness: &ConfigWitness,
) -> Result<(Partition, MoveTemplate)> {
    if sub_partition.n() + 1 != g.n() {
        return Err(Error::InvalidArgument(format!(
            "partition has {} vertices, expected {}",
            sub_partition.n(),
            g.n() - 1
        )));
    }
    let cls = classify(g)?;
    let lifted = lift(sub_partition, deleted, g.n());
    extend_lifted(g, &cls, deleted, &lifted, witness)?.ok_or(Error::NoTemplateApplied(deleted))
}

fn extend_lifted(
    g: &PlaneGraph,
    cls: &Classification,
    x: usize,
    p: &Partition,
    w: &ConfigWitness,
) -> Result<Option<(Partition, MoveTemplate)>> {
    let dist = g.distances(x);
    let within = |t: &MoveTemplate| t.touched().all(|v| dist[v] <= TEMPLATE_RADIUS);
    let adj = g.adjacency();
    let try_one = |t: &MoveTemplate| -> Option<Partition> {
        if !within(t) {
            return None;
        }
        let q = t.apply(p);
        (q.is_total() && first_violation(adj, &q, &F3_F4).is_none()).then_some(q)
    };

    for t in direct_and_generic(g, x, p) {
        if let Some(q) = try_one(&t) {
            return Ok(Some((q, t)));
        }
    }
    for t in kind_templates(g, cls, x, p, w)? {
        if let Some(q) = try_one(&t) {
            return Ok(Some((q, t)));
        }
    }
    Ok(None)
}

fn direct_and_generic(g: &PlaneGraph, x: usize, p: &Partition) -> Vec<MoveTemplate> {
    let mut out = vec![
        MoveTemplate::new("place-A3").to(A3, &[x]),
        MoveTemplate::new("place-A4").to(A4, &[x]),
    ];
    for &u in g.neighbors(x) {
        let Some(pu) = p.get(u) else { continue };
        out.push(MoveTemplate::new("flip-u").bind("u", &[u]).to(1 - pu, &[u]).to(pu, &[x]));
        out.push(MoveTemplate::new("flip-u-other").bind("u", &[u]).to(1 - pu, &[u]).to(1 - pu, &[x]));
    }
    for &u in g.neighbors(x) {
        let Some(pu) = p.get(u) else { continue };
        for &w in g.neighbors(u) {
            if w != x && p.get(w) == Some(1 - pu) {
                out.push(
                    MoveTemplate::new("flip-u-w")
                        .bind("u", &[u])
                        .bind("w", &[w])
                        .to(1 - pu, &[u])
                        .to(pu, &[w, x]),
                );
            }
        }
    }
    out
}

fn role(w: &ConfigWitness, name: &str) -> Result<usize> {
    w.role(name)
        .ok_or_else(|| Error::RoleBindingFailure(format!("{} witness has no role `{name}`", w.kind)))
}

fn count_in(g: &PlaneGraph, p: &Partition, v: usize, part: u8) -> usize {
    g.neighbors(v).iter().filter(|&&u| p.get(u) == Some(part)).count()
}

fn saturated(g: &PlaneGraph, p: &Partition, v: usize, part: u8) -> bool {
    count_in(g, p, v, part) == if part == A3 { 3 } else { 4 }
}

/// The two vertices other than `v` on a 3-face at `v`.
fn others(g: &PlaneGraph, f: usize, v: usize) -> [usize; 2] {
    let vs: Vec<usize> = g.face(f).vertices().iter().copied().filter(|&u| u != v).collect();
    [vs[0], vs[1]]
}

/// A terrible face at `v`: an anchor `a` with pendent neighbor `a2`, and the
/// third vertex `b`.
struct Terrible {
    face: usize,
    a: usize,
    a2: usize,
    b: usize,
}

fn terrible_at(g: &PlaneGraph, cls: &Classification, v: usize) -> Vec<Terrible> {
    let mut out = Vec::new();
    for f in g.triangles_at(v).into_iter().filter(|&f| cls.is_terrible(f)) {
        for a in terrible_anchors(g, f).into_iter().filter(|&a| a != v) {
            let b = *g.face(f).vertices().iter().find(|&&u| u != v && u != a).unwrap();
            let a2 = pendent_neighbor(g, a, f).unwrap();
            out.push(Terrible { face: f, a, a2, b });
        }
    }
    out
}

fn kind_templates(
    g: &PlaneGraph,
    cls: &Classification,
    x: usize,
    p: &Partition,
    w: &ConfigWitness,
) -> Result<Vec<MoveTemplate>> {
    Ok(match w.kind {
        ConfigKind::C4 => {
            let (y, z) = (role(w, "y")?, role(w, "z")?);
            vec![
                MoveTemplate::new("swap-xz-y").bind("x", &[x]).bind("y", &[y]).bind("z", &[z]).to(A3, &[x, z]).to(A4, &[y]),
                MoveTemplate::new("swap-xy-z").bind("x", &[x]).bind("y", &[y]).bind("z", &[z]).to(A3, &[x, y]).to(A4, &[z]),
            ]
        }
        ConfigKind::C7 => c7_templates(w)?,
        ConfigKind::C8 | ConfigKind::C9 | ConfigKind::C10 | ConfigKind::C11 | ConfigKind::C12 => {
            terrible_templates(g, cls, x, p, w)?
        }
        ConfigKind::C13 => c13_templates(g, cls, x, p, w)?,
        _ => Vec::new(),
    })
}

fn c7_templates(w: &ConfigWitness) -> Result<Vec<MoveTemplate>> {
    let v = role(w, "v")?;
    let mut out = Vec::new();
    for i in 1..=5 {
        let xi = role(w, &format!("x{i}"))?;
        let yi = role(w, &format!("y{i}"))?;
        let zi = role(w, &format!("z{i}"))?;
        let base = |name: &str| MoveTemplate::new(name).bind("v", &[v]).bind("x", &[xi]);
        out.push(base("c7-v-A3").to(A3, &[v]).to(A4, &[xi]));
        out.push(base("c7-v-A4").to(A4, &[v]).to(A3, &[xi]));
        for t in [yi, zi] {
            out.push(base("c7-v-A4-z").bind("z", &[t]).to(A4, &[v, t]).to(A3, &[xi]));
            out.push(base("c7-v-A3-z").bind("z", &[t]).to(A3, &[v, t]).to(A4, &[xi]));
        }
    }
    Ok(out)
}

/// Moves around a vertex `v` whose terrible face contains the deleted `x`.
fn terrible_templates(
    g: &PlaneGraph,
    cls: &Classification,
    x: usize,
    p: &Partition,
    w: &ConfigWitness,
) -> Result<Vec<MoveTemplate>> {
    let v = role(w, "v")?;
    if !g.adjacent(v, x) {
        return Err(Error::RoleBindingFailure(format!("{} witness: v = {v} is not adjacent to x = {x}", w.kind)));
    }
    let part = |u: usize| p.get(u);

    // 3-vertices on a 3-face with v whose pendent neighbor shares their part
    let paired = |want: u8| -> Vec<usize> {
        let mut out = Vec::new();
        for f in g.triangles_at(v) {
            for u in others(g, f, v) {
                if u != x
                    && part(u) == Some(want)
                    && g.degree(u) == 3
                    && pendent_neighbor(g, u, f).is_some_and(|q| part(q) == Some(want))
                {
                    out.push(u);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let big_x = paired(A4);
    let big_z = paired(A3);
    let terr = terrible_at(g, cls, v);

    let mut out = vec![MoveTemplate::new("c8to12-X-swap")
        .bind("v", &[v])
        .bind("X", &big_x)
        .to(A3, &[x])
        .to(A3, &big_x)
        .to(A4, &[v])];
    for &u in g.neighbors(v) {
        if u != x && part(u) == Some(A4) && !big_x.contains(&u) {
            out.push(
                MoveTemplate::new("c8to12-Xw-swap")
                    .bind("v", &[v])
                    .bind("X", &big_x)
                    .bind("w", &[u])
                    .to(A3, &[x, u])
                    .to(A3, &big_x)
                    .to(A4, &[v]),
            );
        }
    }

    let mut zs = Vec::new();
    let mut seen_faces = Vec::new();
    for t in &terr {
        if seen_faces.contains(&t.face) || g.face(t.face).contains(x) {
            continue;
        }
        if part(t.a) == Some(A4) && part(t.b) == Some(A4) && part(t.a2) == Some(A3) {
            zs.push(t.a);
            seen_faces.push(t.face);
        }
    }
    let us: Vec<usize> = terr
        .iter()
        .filter(|t| zs.contains(&t.a) && saturated(g, p, t.a2, A3))
        .map(|t| t.a2)
        .collect();
    out.push(
        MoveTemplate::new("c8to12-XZU-swap")
            .bind("v", &[v])
            .bind("X", &big_x)
            .bind("Z", &zs)
            .bind("U", &us)
            .to(A3, &[x])
            .to(A3, &big_x)
            .to(A3, &zs)
            .to(A4, &[v])
            .to(A4, &us),
    );

    out.push(
        MoveTemplate::new("c8to12-Z-swap")
            .bind("v", &[v])
            .bind("Z", &big_z)
            .to(A3, &[v])
            .to(A4, &big_z)
            .to(A4, &[x]),
    );
    for t in terr.iter().filter(|t| !g.face(t.face).contains(x)) {
        out.push(MoveTemplate::new("c8to12-xi-swap").bind("x_i", &[t.a]).to(A3, &[t.a]).to(A4, &[x]));
        out.push(
            MoveTemplate::new("c8to12-xi-x'i-swap")
                .bind("x_i", &[t.a])
                .bind("x'_i", &[t.a2])
                .to(A3, &[t.a])
                .to(A4, &[t.a2, x]),
        );
    }
    let mut ys: Vec<usize> = terr
        .iter()
        .filter(|t| !g.face(t.face).contains(x))
        .flat_map(|t| [t.a, t.b])
        .filter(|&u| part(u) == Some(A3))
        .collect();
    ys.sort_unstable();
    ys.dedup();
    out.push(
        MoveTemplate::new("c8to12-y-swap")
            .bind("v", &[v])
            .bind("Y", &ys)
            .to(A3, &[v])
            .to(A4, &ys)
            .to(A4, &[x]),
    );
    Ok(out)
}

/// Faces `j >= 2` of a C13 witness: `(x_j, y_j, Some(x'_j))` for terrible
/// faces, `(x_j, y_j, None)` for `F2*`-faces.
fn c13_faces(w: &ConfigWitness) -> Vec<(usize, usize, Option<usize>)> {
    let mut out = Vec::new();
    for j in 2.. {
        let (Some(xj), Some(yj)) = (w.role(&format!("x{j}")), w.role(&format!("y{j}"))) else { break };
        out.push((xj, yj, w.role(&format!("x{j}'"))));
    }
    out
}

/// Swaps `x_j` into `A3` and `y_j` out of it on terrible faces of a C13
/// witness while the result stays valid on `g - x1`. `partition` covers `g`
/// with `x1` unassigned.
pub fn improve_for_c13(g: &PlaneGraph, partition: &Partition, witness: &ConfigWitness) -> Partition {
    let mut p = partition.clone();
    if witness.kind != ConfigKind::C13 {
        return p;
    }
    let faces = c13_faces(witness);
    loop {
        let mut improved = false;
        for &(xj, yj, prime) in &faces {
            if prime.is_none() || p.get(xj) != Some(A4) || p.get(yj) != Some(A3) {
                continue;
            }
            let mut q = p.clone();
            q.set(xj, A3);
            q.set(yj, A4);
            if first_violation(g.adjacency(), &q, &F3_F4).is_none() {
                p = q;
                improved = true;
                break;
            }
        }
        if !improved {
            return p;
        }
    }
}

fn c13_templates(
    g: &PlaneGraph,
    cls: &Classification,
    x1: usize,
    p0: &Partition,
    w: &ConfigWitness,
) -> Result<Vec<MoveTemplate>> {
    let v = role(w, "v")?;
    let y1 = role(w, "y1")?;
    if role(w, "x1")? != x1 {
        return Err(Error::RoleBindingFailure("C13 witness: x1 is not the deleted vertex".into()));
    }
    let faces = c13_faces(w);
    let improved = improve_for_c13(g, p0, w);
    let prefix: Vec<(usize, u8)> = (0..g.n())
        .filter(|&u| improved.get(u) != p0.get(u))
        .map(|u| (u, improved.get(u).unwrap()))
        .collect();

    let mut out = Vec::new();
    for (p, pre) in [(&improved, &prefix[..]), (p0, &[][..])] {
        for &(xj, yj, prime) in &faces {
            out.push(MoveTemplate::new("c13-xj").bind("x_j", &[xj]).to(A3, &[xj]).to(A4, &[x1]).after(pre));
            if let Some(xp) = prime {
                out.push(
                    MoveTemplate::new("c13-xj-x'j")
                        .bind("x_j", &[xj])
                        .bind("x'_j", &[xp])
                        .to(A3, &[xj])
                        .to(A4, &[xp, x1])
                        .after(pre),
                );
                out.push(MoveTemplate::new("c13-yj").bind("y_j", &[yj]).to(A3, &[yj]).to(A4, &[x1]).after(pre));
            }
        }

        let t: Vec<usize> = faces.iter().filter(|f| f.2.is_some()).map(|f| f.0).collect();
        let u: Vec<usize> = faces
            .iter()
            .filter(|f| f.2.is_none() && p.get(f.0) == Some(A3))
            .map(|f| f.0)
            .collect();
        let mut wset: Vec<usize> = std::iter::once(y1)
            .chain(faces.iter().filter(|f| f.2.is_none()).map(|f| f.1))
            .filter(|&y| p.get(y) == Some(A3))
            .collect();
        wset.dedup();
        let mut xset = Vec::new();
        for &y in wset.iter().filter(|&&y| cls.is_bad(y)) {
            for f in g.triangles_at(y).into_iter().filter(|&f| cls.is_terrible(f)) {
                for q in others(g, f, y) {
                    if p.get(q) == Some(A4) && pendent_neighbor(g, q, f).is_some_and(|r| p.get(r) == Some(A4)) {
                        xset.push(q);
                    }
                }
            }
        }
        xset.sort_unstable();
        xset.dedup();
        out.push(
            MoveTemplate::new("c13-grand-swap")
                .bind("v", &[v])
                .bind("X", &xset)
                .bind("T", &t)
                .bind("U", &u)
                .bind("W", &wset)
                .to(A3, &[x1, v])
                .to(A3, &xset)
                .to(A4, &[y1])
                .to(A4, &t)
                .to(A4, &u)
                .to(A4, &wset)
                .after(pre),
        );
    }
    Ok(out)
}

/// Stage-three templates for a witness, for inspection and testing.
/// `sub_partition` covers `g - deleted`.
pub fn templates_for(
    g: &PlaneGraph,
    deleted: usize,
    sub_partition: &Partition,
    witness: &ConfigWitness,
) -> Result<Vec<MoveTemplate>> {
    let cls = classify(g)?;
    let lifted = lift(sub_partition, deleted, g.n());
    kind_templates(g, &cls, deleted, &lifted, witness)
}
