//! Planar embedding by incremental face placement.
//!
//! Each biconnected block is embedded separately: start from a cycle, then
//! repeatedly pick a fragment (a chord, or a component of the unembedded
//! part together with its attachment edges), route a path of it through a
//! face containing all of its attachment vertices, and split that face.
//! Block rotations are concatenated at cut vertices.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Computes a plane rotation system for a simple graph given by sorted
/// adjacency lists. Deterministic for a fixed input.
pub fn embed_planar(adj: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if n >= 3 && m > 3 * n - 6 {
        return Err(Error::NonPlanar);
    }
    let mut rot = vec![Vec::new(); n];
    for block in blocks(adj) {
        let mut verts: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut ladj = vec![Vec::new(); verts.len()];
        for &(u, v) in &block {
            ladj[local[&u]].push(local[&v]);
            ladj[local[&v]].push(local[&u]);
        }
        for a in &mut ladj {
            a.sort_unstable();
        }
        let lrot = if block.len() == 1 {
            ladj
        } else {
            embed_biconnected(&ladj)?
        };
        for (i, r) in lrot.into_iter().enumerate() {
            rot[verts[i]].extend(r.into_iter().map(|l| verts[l]));
        }
    }
    Ok(rot)
}

/// Biconnected blocks as edge lists, in discovery order.
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let u = adj[v][*idx];
                *idx += 1;
                if disc[u] == usize::MAX {
                    edge_stack.push((v, u));
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    stack.push((u, v, 0));
                } else if u != parent && disc[u] < disc[v] {
                    edge_stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (parent, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    visited[0] = true;
    on_stack[0] = true;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < adj[v].len() {
            let u = adj[v][*idx];
            *idx += 1;
            if !visited[u] {
                visited[u] = true;
                on_stack[u] = true;
                parent[u] = v;
                stack.push((u, 0));
            } else if u != parent[v] && on_stack[u] {
                let mut cycle = vec![v];
                let mut w = v;
                while w != u {
                    w = parent[w];
                    cycle.push(w);
                }
                cycle.reverse();
                return cycle;
            }
        } else {
            on_stack[v] = false;
            stack.pop();
        }
    }
    unreachable!("biconnected block with at least two edges has a cycle")
}

enum Fragment {
    Chord(usize, usize),
    Component { attachments: Vec<usize>, vertices: Vec<usize> },
}

impl Fragment {
    fn attachments(&self) -> Vec<usize> {
        match self {
            Fragment::Chord(u, v) => vec![*u, *v],
            Fragment::Component { attachments, .. } => attachments.clone(),
        }
    }
}

fn embed_biconnected(adj: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let mut in_h = vec![false; n];
    let mut embedded = vec![vec![false; n]; n];
    let mut count = 0;

    let cycle = find_cycle(adj);
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h[a] = true;
        embedded[a][b] = true;
        embedded[b][a] = true;
        count += 1;
    }
    let mut reversed = cycle.clone();
    reversed.reverse();
    let mut faces: Vec<Vec<usize>> = vec![cycle, reversed];

    while count < m {
        let fragments = fragments(adj, &in_h, &embedded);
        let masks: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut mask = vec![false; n];
                for &v in f {
                    mask[v] = true;
                }
                mask
            })
            .collect();
        let mut best: Option<(usize, usize, usize)> = None; // (admissible count, fragment, face)
        for (i, frag) in fragments.iter().enumerate() {
            let att = frag.attachments();
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| att.iter().all(|&a| masks[f][a]))
                .collect();
            if admissible.is_empty() {
                return Err(Error::NonPlanar);
            }
            if best.map_or(true, |(c, _, _)| admissible.len() < c) {
                best = Some((admissible.len(), i, admissible[0]));
                if admissible.len() == 1 {
                    break;
                }
            }
        }
        let (_, fi, face) = best.expect("unembedded edges imply a fragment");
        let path = fragment_path(adj, &in_h, &fragments[fi]);
        for w in path.windows(2) {
            embedded[w[0]][w[1]] = true;
            embedded[w[1]][w[0]] = true;
            count += 1;
        }
        for &v in &path {
            in_h[v] = true;
        }
        let (f1, f2) = split_face(&faces[face], &path);
        faces[face] = f1;
        faces.push(f2);
    }

    rotation_from_faces(adj, &faces)
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], embedded: &[Vec<bool>]) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for u in 0..n {
        if !in_h[u] {
            continue;
        }
        for &v in &adj[u] {
            if u < v && in_h[v] && !embedded[u][v] {
                out.push(Fragment::Chord(u, v));
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut vertices = vec![s];
        let mut attachments = Vec::new();
        let mut i = 0;
        while i < vertices.len() {
            let v = vertices[i];
            i += 1;
            for &u in &adj[v] {
                if in_h[u] {
                    attachments.push(u);
                } else if !seen[u] {
                    seen[u] = true;
                    vertices.push(u);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment::Component { attachments, vertices });
    }
    out
}

fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], frag: &Fragment) -> Vec<usize> {
    match frag {
        Fragment::Chord(u, v) => vec![*u, *v],
        Fragment::Component { attachments, vertices } => {
            let a = attachments[0];
            let n = adj.len();
            let mut member = vec![false; n];
            for &v in vertices {
                member[v] = true;
            }
            let start = *adj[a].iter().find(|&&c| member[c]).expect("attachment has a fragment neighbor");
            let mut parent = vec![usize::MAX; n];
            parent[start] = start;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                if let Some(&b) = adj[t].iter().find(|&&b| in_h[b] && b != a) {
                    let mut inner = vec![t];
                    let mut w = t;
                    while w != start {
                        w = parent[w];
                        inner.push(w);
                    }
                    inner.reverse();
                    let mut path = vec![a];
                    path.extend(inner);
                    path.push(b);
                    return path;
                }
                for &u in &adj[t] {
                    if member[u] && parent[u] == usize::MAX {
                        parent[u] = t;
                        queue.push_back(u);
                    }
                }
            }
            unreachable!("fragment of a biconnected block has two attachments")
        }
    }
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let len = face.len();
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&v| v == a).unwrap();
    let j = face.iter().position(|&v| v == b).unwrap();
    let inner = &path[1..path.len() - 1];

    let mut f1 = Vec::new();
    let mut k = i;
    loop {
        f1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    f1.extend(inner.iter().rev());

    let mut f2 = Vec::new();
    let mut k = j;
    loop {
        f2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % len;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

fn rotation_from_faces(adj: &[Vec<usize>], faces: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for f in faces {
        let len = f.len();
        for i in 0..len {
            let prev = f[(i + len - 1) % len];
            let next = f[(i + 1) % len];
            succ[f[i]].insert(prev, next);
        }
    }
    let mut rot = Vec::with_capacity(n);
    for v in 0..n {
        let deg = adj[v].len();
        let first = adj[v][0];
        let mut r = vec![first];
        let mut cur = first;
        loop {
            cur = *succ[v].get(&cur).ok_or_else(|| {
                Error::InconsistentRotation(format!("face walk does not close at vertex {v}"))
            })?;
            if cur == first {
                break;
            }
            r.push(cur);
            if r.len() > deg {
                break;
            }
        }
        if r.len() != deg {
            return Err(Error::InconsistentRotation(format!("rotation at vertex {v} is not a single cycle")));
        }
        rot.push(r);
    }
    Ok(rot)
}
