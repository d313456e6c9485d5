//! Test corpora: exhaustive enumeration of small class members, random
//! block assemblies, and ingestion of graph files.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embed::embed_planar;
use crate::error::{Error, Result};
use crate::format::read_graphs;
use crate::gadgets::{bad_vertex_builder, Block, PlaneBuilder};
use crate::graph::{has_cycle_of_length, PlaneGraph};

pub const EXHAUSTIVE_LIMIT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusMode {
    Exhaustive,
    Gadget,
    Ingest,
}

/// Relative weights of the block shapes used by the gadget generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockMix {
    pub edge: u32,
    pub triangle: u32,
    pub c6: u32,
    pub c7: u32,
    pub hex: u32,
}

impl Default for BlockMix {
    fn default() -> Self {
        BlockMix { edge: 3, triangle: 3, c6: 1, c7: 1, hex: 1 }
    }
}

impl FromStr for BlockMix {
    type Err = Error;

    /// `edge=3,triangle=2,c6=1,c7=1,hex=1`; omitted shapes get weight 0.
    fn from_str(s: &str) -> Result<Self> {
        let mut mix = BlockMix { edge: 0, triangle: 0, c6: 0, c7: 0, hex: 0 };
        for item in s.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected shape=weight, got `{item}`")))?;
            let w: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad weight `{v}`")))?;
            match k.trim() {
                "edge" => mix.edge = w,
                "triangle" => mix.triangle = w,
                "c6" | "C6" => mix.c6 = w,
                "c7" | "C7" => mix.c7 = w,
                "hex" | "hex-patch" => mix.hex = w,
                other => return Err(Error::InvalidArgument(format!("unknown block shape `{other}`"))),
            }
        }
        if mix.weights().iter().all(|&w| w == 0) {
            return Err(Error::InvalidArgument("block mix has no positive weight".into()));
        }
        Ok(mix)
    }
}

impl BlockMix {
    fn weights(&self) -> [u32; 5] {
        [self.edge, self.triangle, self.c6, self.c7, self.hex]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub mode: CorpusMode,
    pub n_max: usize,
    pub seed: u64,
    pub block_mix: BlockMix,
    pub count: usize,
    /// Attach terrible faces and bad-vertex gadgets now and then.
    pub decorate: bool,
    /// Chord insertions attempted on each assembly (see [`densify`]).
    pub chords: usize,
}

impl CorpusSpec {
    pub fn gadget(count: usize, seed: u64) -> Self {
        CorpusSpec {
            mode: CorpusMode::Gadget,
            n_max: 40,
            seed,
            block_mix: BlockMix::default(),
            count,
            decorate: true,
            chords: 0,
        }
    }
}

type Bits = Vec<u64>;

fn bits_of(adj: &[Vec<usize>]) -> Bits {
    adj.iter().map(|nb| nb.iter().fold(0u64, |m, &u| m | 1 << u)).collect()
}

/// Exact isomorphism test by backtracking over degree-compatible maps.
fn isomorphic(a: &Bits, b: &Bits) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let deg = |m: &Bits, v: usize| m[v].count_ones();
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;

    fn go(a: &Bits, b: &Bits, v: usize, map: &mut Vec<usize>, used: &mut u64, deg: &dyn Fn(&Bits, usize) -> u32) -> bool {
        let n = a.len();
        if v == n {
            return true;
        }
        for t in 0..n {
            if *used >> t & 1 == 1 || deg(a, v) != deg(b, t) {
                continue;
            }
            let ok = (0..v).all(|u| (a[v] >> u & 1) == (b[t] >> map[u] & 1));
            if ok {
                map[v] = t;
                *used |= 1 << t;
                if go(a, b, v + 1, map, used, deg) {
                    return true;
                }
                *used &= !(1 << t);
            }
        }
        false
    }
    go(a, b, 0, &mut map, &mut used, &deg)
}

fn bucket_key(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let mut d: Vec<usize> = adj.iter().map(Vec::len).collect();
    d.sort_unstable();
    (d.iter().sum::<usize>() / 2, d)
}

/// Every connected planar graph without 4- and 5-cycles on at most `n_max`
/// vertices, one per isomorphism class, by increasing order.
pub fn enumerate_exhaustive(n_max: usize) -> Result<Vec<PlaneGraph>> {
    if n_max > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n: n_max, limit: EXHAUSTIVE_LIMIT });
    }
    let mut out = Vec::new();
    if n_max == 0 {
        return Ok(out);
    }
    let mut level: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    out.push(PlaneGraph::from_edges(1, &[])?);
    for n in 2..=n_max {
        let mut next: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut buckets: HashMap<(usize, Vec<usize>), Vec<(usize, Bits)>> = HashMap::new();
        for parent in &level {
            // every connected graph has a vertex whose removal keeps it connected
            for mask in 1u32..(1 << (n - 1)) {
                let mut adj = parent.clone();
                adj.push(Vec::new());
                for u in (0..n - 1).filter(|&u| mask >> u & 1 == 1) {
                    adj[u].push(n - 1);
                    adj[n - 1].push(u);
                }
                if has_cycle_of_length(&adj, 4) || has_cycle_of_length(&adj, 5) {
                    continue;
                }
                let bits = bits_of(&adj);
                let bucket = buckets.entry(bucket_key(&adj)).or_default();
                if bucket.iter().any(|(_, b)| isomorphic(b, &bits)) {
                    continue;
                }
                if embed_planar(&adj).is_err() {
                    continue;
                }
                bucket.push((next.len(), bits));
                next.push(adj);
            }
        }
        for adj in &next {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
                .collect();
            out.push(PlaneGraph::from_edges(n, &edges)?);
        }
        level = next;
    }
    Ok(out)
}

/// Connected set of `k` hexagons in axial coordinates.
fn random_hexes(rng: &mut ChaCha8Rng, k: usize) -> Vec<(i32, i32)> {
    const DIRS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    let mut hexes = vec![(0, 0)];
    while hexes.len() < k {
        let &(q, r) = hexes.choose(rng).unwrap();
        let (dq, dr) = DIRS[rng.gen_range(0..6)];
        let h = (q + dq, r + dr);
        if !hexes.contains(&h) {
            hexes.push(h);
        }
    }
    hexes
}

fn random_block(rng: &mut ChaCha8Rng, dist: &WeightedIndex<u32>) -> Block {
    match dist.sample(rng) {
        0 => Block::edge(),
        1 => Block::cycle(3),
        2 => Block::cycle(6),
        3 => Block::cycle(7),
        _ => {
            let k = rng.gen_range(2..=4);
            Block::hex_patch(&random_hexes(rng, k))
        }
    }
}

/// Random block assemblies. Blocks meet only at cut vertices, so every
/// cycle lies inside one block and every output is a class member.
pub fn generate_gadget(spec: &CorpusSpec) -> Vec<PlaneGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dist = WeightedIndex::new(spec.block_mix.weights()).expect("block mix has a positive weight");
    (0..spec.count)
        .map(|_| {
            let g = one_assembly(&mut rng, &dist, spec);
            if spec.chords > 0 {
                densify(&g, &mut rng, spec.chords)
            } else {
                g
            }
        })
        .collect()
}

/// Tries `attempts` random chords inside faces, keeping those that create
/// no 4- or 5-cycle. Chords inside a face keep the graph planar.
pub fn densify(g: &PlaneGraph, rng: &mut ChaCha8Rng, attempts: usize) -> PlaneGraph {
    let mut g = g.clone();
    for _ in 0..attempts {
        let f = rng.gen_range(0..g.faces().len());
        let vs = g.face(f).vertices();
        if vs.len() < 4 {
            continue;
        }
        let (a, b) = (*vs.choose(rng).unwrap(), *vs.choose(rng).unwrap());
        if a == b || g.adjacent(a, b) {
            continue;
        }
        let mut adj = g.adjacency().to_vec();
        adj[a].push(b);
        adj[b].push(a);
        if has_cycle_of_length(&adj, 4) || has_cycle_of_length(&adj, 5) {
            continue;
        }
        let mut edges = g.edges();
        edges.push((a.min(b), a.max(b)));
        if let Ok(h) = PlaneGraph::from_edges(g.n(), &edges) {
            g = h;
        }
    }
    g
}

fn one_assembly(rng: &mut ChaCha8Rng, dist: &WeightedIndex<u32>, spec: &CorpusSpec) -> PlaneGraph {
    let target = rng.gen_range(2..=spec.n_max.max(2));
    let mut b = PlaneBuilder::new();
    // decorated vertices stay as built so their structure survives
    let mut frozen = vec![false];
    while b.n() < target {
        let spots: Vec<usize> = b.outer_vertices().into_iter().filter(|&v| !frozen[v]).collect();
        let Some(&at) = spots.choose(rng) else { break };
        let roll: f64 = rng.gen();
        if spec.decorate && roll < 0.08 {
            let (a, c) = b.triangle(at);
            let pa = b.pendant(a);
            let pc = b.pendant(c);
            frozen.resize(b.n(), false);
            for v in [a, c, pa, pc] {
                frozen[v] = true;
            }
        } else if spec.decorate && roll < 0.12 {
            let d = rng.gen_range(6..=8);
            let (gadget, roles) = bad_vertex_builder(d);
            let p = b.pendant(at);
            let map = b.glue(p, &Block::from_builder(&gadget), roles.terrible[0].1);
            frozen.resize(b.n(), false);
            frozen[p] = true;
            for v in map {
                frozen[v] = true;
            }
        } else {
            let block = random_block(rng, dist);
            let at = if rng.gen_bool(0.25) {
                let p = b.pendant(at);
                frozen.resize(b.n(), false);
                p
            } else {
                at
            };
            let &at_block = block.outer_vertices().choose(rng).unwrap();
            b.glue(at, &block, at_block);
            frozen.resize(b.n(), false);
        }
    }
    b.build()
}

/// Graphs from a planar_code or rotgraph file; class membership is not
/// checked.
pub fn ingest(path: &Path) -> Result<Vec<PlaneGraph>> {
    let bytes = std::fs::read(path)?;
    read_graphs(&bytes)
}

/// The exhaustive corpus up to `n_max` followed by `gadgets` random
/// assemblies from `seed`.
pub fn standard_corpus(n_max: usize, gadgets: usize, seed: u64) -> Result<Vec<PlaneGraph>> {
    let mut out = enumerate_exhaustive(n_max)?;
    out.extend(generate_gadget(&CorpusSpec::gadget(gadgets, seed)));
    Ok(out)
}
