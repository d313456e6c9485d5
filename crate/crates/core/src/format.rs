//! Graph file formats: the `rotgraph v1` text format and plantri's binary
//! `planar_code`.
//!
//! `rotgraph v1` holds a sequence of records. Each record starts with a
//! header line `n m` followed by either `n` rotation lines `v: u1 u2 ...`
//! (neighbors in counterclockwise order) or `m` edge lines `u v`, in which
//! case an embedding is computed. `#` starts a comment.

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

pub fn parse_rotgraph(text: &str) -> Result<Vec<PlaneGraph>> {
    let mut lines = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let content = raw.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            lines.push((offset, content));
        }
        offset += raw.len();
    }

    let perr = |offset: usize, message: String| Error::Parse { offset, message };
    let ints = |offset: usize, s: &str| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| perr(offset, format!("expected an integer, found `{t}`"))))
            .collect()
    };

    let mut graphs = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (hoff, header) = lines[i];
        i += 1;
        let nm = ints(hoff, header)?;
        if nm.len() != 2 {
            return Err(perr(hoff, "expected header `n m`".into()));
        }
        let (n, m) = (nm[0], nm[1]);
        let rotation_mode = lines.get(i).is_some_and(|(_, l)| l.contains(':'));
        if rotation_mode {
            let mut rot = vec![Vec::new(); n];
            for _ in 0..n {
                let (off, line) = *lines.get(i).ok_or_else(|| perr(text.len(), "truncated rotation section".into()))?;
                i += 1;
                let (v, rest) = line
                    .split_once(':')
                    .ok_or_else(|| perr(off, "expected `v: neighbors`".into()))?;
                let v = ints(off, v)?;
                if v.len() != 1 || v[0] >= n {
                    return Err(perr(off, "bad vertex id".into()));
                }
                rot[v[0]] = ints(off, rest)?;
            }
            let g = PlaneGraph::from_rotation(rot)?;
            if g.m() != m {
                return Err(perr(hoff, format!("header says {m} edges, rotation has {}", g.m())));
            }
            graphs.push(g);
        } else {
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (off, line) = *lines.get(i).ok_or_else(|| perr(text.len(), "truncated edge section".into()))?;
                i += 1;
                let e = ints(off, line)?;
                if e.len() != 2 {
                    return Err(perr(off, "expected edge `u v`".into()));
                }
                edges.push((e[0], e[1]));
            }
            graphs.push(PlaneGraph::from_edges(n, &edges)?);
        }
    }
    Ok(graphs)
}

pub fn write_rotgraph(g: &PlaneGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for v in 0..g.n() {
        out.push_str(&format!("{v}:"));
        for u in g.neighbors(v) {
            out.push_str(&format!(" {u}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_rotgraph_all<'a>(graphs: impl IntoIterator<Item = &'a PlaneGraph>) -> String {
    let mut out = String::from("# rotgraph v1\n");
    for g in graphs {
        out.push_str(&write_rotgraph(g));
    }
    out
}

pub fn parse_planar_code(bytes: &[u8]) -> Result<Vec<PlaneGraph>> {
    if !bytes.starts_with(PLANAR_CODE_HEADER) {
        return Err(Error::Parse { offset: 0, message: "missing >>planar_code<< header".into() });
    }
    let mut pos = PLANAR_CODE_HEADER.len();
    let mut graphs = Vec::new();
    while pos < bytes.len() {
        let start = pos;
        let n = bytes[pos] as usize;
        pos += 1;
        if n == 0 {
            return Err(Error::Parse { offset: start, message: "two-byte planar_code entries are not supported".into() });
        }
        let mut rot = vec![Vec::new(); n];
        for r in rot.iter_mut() {
            loop {
                let b = *bytes.get(pos).ok_or(Error::Parse {
                    offset: pos,
                    message: format!("truncated record starting at byte {start}"),
                })? as usize;
                pos += 1;
                if b == 0 {
                    break;
                }
                if b > n {
                    return Err(Error::Parse { offset: pos - 1, message: format!("neighbor {b} exceeds vertex count {n}") });
                }
                r.push(b - 1);
            }
        }
        graphs.push(PlaneGraph::from_rotation(rot)?);
    }
    Ok(graphs)
}

pub fn write_planar_code<'a>(graphs: impl IntoIterator<Item = &'a PlaneGraph>) -> Result<Vec<u8>> {
    let mut out = PLANAR_CODE_HEADER.to_vec();
    for g in graphs {
        if g.n() == 0 || g.n() > 255 {
            return Err(Error::TooLarge { n: g.n(), limit: 255 });
        }
        out.push(g.n() as u8);
        for v in 0..g.n() {
            out.extend(g.neighbors(v).iter().map(|&u| (u + 1) as u8));
            out.push(0);
        }
    }
    Ok(out)
}

/// Reads either format, detected by the planar_code header.
pub fn read_graphs(bytes: &[u8]) -> Result<Vec<PlaneGraph>> {
    if bytes.starts_with(b">>planar_code") {
        parse_planar_code(bytes)
    } else {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            offset: e.valid_up_to(),
            message: "not UTF-8 text".into(),
        })?;
        parse_rotgraph(text)
    }
}
