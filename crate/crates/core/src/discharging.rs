//! Charges and the rules R1–R7.
//!
//! Charges are exact multiples of one half, stored as an integer count of
//! halves. Every transfer is computed from the initial classification and
//! tagged with the rule that produced it.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::classify::{classify, face_degrees, Classification};
use crate::configs::{find_any, ConfigKind, ConfigWitness};
use crate::error::{Error, Result};
use crate::graph::{class_membership, PlaneGraph};

/// A charge in units of one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Charge(pub i64);

impl Charge {
    pub const HALF: Charge = Charge(1);

    pub fn whole(units: i64) -> Self {
        Charge(2 * units)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl std::ops::Add for Charge {
    type Output = Charge;
    fn add(self, o: Charge) -> Charge {
        Charge(self.0 + o.0)
    }
}

impl std::ops::Sub for Charge {
    type Output = Charge;
    fn sub(self, o: Charge) -> Charge {
        Charge(self.0 - o.0)
    }
}

impl std::iter::Sum for Charge {
    fn sum<I: Iterator<Item = Charge>>(iter: I) -> Charge {
        Charge(iter.map(|c| c.0).sum())
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Charge {
    // half-integers are exact in binary floating point
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 % 2 == 0 {
            s.serialize_i64(self.0 / 2)
        } else {
            s.serialize_f64(self.0 as f64 / 2.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Element {
    Vertex(usize),
    Face(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3a,
    R3b,
    R3c,
    R4a,
    R4b,
    R4c,
    R4d,
    R4e,
    R5,
    R6,
    R7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub source: Element,
    pub target: Element,
    pub amount: Charge,
    pub rule: Rule,
}

/// How often R3 fires when two pendent relations share owner and face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PendentMode {
    /// Once per (anchor, owner, face) record.
    #[default]
    PerRecord,
    /// Once per (owner, face) pair.
    PerFace,
}

impl std::str::FromStr for PendentMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "per-record" => Ok(PendentMode::PerRecord),
            "per-face" => Ok(PendentMode::PerFace),
            _ => Err(format!("unknown pendent mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChargeLedger {
    pub vertex_initial: Vec<Charge>,
    pub face_initial: Vec<Charge>,
    pub transfers: Vec<Transfer>,
    pub vertex_final: Vec<Charge>,
    pub face_final: Vec<Charge>,
}

impl ChargeLedger {
    pub fn initial(&self, e: Element) -> Charge {
        match e {
            Element::Vertex(v) => self.vertex_initial[v],
            Element::Face(f) => self.face_initial[f],
        }
    }

    pub fn final_charge(&self, e: Element) -> Charge {
        match e {
            Element::Vertex(v) => self.vertex_final[v],
            Element::Face(f) => self.face_final[f],
        }
    }

    pub fn initial_total(&self) -> Charge {
        self.vertex_initial.iter().chain(&self.face_initial).copied().sum()
    }

    pub fn final_total(&self) -> Charge {
        self.vertex_final.iter().chain(&self.face_final).copied().sum()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        let nv = self.vertex_initial.len();
        let nf = self.face_initial.len();
        (0..nv).map(Element::Vertex).chain((0..nf).map(Element::Face))
    }

    /// Elements with negative final charge, vertices first.
    pub fn negative(&self) -> Vec<Element> {
        self.elements().filter(|&e| self.final_charge(e).is_negative()).collect()
    }

    fn settle(&mut self) {
        self.vertex_final = self.vertex_initial.clone();
        self.face_final = self.face_initial.clone();
        for t in &self.transfers {
            *slot(&mut self.vertex_final, &mut self.face_final, t.source) = *slot(&mut self.vertex_final, &mut self.face_final, t.source) - t.amount;
            *slot(&mut self.vertex_final, &mut self.face_final, t.target) = *slot(&mut self.vertex_final, &mut self.face_final, t.target) + t.amount;
        }
    }
}

fn slot<'a>(vs: &'a mut [Charge], fs: &'a mut [Charge], e: Element) -> &'a mut Charge {
    match e {
        Element::Vertex(v) => &mut vs[v],
        Element::Face(f) => &mut fs[f],
    }
}

/// `2 deg(v) - 6` on vertices and `deg(f) - 6` on faces; no transfers.
pub fn initial_charges(g: &PlaneGraph) -> Result<ChargeLedger> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let vertex_initial: Vec<Charge> = (0..g.n()).map(|v| Charge::whole(2 * g.degree(v) as i64 - 6)).collect();
    let face_initial: Vec<Charge> = g.faces().iter().map(|f| Charge::whole(f.degree() as i64 - 6)).collect();
    Ok(ChargeLedger {
        vertex_final: vertex_initial.clone(),
        face_final: face_initial.clone(),
        vertex_initial,
        face_initial,
        transfers: Vec::new(),
    })
}

/// Applies R1–R7 (in that order) and settles the final charges.
pub fn apply_rules(g: &PlaneGraph, cls: &Classification, mode: PendentMode) -> Result<ChargeLedger> {
    let mut ledger = initial_charges(g)?;
    let n = g.n();
    let nf = g.faces().len();
    let deg = |v: usize| g.degree(v);
    let mut out = Vec::new();
    let mut send = |source: Element, target: Element, amount: Charge, rule: Rule| {
        out.push(Transfer { source, target, amount, rule });
    };
    use Element::{Face, Vertex};

    // R1
    for v in (0..n).filter(|&v| matches!(deg(v), 4 | 5)) {
        for f in g.triangles_at(v) {
            send(Vertex(v), Face(f), Charge::whole(1), Rule::R1);
        }
    }
    // R2
    for v in (0..n).filter(|&v| deg(v) >= 5) {
        for &u in &g.adjacency()[v] {
            if cls.is_w2(u) {
                send(Vertex(v), Vertex(u), Charge::whole(1), Rule::R2);
            }
        }
    }
    // R3
    let mut seen = std::collections::BTreeSet::new();
    for r in &cls.pendent {
        let v = r.owner;
        if deg(v) < 5 {
            continue;
        }
        if mode == PendentMode::PerFace && !seen.insert((v, r.face)) {
            continue;
        }
        let top = *face_degrees(g, r.face).last().unwrap();
        if deg(v) == 5 {
            if top <= 5 {
                send(Vertex(v), Face(r.face), Charge::whole(1), Rule::R3a);
            } else {
                send(Vertex(v), Face(r.face), Charge::HALF, Rule::R3b);
            }
        } else {
            send(Vertex(v), Face(r.face), Charge::whole(1), Rule::R3c);
        }
    }
    // R4
    for v in (0..n).filter(|&v| (6..=10).contains(&deg(v))) {
        for f in g.triangles_at(v) {
            if !cls.is_f23(f) {
                send(Vertex(v), Face(f), Charge::whole(1), Rule::R4a);
            } else if !cls.is_terrible(f) && !cls.is_f2_star(f) {
                send(Vertex(v), Face(f), Charge::whole(2), Rule::R4b);
            }
            if cls.is_terrible(f) {
                send(Vertex(v), Face(f), Charge::whole(3), Rule::R4c);
            }
            if cls.is_f2_star(f) {
                if cls.is_bad(v) {
                    send(Vertex(v), Face(f), Charge::whole(2), Rule::R4d);
                } else {
                    send(Vertex(v), Face(f), Charge::whole(3), Rule::R4e);
                }
            }
        }
    }
    // R5
    for v in (0..n).filter(|&v| deg(v) >= 11) {
        for f in g.triangles_at(v) {
            send(Vertex(v), Face(f), Charge::whole(3), Rule::R5);
        }
    }
    // R6
    for f in (0..nf).filter(|&f| g.face_degree(f) == 3 && cls.is_f23(f) && !cls.is_terrible(f)) {
        for &u in g.face(f).vertices() {
            if deg(u) == 2 || cls.is_bad(u) {
                send(Face(f), Vertex(u), Charge::whole(1), Rule::R6);
            }
        }
    }
    // R7
    for f in (0..nf).filter(|&f| g.face_degree(f) >= 7) {
        for &u in g.face(f).vertices() {
            if deg(u) == 2 && g.faces_around(u).any(|h| cls.is_f2(h)) {
                send(Face(f), Vertex(u), Charge::whole(1), Rule::R7);
            }
        }
    }

    ledger.transfers = out;
    ledger.settle();
    Ok(ledger)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    /// Negative charge with no reducible configuration present.
    ProofViolation,
    /// Accounting failed or a C1 witness turned up in a class member.
    InternalInconsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub conservation: bool,
    pub initial_total: Charge,
    pub final_total: Charge,
    pub total_is_minus_12: bool,
    pub negative_elements: Vec<Element>,
    pub config_found: Option<ConfigWitness>,
    pub verdict: Verdict,
    pub ledger: ChargeLedger,
}

pub fn audit(g: &PlaneGraph, mode: PendentMode) -> Result<AuditReport> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !class_membership(g).in_class {
        return Err(Error::NotInClass);
    }
    let cls = classify(g)?;
    let ledger = apply_rules(g, &cls, mode)?;
    let initial_total = ledger.initial_total();
    let final_total = ledger.final_total();
    let conservation = initial_total == final_total && conserves_per_element(&ledger);
    let total_is_minus_12 = initial_total == Charge::whole(-12);
    let negative_elements = ledger.negative();
    let config_found = find_any(g, &cls);

    let verdict = if !conservation || !total_is_minus_12 {
        Verdict::InternalInconsistency
    } else if negative_elements.is_empty() {
        Verdict::Pass
    } else {
        match &config_found {
            None => Verdict::ProofViolation,
            Some(w) if w.kind == ConfigKind::C1 => Verdict::InternalInconsistency,
            Some(_) => Verdict::Pass,
        }
    };
    Ok(AuditReport {
        conservation,
        initial_total,
        final_total,
        total_is_minus_12,
        negative_elements,
        config_found,
        verdict,
        ledger,
    })
}

fn conserves_per_element(l: &ChargeLedger) -> bool {
    let mut flow = std::collections::HashMap::new();
    for t in &l.transfers {
        *flow.entry(t.source).or_insert(Charge(0)) = flow.get(&t.source).copied().unwrap_or_default() - t.amount;
        *flow.entry(t.target).or_insert(Charge(0)) = flow.get(&t.target).copied().unwrap_or_default() + t.amount;
    }
    l.elements()
        .all(|e| l.final_charge(e) == l.initial(e) + flow.get(&e).copied().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets;

    fn cycle(n: usize) -> PlaneGraph {
        PlaneGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_initial_charges() {
        let l = initial_charges(&cycle(3)).unwrap();
        assert_eq!(l.vertex_initial, vec![Charge::whole(-2); 3]);
        assert_eq!(l.face_initial, vec![Charge::whole(-3); 2]);
        assert_eq!(l.initial_total(), Charge::whole(-12));
    }

    #[test]
    fn hexagon_initial_charges() {
        let l = initial_charges(&cycle(6)).unwrap();
        assert_eq!(l.vertex_initial, vec![Charge::whole(-2); 6]);
        assert_eq!(l.face_initial, vec![Charge::whole(0); 2]);
        assert_eq!(l.initial_total(), Charge::whole(-12));
    }

    #[test]
    fn triangle_faces_feed_their_two_vertices() {
        let g = cycle(3);
        let l = apply_rules(&g, &classify(&g).unwrap(), PendentMode::PerRecord).unwrap();
        assert!(l.transfers.iter().all(|t| t.rule == Rule::R6));
        assert_eq!(l.transfers.len(), 6);
        assert_eq!(l.face_final, vec![Charge::whole(-6); 2]);
        assert_eq!(l.vertex_final, vec![Charge::whole(0); 3]);
        assert_eq!(l.final_total(), Charge::whole(-12));
    }

    #[test]
    fn two_six_six_face_ends_at_zero() {
        let (g, f) = gadgets::two_six_six_face();
        let cls = classify(&g).unwrap();
        assert!(cls.is_f2(f) && !cls.is_f2_star(f));
        let l = apply_rules(&g, &cls, PendentMode::PerRecord).unwrap();
        let into: Vec<Rule> = l.transfers.iter().filter(|t| t.target == Element::Face(f)).map(|t| t.rule).collect();
        assert_eq!(into, vec![Rule::R4b, Rule::R4b]);
        assert_eq!(l.final_charge(Element::Face(f)), Charge::whole(0));
    }

    #[test]
    fn hexagon_audit_passes_through_c3() {
        let r = audit(&cycle(6), PendentMode::PerRecord).unwrap();
        assert_eq!(r.negative_elements.len(), 6);
        assert_eq!(r.config_found.as_ref().unwrap().kind, ConfigKind::C3);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn audit_rejects_out_of_class() {
        let k4 = PlaneGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(audit(&k4, PendentMode::PerRecord).unwrap_err(), Error::NotInClass);
    }

    #[test]
    fn bad_vertices_end_non_negative() {
        for d in 6..=8 {
            let (g, v) = gadgets::bad_vertex(d);
            let cls = classify(&g).unwrap();
            assert!(cls.is_bad(v));
            let l = apply_rules(&g, &cls, PendentMode::PerRecord).unwrap();
            assert!(!l.final_charge(Element::Vertex(v)).is_negative(), "d = {d}");
        }
    }

    #[test]
    fn transfers_use_rule_amounts() {
        let (g, _) = gadgets::bad_vertex(7);
        let l = apply_rules(&g, &classify(&g).unwrap(), PendentMode::PerRecord).unwrap();
        for t in &l.transfers {
            assert!(matches!(t.amount.halves(), 1 | 2 | 4 | 6));
            assert_eq!(t.amount == Charge::HALF, t.rule == Rule::R3b);
        }
        assert_eq!(l.final_total(), Charge::whole(-12));
    }

    #[test]
    fn charge_display() {
        assert_eq!(Charge(-3).to_string(), "-3/2");
        assert_eq!(Charge(4).to_string(), "2");
        assert_eq!(serde_json::to_string(&Charge(1)).unwrap(), "0.5");
    }
}
