//! End-to-end acceptance run over the standard corpus: every graph with at
//! most 7 vertices plus 1000 random assemblies from seed 42. Prints one line
//! per criterion and exits non-zero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use forestpart::batch::{run_batch, BatchOptions, Task};
use forestpart::classify::{classify, is_bad, is_terrible};
use forestpart::configs::find_any;
use forestpart::corpus::standard_corpus;
use forestpart::discharging::{apply_rules, audit, Charge, Element, PendentMode, Verdict};
use forestpart::gadgets;
use forestpart::partition::{count_or_enumerate, solve, PartKind, PartSpec, Partition, DEFAULT_CAP, F3_F4};
use forestpart::reducer::partition_constructively;
use forestpart::{Error, PlaneGraph};

const SEED: u64 = 42;
const GADGETS: usize = 1000;

/// Faces traced straight from the rotation: (u, v) is followed by (v, w)
/// where w comes after u in the rotation at v.
fn oracle_face_degrees(g: &PlaneGraph) -> Vec<usize> {
    let rot = g.rotation();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for u in 0..g.n() {
        for &v in &rot[u] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut len = 0;
            let mut d = (u, v);
            while seen.insert(d) {
                len += 1;
                let r = &rot[d.1];
                let i = r.iter().position(|&w| w == d.0).unwrap();
                d = (d.1, r[(i + 1) % r.len()]);
            }
            out.push(len);
        }
    }
    if out.is_empty() && g.n() > 0 {
        out.push(0);
    }
    out
}

/// Independent verifier: per-part degree bounds and, for forests, a DFS
/// cycle search.
fn oracle_valid(g: &PlaneGraph, p: &Partition, specs: &[PartSpec; 2]) -> bool {
    let n = g.n();
    let part: Vec<u8> = match (0..n).map(|v| p.get(v)).collect::<Option<Vec<_>>>() {
        Some(x) => x,
        None => return false,
    };
    for v in 0..n {
        let s = specs[part[v] as usize];
        let d = g.neighbors(v).iter().filter(|&&u| part[u] == part[v]).count();
        if s.d.is_some_and(|b| d > b) {
            return false;
        }
    }
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 || specs[part[root] as usize].kind != PartKind::Forest {
            continue;
        }
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            if state[v] != 0 {
                return false;
            }
            state[v] = 1;
            for &u in g.neighbors(v) {
                if part[u] == part[v] && u != parent {
                    stack.push((u, v));
                }
            }
        }
    }
    true
}

fn report(n: usize, ok: bool, detail: String, results: &mut Vec<bool>) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    results.push(ok);
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = standard_corpus(7, GADGETS, SEED).expect("corpus");
    let members: Vec<&PlaneGraph> = corpus.iter().filter(|g| forestpart::class_membership(g).in_class).collect();
    let mut results = Vec::new();
    println!(
        "corpus: {} graphs, {} class members, built in {:.1?}",
        corpus.len(),
        members.len(),
        start.elapsed()
    );

    // 1
    let t = Instant::now();
    let mut bad = Vec::new();
    for (i, g) in corpus.iter().enumerate() {
        let faces = oracle_face_degrees(g);
        let euler = g.n() as i64 - g.m() as i64 + faces.len() as i64;
        let oracle_total: i64 = (0..g.n()).map(|v| 2 * g.degree(v) as i64 - 6).sum::<i64>()
            + faces.iter().map(|&d| d as i64 - 6).sum::<i64>();
        let ledger = apply_rules(g, &classify(g).unwrap(), PendentMode::PerRecord).unwrap();
        if euler != 2
            || oracle_total != -12
            || ledger.initial_total() != Charge::whole(oracle_total)
            || ledger.final_total() != ledger.initial_total()
        {
            bad.push(i);
        }
    }
    report(
        1,
        bad.is_empty(),
        format!("charge totals -12 and conserved on {} graphs, failures {:?} ({:.1?})", corpus.len(), bad, t.elapsed()),
        &mut results,
    );

    // 2 and 3
    let small: Vec<&PlaneGraph> = members.iter().copied().filter(|g| g.n() <= 20).collect();
    let d = PartSpec::bounded;
    let spec_sets: [(usize, Vec<[PartSpec; 2]>); 2] =
        [(2, vec![F3_F4]), (3, vec![[d(4), d(4)], [d(3), d(5)], [d(2), d(6)]])];
    for (crit, sets) in spec_sets {
        let t = Instant::now();
        let mut fails = Vec::new();
        for specs in &sets {
            for (i, g) in small.iter().enumerate() {
                match solve(g, specs, DEFAULT_CAP).unwrap() {
                    Some(p) if oracle_valid(g, &p, specs) => {}
                    _ => fails.push((format!("{},{}", specs[0], specs[1]), i)),
                }
            }
        }
        report(
            crit,
            fails.is_empty(),
            format!("{} specs x {} members with n <= 20, failures {:?} ({:.1?})", sets.len(), small.len(), fails, t.elapsed()),
            &mut results,
        );
    }

    // 4
    let t = Instant::now();
    let (mut negative, mut violations, mut missing) = (0, 0, 0);
    for g in &members {
        let r = audit(g, PendentMode::PerRecord).unwrap();
        if !r.negative_elements.is_empty() {
            negative += 1;
            if find_any(g, &classify(g).unwrap()).is_none() {
                missing += 1;
            }
        }
        if r.verdict != Verdict::Pass {
            violations += 1;
        }
    }
    report(
        4,
        violations == 0 && missing == 0,
        format!(
            "{negative} members with negative charge, {missing} without a configuration, {violations} non-PASS verdicts ({:.1?})",
            t.elapsed()
        ),
        &mut results,
    );

    // 5
    let t = Instant::now();
    let (mut ok, mut steps, mut fallbacks, mut errors) = (0, 0, 0, Vec::new());
    for (i, g) in members.iter().enumerate() {
        match partition_constructively(g) {
            Ok((p, trace)) => {
                if oracle_valid(g, &p, &F3_F4) {
                    ok += 1;
                }
                steps += trace.steps.len();
                fallbacks += trace.fallback_count();
            }
            Err(e) => errors.push((i, e)),
        }
    }
    let inconsistencies = errors.iter().filter(|(_, e)| matches!(e, Error::InternalInconsistency(_))).count();
    report(
        5,
        ok == members.len() && inconsistencies == 0,
        format!(
            "{ok}/{} verified, {steps} reductions, fallback rate {:.4} ({fallbacks}), errors {:?} ({:.1?})",
            members.len(),
            fallbacks as f64 / steps.max(1) as f64,
            errors,
            t.elapsed()
        ),
        &mut results,
    );

    // 6
    let t = Instant::now();
    let tiny: Vec<&PlaneGraph> = members.iter().copied().filter(|g| g.n() <= 12).collect();
    let disagree: Vec<usize> = (0..tiny.len())
        .filter(|&i| {
            let g = tiny[i];
            let feasible = solve(g, &F3_F4, DEFAULT_CAP).unwrap().is_some();
            let (count, _) = count_or_enumerate(g, &F3_F4, 0).unwrap();
            feasible != (count > 0)
        })
        .collect();
    report(
        6,
        disagree.is_empty(),
        format!("{} members with n <= 12, disagreements {:?} ({:.1?})", tiny.len(), disagree, t.elapsed()),
        &mut results,
    );

    // 7
    let (tg, tf) = gadgets::terrible_face();
    let terrible_ok = is_terrible(&tg, tf) == Ok(true);
    let bad_ok = (6..=8).all(|d| {
        let (g, v) = gadgets::bad_vertex(d);
        g.degree(v) == d && is_bad(&g, v) && classify(&g).unwrap().bad.contains(&v)
    });
    let (fg, ff) = gadgets::two_six_six_face();
    let ledger = apply_rules(&fg, &classify(&fg).unwrap(), PendentMode::PerRecord).unwrap();
    let face_final = ledger.final_charge(Element::Face(ff));
    let face_ok = face_final == Charge::whole(-3 + 2 * 2 - 1);
    report(
        7,
        terrible_ok && bad_ok && face_ok,
        format!("terrible face {terrible_ok}, bad 6/7/8 {bad_ok}, (2,6,6)-face final {face_final}"),
        &mut results,
    );

    // 8
    let t = Instant::now();
    let tasks = [Task::Classify, Task::Detect, Task::Audit, Task::Solve(F3_F4), Task::Partition];
    let again = standard_corpus(7, GADGETS, SEED).unwrap();
    let a = run_batch(&corpus, &tasks, &BatchOptions { jobs: 4, ..Default::default() });
    let b = run_batch(&again, &tasks, &BatchOptions { jobs: 2, ..Default::default() });
    let same = a.without_timings().to_json() == b.without_timings().to_json();
    report(
        8,
        same && a.exit_code() == 0,
        format!("identical reports {same}, exit code {} ({:.1?})", a.exit_code(), t.elapsed()),
        &mut results,
    );

    println!("total time {:.1?}", start.elapsed());
    if results.iter().all(|&r| r) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
