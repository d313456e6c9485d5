//! Runs a list of tasks over many graphs in parallel and collects a JSON
//! report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::classify;
use crate::configs::{detect, ConfigKind};
use crate::discharging::{audit, Charge, PendentMode, Verdict};
use crate::error::{Error, Result};
use crate::graph::{class_membership, ClassReport, PlaneGraph};
use crate::partition::{parse_specs, solve, verify, PartSpec, DEFAULT_CAP, F3_F4};
use crate::reducer::{partition_constructively_with, ReduceOptions};

/// Specs under which every class member is known to be partitionable.
pub const THEOREM_SPECS: [[PartSpec; 2]; 4] = [
    F3_F4,
    [PartSpec::bounded(4), PartSpec::bounded(4)],
    [PartSpec::bounded(3), PartSpec::bounded(5)],
    [PartSpec::bounded(2), PartSpec::bounded(6)],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Classify,
    Detect,
    Audit,
    Solve([PartSpec; 2]),
    Partition,
}

impl FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classify" => Ok(Task::Classify),
            "detect" => Ok(Task::Detect),
            "audit" => Ok(Task::Audit),
            "partition" => Ok(Task::Partition),
            _ => match s.strip_prefix("solve:") {
                Some(specs) => Ok(Task::Solve(parse_specs(specs)?)),
                None => Err(Error::InvalidArgument(format!(
                    "unknown task `{s}`; expected classify, detect, audit, solve:SPEC,SPEC or partition"
                ))),
            },
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Classify => f.write_str("classify"),
            Task::Detect => f.write_str("detect"),
            Task::Audit => f.write_str("audit"),
            Task::Solve([a, b]) => write!(f, "solve:{a},{b}"),
            Task::Partition => f.write_str("partition"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchOptions {
    pub jobs: usize,
    pub cap: usize,
    pub pendent_mode: PendentMode,
    pub reduce: ReduceOptions,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            jobs: 1,
            cap: DEFAULT_CAP,
            pendent_mode: PendentMode::PerRecord,
            reduce: ReduceOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub w2: usize,
    pub f2: usize,
    pub f3: usize,
    pub terrible: usize,
    pub bad: usize,
    pub f2_star: usize,
    pub pendent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub verdict: Verdict,
    pub conservation: bool,
    pub initial_total: Charge,
    pub final_total: Charge,
    pub negative_elements: usize,
    pub config_found: Option<ConfigKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    /// Above the solver cap.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveRecord {
    pub specs: String,
    pub status: SolveStatus,
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducerSummary {
    pub verified: bool,
    pub steps: usize,
    pub fallbacks: usize,
    pub base_cases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphRecord {
    pub id: usize,
    pub n: usize,
    pub m: usize,
    pub class: ClassReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configs: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solves: Vec<SolveRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<ReducerSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    /// Milliseconds per task; not reproducible.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Aggregate {
    pub graphs: usize,
    pub in_class: usize,
    pub errors: usize,
    pub audit_pass: usize,
    pub proof_violations: usize,
    pub internal_inconsistencies: usize,
    pub solve_feasible: usize,
    pub solve_infeasible: usize,
    pub solve_skipped: usize,
    /// Class members found infeasible under a theorem spec.
    pub theorem_failures: usize,
    pub verifier_failures: usize,
    pub reducer_verified: usize,
    pub reducer_failures: usize,
    pub fallbacks: usize,
    pub reduction_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tasks: Vec<String>,
    pub records: Vec<GraphRecord>,
    pub aggregate: Aggregate,
}

impl RunReport {
    /// 2 on any proof-level failure, 1 on input errors only, else 0.
    pub fn exit_code(&self) -> i32 {
        let a = &self.aggregate;
        if a.proof_violations + a.internal_inconsistencies + a.theorem_failures + a.verifier_failures + a.reducer_failures > 0 {
            2
        } else if a.errors > 0 {
            1
        } else {
            0
        }
    }

    pub fn without_timings(&self) -> RunReport {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.timings_ms.clear();
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_batch(graphs: &[PlaneGraph], tasks: &[Task], opts: &BatchOptions) -> RunReport {
    let work = || graphs.par_iter().enumerate().map(|(id, g)| run_one(id, g, tasks, opts)).collect::<Vec<_>>();
    let records = match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    let aggregate = aggregate(&records);
    RunReport { tasks: tasks.iter().map(Task::to_string).collect(), records, aggregate }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, key: String, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(key, start.elapsed().as_secs_f64() * 1e3);
    out
}

fn run_one(id: usize, g: &PlaneGraph, tasks: &[Task], opts: &BatchOptions) -> GraphRecord {
    let mut rec = GraphRecord {
        id,
        n: g.n(),
        m: g.m(),
        class: class_membership(g),
        classification: None,
        configs: None,
        audit: None,
        solves: Vec::new(),
        partition: None,
        errors: Vec::new(),
        timings_ms: BTreeMap::new(),
    };
    for &task in tasks {
        let mut timings = std::mem::take(&mut rec.timings_ms);
        let res = timed(&mut timings, task.to_string(), || run_task(&mut rec, g, task, opts));
        rec.timings_ms = timings;
        if let Err(e) = res {
            rec.errors.push(format!("{task}: {e}"));
        }
    }
    rec
}

fn run_task(rec: &mut GraphRecord, g: &PlaneGraph, task: Task, opts: &BatchOptions) -> Result<()> {
    match task {
        Task::Classify => {
            let c = classify(g)?;
            rec.classification = Some(ClassCounts {
                w2: c.w2.len(),
                f2: c.f2.len(),
                f3: c.f3.len(),
                terrible: c.terrible.len(),
                bad: c.bad.len(),
                f2_star: c.f2_star.len(),
                pendent: c.pendent.len(),
            });
        }
        Task::Detect => {
            let c = classify(g)?;
            let counts = ConfigKind::ALL
                .iter()
                .map(|&k| (k.to_string(), detect(g, &c, k).len()))
                .filter(|&(_, n)| n > 0)
                .collect();
            rec.configs = Some(counts);
        }
        Task::Audit => {
            let r = audit(g, opts.pendent_mode)?;
            rec.audit = Some(AuditSummary {
                verdict: r.verdict,
                conservation: r.conservation,
                initial_total: r.initial_total,
                final_total: r.final_total,
                negative_elements: r.negative_elements.len(),
                config_found: r.config_found.map(|w| w.kind),
            });
        }
        Task::Solve(specs) => {
            let label = format!("{},{}", specs[0], specs[1]);
            let record = if g.n() > opts.cap {
                SolveRecord { specs: label, status: SolveStatus::Skipped, verified: None }
            } else {
                match solve(g, &specs, opts.cap)? {
                    Some(p) => SolveRecord {
                        specs: label,
                        status: SolveStatus::Feasible,
                        verified: Some(verify(g, &p, &specs)?.is_valid()),
                    },
                    None => SolveRecord { specs: label, status: SolveStatus::Infeasible, verified: None },
                }
            };
            rec.solves.push(record);
        }
        Task::Partition => {
            let summary = match partition_constructively_with(g, &opts.reduce) {
                Ok((p, trace)) => ReducerSummary {
                    verified: verify(g, &p, &F3_F4)?.is_valid(),
                    steps: trace.steps.len(),
                    fallbacks: trace.fallback_count(),
                    base_cases: trace.base_cases,
                },
                Err(e @ (Error::InternalInconsistency(_) | Error::NoTemplateApplied(_))) => {
                    rec.partition = Some(ReducerSummary { verified: false, steps: 0, fallbacks: 0, base_cases: 0 });
                    return Err(e);
                }
                Err(e) => return Err(e),
            };
            rec.partition = Some(summary);
        }
    }
    Ok(())
}

fn aggregate(records: &[GraphRecord]) -> Aggregate {
    let mut a = Aggregate { graphs: records.len(), ..Default::default() };
    for r in records {
        a.in_class += r.class.in_class as usize;
        if let Some(au) = &r.audit {
            match au.verdict {
                Verdict::Pass => a.audit_pass += 1,
                Verdict::ProofViolation => a.proof_violations += 1,
                Verdict::InternalInconsistency => a.internal_inconsistencies += 1,
            }
        }
        for s in &r.solves {
            match s.status {
                SolveStatus::Feasible => a.solve_feasible += 1,
                SolveStatus::Infeasible => {
                    a.solve_infeasible += 1;
                    let theorem = THEOREM_SPECS.iter().any(|t| format!("{},{}", t[0], t[1]) == s.specs);
                    if theorem && r.class.in_class {
                        a.theorem_failures += 1;
                    }
                }
                SolveStatus::Skipped => a.solve_skipped += 1,
            }
            if s.verified == Some(false) {
                a.verifier_failures += 1;
            }
        }
        if let Some(p) = &r.partition {
            if p.verified {
                a.reducer_verified += 1;
            } else {
                a.reducer_failures += 1;
            }
            a.fallbacks += p.fallbacks;
            a.reduction_steps += p.steps;
        }
        let proof_level = r.errors.iter().any(|e| e.contains("internal inconsistency"));
        a.internal_inconsistencies += proof_level as usize;
        a.errors += (!r.errors.is_empty() && !proof_level) as usize;
    }
    a
}
