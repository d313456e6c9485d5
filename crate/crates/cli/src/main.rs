use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use forestpart::batch::{run_batch, BatchOptions, Task};
use forestpart::classify::classify;
use forestpart::configs::{detect, ConfigKind};
use forestpart::corpus::{enumerate_exhaustive, generate_gadget, ingest, BlockMix, CorpusMode, CorpusSpec};
use forestpart::discharging::{audit, PendentMode, Verdict};
use forestpart::format::{read_graphs, write_planar_code, write_rotgraph_all};
use forestpart::partition::{parse_specs, solve, verify, Check, Partition, DEFAULT_CAP};
use forestpart::reducer::{partition_constructively_with, Fallback, ReduceOptions};
use forestpart::{class_membership, Error, PlaneGraph};

macro_rules! out {
    ($($t:tt)*) => {
        writeln!(io::stdout().lock(), $($t)*)?
    };
}

#[derive(Parser)]
#[command(name = "forestpart", version, about = "Forest partitions of planar graphs without 4- and 5-cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check class membership, or a partition against the specs.
    Verify {
        input: PathBuf,
        /// Partition as JSON {part0, part1} or a 0/1 line.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, default_value = "F3,F4")]
        specs: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact backtracking solve.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "F3,F4")]
        specs: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Constructive (F3,F4)-partition by reduction.
    Partition {
        input: PathBuf,
        /// Write the partition and reduction trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        base_case: usize,
        #[arg(long, default_value = "full")]
        fallback: Fallback,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the discharging rules and check the final charges.
    Audit {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value = "per-record")]
        pendent_mode: PendentMode,
    },
    /// Classify vertices and faces and list configurations.
    Detect {
        input: PathBuf,
        /// Comma separated kinds, e.g. C2,C5. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<ConfigKind>,
        #[arg(long)]
        json: bool,
    },
    /// All class members with at most n vertices, up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Random gadget assemblies.
    Generate {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Block weights, e.g. edge=3,triangle=3,c6=1,c7=1,hex=1.
        #[arg(long)]
        mix: Option<BlockMix>,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        /// Attempts to add chords that keep class membership.
        #[arg(long, default_value_t = 0)]
        chords: usize,
        #[arg(long)]
        no_decorate: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Read rotgraph or planar_code and re-emit it.
    Ingest {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Run several tasks over every graph of a corpus.
    Batch {
        input: PathBuf,
        /// classify, detect, audit, solve:SPEC,SPEC and partition, comma separated.
        #[arg(long, default_value = "classify,detect,audit,solve:F3,F4,partition")]
        tasks: String,
        /// Worker threads; the FP_JOBS environment variable overrides this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value = "per-record")]
        pendent_mode: PendentMode,
        #[arg(long, default_value_t = 8)]
        base_case: usize,
        #[arg(long, default_value = "full")]
        fallback: Fallback,
        /// Leave out per-task timings so reports compare byte for byte.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Rotgraph)]
    format: Format,
    /// Output file; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Rotgraph,
    PlanarCode,
}

fn read_input(path: &Path) -> Result<Vec<PlaneGraph>> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(read_graphs(&bytes)?)
}

fn write_graphs(graphs: &[PlaneGraph], out: &Output) -> Result<()> {
    let bytes = match out.format {
        Format::Rotgraph => write_rotgraph_all(graphs).into_bytes(),
        Format::PlanarCode => write_planar_code(graphs)?,
    };
    match &out.output {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// One JSON value per graph; a bare object when there is a single graph.
fn print_json(values: Vec<Value>) -> Result<()> {
    let v = if values.len() == 1 { values.into_iter().next().unwrap() } else { Value::Array(values) };
    out!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn parse_tasks(s: &str) -> Result<Vec<Task>> {
    let mut tokens = s.split(',').map(str::trim).filter(|t| !t.is_empty());
    let mut tasks = Vec::new();
    while let Some(t) = tokens.next() {
        let t = if t.starts_with("solve:") {
            let second = tokens.next().with_context(|| format!("`{t}` needs two specs"))?;
            format!("{t},{second}")
        } else {
            t.to_string()
        };
        tasks.push(t.parse::<Task>()?);
    }
    Ok(tasks)
}

fn cmd_verify(input: &Path, partition: Option<&Path>, specs: &str, as_json: bool) -> Result<u8> {
    let graphs = read_input(input)?;
    let specs = parse_specs(specs)?;
    let given = match partition {
        Some(p) => Some(fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let mut all_ok = true;
    let mut values = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let class = class_membership(g);
        let value = match &given {
            None => {
                all_ok &= class.in_class;
                if !as_json {
                    out!(
                        "graph {id}: n {} m {} planar {} 4-cycle {} 5-cycle {} in class {}",
                        g.n(),
                        g.m(),
                        class.is_planar,
                        class.has_4_cycle,
                        class.has_5_cycle,
                        class.in_class
                    );
                }
                json!({ "id": id, "class": class })
            }
            Some(text) => {
                let p = Partition::parse(text, g.n())?;
                let check = verify(g, &p, &specs)?;
                all_ok &= check.is_valid();
                if !as_json {
                    match &check {
                        Check::Valid => out!("graph {id}: valid {},{}", specs[0], specs[1]),
                        Check::Violation(v) => out!("graph {id}: invalid, {v}"),
                    }
                }
                json!({ "id": id, "specs": specs, "check": check })
            }
        };
        values.push(value);
    }
    if as_json {
        print_json(values)?;
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_solve(input: &Path, specs: &str, cap: usize, as_json: bool) -> Result<u8> {
    let graphs = read_input(input)?;
    let specs = parse_specs(specs)?;
    let mut code = 0;
    let mut values = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let found = match solve(g, &specs, cap) {
            Ok(found) => found,
            Err(e @ Error::TooLarge { .. }) => {
                eprintln!("graph {id}: {e}");
                code = code.max(1);
                values.push(json!({ "id": id, "status": "skipped", "error": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if let Some(p) = &found {
            if !verify(g, p, &specs)?.is_valid() {
                eprintln!("graph {id}: solver output fails verification");
                code = 2;
            }
        }
        if !as_json {
            match &found {
                Some(p) => out!("{}", p.to_line()),
                None => out!("infeasible"),
            }
        }
        values.push(match found {
            Some(p) => json!({ "id": id, "specs": specs, "status": "feasible", "line": p.to_line(), "partition": p }),
            None => json!({ "id": id, "specs": specs, "status": "infeasible" }),
        });
    }
    if as_json {
        print_json(values)?;
    }
    Ok(code)
}

fn cmd_partition(input: &Path, trace: Option<&Path>, opts: ReduceOptions, as_json: bool) -> Result<u8> {
    let graphs = read_input(input)?;
    let mut code = 0;
    let mut values = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        match partition_constructively_with(g, &opts) {
            Ok((p, t)) => {
                if !verify(g, &p, &forestpart::partition::F3_F4)?.is_valid() {
                    eprintln!("graph {id}: reducer output fails verification");
                    code = 2;
                }
                if !as_json {
                    out!("{}", p.to_line());
                }
                values.push(json!({ "id": id, "line": p.to_line(), "partition": p, "trace": t }));
            }
            Err(e) => {
                eprintln!("graph {id}: {e}");
                code = code.max(if matches!(e, Error::InternalInconsistency(_)) { 2 } else { 1 });
                values.push(json!({ "id": id, "error": e.to_string() }));
            }
        }
    }
    if let Some(path) = trace {
        let v = if values.len() == 1 { values[0].clone() } else { Value::Array(values.clone()) };
        fs::write(path, serde_json::to_string_pretty(&v)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if as_json {
        print_json(values)?;
    }
    Ok(code)
}

fn cmd_audit(input: &Path, mode: PendentMode, as_json: bool) -> Result<u8> {
    let graphs = read_input(input)?;
    let mut code = 0;
    let mut values = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let r = match audit(g, mode) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("graph {id}: {e}");
                code = code.max(1);
                values.push(json!({ "id": id, "error": e.to_string() }));
                continue;
            }
        };
        if r.verdict != Verdict::Pass {
            code = 2;
        }
        if !as_json {
            out!(
                "graph {id}: total {} -> {}, {} negative, verdict {}",
                r.initial_total,
                r.final_total,
                r.negative_elements.len(),
                serde_json::to_value(r.verdict)?.as_str().unwrap_or("?")
            );
        }
        let l = &r.ledger;
        values.push(json!({
            "id": id,
            "initial": { "vertices": l.vertex_initial, "faces": l.face_initial },
            "transfers": l.transfers,
            "final": { "vertices": l.vertex_final, "faces": l.face_final },
            "totals": {
                "initial": r.initial_total,
                "final": r.final_total,
                "conservation": r.conservation,
                "is_minus_12": r.total_is_minus_12,
            },
            "negative": r.negative_elements,
            "config": r.config_found,
            "verdict": r.verdict,
        }));
    }
    if as_json {
        print_json(values)?;
    }
    Ok(code)
}

fn cmd_detect(input: &Path, kinds: &[ConfigKind], as_json: bool) -> Result<u8> {
    let graphs = read_input(input)?;
    let kinds: &[ConfigKind] = if kinds.is_empty() { &ConfigKind::ALL } else { kinds };
    let mut values = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let cls = classify(g)?;
        let mut witnesses = serde_json::Map::new();
        let mut counts = Vec::new();
        for &k in kinds {
            let ws = detect(g, &cls, k);
            counts.push(format!("{k}={}", ws.len()));
            witnesses.insert(k.to_string(), serde_json::to_value(ws)?);
        }
        if !as_json {
            out!("graph {id}: {}", counts.join(" "));
        }
        values.push(json!({ "id": id, "classification": cls, "witnesses": witnesses }));
    }
    if as_json {
        print_json(values)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify { input, partition, specs, json } => cmd_verify(&input, partition.as_deref(), &specs, json),
        Command::Solve { input, specs, cap, json } => cmd_solve(&input, &specs, cap, json),
        Command::Partition { input, trace, base_case, fallback, cap, json } => {
            let opts = ReduceOptions { base_case_size: base_case, fallback, cap };
            cmd_partition(&input, trace.as_deref(), opts, json)
        }
        Command::Audit { input, json, pendent_mode } => cmd_audit(&input, pendent_mode, json),
        Command::Detect { input, kinds, json } => cmd_detect(&input, &kinds, json),
        Command::Enumerate { n, out } => {
            write_graphs(&enumerate_exhaustive(n)?, &out)?;
            Ok(0)
        }
        Command::Generate { count, seed, mix, n_max, chords, no_decorate, out } => {
            let mut spec = CorpusSpec::gadget(count, seed);
            spec.mode = CorpusMode::Gadget;
            if let Some(mix) = mix {
                spec.block_mix = mix;
            }
            spec.n_max = n_max;
            spec.chords = chords;
            spec.decorate = !no_decorate;
            write_graphs(&generate_gadget(&spec), &out)?;
            Ok(0)
        }
        Command::Ingest { input, out } => {
            let graphs = ingest(&input)?;
            let members = graphs.iter().filter(|g| class_membership(g).in_class).count();
            eprintln!("{} graphs, {members} class members", graphs.len());
            write_graphs(&graphs, &out)?;
            Ok(0)
        }
        Command::Batch { input, tasks, jobs, json, cap, pendent_mode, base_case, fallback, no_timings } => {
            let graphs = read_input(&input)?;
            let tasks = parse_tasks(&tasks)?;
            let jobs = match std::env::var("FP_JOBS") {
                Ok(v) => v.trim().parse().with_context(|| format!("FP_JOBS must be a thread count, got `{v}`"))?,
                Err(_) => jobs,
            };
            if tasks.is_empty() {
                bail!("no tasks given");
            }
            let opts = BatchOptions {
                jobs,
                cap,
                pendent_mode,
                reduce: ReduceOptions { base_case_size: base_case, fallback, cap },
            };
            let mut report = run_batch(&graphs, &tasks, &opts);
            if no_timings {
                report = report.without_timings();
            }
            let text = report.to_json();
            match json {
                Some(p) => {
                    fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
                    let a = &report.aggregate;
                    eprintln!(
                        "{} graphs, {} in class, {} errors, {} proof violations, {} theorem failures, {} reducer failures",
                        a.graphs, a.in_class, a.errors, a.proof_violations, a.theorem_failures, a.reducer_failures
                    );
                }
                None => out!("{text}"),
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
