use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use dl_horo::dlgraph::{DLVertex, DiestelLeader, PointFamily};
use dl_horo::horofn::{
    beta_value, betandist_table, limit_value, probe_disagreement, probe_points, ProbeSet, Stabilization,
};
use dl_horo::metric::bfs::{bfs_distance, BfsOutcome};
use dl_horo::metric::{distance, oracle_verified};
use dl_horo::stars::{separation_evidence, star_witness};
use dl_horo::verify::{run_criterion, CriterionOutcome, Suite, VerifyConfig, DEFAULT_SEED};

/// Word metric, horofunctions and star certificates on Diestel-Leader graphs.
///
/// Vertices are written `m:labels|m:labels|...`, one field per tree, for
/// example `0:|0:|2:1,1`.
#[derive(Debug, Parser)]
#[command(name = "dlhoro", version)]
struct Cli {
    /// Number of trees.
    #[arg(long, global = true, default_value_t = 3)]
    d: usize,
    /// Successors per tree vertex.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for the sampled verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for independent checks.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeChoice {
    Printed,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteChoice {
    Conformance,
    Lemmas,
    Horofn,
    Stars,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distance from the closed formula.
    Distance { v: String, w: String },
    /// Distance by breadth-first search, giving up past the cap.
    Bfs {
        v: String,
        w: String,
        #[arg(long, default_value_t = 12)]
        cap: u32,
    },
    Neighbors { v: String },
    /// Every vertex within the radius of the identity.
    Ball {
        #[arg(long)]
        radius: u32,
    },
    /// Closed-form beta horofunction, cross-checked against the limit.
    Beta { z: String },
    /// Stabilized limit of d(x_n, z) - d(x_n, id).
    Horolimit {
        #[arg(long)]
        family: String,
        z: String,
    },
    /// Affine fits of every f_{sigma,i}(beta_n, z) in n.
    TableBetandist {
        z: String,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
    },
    /// Compares d(z, p) - d(z, id) with beta(p) on the probe points.
    Probes {
        z: String,
        #[arg(long, value_enum, default_value_t = ProbeChoice::Symmetric)]
        set: ProbeChoice,
    },
    /// Checks d(a_n, b_n) <= d(a_n, id) for n up to nmax.
    StarWitness {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 30)]
        nmax: u32,
    },
    /// Checks d(a_n, w) >= d(a_n, id) + k over a truncation of N_k(beta).
    Separation {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Runs the acceptance criteria; exit 0 iff all pass.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
        suite: SuiteChoice,
    },
}

struct Output {
    command: &'static str,
    params: Map<String, Value>,
    result: Value,
    passed: Option<bool>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Io(e) => e.fmt(f),
        }
    }
}

impl From<dl_horo::Error> for Failure {
    fn from(e: dl_horo::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&out, cli.format) {
                eprintln!("dlhoro: {e}");
                return ExitCode::from(1);
            }
            if out.passed == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("dlhoro: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("dlhoro: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let g = DiestelLeader::new(cli.d, cli.q)?;
    let parse = |s: &str| g.parse_vertex(s);
    let family = |s: &str| PointFamily::parse(s, g.params());
    let mut params = Map::new();
    params.insert("d".into(), json!(cli.d));
    params.insert("q".into(), json!(cli.q));
    let mut param = |k: &str, v: Value| {
        params.insert(k.into(), v);
    };
    if !oracle_verified(g.params()) && !matches!(cli.command, Command::Bfs { .. } | Command::Neighbors { .. }) {
        eprintln!(
            "note: the distance formula has only been checked against breadth-first search for DL_3(2) and DL_2(2)"
        );
    }

    let (command, result, passed) = match &cli.command {
        Command::Distance { v, w } => {
            let (x, y) = (parse(v)?, parse(w)?);
            param("v", json!(x.to_string()));
            param("w", json!(y.to_string()));
            ("distance", json!({ "distance": distance(&x, &y)? }), None)
        }
        Command::Bfs { v, w, cap } => {
            let (x, y) = (parse(v)?, parse(w)?);
            param("v", json!(x.to_string()));
            param("w", json!(y.to_string()));
            param("cap", json!(cap));
            let result = match bfs_distance(&g, &x, &y, *cap)? {
                BfsOutcome::Distance(d) => json!({ "distance": d }),
                BfsOutcome::NotWithinCap => json!({ "distance": Value::Null, "not_within_cap": true }),
            };
            ("bfs", result, None)
        }
        Command::Neighbors { v } => {
            let x = parse(v)?;
            param("v", json!(x.to_string()));
            let mut ns: Vec<String> = g.neighbors(&x).iter().map(ToString::to_string).collect();
            ns.sort();
            let rows: Vec<Value> = ns.into_iter().map(|n| json!({ "neighbor": n })).collect();
            ("neighbors", json!({ "count": rows.len(), "rows": rows }), None)
        }
        Command::Ball { radius } => {
            param("radius", json!(radius));
            let ball = g.ball(*radius)?;
            let mut rows: Vec<(u32, &DLVertex)> =
                ball.vertices().iter().map(|v| (ball.distance_to(v).expect("in ball"), v)).collect();
            rows.sort();
            let rows: Vec<Value> =
                rows.iter().map(|(d, v)| json!({ "vertex": v.to_string(), "distance": d })).collect();
            let result = json!({ "size": ball.len(), "sphere_sizes": ball.sphere_sizes(), "rows": rows });
            ("ball", result, None)
        }
        Command::Beta { z } => {
            let z = parse(z)?;
            param("z", json!(z.to_string()));
            let closed = beta_value(&z)?;
            let limit = limit_value(&PointFamily::beta(g.params())?, &z, Stabilization::for_probe(&z))?;
            let agree = closed == limit.value;
            let result = json!({
                "beta": closed,
                "limit": limit.value,
                "stabilized_at": limit.stabilized_at,
                "agree": agree,
            });
            ("beta", result, Some(agree))
        }
        Command::Horolimit { family: f, z } => {
            let fam = family(f)?;
            let z = parse(z)?;
            param("family", json!(fam.to_string()));
            param("z", json!(z.to_string()));
            let h = limit_value(&fam, &z, Stabilization::for_probe(&z))?;
            let result = json!({ "value": h.value, "stabilized_at": h.stabilized_at, "window": h.window });
            ("horolimit", result, None)
        }
        Command::TableBetandist { z, n1, n2 } => {
            let z = parse(z)?;
            param("z", json!(z.to_string()));
            param("n1", json!(n1));
            param("n2", json!(n2));
            let t = betandist_table(&g, &z, *n1, *n2)?;
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "sigma": r.perm.cycle_notation(),
                        "f2": affine(r.sub_rows[0].slope, r.sub_rows[0].intercept),
                        "f3": affine(r.sub_rows[1].slope, r.sub_rows[1].intercept),
                        "max": affine(r.max_row.slope, r.max_row.intercept),
                        "max_index": r.max_index,
                    })
                })
                .collect();
            let result = json!({
                "beta": t.beta_value,
                "offsets": t.offsets,
                "matches_closed_form": t.matches_closed_form,
                "rows": rows,
            });
            ("table-betandist", result, Some(t.matches_closed_form))
        }
        Command::Probes { z, set } => {
            let z = parse(z)?;
            let set = match set {
                ProbeChoice::Printed => ProbeSet::Printed,
                ProbeChoice::Symmetric => ProbeSet::Symmetric,
            };
            param("z", json!(z.to_string()));
            param("set", json!(set));
            let probes = probe_points(&g, set)?;
            let verdict = probe_disagreement(&z, &probes)?;
            let id = g.identity();
            let base = distance(&z, &id)? as i64;
            let rows = probes
                .iter()
                .map(|p| {
                    let observed = distance(&z, &p.vertex)? as i64 - base;
                    let expected = beta_value(&p.vertex)?;
                    Ok(json!({
                        "probe": p.label,
                        "vertex": p.vertex.to_string(),
                        "observed": observed,
                        "beta": expected,
                        "agrees": observed == expected,
                    }))
                })
                .collect::<Result<Vec<Value>, dl_horo::Error>>()?;
            let result = json!({
                "disagrees": verdict.disagrees,
                "first_witness": verdict.witness().map(|w| w.label.clone()),
                "rows": rows,
            });
            ("probes", result, None)
        }
        Command::StarWitness { a, b, nmax } => {
            let (fa, fb) = (family(a)?, family(b)?);
            param("a", json!(fa.to_string()));
            param("b", json!(fb.to_string()));
            param("nmax", json!(nmax));
            let r = star_witness(&fa, &fb, *nmax)?;
            let rows: Vec<Value> =
                (1..).zip(&r.margin_at_n).map(|(n, m)| json!({ "n": n, "margin": m })).collect();
            let result = json!({
                "evidence": "finite witness inequality, not a membership decision",
                "holds_for_all": r.holds_for_all,
                "first_failure": r.first_failure,
                "rows": rows,
            });
            ("star-witness", result, Some(r.holds_for_all))
        }
        Command::Separation { family: f, k, nmax, depth } => {
            let fam = family(f)?;
            param("family", json!(fam.to_string()));
            param("k", json!(k));
            param("nmax", json!(nmax));
            param("depth", json!(depth));
            let r = separation_evidence(&fam, *k, *nmax, *depth)?;
            let result = json!({
                "evidence": "finite separation inequality, not a membership decision",
                "checked": r.checked,
                "violations": r.violations,
                "min_slack": r.min_slack,
                "first_violation": r.first_violation,
            });
            ("separation", result, Some(r.passed()))
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteChoice::Conformance => Suite::Conformance,
                SuiteChoice::Lemmas => Suite::Lemmas,
                SuiteChoice::Horofn => Suite::Horofn,
                SuiteChoice::Stars => Suite::Stars,
                SuiteChoice::All => Suite::All,
            };
            param("suite", json!(suite.to_string()));
            param("seed", json!(cli.seed));
            let outcomes = run_verify(suite, VerifyConfig { seed: cli.seed }, cli.parallel)?;
            let all = outcomes.iter().all(|o| o.passed);
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "criterion": o.id,
                        "title": o.title,
                        "passed": o.passed,
                        "checks": o.report.checked,
                        "violations": o.report.violations,
                        "seconds": (o.elapsed_secs * 100.0).round() / 100.0,
                        "limit": o.limit_secs,
                        "first_violation": o.report.first_violation,
                        "notes": o.report.notes.join("; "),
                    })
                })
                .collect();
            ("verify", json!({ "all_passed": all, "rows": rows }), Some(all))
        }
    };
    Ok(Output { command, params, result, passed })
}

fn affine(slope: i64, intercept: i64) -> String {
    match intercept {
        0 => format!("{slope}n"),
        c if c < 0 => format!("{slope}n - {}", -c),
        c => format!("{slope}n + {c}"),
    }
}

fn run_verify(suite: Suite, cfg: VerifyConfig, workers: Option<usize>) -> Result<Vec<CriterionOutcome>, Failure> {
    let ids = suite.criteria();
    let mut outcomes = match workers {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            pool.install(|| ids.par_iter().map(|&id| run_criterion(id, &cfg)).collect::<Result<Vec<_>, _>>())?
        }
        _ => ids.iter().map(|&id| run_criterion(id, &cfg)).collect::<Result<Vec<_>, _>>()?,
    };
    outcomes.sort_by_key(|o| o.id);
    Ok(outcomes)
}

fn emit(out: &Output, format: Format) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match format {
        Format::Json => {
            let mut doc = json!({
                "command": out.command,
                "params": out.params,
                "result": out.result,
            });
            if let Some(p) = out.passed {
                doc["passed"] = json!(p);
            }
            serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Failure::Io(e.into()))?;
            writeln!(w).map_err(Failure::Io)
        }
        Format::Csv => {
            let (headers, rows) = tabulate(&out.result);
            let mut c = csv::Writer::from_writer(w);
            let err = |e: csv::Error| Failure::Io(e.into());
            c.write_record(&headers).map_err(err)?;
            for r in rows {
                c.write_record(&r).map_err(err)?;
            }
            c.flush().map_err(Failure::Io)
        }
        Format::Table => {
            let io = Failure::Io;
            writeln!(w, "{}", out.command).map_err(io)?;
            if let Value::Object(map) = &out.result {
                for (k, v) in map.iter().filter(|(k, _)| *k != "rows") {
                    writeln!(w, "  {k}: {}", cell(v)).map_err(Failure::Io)?;
                }
            }
            if let Some(Value::Array(_)) = out.result.get("rows") {
                let (headers, rows) = tabulate(&out.result);
                let widths: Vec<usize> = (0..headers.len())
                    .map(|i| rows.iter().map(|r| r[i].len()).chain([headers[i].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, &n)| format!("{c:<n$}")).collect();
                    format!("  {}", padded.join("  ").trim_end())
                };
                writeln!(w, "{}", line(&headers)).map_err(Failure::Io)?;
                for r in &rows {
                    writeln!(w, "{}", line(r)).map_err(Failure::Io)?;
                }
            }
            if let Some(p) = out.passed {
                writeln!(w, "  passed: {p}").map_err(Failure::Io)?;
            }
            Ok(())
        }
    }
}

/// Headers and rows for the flat formats: the `rows` array when there is
/// one, otherwise one row of the result's fields.
fn tabulate(result: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match result.get("rows") {
        Some(Value::Array(items)) => {
            let headers: Vec<String> = match items.first() {
                Some(Value::Object(m)) => m.keys().cloned().collect(),
                _ => vec!["value".into()],
            };
            let rows = items
                .iter()
                .map(|item| match item {
                    Value::Object(m) => headers.iter().map(|h| m.get(h).map(cell).unwrap_or_default()).collect(),
                    other => vec![cell(other)],
                })
                .collect();
            (headers, rows)
        }
        _ => match result {
            Value::Object(m) => (m.keys().cloned().collect(), vec![m.values().map(cell).collect()]),
            other => (vec!["value".into()], vec![vec![cell(other)]]),
        },
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
