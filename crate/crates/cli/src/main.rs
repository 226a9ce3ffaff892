use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use qlab::cache::{Cache, Provenance};
use qlab::homology::{homology_with, HomologyOptions};
use qlab::verify::{run_criteria, run_suite, Suite, SuiteOptions, Workspace};
use qlab::{
    build_commuting_graph, build_kneser_graph, clique_complex_with_budget, Budget, CliqueComplex,
    CycleBound, Error, GroundSet, HomologyGroup, LabeledGraph,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qlab",
    version,
    about = "Homology of bounded commuting complexes and matching complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "QLAB_THREADS")]
    threads: Option<usize>,

    /// Directory for cached complexes, matrices and results.jsonl
    #[arg(long, global = true, env = "QLAB_CACHE_DIR")]
    cache_dir: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "QLAB_FORMAT")]
    format: Format,

    /// Maximum number of stored matrix entries or simplices
    #[arg(long, global = true, env = "QLAB_BUDGET_ENTRIES")]
    budget_entries: Option<u64>,

    /// Maximum bit length of any matrix entry during elimination
    #[arg(long, global = true, env = "QLAB_BUDGET_BITS")]
    budget_bits: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct ComplexArgs {
    #[arg(long, env = "QLAB_P")]
    p: usize,

    /// Bound on the number of disjoint p-cycles per vertex
    #[arg(long, env = "QLAB_A", conflicts_with_all = ["unbounded", "kneser"])]
    a: Option<usize>,

    /// All elements of order p
    #[arg(long, conflicts_with = "kneser")]
    unbounded: bool,

    /// Matching complex of p-subsets instead of permutations
    #[arg(long)]
    kneser: bool,
}

impl ComplexArgs {
    fn graph(&self, n: usize) -> qlab::Result<LabeledGraph> {
        let ground = GroundSet::range(n);
        if self.kneser {
            return build_kneser_graph(&ground, self.p);
        }
        let bound = match (self.a, self.unbounded) {
            (_, true) => CycleBound::Unbounded,
            (Some(a), false) => CycleBound::AtMost(a),
            (None, false) => {
                return Err(Error::InvalidParameter(
                    "pass --a, --unbounded or --kneser".into(),
                ))
            }
        };
        build_commuting_graph(&ground, self.p, bound)
    }
}

#[derive(Args, Debug, Clone)]
struct Range {
    #[arg(long, env = "QLAB_N")]
    n: Option<usize>,
    #[arg(long, env = "QLAB_N_MIN")]
    n_min: Option<usize>,
    #[arg(long, env = "QLAB_N_MAX")]
    n_max: Option<usize>,
}

impl Range {
    fn values(&self) -> qlab::Result<Vec<usize>> {
        match (self.n, self.n_min, self.n_max) {
            (Some(n), None, None) => Ok(vec![n]),
            (None, Some(lo), Some(hi)) if lo <= hi => Ok((lo..=hi).collect()),
            (None, Some(lo), Some(hi)) => Err(Error::InvalidParameter(format!(
                "--n-min {lo} exceeds --n-max {hi}"
            ))),
            _ => Err(Error::InvalidParameter(
                "pass either --n or both --n-min and --n-max".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a commuting or Kneser graph as JSON
    Graph {
        #[arg(long, env = "QLAB_N")]
        n: usize,
        #[command(flatten)]
        cx: ComplexArgs,
    },
    /// Build a clique complex and report its chain ranks
    Complex {
        #[arg(long, env = "QLAB_N")]
        n: usize,
        #[command(flatten)]
        cx: ComplexArgs,
        #[arg(long, default_value_t = 1, env = "QLAB_MAX_DIM")]
        max_dim: usize,
    },
    /// Homology in degrees 0..=k
    Homology {
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        cx: ComplexArgs,
        #[arg(long, default_value_t = 0, env = "QLAB_K")]
        k: usize,
        /// Dimension cap of the complex (defaults to k)
        #[arg(long, env = "QLAB_MAX_DIM")]
        max_dim: Option<usize>,
        /// Unreduced homology
        #[arg(long)]
        unreduced: bool,
    },
    /// Homology table over a range of n with the vanishing onset
    Sweep {
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        cx: ComplexArgs,
        #[arg(long, default_value_t = 0, env = "QLAB_K")]
        k: usize,
    },
    /// Run a property suite
    Verify {
        /// fi-torsion | cone | generator-degree | snf | theorem-a | kneser-acyclicity | dimension
        suite: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 42, env = "QLAB_SEED")]
        seed: u64,
    },
    /// Run the acceptance criteria table
    Reproduce {
        /// Only these criteria (comma separated ids)
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

struct Ctx {
    cache: Option<Cache>,
    budget: Budget,
    format: Format,
}

impl Ctx {
    fn complex(
        &self,
        graph: LabeledGraph,
        max_dim: usize,
    ) -> qlab::Result<(CliqueComplex, Option<Provenance>)> {
        let graph = Arc::new(graph);
        match &self.cache {
            Some(cache) => cache
                .complex(graph, max_dim, self.budget)
                .map(|(cx, p)| (cx, Some(p))),
            None => clique_complex_with_budget(graph, max_dim, self.budget).map(|cx| (cx, None)),
        }
    }

    fn boundary(
        &self,
        cx: &CliqueComplex,
        k: usize,
        reduced: bool,
    ) -> qlab::Result<qlab::SparseIntMatrix> {
        match &self.cache {
            Some(cache) => cache.boundary(cx, k, reduced).map(|(m, _)| m),
            None => cx.boundary_matrix(k, reduced),
        }
    }

    fn homology(&self, cx: &CliqueComplex, t: usize, reduced: bool) -> qlab::Result<HomologyGroup> {
        let bk = self.boundary(cx, t, reduced)?;
        let bk1 = self.boundary(cx, t + 1, reduced)?;
        homology_with(
            cx.simplices(t).len(),
            &bk,
            &bk1,
            HomologyOptions {
                reduce_segment: true,
                budget: self.budget,
            },
        )
    }

    fn log(&self, record: &Value) -> qlab::Result<()> {
        match &self.cache {
            Some(cache) => cache.append_result(record),
            None => Ok(()),
        }
    }
}

fn parameters(cx: &ComplexArgs, n: usize) -> Value {
    json!({
        "kind": if cx.kneser { "kneser" } else { "commuting" },
        "n": n,
        "p": cx.p,
        "a": if cx.kneser { Value::Null } else if cx.unbounded { json!("unbounded") } else { json!(cx.a) },
    })
}

fn groups_json(groups: &[HomologyGroup]) -> Value {
    Value::Array(
        groups
            .iter()
            .enumerate()
            .map(|(k, g)| json!({"k": k, "betti": g.betti, "torsion": g.torsion}))
            .collect(),
    )
}

fn torsion_text(g: &HomologyGroup) -> String {
    g.torsion
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn emit(out: &mut impl Write, line: impl std::fmt::Display) -> qlab::Result<()> {
    writeln!(out, "{line}")?;
    Ok(())
}

fn homology_record(
    ctx: &Ctx,
    cx_args: &ComplexArgs,
    n: usize,
    k: usize,
    max_dim: usize,
    reduced: bool,
) -> qlab::Result<Value> {
    let start = Instant::now();
    let (cx, provenance) = ctx.complex(cx_args.graph(n)?, max_dim)?;
    let groups = (0..=k)
        .map(|t| ctx.homology(&cx, t, reduced))
        .collect::<qlab::Result<Vec<_>>>()?;
    let mut record = parameters(cx_args, n);
    record["max_dim"] = json!(max_dim);
    record["reduced"] = json!(reduced);
    record["chain_ranks"] = json!(cx.chain_ranks());
    record["homology"] = groups_json(&groups);
    record["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    record["cache"] = match provenance {
        Some(p) => json!({"hit": p.hit, "sha256": p.sha256}),
        None => Value::Null,
    };
    Ok(record)
}

fn run(cli: Cli, out: &mut impl Write) -> qlab::Result<u8> {
    let mut budget = Budget::default();
    if let Some(e) = cli.global.budget_entries {
        budget.max_entries = e;
    }
    if let Some(b) = cli.global.budget_bits {
        budget.max_bits = b;
    }
    let cache = cli.global.cache_dir.as_ref().map(Cache::open).transpose()?;
    let ctx = Ctx {
        cache,
        budget,
        format: cli.global.format,
    };

    match cli.command {
        Command::Graph { n, cx } => {
            let g = cx.graph(n)?;
            if ctx.format == Format::Csv {
                emit(out, "i,j")?;
                for (i, j) in g.edges() {
                    emit(out, format!("{i},{j}"))?;
                }
            } else {
                emit(out, g.to_json())?;
            }
        }
        Command::Complex { n, cx, max_dim } => {
            let (complex, provenance) = ctx.complex(cx.graph(n)?, max_dim)?;
            let mut record = parameters(&cx, n);
            record["max_dim"] = json!(max_dim);
            record["chain_ranks"] = json!(complex.chain_ranks());
            record["complete"] = json!(complex.is_complete());
            record["cache"] = json!(provenance);
            emit(out, record)?;
        }
        Command::Homology {
            range,
            cx,
            k,
            max_dim,
            unreduced,
        } => {
            let max_dim = max_dim.unwrap_or(k);
            if k > max_dim {
                return Err(Error::InvalidParameter(format!(
                    "--k {k} exceeds --max-dim {max_dim}"
                )));
            }
            let ns = range.values()?;
            let records = ns
                .iter()
                .map(|&n| homology_record(&ctx, &cx, n, k, max_dim, !unreduced))
                .collect::<qlab::Result<Vec<_>>>()?;
            if ctx.format == Format::Csv {
                emit(out, "n,k,betti,torsion")?;
            }
            for (n, record) in ns.iter().zip(&records) {
                ctx.log(&json!({"command": "homology", "record": record}))?;
                match ctx.format {
                    Format::Json => emit(out, record)?,
                    Format::Csv => {
                        for g in record["homology"].as_array().expect("array") {
                            let torsion: Vec<String> = g["torsion"]
                                .as_array()
                                .expect("array")
                                .iter()
                                .map(|d| d.to_string())
                                .collect();
                            emit(
                                out,
                                format!("{n},{},{},{}", g["k"], g["betti"], torsion.join(";")),
                            )?;
                        }
                    }
                }
            }
        }
        Command::Sweep { range, cx, k } => {
            use rayon::prelude::*;
            let ns = range.values()?;
            cx.graph(ns[0])?;
            let rows: Vec<(usize, qlab::Result<Vec<HomologyGroup>>)> = ns
                .par_iter()
                .map(|&n| {
                    let r = (|| {
                        let (complex, _) = ctx.complex(cx.graph(n)?, k)?;
                        (0..=k).map(|t| ctx.homology(&complex, t, true)).collect()
                    })();
                    (n, r)
                })
                .collect();
            // the first n from which every computed row vanishes
            let mut onset = None;
            for (n, r) in rows.iter().rev() {
                match r {
                    Ok(groups) if groups.iter().all(HomologyGroup::is_zero) => onset = Some(*n),
                    _ => break,
                }
            }
            if ctx.format == Format::Csv {
                emit(out, "n,k,betti,torsion,status")?;
            }
            for (n, r) in &rows {
                match (ctx.format, r) {
                    (Format::Json, Ok(groups)) => {
                        let mut rec = parameters(&cx, *n);
                        rec["homology"] = groups_json(groups);
                        ctx.log(&json!({"command": "sweep", "record": rec}))?;
                        emit(out, rec)?;
                    }
                    (Format::Json, Err(e)) => {
                        let mut rec = parameters(&cx, *n);
                        rec["error"] = json!(e.to_string());
                        emit(out, rec)?;
                    }
                    (Format::Csv, Ok(groups)) => {
                        for (t, g) in groups.iter().enumerate() {
                            emit(out, format!("{n},{t},{},{},ok", g.betti, torsion_text(g)))?;
                        }
                    }
                    (Format::Csv, Err(e)) => emit(out, format!("{n},,,,\"{e}\""))?,
                }
            }
            let summary = match onset {
                Some(n) => format!(
                    "H̃_t = 0 for t <= {k} at every n from {n} to {} within computed range",
                    ns[ns.len() - 1]
                ),
                None => format!(
                    "no vanishing onset for n in {}..={} within computed range",
                    ns[0],
                    ns[ns.len() - 1]
                ),
            };
            match ctx.format {
                Format::Json => emit(out, json!({"onset": onset, "k": k, "summary": summary}))?,
                Format::Csv => emit(out, format!("# {summary}"))?,
            }
        }
        Command::Verify {
            suite,
            p,
            a,
            n,
            n_max,
            k,
            trials,
            size,
            seed,
        } => {
            let suite: Suite = suite.parse()?;
            let opts = SuiteOptions {
                p,
                a,
                n,
                n_max,
                k,
                trials,
                size,
                seed,
                budget,
            };
            let report = run_suite(suite, &opts)?;
            match ctx.format {
                Format::Json => emit(out, report.to_json())?,
                Format::Csv => {
                    emit(out, "cell,ok,detail")?;
                    for c in &report.checks {
                        emit(
                            out,
                            format!(
                                "\"{}\",{},\"{}\"",
                                c.label,
                                c.ok,
                                c.detail.replace('"', "'")
                            ),
                        )?;
                    }
                }
            }
            if !report.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Reproduce { criteria } => {
            let ws = Workspace::new(ctx.cache, budget);
            let reports = run_criteria(&ws, criteria.as_deref());
            for r in &reports {
                info!("criterion {} {}", r.id, if r.ok { "pass" } else { "fail" });
                match ctx.format {
                    Format::Json => emit(out, json!(r))?,
                    Format::Csv => emit(
                        out,
                        format!(
                            "{},{},{},\"{}\"",
                            r.id,
                            r.ok,
                            r.elapsed_ms,
                            r.detail.replace('"', "'")
                        ),
                    )?,
                }
            }
            let passed = reports.iter().filter(|r| r.ok).count();
            if ctx.format == Format::Json {
                emit(out, json!({"passed": passed, "total": reports.len()}))?;
            }
            if passed != reports.len() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::InvalidParameter(_)
        | Error::GapSmallerThanP { .. }
        | Error::OutOfRange { .. }
        | Error::GroundMismatch
        | Error::DomainMismatch => EXIT_INVALID,
        _ => EXIT_VERIFY_FAILED,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("qlab: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
