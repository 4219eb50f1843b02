//! `subcount`: exact weighted subgraph counting from the command line.
//!
//! Exit codes: 0 success (and, for `verify`, all checks passed), 1 generic
//! failure / verification mismatch, 2 unreadable or malformed input file,
//! 3 unknown or invalid pattern, 4 problem exceeds a size cap.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wsubgraph::bench::{render_csv, render_jsonl, run_bench, Method};
use wsubgraph::engine::{build_plan, count_with_plan};
use wsubgraph::oracle::{brute_force_count, OracleConfig};
use wsubgraph::{
    catalog, eval_closed_form, list_patterns, parse_dense_matrix, parse_edge_list, parse_pattern,
    Error, PatternMultigraph, WeightedGraph,
};

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_BAD_PATTERN: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

#[derive(Parser)]
#[command(name = "subcount", version, about = "Exact weighted subgraph counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Closed form when the pattern is in the catalog, engine otherwise.
    Auto,
    Closed,
    Engine,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Try dense matrix first, then edge list.
    Auto,
    Matrix,
    Edgelist,
}

#[derive(Subcommand)]
enum Command {
    /// Count weighted occurrences of a pattern in a graph.
    Count {
        /// Catalog id (see `list-patterns`) or literal `"m: a-b, c-d"`.
        #[arg(long)]
        pattern: String,
        /// Graph file (dense matrix or `u v w` edge list).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        /// Print the inclusion-exclusion plan and per-term values.
        #[arg(long)]
        explain: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Cross-check closed forms, engine and oracle on seeded random graphs.
    Verify {
        /// Graph sizes, comma separated.
        #[arg(long, default_value = "8,10")]
        sizes: String,
        /// Seeds per size.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        /// Relative tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Time the evaluation methods on seeded random graphs.
    Bench {
        /// Catalog ids, comma separated; default is the full catalog.
        #[arg(long, visible_alias = "ids")]
        patterns: Option<String>,
        /// Graph sizes, comma separated.
        #[arg(long, default_value = "30,60")]
        sizes: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Methods: closed, engine, naive (comma separated).
        #[arg(long, default_value = "closed,engine")]
        methods: String,
        /// Emit JSON lines instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// List the pattern catalog (id, size, edges, automorphisms).
    ListPatterns,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

/// Maps error causes to the documented exit codes.
fn classify(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_BAD_INPUT;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::UnknownPattern(_)) | Some(Error::UnsupportedSize(_)) => EXIT_BAD_PATTERN,
        Some(Error::TooLarge { .. }) => EXIT_TOO_LARGE,
        Some(_) => EXIT_BAD_INPUT,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Count {
            pattern,
            input,
            method,
            format,
            explain,
            json,
        } => cmd_count(&pattern, &input, method, format, explain, json),
        Command::Verify { sizes, seeds, tol } => cmd_verify(&sizes, seeds, tol),
        Command::Bench {
            patterns,
            sizes,
            reps,
            seed,
            methods,
            json,
        } => cmd_bench(patterns.as_deref(), &sizes, reps, seed, &methods, json),
        Command::ListPatterns => {
            print!("{}", list_patterns());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_graph(path: &PathBuf, format: FormatArg) -> anyhow::Result<WeightedGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::Error::new(e).context(format!("reading {}", path.display())))?;
    let parsed = match format {
        FormatArg::Matrix => parse_dense_matrix(&text),
        FormatArg::Edgelist => parse_edge_list(&text),
        FormatArg::Auto => parse_dense_matrix(&text).or_else(|_| parse_edge_list(&text)),
    };
    parsed.map_err(|e| anyhow::Error::new(e).context(format!("parsing {}", path.display())))
}

fn resolve_pattern(spec: &str) -> anyhow::Result<(PatternMultigraph, Option<&'static str>)> {
    let p = parse_pattern(spec).map_err(anyhow::Error::new)?;
    let id = catalog().iter().find(|e| e.pattern == p).map(|e| e.id);
    Ok((p, id))
}

fn cmd_count(
    pattern_spec: &str,
    input: &PathBuf,
    method: MethodArg,
    format: FormatArg,
    explain: bool,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let (pattern, catalog_id) = resolve_pattern(pattern_spec)?;
    let g = load_graph(input, format)?;

    let plan = build_plan(&pattern);
    let (labeled, method_name, breakdown) = match method {
        MethodArg::Closed | MethodArg::Auto if catalog_id.is_some() && !explain => {
            let id = catalog_id.unwrap();
            (eval_closed_form(id, &g)?, "closed_form", None)
        }
        MethodArg::Closed => {
            let id = catalog_id.ok_or_else(|| {
                anyhow::Error::new(Error::UnknownPattern(format!(
                    "{pattern_spec} has no closed form; use --method engine"
                )))
            })?;
            (eval_closed_form(id, &g)?, "closed_form", None)
        }
        MethodArg::Oracle => {
            let v = brute_force_count(&pattern, &g, OracleConfig::default())
                .map_err(anyhow::Error::new)?;
            (v, "oracle", None)
        }
        _ => {
            let r = count_with_plan(&plan, &pattern, &g)?;
            (r.labeled, "engine", Some(r.breakdown))
        }
    };
    let aut = wsubgraph::pattern::automorphism_count(&pattern);
    let unlabeled = labeled / aut as f64;

    if json {
        let mut obj = json!({
            "pattern": pattern.render(),
            "catalog_id": catalog_id,
            "n": g.n(),
            "method": method_name,
            "labeled": labeled,
            "automorphisms": aut,
            "unlabeled": unlabeled,
        });
        if explain {
            let terms: Vec<_> = breakdown
                .unwrap_or_default()
                .iter()
                .map(|(c, sig, v)| json!({"coefficient": c, "partition": sig, "value": v}))
                .collect();
            obj["plan"] = json!(plan.render());
            obj["terms"] = json!(terms);
        }
        println!("{obj}");
    } else {
        println!("pattern      {}", pattern.render());
        if let Some(id) = catalog_id {
            println!("catalog id   {id}");
        }
        println!("graph size   {}", g.n());
        println!("method       {method_name}");
        println!("labeled      {labeled:.12e}");
        println!("automorphisms {aut}");
        println!("unlabeled    {unlabeled:.12e}");
        if explain {
            println!("plan (coefficient, partition, quotient edges):");
            for (c, sig, v) in breakdown.unwrap_or_default() {
                println!("  {c}\t{sig}\tvalue = {v:.12e}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_sizes(sizes: &str) -> anyhow::Result<Vec<usize>> {
    sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| anyhow::anyhow!("invalid size {s:?}"))
        })
        .collect()
}

fn cmd_verify(sizes: &str, seeds: u64, tol: f64) -> anyhow::Result<ExitCode> {
    let sizes = parse_sizes(sizes)?;
    let oracle_cfg = OracleConfig::default();
    let mut failures = 0usize;
    let mut checks = 0usize;
    for entry in catalog() {
        for &n in &sizes {
            for seed in 0..seeds {
                let g = wsubgraph::bench::seeded_graph(n, seed);
                let closed = eval_closed_form(entry.id, &g)?;
                let engine = wsubgraph::engine::count(&entry.pattern, &g)?.labeled;
                let reference =
                    brute_force_count(&entry.pattern, &g, oracle_cfg).ok();
                let baseline = reference.unwrap_or(engine);
                let scale = baseline.abs().max(1e-12 / tol);
                let mut ok = (closed - baseline).abs() <= tol * scale
                    && (engine - baseline).abs() <= tol * scale;
                if reference.is_some() {
                    ok = ok && (closed - engine).abs() <= tol * scale;
                }
                checks += 1;
                if !ok {
                    failures += 1;
                    eprintln!(
                        "MISMATCH {} n={n} seed={seed}: closed={closed:.15e} engine={engine:.15e} oracle={reference:?}",
                        entry.id
                    );
                }
            }
        }
    }
    println!(
        "verify: {checks} checks, {failures} failures ({} patterns, sizes {sizes:?}, {seeds} seeds)",
        catalog().len()
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_bench(
    patterns: Option<&str>,
    sizes: &str,
    reps: usize,
    seed: u64,
    methods: &str,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let ids: Vec<&str> = match patterns {
        Some(p) => {
            let mut ids = Vec::new();
            for raw in p.split(',') {
                let raw = raw.trim();
                let e = wsubgraph::entry(raw)
                    .ok_or_else(|| anyhow::Error::new(Error::UnknownPattern(raw.into())))?;
                ids.push(e.id);
            }
            ids
        }
        None => catalog().iter().map(|e| e.id).collect(),
    };
    let sizes = parse_sizes(sizes)?;
    let methods: Vec<Method> = methods
        .split(',')
        .map(|s| match s.trim() {
            "closed" | "closed_form" => Ok(Method::ClosedForm),
            "engine" => Ok(Method::Engine),
            "naive" | "naive_loop" => Ok(Method::NaiveLoop),
            other => Err(anyhow::anyhow!("unknown method {other:?}")),
        })
        .collect::<anyhow::Result<_>>()?;
    let records = run_bench(&ids, &methods, &sizes, reps, seed).map_err(anyhow::Error::new)?;
    if json {
        print!("{}", render_jsonl(&records));
    } else {
        print!("{}", render_csv(&records, seed));
    }
    Ok(ExitCode::SUCCESS)
}
