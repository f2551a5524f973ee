use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use crc_cli::*;
use crc_core::dataset::{generate, write_jsonl, Distribution, GenSpec, Header};
use crc_core::{Instance, Setting};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "crc", version, about = "Approximate colored range counting: datasets, verification, benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a synthetic JSON-lines dataset.
    Gen {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a structure against the exact oracle; exits 1 on any violation.
    Verify {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Largest number of enumerated queries to check.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        /// Skip the second build used for the reproducibility check.
        #[arg(long)]
        no_rebuild: bool,
        /// Test hook: corrupt every answer.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Emit CSV rows `structure,n,eps,build_ms,qps,space_units,max_ratio_err`.
    Bench {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Queries timed per repetition.
        #[arg(long, default_value_t = 20_000)]
        queries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Read this dataset instead of generating one. Repeatable for bench.
    #[arg(long)]
    dataset: Vec<PathBuf>,
    #[arg(long, default_value = "stab3s-2d")]
    setting: String,
    /// Number of objects. Repeatable for bench.
    #[arg(long, default_values_t = [500])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    colors: u32,
    #[arg(long, default_value = "uniform")]
    dist: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinates are drawn from `[0, grid)`; defaults to `max(n, 16)`.
    #[arg(long)]
    grid: Option<i64>,
    /// Dimension for `ortho-rd`.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args)]
struct RunArgs {
    /// Structure to build; defaults to the setting's main structure.
    #[arg(long)]
    structure: Option<String>,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
}

fn spec(d: &DataArgs, n: usize) -> Result<GenSpec> {
    let mut s = GenSpec::new(d.setting.parse::<Setting>()?, n, d.colors, d.dist.parse::<Distribution>()?, d.seed);
    if let Some(g) = d.grid {
        s.grid_u = g;
    }
    s.dim = d.dim;
    Ok(s)
}

fn header(s: &GenSpec) -> Header {
    Header { setting: s.setting.name().to_string(), n: s.n, grid_u: s.grid_u, seed: s.seed, dim: s.dim_of_points() }
}

/// Datasets named on the command line, or one generated per `--n`.
fn datasets(d: &DataArgs) -> Result<Vec<Instance>> {
    if !d.dataset.is_empty() {
        return d.dataset.iter().map(|p| Ok(load_dataset(p)?.1)).collect();
    }
    d.n.iter().map(|&n| Ok(generate(&spec(d, n)?)?)).collect()
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn opts(run: &RunArgs, seed: u64, corrupt: bool) -> Result<BuildOpts> {
    Ok(BuildOpts { eps: run.eps, seed, attempt_cap: attempt_cap_from_env()?, corrupt })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen { data, out } => {
            let [n] = data.n[..] else { bail!("gen takes a single --n") };
            let s = spec(&data, n)?;
            let mut w = output(&out)?;
            write_jsonl(&generate(&s)?, &header(&s), &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Cmd::Verify { data, run, budget, no_rebuild, corrupt } => {
            let mut all = true;
            for inst in datasets(&data)? {
                let name = run.structure.clone().unwrap_or_else(|| default_structure(inst.setting()).into());
                let o = opts(&run, data.seed, corrupt)?;
                let built = build(&name, &inst, &o)?;
                let rebuilt = if no_rebuild { None } else { Some(build(&name, &inst, &o)?) };
                println!("structure: {name} setting: {} n: {} eps: {}", inst.setting(), inst.len(), run.eps);
                let report = verify(&inst, &built, rebuilt.as_ref(), budget, data.seed)?;
                print_report(&report, io::stdout().lock())?;
                all &= report.passed();
            }
            Ok(all)
        }
        Cmd::Bench { data, run, reps, queries, out } => {
            let mut rows = Vec::new();
            for inst in datasets(&data)? {
                let name = run.structure.clone().unwrap_or_else(|| default_structure(inst.setting()).into());
                rows.push(bench(&inst, &name, &opts(&run, data.seed, false)?, reps, queries)?);
            }
            write_csv(&rows, output(&out)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
