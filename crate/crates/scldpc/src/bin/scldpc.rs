//! Command-line front end for threshold searches, window sizing, and the
//! complexity model. Each subcommand wraps one library entry point; all
//! randomized computations require an explicit seed so runs are
//! reproducible byte for byte.
//!
//! Exit status reflects tool health, not decoding success: a sweep item
//! whose threshold falls outside the bracket is reported in-band and does
//! not fail the run. Only configuration and I/O errors exit nonzero.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scldpc::complexity::{compare_operating_points, complexity_order, OperatingPoint};
use scldpc::exit_awgn::{build_mi_table, McConfig, DEFAULT_SAMPLES};
use scldpc::protograph::resolve;
use scldpc::report::{fmt6, to_csv, to_json, CSV_HEADER};
use scldpc::subspace::{build_kernels, dump_kernels_json, FieldParam};
use scldpc::threshold::{
    find_w_star, locate, ChannelFamily, Schedule, SearchOptions, SweepItem, ThresholdResult,
};

#[derive(Parser)]
#[command(
    name = "scldpc",
    about = "Decoding thresholds of non-binary spatially coupled LDPC ensembles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; bare file names land in $SCLDPC_OUT_DIR when it is set.
    /// Omit to print to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    /// Residual target declaring a position recovered.
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    /// Bisection tolerance: erasure rate on the BEC (default 1e-4), dB on
    /// the AWGN channel (default 0.01).
    #[arg(long)]
    tol: Option<f64>,
    /// Monte-Carlo samples per EXIT-table grid point (AWGN only).
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    /// Normalize Eb/N0 by the block design rate b/c instead of the
    /// terminated rate R_L.
    #[arg(long)]
    block_rate: bool,
}

impl SearchArgs {
    fn options(&self, seed: Option<u64>) -> SearchOptions {
        let mut opts = SearchOptions::default();
        opts.bec_target.delta = self.delta;
        opts.awgn_target.delta = self.delta;
        if let Some(tol) = self.tol {
            opts.bec_tol = tol;
            opts.awgn_tol_db = tol;
        }
        opts.mc = McConfig { samples: self.samples, seed: seed.unwrap_or(1) };
        opts.normalize_by_block_rate = self.block_rate;
        opts
    }
}

/// `fs`, `wd:W`, or `wd` + a separate `--window` flag.
fn schedule_of(text: &str, window: Option<usize>) -> Result<Schedule, String> {
    match (text, window) {
        ("wd", Some(w)) => Ok(Schedule::Wd(w)),
        (_, Some(_)) => Err("--window only applies with --schedule wd".into()),
        (s, None) => Schedule::from_str(s).map_err(|e| e.to_string()),
    }
}

/// Comma-separated extension degrees; each item is a number or an
/// inclusive range `a..b`.
fn parse_ms(items: &[String]) -> Result<Vec<u32>, String> {
    let mut ms = Vec::new();
    for item in items {
        if let Some((a, b)) = item.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| format!("bad m range: {item}"))?;
            let b: u32 =
                b.trim().trim_start_matches('=').parse().map_err(|_| format!("bad m range: {item}"))?;
            if a > b {
                return Err(format!("empty m range: {item}"));
            }
            ms.extend(a..=b);
        } else {
            ms.push(item.trim().parse().map_err(|_| format!("bad m value: {item}"))?);
        }
    }
    if ms.is_empty() {
        return Err("no m values given".into());
    }
    Ok(ms)
}

#[derive(Subcommand)]
enum Command {
    /// Erasure-rate threshold of one ensemble over GF(2^m).
    BecThreshold {
        /// Catalog name (B24, B36, C24, C36ms1, C36ms2) or ensemble file.
        #[arg(long)]
        ensemble: String,
        /// Extension degree of GF(2^m).
        #[arg(long)]
        m: u32,
        /// fs, wd:W, or wd with --window.
        #[arg(long, default_value = "fs")]
        schedule: String,
        /// Window size in block columns (with --schedule wd).
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eb/N0 threshold (dB) of one ensemble over GF(2^m).
    AwgnThreshold {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "fs")]
        schedule: String,
        #[arg(long)]
        window: Option<usize>,
        /// Seed for the Monte-Carlo EXIT tables (required: results are
        /// reproducible only under an explicit seed).
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Threshold grid over ensembles x field sizes x schedules.
    Sweep {
        /// Comma-separated catalog names or ensemble files.
        #[arg(long, value_delimiter = ',', required = true)]
        ensembles: Vec<String>,
        /// Comma-separated extension degrees; ranges like 1..6 expand
        /// inclusively.
        #[arg(long = "m", value_delimiter = ',', required = true)]
        ms: Vec<String>,
        #[arg(long, default_value = "bec")]
        channel: ChannelFamily,
        /// Comma-separated schedules, e.g. fs,wd:7,wd:10.
        #[arg(long, value_delimiter = ',', default_value = "fs")]
        schedules: Vec<Schedule>,
        /// Required when --channel awgn.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest window whose WD threshold stays within --frac of FS for
    /// every requested m.
    Wstar {
        #[arg(long)]
        ensemble: String,
        #[arg(long = "m", value_delimiter = ',', required = true)]
        ms: Vec<String>,
        #[arg(long, default_value = "bec")]
        channel: ChannelFamily,
        /// Allowed threshold degradation relative to flooding.
        #[arg(long, default_value_t = 0.03)]
        frac: f64,
        /// Required when --channel awgn.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Equal-latency complexity: evaluate one operating point directly or
    /// rank a JSON list of points.
    Complexity {
        /// JSON file: a list of {label, d_v, c, w, m, threshold,
        /// capacity_gap} operating points.
        #[arg(long, conflicts_with_all = ["dv", "c", "window", "m"])]
        points: Option<PathBuf>,
        /// Variable-node degree (direct evaluation).
        #[arg(long, requires_all = ["c", "window", "m"])]
        dv: Option<u64>,
        /// Block columns per protograph section.
        #[arg(long)]
        c: Option<u64>,
        /// Window size in block columns.
        #[arg(long)]
        window: Option<u64>,
        /// Extension degree of GF(2^m).
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Variable- and check-node combining kernels over GF(2^m) as JSON.
    DumpKernels {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte-Carlo mutual-information table for GF(2^m) as JSON.
    DumpMiTable {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn out_path(output: &OutputArgs) -> Option<PathBuf> {
    let path = output.out.as_ref()?;
    Some(match std::env::var_os("SCLDPC_OUT_DIR") {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.clone(),
    })
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), String> {
    match out_path(output) {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| e.to_string())?;
            }
            std::fs::write(&path, text).map_err(|e| e.to_string())?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn emit_results(output: &OutputArgs, results: &[ThresholdResult]) -> Result<(), String> {
    let text = match output.format {
        Format::Csv => to_csv(results),
        Format::Json => to_json(results),
    };
    emit(output, text.trim_end())
}

fn require_seed(channel: ChannelFamily, seed: Option<u64>) -> Result<Option<u64>, String> {
    match (channel, seed) {
        (ChannelFamily::Awgn, None) => {
            Err("--seed is required for AWGN searches (reproducibility)".into())
        }
        (_, s) => Ok(s),
    }
}

/// Runs sweep items on the rayon pool while the caller's thread flushes
/// finished rows in input order: after an interruption, the checkpoint file
/// holds every row whose predecessors had all completed.
fn run_sweep(
    items: &[SweepItem],
    opts: &SearchOptions,
    checkpoint: Option<&Path>,
) -> Vec<scldpc::error::Result<ThresholdResult>> {
    use rayon::prelude::*;
    let (tx, rx) = mpsc::channel();
    let n = items.len();
    // The producer runs the parallel iterator from a plain thread so the
    // order-stable flushing loop below never occupies a rayon worker.
    std::thread::scope(|scope| {
        scope.spawn(move || {
            items.par_iter().enumerate().for_each_with(tx, |tx, (idx, item)| {
                let outcome = resolve(&item.ensemble)
                    .and_then(|ens| {
                        FieldParam::new(item.m).map(|fp| (ens, fp))
                    })
                    .and_then(|(ens, fp)| {
                        locate(&ens, fp, item.channel, item.schedule, opts)
                    });
                let _ = tx.send((idx, outcome));
            });
        });

        let mut slots: Vec<Option<scldpc::error::Result<ThresholdResult>>> =
            (0..n).map(|_| None).collect();
        let mut flushed = 0usize;
        for (idx, outcome) in rx {
            slots[idx] = Some(outcome);
            while flushed < n && slots[flushed].is_some() {
                flushed += 1;
            }
            if let Some(path) = checkpoint {
                let done: Vec<ThresholdResult> = slots[..flushed]
                    .iter()
                    .filter_map(|s| s.as_ref().and_then(|r| r.as_ref().ok()).cloned())
                    .collect();
                let _ = std::fs::write(path, to_csv(&done));
            }
        }
        slots.into_iter().map(|s| s.expect("every sweep item reports")).collect()
    })
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::BecThreshold { ensemble, m, schedule, window, search, output } => {
            let schedule = schedule_of(&schedule, window)?;
            let ens = resolve(&ensemble).map_err(|e| e.to_string())?;
            let fp = FieldParam::new(m).map_err(|e| e.to_string())?;
            let opts = search.options(None);
            let res = locate(&ens, fp, ChannelFamily::Bec, schedule, &opts)
                .map_err(|e| e.to_string())?;
            emit_results(&output, &[res])
        }
        Command::AwgnThreshold { ensemble, m, schedule, window, seed, search, output } => {
            let schedule = schedule_of(&schedule, window)?;
            let ens = resolve(&ensemble).map_err(|e| e.to_string())?;
            let fp = FieldParam::new(m).map_err(|e| e.to_string())?;
            let opts = search.options(Some(seed));
            let res = locate(&ens, fp, ChannelFamily::Awgn, schedule, &opts)
                .map_err(|e| e.to_string())?;
            emit_results(&output, &[res])
        }
        Command::Sweep { ensembles, ms, channel, schedules, seed, search, output } => {
            let ms = parse_ms(&ms)?;
            let seed = require_seed(channel, seed)?;
            let opts = search.options(seed);
            let mut items = Vec::new();
            for e in &ensembles {
                for &m in &ms {
                    for &s in &schedules {
                        items.push(SweepItem { ensemble: e.clone(), m, channel, schedule: s });
                    }
                }
            }
            let checkpoint =
                matches!(output.format, Format::Csv).then(|| out_path(&output)).flatten();
            if let Some(parent) =
                checkpoint.as_deref().and_then(Path::parent).filter(|p| !p.as_os_str().is_empty())
            {
                std::fs::create_dir_all(parent).map_err(|e| e.to_string())?;
            }
            let outcomes = run_sweep(&items, &opts, checkpoint.as_deref());
            let mut results = Vec::new();
            for (item, outcome) in items.iter().zip(outcomes) {
                match outcome {
                    Ok(r) => results.push(r),
                    // In-band: a failed item is reported and skipped, the
                    // sweep itself still succeeds.
                    Err(e) => eprintln!(
                        "sweep item {} m={} {} {}: {e}",
                        item.ensemble, item.m, item.channel, item.schedule
                    ),
                }
            }
            emit_results(&output, &results)
        }
        Command::Wstar { ensemble, ms, channel, frac, seed, search, output } => {
            let ms = parse_ms(&ms)?;
            let seed = require_seed(channel, seed)?;
            let opts = search.options(seed);
            let res =
                find_w_star(&ensemble, channel, &ms, frac, &opts).map_err(|e| e.to_string())?;
            eprintln!("W* = {}", res.w_star);
            let mut rows = res.fs;
            rows.extend(res.wd);
            emit_results(&output, &rows)
        }
        Command::Complexity { points, dv, c, window, m, output } => {
            if let (Some(dv), Some(c), Some(w), Some(m)) = (dv, c, window, m) {
                return emit(&output, &format!("{}", complexity_order(dv, c, w, m)));
            }
            let points = points.ok_or("give either --points FILE or --dv/--c/--window/--m")?;
            let text = std::fs::read_to_string(&points).map_err(|e| e.to_string())?;
            let points: Vec<OperatingPoint> =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let rows = compare_operating_points(&points).map_err(|e| e.to_string())?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?,
                Format::Csv => {
                    let mut s =
                        String::from("label,latency_wm,complexity,threshold,capacity_gap\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.label,
                            r.latency_wm,
                            r.complexity,
                            fmt6(r.threshold),
                            fmt6(r.capacity_gap)
                        ));
                    }
                    s.trim_end().to_string()
                }
            };
            emit(&output, &text)
        }
        Command::DumpKernels { m, output } => {
            let fp = FieldParam::new(m).map_err(|e| e.to_string())?;
            let ks = build_kernels(fp).map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&dump_kernels_json(&ks))
                .map_err(|e| e.to_string())?;
            emit(&output, &text)
        }
        Command::DumpMiTable { m, samples, seed, output } => {
            let fp = FieldParam::new(m).map_err(|e| e.to_string())?;
            let table = build_mi_table(fp, samples, seed).map_err(|e| e.to_string())?;
            let text =
                serde_json::to_string_pretty(&table.to_json()).map_err(|e| e.to_string())?;
            emit(&output, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

// The CSV header is part of the artifact contract; re-exported here so the
// binary and library cannot drift apart silently.
#[allow(dead_code)]
const _: &str = CSV_HEADER;
