//! `shiftpow`: scanners, audits and deciders for shifted k-th powers.
//!
//! Every subcommand writes one record per result followed by a summary
//! record. Exit status is 0 for a clean run, 2 when a theorem violation was
//! found, and 1 for usage or input errors.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};
use shiftpow::parallel::WORKERS_ENV;
use shiftpow::{with_workers, ShiftParams};

use output::{Emitter, Format};

#[derive(Parser, Debug)]
#[command(name = "shiftpow", version, about = "Exact scans and audits for shifted k-th powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads; results do not depend on it
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<NonZeroUsize>,

    /// Result file (standard output when omitted or `-`)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::JsonLines)]
    format: Format,

    /// Report `elapsed` as null so output is byte-reproducible
    #[arg(long, global = true)]
    no_timing: bool,
}

/// Exponent and additive shift of the predicate `a·b + shift = y^k`.
#[derive(Args, Debug, Clone, Copy)]
pub struct ShiftArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub shift: i64,
}

impl ShiftArgs {
    pub fn params(&self) -> shiftpow::Result<ShiftParams> {
        ShiftParams::new(self.k, self.shift)
    }
}

/// Left vertices: either `1..=a_max` or a set file.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct RowArgs {
    #[arg(long)]
    pub a_max: Option<u64>,
    /// Set file, one decimal per line (`-` for standard input)
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Floor k-th root of an arbitrary-precision integer
    #[command(name = "root")]
    Root {
        #[arg(long, value_parser = parse_nat)]
        value: BigUint,
        #[arg(long)]
        k: u32,
    },
    /// Root y with a·b + shift = y^k, if any
    #[command(name = "witness")]
    Witness {
        #[arg(long, value_parser = parse_nat)]
        a: BigUint,
        #[arg(long, value_parser = parse_nat)]
        b: BigUint,
        #[command(flatten)]
        shift: ShiftArgs,
    },
    /// Every b <= X adjacent to a in the power graph
    #[command(name = "neighbors")]
    Neighbors {
        #[arg(long, required_unless_present = "a_max", conflicts_with_all = ["a_min", "a_max"])]
        a: Option<u64>,
        #[arg(long, requires = "a_max")]
        a_min: Option<u64>,
        #[arg(long)]
        a_max: Option<u64>,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// All K_{s,t} grids of the power graph on the given rows
    #[command(name = "grid")]
    Grid {
        #[command(flatten)]
        rows: RowArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// Smallest admissible column
        #[arg(long)]
        min_col: Option<u64>,
        /// Require every row to be at most every column
        #[arg(long)]
        rows_below_cols: bool,
    },
    /// Search for 3×7 grids with b1 >= 2|shift|^17 and a3 <= b1
    #[command(name = "scan-cor22")]
    ScanCor22 {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Search for 2×2 grids in X^{1/3} < a <= X^{1/2} < b <= X
    #[command(name = "scan-cor24")]
    ScanCor24 {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Common shifted-power partners of row pairs against 2 ln ln X
    #[command(name = "pairs")]
    Pairs {
        #[arg(long, requires = "a2", required_unless_present = "a_max", conflicts_with = "a_max")]
        a1: Option<u64>,
        #[arg(long, requires = "a1")]
        a2: Option<u64>,
        /// Audit every pair 1 <= a1 < a2 <= a_max
        #[arg(long)]
        a_max: Option<u64>,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Check the gap bound on every power quadruple up to X
    #[command(name = "gap-scan")]
    GapScan {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Zarankiewicz-type edge bound for K_{s,t}-free graphs
    #[command(name = "kst-bound")]
    KstBound {
        /// Size of the side holding the forbidden s-set
        #[arg(long)]
        m: u64,
        #[arg(long)]
        nv: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        /// Also decide exactly whether this edge count is admitted
        #[arg(long)]
        edges: Option<u64>,
    },
    /// Edge bound against a power graph verified K_{s,t}-free
    #[command(name = "kst-audit")]
    KstAudit {
        #[command(flatten)]
        rows: RowArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long = "X")]
        x: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Count products of A·B in x^k + n up to X against the nine-term bound
    #[command(name = "claim31-audit")]
    Claim31Audit {
        /// Elements of A, comma separated
        #[arg(
            long,
            value_delimiter = ',',
            required_unless_present = "a_file",
            conflicts_with = "a_file"
        )]
        a: Vec<u64>,
        #[arg(long)]
        a_file: Option<PathBuf>,
        /// Set file for B; defaults to {x^k + n} up to X
        #[arg(long)]
        b_file: Option<PathBuf>,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long = "X")]
        x: u64,
    },
    /// Decide whether a finite set is a product set A·B with |A|, |B| >= 2
    #[command(name = "decompose")]
    Decompose {
        /// Set file, one decimal per line (`-` for standard input)
        #[arg(long)]
        file: PathBuf,
    },
    /// {x^k + n : x >= 1} ∩ [1, X]
    #[command(name = "truncate-M")]
    TruncateM {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long = "X")]
        x: u64,
    },
    /// ({1, m} · {x^k + n}) ∩ [1, X]
    #[command(name = "rm-example")]
    RmExample {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long = "X")]
        x: u64,
    },
    /// Elements added to and removed from {x^k + n} up to X
    #[command(name = "perturb")]
    Perturb {
        /// Set file, one decimal per line (`-` for standard input)
        #[arg(long, required_unless_present = "m", conflicts_with = "m")]
        file: Option<PathBuf>,
        /// Use the {1, m} product example instead of a file
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long = "X")]
        x: u64,
    },
}

fn parse_nat(text: &str) -> Result<BigUint, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("not a non-negative decimal integer: {text:?}"))
}

/// What a subcommand reports in its summary record.
pub struct Summary {
    pub command: &'static str,
    pub inputs: Value,
    pub counts: Value,
    pub violations: u64,
}

fn open_output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write + Send>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn run(cli: Cli) -> anyhow::Result<u64> {
    let workers = cli
        .common
        .workers
        .map_or_else(shiftpow::parallel::default_workers, NonZeroUsize::get);
    let mut out = Emitter::new(open_output(cli.common.output.as_ref())?, cli.common.format);
    let start = Instant::now();
    let summary = with_workers(workers, || commands::execute(&cli.command, &mut out))?;
    let elapsed = (!cli.common.no_timing).then(|| start.elapsed().as_secs_f64());
    let record = json!({
        "type": "summary",
        "command": summary.command,
        "inputs": summary.inputs,
        "counts": summary.counts,
        "records": out.emitted(),
        "elapsed": elapsed,
        "violations": summary.violations,
    });
    out.finish(record).context("cannot write results")?;
    Ok(summary.violations)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli);
    match &result {
        Ok(0) => {}
        Ok(violations) => eprintln!("shiftpow: {violations} theorem violation(s) found"),
        Err(err) => eprintln!("error: {err:#}"),
    }
    ExitCode::from(exit_status(&result))
}

fn exit_status(result: &anyhow::Result<u64>) -> u8 {
    match result {
        Ok(0) => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}
