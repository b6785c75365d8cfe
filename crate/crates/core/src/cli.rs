//! `hmpid` command-line interface.
//!
//! Exit codes: `identify` returns 0 for an HMP verdict, 2 for "no HMP", 3 for
//! "cannot decide"; `roundtrip` returns 2 when any trial mismatched. Every
//! subcommand returns 1 on errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{hankel_block_from, numerical_rank};
use crate::hmp_model::{equivalent_up_to_permutation, random_stochastic};
use crate::identify::{certify, default_max_states, identify, IdentifyOptions, VerdictKind};
use crate::io::{read_distribution, read_params, to_json_string, DistributionFile, ResultFile};
use crate::minors::minor_membership;
use crate::tolerance::ToleranceConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_HMP: i32 = 2;
pub const EXIT_CANNOT_DECIDE: i32 = 3;

/// Parameter-file slack for row sums and entry bounds.
const PARAMS_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "hmpid", version, about = "Identify binary hidden Markov processes from string distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the length-n distribution of an HMP parameter file.
    Simulate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        length: usize,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a distribution comes from an HMP and recover it.
    Identify {
        #[arg(long)]
        dist: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_states: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
        /// Report non-generic recoveries as "no HMP" like the bare algorithm.
        #[arg(long)]
        paper_literal: bool,
    },
    /// Report numerical ranks of Hankel blocks.
    Rank {
        #[arg(long)]
        dist: PathBuf,
        /// Report only the block with prefixes up to length m (requires --k).
        #[arg(long, requires = "k")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        k: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Brute-force minor scan for the rank-d membership test.
    Minors {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Simulate random HMPs, identify them and compare with the generator.
    Roundtrip {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Max-norm tolerance for matching recovered and generating parameters.
        #[arg(long, default_value_t = 1e-6)]
        match_tol: f64,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = ToleranceConfig::default().rel_rank_tol)]
    pub rel_rank_tol: f64,
    #[arg(long, default_value_t = ToleranceConfig::default().eig_gap_tol)]
    pub eig_gap_tol: f64,
    #[arg(long, default_value_t = ToleranceConfig::default().gap_ratio)]
    pub gap_ratio: f64,
    #[arg(long, default_value_t = ToleranceConfig::default().tol_stochastic)]
    pub tol_stochastic: f64,
}

impl TolArgs {
    pub fn config(&self) -> Result<ToleranceConfig> {
        let tol = ToleranceConfig {
            rel_rank_tol: self.rel_rank_tol,
            eig_gap_tol: self.eig_gap_tol,
            gap_ratio: self.gap_ratio,
            tol_stochastic: self.tol_stochastic,
            ..ToleranceConfig::default()
        };
        tol.validate()?;
        Ok(tol)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_simulate(params: &Path, length: usize, out: Option<&PathBuf>) -> Result<i32> {
    let p = read_params(params, PARAMS_TOL)?;
    let dist = p.full_distribution(length)?;
    emit(out, &to_json_string(&DistributionFile::from_distribution(&dist))?)?;
    Ok(EXIT_OK)
}

pub fn cmd_identify(dist: &Path, out: Option<&PathBuf>, opts: &IdentifyOptions) -> Result<i32> {
    let d = read_distribution(dist, &opts.tol)?;
    let verdict = identify(&d, opts)?;
    let residual = match verdict.kind {
        VerdictKind::Hmp { .. } => Some(certify(&d, &verdict)?.max_residual),
        _ => None,
    };
    let text = to_json_string(&ResultFile::new(&verdict, residual))?;
    emit(out, &text)?;
    if out.is_some() {
        eprintln!("{} (states = {})", verdict.label(), verdict.states());
    }
    Ok(match verdict.kind {
        VerdictKind::Hmp { .. } => EXIT_OK,
        VerdictKind::NoHmp { .. } => EXIT_NO_HMP,
        VerdictKind::CannotDecide { .. } => EXIT_CANNOT_DECIDE,
    })
}

#[derive(Debug, Serialize)]
struct BlockRank {
    m: usize,
    k: usize,
    rows: usize,
    cols: usize,
    rank: usize,
    confident: bool,
    singular_values: Vec<f64>,
}

pub fn cmd_rank(dist: &Path, block: Option<(usize, usize)>, tol: &ToleranceConfig) -> Result<i32> {
    let d = read_distribution(dist, tol)?;
    let n = d.n();
    let mut shapes: Vec<(usize, usize)> = match block {
        Some((m, k)) => {
            if m + k > n {
                return Err(Error::Length(format!("block ({m}, {k}) needs n >= {}", m + k)));
            }
            vec![(m, k)]
        }
        None => {
            let mut s: Vec<(usize, usize)> = (0..default_max_states(n)).map(|e| (e, e)).collect();
            s.push((n / 2, n - n / 2));
            s.push((n - n / 2, n / 2));
            s
        }
    };
    shapes.dedup();
    let marginals = d.marginals();
    let reports: Vec<BlockRank> = shapes
        .into_iter()
        .map(|(m, k)| {
            let b = hankel_block_from(&marginals, m, k);
            let r = numerical_rank(&b.data, tol);
            BlockRank {
                m,
                k,
                rows: b.data.nrows(),
                cols: b.data.ncols(),
                rank: r.rank,
                confident: r.confident,
                singular_values: r.singular_values,
            }
        })
        .collect();
    print!("{}", to_json_string(&reports)?);
    Ok(EXIT_OK)
}

pub fn cmd_minors(dist: &Path, states: usize, tol: f64) -> Result<i32> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(format!("minor tolerance must be positive, got {tol}")));
    }
    let d = read_distribution(dist, &ToleranceConfig::default())?;
    let scan = minor_membership(&d, states, tol)?;
    #[derive(Serialize)]
    struct Out {
        member: bool,
        #[serde(flatten)]
        scan: crate::minors::MinorScanResult,
    }
    print!("{}", to_json_string(&Out { member: scan.is_member(), scan })?);
    Ok(EXIT_OK)
}

#[derive(Debug, Default, Clone, PartialEq, Serialize)]
pub struct RoundtripSummary {
    pub recovered: usize,
    pub cannot_decide: usize,
    pub mismatched: usize,
    pub max_residual: f64,
}

/// Trial `i` draws its generator with seed `seed + i`.
pub fn roundtrip(
    states: usize,
    length: usize,
    trials: usize,
    seed: u64,
    match_tol: f64,
    tol: &ToleranceConfig,
) -> Result<RoundtripSummary> {
    if states == 0 || length + 1 < 2 * states {
        return Err(Error::Length(format!(
            "{states} states need length >= {}, got {length}",
            (2 * states).max(2) - 1
        )));
    }
    let opts = IdentifyOptions { tol: *tol, ..Default::default() };
    let mut summary = RoundtripSummary::default();
    for i in 0..trials as u64 {
        let generator = random_stochastic(states, seed.wrapping_add(i));
        let dist = generator.full_distribution(length)?;
        let verdict = identify(&dist, &opts)?;
        match &verdict.kind {
            VerdictKind::Hmp { states: e, params } if *e == states => {
                if equivalent_up_to_permutation(params, &generator, match_tol)?.is_some() {
                    summary.recovered += 1;
                    let c = certify(&dist, &verdict)?;
                    summary.max_residual = summary.max_residual.max(c.max_residual);
                } else {
                    summary.mismatched += 1;
                }
            }
            VerdictKind::CannotDecide { .. } => summary.cannot_decide += 1,
            _ => summary.mismatched += 1,
        }
    }
    Ok(summary)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Simulate { params, length, out } => cmd_simulate(params, *length, out.as_ref()),
        Command::Identify { dist, out, max_states, tol, paper_literal } => {
            let opts = IdentifyOptions { max_states: *max_states, tol: tol.config()?, paper_literal: *paper_literal };
            cmd_identify(dist, out.as_ref(), &opts)
        }
        Command::Rank { dist, m, k, tol } => cmd_rank(dist, m.zip(*k), &tol.config()?),
        Command::Minors { dist, states, tol } => cmd_minors(dist, *states, *tol),
        Command::Roundtrip { states, length, trials, seed, match_tol, tol } => {
            let summary = roundtrip(*states, *length, *trials, *seed, *match_tol, &tol.config()?)?;
            print!("{}", to_json_string(&summary)?);
            Ok(if summary.mismatched == 0 { EXIT_OK } else { EXIT_NO_HMP })
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
