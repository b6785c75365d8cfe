//! The decision procedure: for `e = 1, 2, …` test the Hankel rank pattern
//! `rk P_{e-1,e-1} = rk P_{⌊n/2⌋,⌈n/2⌉} = rk P_{⌈n/2⌉,⌊n/2⌋} = e`, and when it
//! holds infer operator parameters and try to turn them into a stochastic HMP.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::distribution::StringDistribution;
use crate::error::{Error, Result};
use crate::finitary::infer_finitary_from;
use crate::hankel::{hankel_block_from, numerical_rank, RankReport};
use crate::hmp_model::HmpParams;
use crate::recover::{recover_hmm, RecoveryDiagnostics, RecoveryKind};
use crate::tolerance::ToleranceConfig;

/// Maximum table distance accepted by [`certify`].
pub const CERTIFY_TOL: f64 = 1e-6;

pub const REASON_BORDERLINE: &str = "borderline rank";
pub const REASON_NOT_REPRODUCED: &str = "recovered parameters do not reproduce the input";

#[derive(Debug, Clone, Copy, PartialEq)]
#[derive(Default)]
pub struct IdentifyOptions {
    /// Defaults to `⌊(n+1)/2⌋`; larger values are rejected.
    pub max_states: Option<usize>,
    pub tol: ToleranceConfig,
    /// Treat non-generic recoveries the way the bare algorithm does: move on
    /// to the next `e` instead of answering "cannot decide".
    pub paper_literal: bool,
}


#[derive(Debug, Clone, PartialEq)]
pub enum VerdictKind {
    Hmp { states: usize, params: HmpParams },
    NoHmp { max_states_tested: usize },
    CannotDecide { states: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSummary {
    pub m: usize,
    pub k: usize,
    pub rank: usize,
    pub confident: bool,
    pub singular_values: Vec<f64>,
}

impl RankSummary {
    fn new(m: usize, k: usize, r: &RankReport) -> Self {
        Self { m, k, rank: r.rank, confident: r.confident, singular_values: r.singular_values.clone() }
    }
}

/// Raw (`p(v) = x' T_v y`) and normalized operator parameters of one iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinitaryTrace {
    pub prefixes: Vec<String>,
    pub suffixes: Vec<String>,
    pub raw_t0: Vec<Vec<f64>>,
    pub raw_t1: Vec<Vec<f64>>,
    pub raw_x: Vec<f64>,
    pub raw_y: Vec<f64>,
    pub t0: Vec<Vec<f64>>,
    pub t1: Vec<Vec<f64>>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub e: usize,
    pub small_block: RankSummary,
    pub big_block_floor_ceil: RankSummary,
    pub big_block_ceil_floor: RankSummary,
    pub rank_pattern_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finitary: Option<FinitaryTrace>,
    /// `recovered`, `not_generic: …`, `not_stochastic: …` or an inference error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery: Option<RecoveryDiagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub trace: Vec<TraceEntry>,
}

impl Verdict {
    pub fn states(&self) -> usize {
        match &self.kind {
            VerdictKind::Hmp { states, .. } | VerdictKind::CannotDecide { states, .. } => *states,
            VerdictKind::NoHmp { max_states_tested } => *max_states_tested,
        }
    }

    pub fn params(&self) -> Option<&HmpParams> {
        match &self.kind {
            VerdictKind::Hmp { params, .. } => Some(params),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            VerdictKind::Hmp { .. } => "hmp",
            VerdictKind::NoHmp { .. } => "no_hmp",
            VerdictKind::CannotDecide { .. } => "cannot_decide",
        }
    }
}

/// Largest state count the decision can certify for strings of length `n`.
pub fn default_max_states(n: usize) -> usize {
    n.div_ceil(2)
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn identify(dist: &StringDistribution, opts: &IdentifyOptions) -> Result<Verdict> {
    opts.tol.validate()?;
    dist.validate(&opts.tol)?;
    let n = dist.n();
    let limit = default_max_states(n);
    let max_states = opts.max_states.unwrap_or(limit);
    if max_states == 0 || max_states > limit {
        return Err(Error::Length(format!(
            "max states must be between 1 and {limit} for n = {n}, got {max_states}"
        )));
    }
    let tol = &opts.tol;
    let marginals = dist.marginals();
    let (lo, hi) = (n / 2, n - n / 2);
    let big_fc = numerical_rank(&hankel_block_from(&marginals, lo, hi).data, tol);
    let big_cf = numerical_rank(&hankel_block_from(&marginals, hi, lo).data, tol);

    let mut trace = Vec::new();
    for e in 1..=max_states {
        let small = numerical_rank(&hankel_block_from(&marginals, e - 1, e - 1).data, tol);
        let holds = small.rank == e && big_fc.rank == e && big_cf.rank == e;
        let mut entry = TraceEntry {
            e,
            small_block: RankSummary::new(e - 1, e - 1, &small),
            big_block_floor_ceil: RankSummary::new(lo, hi, &big_fc),
            big_block_ceil_floor: RankSummary::new(hi, lo, &big_cf),
            rank_pattern_holds: holds,
            finitary: None,
            outcome: None,
            recovery: None,
        };
        if !(small.confident && big_fc.confident && big_cf.confident) {
            entry.outcome = Some(REASON_BORDERLINE.into());
            trace.push(entry);
            return Ok(Verdict { kind: VerdictKind::CannotDecide { states: e, reason: REASON_BORDERLINE.into() }, trace });
        }
        if !holds {
            trace.push(entry);
            continue;
        }

        let inference = match infer_finitary_from(&marginals, e, tol) {
            Ok(inf) => inf,
            Err(err) => {
                let reason = err.to_string();
                entry.outcome = Some(reason.clone());
                trace.push(entry);
                if opts.paper_literal {
                    continue;
                }
                return Ok(Verdict { kind: VerdictKind::CannotDecide { states: e, reason }, trace });
            }
        };
        entry.finitary = Some(FinitaryTrace {
            prefixes: inference.basis.rows.iter().map(|w| w.to_key()).collect(),
            suffixes: inference.basis.cols.iter().map(|w| w.to_key()).collect(),
            raw_t0: to_rows(&inference.raw.t0),
            raw_t1: to_rows(&inference.raw.t1),
            raw_x: inference.raw.x.iter().copied().collect(),
            raw_y: inference.raw.y.iter().copied().collect(),
            t0: to_rows(&inference.params.t0),
            t1: to_rows(&inference.params.t1),
            x: inference.params.x.iter().copied().collect(),
        });
        let outcome = recover_hmm(&inference.params, tol);
        entry.recovery = Some(outcome.diagnostics.clone());
        match outcome.kind {
            RecoveryKind::Recovered(params) => {
                let residual = table_distance(dist, &params)?;
                if residual > CERTIFY_TOL {
                    entry.outcome = Some(format!("{REASON_NOT_REPRODUCED} (residual {residual:e})"));
                    trace.push(entry);
                    return Ok(Verdict {
                        kind: VerdictKind::CannotDecide { states: e, reason: REASON_NOT_REPRODUCED.into() },
                        trace,
                    });
                }
                entry.outcome = Some("recovered".into());
                trace.push(entry);
                return Ok(Verdict { kind: VerdictKind::Hmp { states: e, params }, trace });
            }
            RecoveryKind::NotStochastic(witness) => {
                entry.outcome = Some(format!("not_stochastic: {witness}"));
                trace.push(entry);
                return Ok(Verdict { kind: VerdictKind::NoHmp { max_states_tested: max_states }, trace });
            }
            RecoveryKind::NotGeneric(reason) => {
                entry.outcome = Some(format!("not_generic: {reason}"));
                trace.push(entry);
                if opts.paper_literal {
                    continue;
                }
                return Ok(Verdict { kind: VerdictKind::CannotDecide { states: e, reason }, trace });
            }
        }
    }
    Ok(Verdict { kind: VerdictKind::NoHmp { max_states_tested: max_states }, trace })
}

/// `max_v |p_params(v) - p_dist(v)|` over `Σ^n`.
pub fn table_distance(dist: &StringDistribution, params: &HmpParams) -> Result<f64> {
    let sim = params.full_distribution(dist.n())?;
    Ok(sim.probs().iter().zip(dist.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyReport {
    pub max_residual: f64,
    pub pass: bool,
}

/// Re-simulates the parameters of an HMP verdict and compares with the table.
pub fn certify(dist: &StringDistribution, verdict: &Verdict) -> Result<CertifyReport> {
    let params = verdict.params().ok_or(Error::WrongKind)?;
    let max_residual = table_distance(dist, params)?;
    Ok(CertifyReport { max_residual, pass: max_residual <= CERTIFY_TOL })
}
