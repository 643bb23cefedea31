use std::time::Instant;

use rayon::prelude::*;

use itercur::baselines::{slupp_cur, SpectrumSummary};
use itercur::itercur::{iterative_cur, true_relative_error, StoppingConfig};
use itercur::matcore::set_deterministic;
use itercur::select::{SelectionMethod, SelectionTag};
use itercur::sketch::derive_seed;
use itercur::MatrixHandle;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::table::{
    fmt_f64, Row, RowKey, Table, BLOCK_SIZE_HEADER, FIXED_RANK_HEADER, SELECTION_HEADER,
    THRESHOLD_HEADER,
};

const ITERATIVE_STREAM: u64 = 0;
const SLUPP_STREAM: u64 = 1;

/// Seed for one repetition of one method.
pub fn rep_seed(base: u64, rep: usize, stream: u64) -> u64 {
    derive_seed(derive_seed(base, rep as u64), stream)
}

/// Loads the matrix and runs the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    if cfg.deterministic {
        set_deterministic(true);
    }
    let a = cfg.matrix.load(cfg.seed)?;
    cfg.check_shape(a.shape())?;
    match cfg.experiment {
        Experiment::Threshold => run_threshold(cfg, &a),
        Experiment::FixedRank => run_fixed_rank(cfg, &a),
        Experiment::Selection => run_selection_methods(cfg, &a),
        Experiment::BlockSize => run_block_size(cfg, &a),
    }
}

/// Maps jobs in parallel unless the run is deterministic, keeping job order.
fn map_jobs<J, F>(cfg: &ExperimentConfig, jobs: Vec<J>, f: F) -> Result<Vec<Row>>
where
    J: Send + Sync,
    F: Fn(&J) -> Result<Vec<Row>> + Sync + Send,
{
    let results: Vec<Result<Vec<Row>>> = if cfg.deterministic {
        jobs.iter().map(&f).collect()
    } else {
        jobs.par_iter().map(&f).collect()
    };
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn key(method: &str, block: usize, rank: usize, rep: usize) -> RowKey {
    RowKey {
        method: method.to_string(),
        block,
        rank,
        rep,
    }
}

fn lupp() -> SelectionMethod {
    SelectionMethod::lupp()
}

pub fn run_threshold(cfg: &ExperimentConfig, a: &MatrixHandle) -> Result<Table> {
    let mut stop = StoppingConfig::new(cfg.epsilon, cfg.b);
    if cfg.risk_adjust {
        stop = stop.with_risk(cfg.delta, cfg.alpha);
    } else {
        stop.delta = cfg.delta;
        stop.alpha = cfg.alpha;
    }
    let jobs: Vec<usize> = (0..cfg.reps).collect();
    let rows = map_jobs(cfg, jobs, |&rep| {
        let clock = Instant::now();
        let (cur, trace) = iterative_cur(
            a,
            &stop,
            &lupp(),
            &lupp(),
            rep_seed(cfg.seed, rep, ITERATIVE_STREAM),
        )?;
        let secs = clock.elapsed().as_secs_f64();
        let err = true_relative_error(a, &cur)?;
        let rank = cur.rank();

        let clock = Instant::now();
        let sl = slupp_cur(a, rank, rep_seed(cfg.seed, rep, SLUPP_STREAM))?;
        let sl_secs = clock.elapsed().as_secs_f64();
        let sl_err = true_relative_error(a, &sl)?;

        Ok(vec![
            Row {
                key: key("iterative", 0, 0, rep),
                fields: vec![
                    "iterative".into(),
                    rep.to_string(),
                    rank.to_string(),
                    fmt_f64(err),
                    fmt_f64(trace.final_rho()),
                    fmt_f64(secs),
                ],
                error: err,
                seconds: Some(secs),
            },
            Row {
                key: key("slupp", 0, 0, rep),
                fields: vec![
                    "slupp".into(),
                    rep.to_string(),
                    sl.rank().to_string(),
                    fmt_f64(sl_err),
                    String::new(),
                    fmt_f64(sl_secs),
                ],
                error: sl_err,
                seconds: Some(sl_secs),
            },
        ])
    })?;
    Ok(Table::new(THRESHOLD_HEADER, rows))
}

fn rank_rep_jobs(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    cfg.ranks
        .iter()
        .flat_map(|&r| (0..cfg.reps).map(move |rep| (r, rep)))
        .collect()
}

fn timed_row(method: &str, block: usize, rank: usize, rep: usize, err: f64, secs: f64) -> Row {
    Row {
        key: key(method, block, rank, rep),
        fields: vec![
            method.to_string(),
            rank.to_string(),
            rep.to_string(),
            fmt_f64(err),
            fmt_f64(secs),
        ],
        error: err,
        seconds: Some(secs),
    }
}

pub fn run_fixed_rank(cfg: &ExperimentConfig, a: &MatrixHandle) -> Result<Table> {
    let clock = Instant::now();
    let spectrum = SpectrumSummary::of(&a.to_dense());
    let svd_secs = clock.elapsed().as_secs_f64();

    let mut rows = map_jobs(cfg, rank_rep_jobs(cfg), |&(r, rep)| {
        let stop = StoppingConfig::fixed_rank(cfg.b.min(a.rows()), r);
        let clock = Instant::now();
        let (cur, _) = iterative_cur(
            a,
            &stop,
            &lupp(),
            &lupp(),
            rep_seed(cfg.seed, rep, ITERATIVE_STREAM),
        )?;
        let secs = clock.elapsed().as_secs_f64();
        let err = true_relative_error(a, &cur)?;

        let clock = Instant::now();
        let sl = slupp_cur(a, r, rep_seed(cfg.seed, rep, SLUPP_STREAM))?;
        let sl_secs = clock.elapsed().as_secs_f64();
        let sl_err = true_relative_error(a, &sl)?;
        Ok(vec![
            timed_row("iterative", 0, r, rep, err, secs),
            timed_row("slupp", 0, r, rep, sl_err, sl_secs),
        ])
    })?;
    let norm = a.fro_norm();
    for &r in &cfg.ranks {
        let err = if norm == 0.0 {
            0.0
        } else {
            spectrum.tail(r) / norm
        };
        rows.push(timed_row("svd", 0, r, 0, err, svd_secs));
    }
    Ok(Table::new(FIXED_RANK_HEADER, rows))
}

pub fn run_selection_methods(cfg: &ExperimentConfig, a: &MatrixHandle) -> Result<Table> {
    let spectrum = SpectrumSummary::of(&a.to_dense());
    let norm = a.fro_norm();
    let rows = map_jobs(cfg, rank_rep_jobs(cfg), |&(r, rep)| {
        let svd = if norm == 0.0 {
            0.0
        } else {
            spectrum.tail(r) / norm
        };
        let stop = StoppingConfig::fixed_rank(cfg.b.min(a.rows()), r);
        let seed = rep_seed(cfg.seed, rep, ITERATIVE_STREAM);
        let mut out = Vec::new();
        for tag in [SelectionTag::Lupp, SelectionTag::Qrcp] {
            let method = match tag {
                SelectionTag::Qrcp => SelectionMethod::qrcp(),
                _ => SelectionMethod::lupp(),
            };
            let (cur, _) = iterative_cur(a, &stop, &method, &method, seed)?;
            let err = true_relative_error(a, &cur)?;
            let name = tag.to_string();
            out.push(Row {
                key: key(&name, 0, r, rep),
                fields: vec![
                    name.clone(),
                    r.to_string(),
                    rep.to_string(),
                    fmt_f64(err),
                    fmt_f64(svd),
                ],
                error: err,
                seconds: None,
            });
        }
        Ok(out)
    })?;
    Ok(Table::new(SELECTION_HEADER, rows))
}

pub fn run_block_size(cfg: &ExperimentConfig, a: &MatrixHandle) -> Result<Table> {
    let jobs: Vec<(usize, usize, usize)> = cfg
        .blocks
        .iter()
        .flat_map(|&b| {
            rank_rep_jobs(cfg)
                .into_iter()
                .map(move |(r, rep)| (b, r, rep))
        })
        .collect();
    let rows = map_jobs(cfg, jobs, |&(b, r, rep)| {
        let stop = StoppingConfig::fixed_rank(b, r);
        let clock = Instant::now();
        let (cur, _) = iterative_cur(
            a,
            &stop,
            &lupp(),
            &lupp(),
            rep_seed(cfg.seed, rep, ITERATIVE_STREAM),
        )?;
        let secs = clock.elapsed().as_secs_f64();
        let err = true_relative_error(a, &cur)?;
        Ok(vec![Row {
            key: key("block", b, r, rep),
            fields: vec![
                b.to_string(),
                r.to_string(),
                rep.to_string(),
                fmt_f64(err),
                fmt_f64(secs),
            ],
            error: err,
            seconds: Some(secs),
        }])
    })?;
    Ok(Table::new(BLOCK_SIZE_HEADER, rows))
}
