//! Monte Carlo experiments over independent trials.
//!
//! Trial `t` draws its configuration from stream `t` of the master seed, so
//! its result is fixed by `(master_seed, t)`. Trials run on a rayon pool;
//! results are collected in trial order and reduced pairwise, so reports do
//! not depend on the thread count.

use std::time::Instant;

use bergman_core::gaf::{coverage_depth_for, sample_trial, truncation_degree, Configuration};
use bergman_core::hyperbolic::{shell_radius, StatisticParams};
use bergman_core::moments::{expectation_bracket, expected_s_n, least_squares};
use bergman_core::statistics::norm_squared_by_shell;
use bergman_core::Error;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{LabError, LabResult};
use crate::report::{DivergenceReport, ExperimentReport, ExperimentRow, Metadata, TruncationPolicy};

/// Extra draws allowed for a trial whose root finder fails.
pub const MAX_RESAMPLES: u64 = 4;

/// Pairwise sum in index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Sample mean and unbiased variance (`None` below two samples).
pub fn mean_var(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, Some(pairwise_sum(&dev) / (n - 1.0)))
}

/// Draws trial `stream`, moving to a derived seed after a root-finder
/// failure. Returns the configuration and whether it was resampled.
pub fn sample_with_resampling(depth: u32, eps: f64, seed: u64, stream: u64) -> LabResult<(Configuration, bool)> {
    let mut attempt: u64 = 0;
    loop {
        let derived = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match sample_trial(depth, eps, derived, stream) {
            Ok(c) => return Ok((c, attempt > 0)),
            Err(Error::RootsNotConverged { .. }) if attempt < MAX_RESAMPLES => attempt += 1,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Runs `f` over trial indices `0..trials` on `threads` workers and returns
/// the results in index order.
pub fn run_trials<T: Send>(
    trials: usize,
    threads: usize,
    f: impl Fn(u64) -> LabResult<T> + Sync,
) -> LabResult<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect())
}

/// Per-trial `[S_1, …, S_{max N}]` about the configured centre.
pub struct ShellSamples {
    pub s_by_trial: Vec<Vec<f64>>,
    pub truncation: TruncationPolicy,
    pub resampled: usize,
    pub threads: usize,
}

pub fn sample_norms(config: &RunConfig) -> LabResult<ShellSamples> {
    config.validate()?;
    let params = config.params(config.max_n())?;
    let depth = coverage_depth_for(config.centre(), config.max_n());
    let degree = truncation_degree(shell_radius(f64::from(depth)), config.eps_truncation)?;
    let threads = config.thread_count();
    let results = run_trials(config.trials, threads, |t| {
        let (cfg, resampled) = sample_with_resampling(depth, config.eps_truncation, config.master_seed, t)?;
        Ok((norm_squared_by_shell(&cfg, &params)?, resampled))
    })?;
    let resampled = results.iter().filter(|r| r.1).count();
    Ok(ShellSamples {
        s_by_trial: results.into_iter().map(|r| r.0).collect(),
        truncation: TruncationPolicy { eps: config.eps_truncation, sampled_depth: depth, degree },
        resampled,
        threads,
    })
}

fn metadata(config: &RunConfig, samples: &ShellSamples, started: Instant) -> Metadata {
    Metadata {
        master_seed: config.master_seed,
        trials: config.trials,
        s: config.s,
        z: config.z,
        truncation: samples.truncation.clone(),
        resampled_trials: samples.resampled,
        threads: samples.threads,
        wall_time_secs: started.elapsed().as_secs_f64(),
        error: None,
    }
}

/// One report row from the Monte Carlo values of `S_N` at one `N`.
pub fn experiment_row(params: &StatisticParams, values: &[f64]) -> Result<ExperimentRow, Error> {
    let (mean, var) = mean_var(values);
    let quad = expected_s_n(params)?.value;
    let (lo, hi) = expectation_bracket(params);
    Ok(ExperimentRow {
        n: params.n(),
        trials: values.len(),
        mc_mean: mean,
        mc_var: var,
        stderr: var.map(|v| (v / values.len() as f64).sqrt()),
        quad_expectation: quad,
        ratio: mean / quad,
        bracket_lower: lo,
        bracket_upper: hi,
    })
}

/// Law-of-large-numbers experiment: Monte Carlo mean and variance of `S_N`
/// next to its quadrature expectation, for each `N` of the configuration.
///
/// If the quadrature fails at some `N`, the error carries the rows already
/// computed and a metadata error marker.
pub fn run_lln(config: &RunConfig) -> LabResult<ExperimentReport> {
    let started = Instant::now();
    let samples = sample_norms(config)?;
    let mut report = ExperimentReport { rows: Vec::new(), metadata: metadata(config, &samples, started) };
    for &n in &config.n_list {
        let values: Vec<f64> = samples.s_by_trial.iter().map(|s| s[n as usize - 1]).collect();
        match experiment_row(&config.params(n)?, &values) {
            Ok(row) => report.rows.push(row),
            Err(source) => {
                report.metadata.error = Some(source.to_string());
                report.metadata.wall_time_secs = started.elapsed().as_secs_f64();
                return Err(LabError::Partial { report: Box::new(report), failed_at: n, source });
            }
        }
    }
    report.metadata.wall_time_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Per-trial growth of `‖Θ_N‖` across the configured `N`.
///
/// Trials with `‖Θ_N‖ = 0` at some `N` (no point within distance `N`) have
/// no logarithmic slope and are left out of the slope statistics.
pub fn run_divergence(config: &RunConfig) -> LabResult<DivergenceReport> {
    let started = Instant::now();
    let samples = sample_norms(config)?;
    let ns: Vec<f64> = config.n_list.iter().map(|&n| f64::from(n)).collect();
    let trajectories: Vec<Vec<f64>> = samples
        .s_by_trial
        .iter()
        .map(|s| config.n_list.iter().map(|&n| s[n as usize - 1].max(0.0).sqrt()).collect())
        .collect();
    let slopes: Vec<Option<f64>> = trajectories
        .iter()
        .map(|t| {
            if ns.len() < 2 || t.iter().any(|v| !(*v > 0.0)) {
                return None;
            }
            let logs: Vec<f64> = t.iter().map(|v| v.ln()).collect();
            least_squares(&ns, &logs).ok().map(|f| f.slope)
        })
        .collect();
    let fitted: Vec<f64> = slopes.iter().flatten().copied().collect();
    let (mean, var) = if fitted.is_empty() { (f64::NAN, None) } else { mean_var(&fitted) };
    let std = var.map_or(f64::NAN, f64::sqrt);
    Ok(DivergenceReport {
        n_list: config.n_list.clone(),
        trajectories,
        slopes,
        slope_mean: mean,
        slope_std: std,
        slope_stderr: std / (fitted.len() as f64).sqrt(),
        fitted_trials: fitted.len(),
        expected_center: (3.0 - 2.0 * config.s) / 2.0,
        metadata: metadata(config, &samples, started),
    })
}

/// Points of each trial within hyperbolic distance `n` of the origin, for
/// each `n` in `n_list`.
pub fn count_points(config: &RunConfig) -> LabResult<Vec<Vec<usize>>> {
    config.validate()?;
    let depth = config.max_n();
    let threads = config.thread_count();
    run_trials(config.trials, threads, |t| {
        let (cfg, _) = sample_with_resampling(depth, config.eps_truncation, config.master_seed, t)?;
        Ok(config.n_list.iter().map(|&n| cfg.count_within(shell_radius(f64::from(n)))).collect())
    })
}
