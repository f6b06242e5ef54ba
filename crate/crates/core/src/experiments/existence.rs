use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::picard;
use crate::error::{Error, Result};
use crate::solver::{trajectory_rows, ym_report, PicardOutcome, TrajectoryRow, YmReport};

/// Bisection steps used to locate the largest passing `ε`.
pub const BISECTION_STEPS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub epsilon: f64,
    pub ym: Option<YmReport>,
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Largest successive ratio `d_{n+1}/d_n`; zero when fewer than two steps ran.
    pub contraction_ratio: f64,
    pub converged: bool,
    pub smallness_violated: bool,
    /// Reason the configured `ε` failed, if it did.
    pub failure: Option<String>,
    /// Largest `ε` found by bisection for which the iteration converges inside `Y_M`.
    pub largest_passing_epsilon: Option<f64>,
    pub pass: bool,
    #[serde(skip)]
    pub rows: Vec<TrajectoryRow>,
}

struct Attempt {
    outcome: PicardOutcome,
    ym: YmReport,
}

fn attempt(config: &ExperimentConfig) -> Result<Attempt> {
    let setup = config.validate()?;
    let u0 = config.initial_data(setup.grid)?;
    let outcome = picard(config, &setup, &u0, &config.picard_grid()?)?;
    let w = setup.weight;
    let ym = ym_report(&outcome.trajectory, w.sigma, w.a, config.p, config.m_bound)?;
    Ok(Attempt { outcome, ym })
}

fn passes(a: &Attempt) -> bool {
    a.outcome.converged && a.ym.member
}

fn is_smallness_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::Divergence { .. } | Error::Overflow { .. } | Error::FiniteTimeGrowth { .. }
    )
}

/// Largest `ε` in `[0, hi]` whose Picard run converges inside `Y_M`.
pub fn bisect_epsilon(config: &ExperimentConfig, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let trial = ExperimentConfig {
            epsilon: mid,
            ..config.clone()
        };
        let ok = match attempt(&trial) {
            Ok(a) => passes(&a),
            Err(e) if is_smallness_failure(&e) => false,
            Err(e) => return Err(e),
        };
        if ok {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Picard iteration in the weighted space `Y_M`. A failure to contract or to
/// stay in the ball is a report entry, not an error; the report then carries
/// the bisected threshold `ε*`.
pub fn run_global_existence(config: &ExperimentConfig) -> Result<ExistenceReport> {
    let setup = config.validate()?;
    let failed = |failure: String| -> Result<ExistenceReport> {
        Ok(ExistenceReport {
            epsilon: config.epsilon,
            ym: None,
            distances: Vec::new(),
            ratios: Vec::new(),
            contraction_ratio: f64::INFINITY,
            converged: false,
            smallness_violated: true,
            failure: Some(failure),
            largest_passing_epsilon: Some(bisect_epsilon(config, config.epsilon)?),
            pass: false,
            rows: Vec::new(),
        })
    };
    let a = match attempt(config) {
        Ok(a) => a,
        Err(e) if is_smallness_failure(&e) => return failed(e.to_string()),
        Err(e) => return Err(e),
    };
    let ratios = a.outcome.ratios();
    let contraction_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let rows = trajectory_rows(&a.outcome.trajectory, setup.weight)?;
    if !passes(&a) {
        let reason = if a.outcome.converged {
            format!(
                "left Y_M: {} + {} > M = {}",
                a.ym.sup_weighted_a, a.ym.sup_orlicz, a.ym.m_bound
            )
        } else {
            format!("no convergence within {} iterations", config.max_iter)
        };
        let mut report = failed(reason)?;
        report.ym = Some(a.ym);
        report.distances = a.outcome.distances;
        report.ratios = ratios;
        report.contraction_ratio = contraction_ratio;
        report.converged = a.outcome.converged;
        report.rows = rows;
        return Ok(report);
    }
    Ok(ExistenceReport {
        epsilon: config.epsilon,
        ym: Some(a.ym),
        distances: a.outcome.distances,
        ratios,
        contraction_ratio,
        converged: true,
        smallness_violated: false,
        failure: None,
        largest_passing_epsilon: None,
        pass: true,
        rows,
    })
}
