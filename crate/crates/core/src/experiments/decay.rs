use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::fit::loglog_fit;
use super::simulate;
use crate::error::{domain, Result};
use crate::solver::{trajectory_rows, TrajectoryRow};

/// Relative tolerance on the fitted slope.
pub const SLOPE_TOL: f64 = 0.1;
/// Fewest nodes the slope fit accepts.
pub const MIN_FIT_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    /// Least-squares slope of `ln ‖u(t)‖_a` against `ln t`; absent for zero data.
    pub fitted_slope: Option<f64>,
    pub target: f64,
    pub window: (f64, f64),
    pub samples: usize,
    /// `sup_{t in window} t^σ ‖u(t)‖_a`.
    pub max_weighted_norm: f64,
    /// Slope matched two-sided (borderline data) or one-sided (other data).
    pub two_sided: bool,
    pub pass: bool,
    #[serde(skip)]
    pub rows: Vec<TrajectoryRow>,
}

/// Simulates the configured problem and fits the decay rate of `‖u(t)‖_a` on
/// `[4 w², min((L/4)², T)]`, `w` the data width.
pub fn run_decay(config: &ExperimentConfig) -> Result<DecayReport> {
    let setup = config.validate()?;
    let sigma = setup.weight.sigma;
    let width = config.data_width(&setup.grid);
    let lo = 4.0 * width * width;
    let hi = setup.grid.t_max().min(config.horizon);
    if !(lo < hi) {
        return Err(domain(format!(
            "slope window [{lo}, {hi}] is empty; enlarge the box or the horizon"
        )));
    }
    let sim = simulate(config, &setup)?;
    let rows = trajectory_rows(&sim.trajectory, setup.weight)?;
    let two_sided = config.is_borderline();
    let in_window: Vec<&TrajectoryRow> = rows.iter().filter(|r| r.t >= lo && r.t <= hi).collect();
    if in_window.len() < MIN_FIT_SAMPLES {
        return Err(domain(format!(
            "slope window [{lo}, {hi}] holds {} nodes, need {MIN_FIT_SAMPLES}",
            in_window.len()
        )));
    }
    let max_weighted_norm = in_window.iter().map(|r| r.weighted_a).fold(0.0, f64::max);
    if config.epsilon == 0.0 {
        return Ok(DecayReport {
            fitted_slope: None,
            target: -sigma,
            window: (lo, hi),
            samples: in_window.len(),
            max_weighted_norm,
            two_sided,
            pass: true,
            rows,
        });
    }
    let t: Vec<f64> = in_window.iter().map(|r| r.t).collect();
    let y: Vec<f64> = in_window.iter().map(|r| r.norm_a).collect();
    let fit = loglog_fit(&t, &y, lo, hi)?;
    let pass = max_weighted_norm.is_finite()
        && if two_sided {
            (fit.slope + sigma).abs() <= SLOPE_TOL * sigma
        } else {
            fit.slope <= -sigma * (1.0 - SLOPE_TOL)
        };
    Ok(DecayReport {
        fitted_slope: Some(fit.slope),
        target: -sigma,
        window: (lo, hi),
        samples: fit.samples,
        max_weighted_norm,
        two_sided,
        pass,
        rows,
    })
}
