use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::fit::loglog_fit;
use super::picard;
use crate::error::Result;
use crate::orlicz::luxemburg_norm;
use crate::solver::{duhamel_integral, TimeGrid};

/// Slack below the predicted envelope exponent.
pub const EXPONENT_SLACK: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    /// Fitted exponent of `t ↦ ‖u(t) - e^{tΔ}u0‖_{exp L^p}`; absent when the
    /// difference vanishes identically.
    pub exponent: Option<f64>,
    /// `min(1, 1 - N/(2q))`.
    pub target: f64,
    pub threshold: f64,
    pub q: f64,
    pub times: Vec<f64>,
    pub differences: Vec<f64>,
    pub pass: bool,
}

/// Small-time behaviour of `u(t) - e^{tΔ}u0`, measured as the Duhamel term of
/// the Picard fixed point on geometric nodes in `[limit_t_min, limit_t_max]`.
pub fn run_small_time_limit(config: &ExperimentConfig) -> Result<LimitReport> {
    let setup = config.validate()?;
    let n = config.dimension as f64;
    let target = (1.0 - n / (2.0 * config.q)).min(1.0);
    let threshold = target - EXPONENT_SLACK;
    let tg = TimeGrid::geometric(config.limit_t_min, config.limit_t_max, config.ratio)?;
    let u0 = config.initial_data(setup.grid)?;
    let outcome = picard(config, &setup, &u0, &tg)?;
    let times: Vec<f64> = tg.times()[1..].to_vec();
    let differences: Vec<f64> = if setup.model.nonlinearity.is_some() {
        duhamel_integral(&outcome.trajectory)?[1..]
            .iter()
            .map(|d| luxemburg_norm(d, &setup.model.orlicz))
            .collect::<Result<_>>()?
    } else {
        vec![0.0; times.len()]
    };
    if differences.iter().all(|d| *d == 0.0) {
        return Ok(LimitReport {
            exponent: None,
            target,
            threshold,
            q: config.q,
            times,
            differences,
            pass: true,
        });
    }
    let fit = loglog_fit(&times, &differences, 0.0, f64::INFINITY)?;
    Ok(LimitReport {
        exponent: Some(fit.slope),
        target,
        threshold,
        q: config.q,
        times,
        differences,
        pass: fit.slope >= threshold,
    })
}
