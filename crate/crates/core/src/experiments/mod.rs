//! End-to-end studies driven by a flat JSON [`ExperimentConfig`]: decay-rate
//! measurement, global existence in the weighted ball `Y_M`, the small-time
//! limit of the Duhamel term, and the inequality regression suite.

pub mod config;
pub mod decay;
pub mod existence;
pub mod fit;
pub mod limit;
pub mod output;
pub mod suite;

pub use config::{DataShape, ExperimentConfig, Scheme, Setup};
pub use decay::{run_decay, DecayReport};
pub use existence::{run_global_existence, ExistenceReport};
pub use limit::{run_small_time_limit, LimitReport};
pub use suite::{run_inequality_suite, SuiteReport, SuiteSizes};

use crate::error::Result;
use crate::grid::GridFunction;
use crate::solver::{etd_march, metric_d, picard_iterate, PicardOutcome, TimeGrid, Trajectory};

/// A computed trajectory and, for Picard runs, its iterate distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub distances: Vec<f64>,
}

/// Runs the configured scheme from the configured initial datum.
pub fn simulate(config: &ExperimentConfig, setup: &Setup) -> Result<Simulation> {
    let u0 = config.initial_data(setup.grid)?;
    match config.scheme {
        Scheme::Etd => Ok(Simulation {
            trajectory: etd_march(&u0, config.horizon, config.dt(), setup.model)?,
            distances: Vec::new(),
        }),
        Scheme::Picard => {
            let out = picard(config, setup, &u0, &config.picard_grid()?)?;
            Ok(Simulation {
                trajectory: out.trajectory,
                distances: out.distances,
            })
        }
    }
}

/// Picard iteration with the stopping tolerance taken relative to `d(u^0, 0)`.
pub fn picard(
    config: &ExperimentConfig,
    setup: &Setup,
    u0: &GridFunction,
    tg: &TimeGrid,
) -> Result<PicardOutcome> {
    let w = setup.weight;
    let linear = Trajectory::linear(u0, tg.clone(), setup.model)?;
    let zero = Trajectory::linear(&u0.scaled(0.0), tg.clone(), setup.model)?;
    let scale = metric_d(&linear, &zero, w.sigma, w.a)?;
    picard_iterate(u0, tg, setup.model, w, config.max_iter, config.tol * scale)
}
