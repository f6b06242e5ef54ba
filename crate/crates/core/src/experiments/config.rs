use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::nonlinearity::{NonlinearitySpec, Sign, U_CAP};
use crate::orlicz::{luxemburg_norm, OrliczSpec};
use crate::params::ProblemExponents;
use crate::solver::{Model, TimeGrid, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataShape {
    /// `exp(-|x|²)`.
    Gaussian,
    /// Indicator of `[-1, 1)^N`.
    Indicator,
    /// `|x|^{-β}` capped at one cell; `β` from the `beta` key.
    TruncatedPower,
    /// Windowed random trigonometric polynomial drawn from `seed`.
    TrigRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Picard,
    Etd,
}

/// Flat experiment description. Every key is optional in JSON; missing keys
/// take the [`Default`] values, unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub dimension: usize,
    pub p: f64,
    pub m: f64,
    pub a: f64,
    pub lambda: f64,
    pub sign: Sign,
    pub half_width: f64,
    pub points_per_axis: usize,
    pub horizon: f64,
    pub epsilon: f64,
    pub epsilon_max: f64,
    pub data_shape: DataShape,
    /// Power for `truncated_power`; defaults to the borderline `2/(m-1)`.
    pub beta: Option<f64>,
    pub seed: u64,
    pub scheme: Scheme,
    /// ETD step; defaults to `horizon / 200`.
    pub dt: Option<f64>,
    /// First positive node of the geometric Picard grid.
    pub t_first: f64,
    pub ratio: f64,
    pub nonlinear: bool,
    pub u_cap: f64,
    pub m_bound: f64,
    pub max_iter: usize,
    /// Picard stops once `d(u^{n+1}, u^n) < tol · d(u^0, 0)`.
    pub tol: f64,
    pub q: f64,
    pub limit_t_min: f64,
    pub limit_t_max: f64,
    pub corpus_size: usize,
    pub corpus_n1: usize,
    pub corpus_n3: usize,
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dimension: 1,
            p: 2.0,
            m: 5.0,
            a: 10.0,
            lambda: 1.0,
            sign: Sign::Plus,
            half_width: 16.0,
            points_per_axis: 1024,
            horizon: 16.0,
            epsilon: 1e-4,
            epsilon_max: 0.1,
            data_shape: DataShape::TruncatedPower,
            beta: None,
            seed: 42,
            scheme: Scheme::Etd,
            dt: None,
            t_first: 1e-3,
            ratio: 1.2,
            nonlinear: true,
            u_cap: U_CAP,
            m_bound: 1.0,
            max_iter: 12,
            tol: 1e-40,
            q: 2.0,
            limit_t_min: 1e-6,
            limit_t_max: 1e-2,
            corpus_size: 100,
            corpus_n1: 512,
            corpus_n3: 48,
            output: None,
        }
    }
}

fn bad(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

/// Everything a run needs, derived from a validated config.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub grid: Grid,
    pub exponents: ProblemExponents,
    pub model: Model,
    pub weight: Weight,
}

impl ExperimentConfig {
    /// Parses JSON; on schema errors the message names the failing key path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            bad(&key, e.into_inner().to_string())
        })
    }

    /// As [`ExperimentConfig::from_json`], from an already parsed document.
    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        serde_path_to_error::deserialize(value).map_err(|e| {
            let key = e.path().to_string();
            bad(&key, e.into_inner().to_string())
        })
    }

    /// Hex SHA-256 of the canonical JSON form, ignoring `output`.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&ExperimentConfig {
            output: None,
            ..self.clone()
        })
        .expect("config serializes");
        Sha256::digest(&canonical)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(2.0 / (self.m - 1.0))
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(self.horizon / 200.0)
    }

    /// True when the data is the self-similar witness `|x|^{-2/(m-1)}`.
    pub fn is_borderline(&self) -> bool {
        self.data_shape == DataShape::TruncatedPower
            && (self.beta() - 2.0 / (self.m - 1.0)).abs() <= 1e-12
    }

    pub fn validate(&self) -> Result<Setup> {
        let grid =
            Grid::new(self.dimension, self.half_width, self.points_per_axis).map_err(|e| {
                let key = if !(1..=3).contains(&self.dimension) {
                    "dimension"
                } else if !(self.half_width > 0.0) {
                    "half_width"
                } else {
                    "points_per_axis"
                };
                bad(key, e.to_string())
            })?;
        let exponents = ProblemExponents::new(self.dimension, self.p, self.m, self.a, self.lambda)
            .map_err(|e| bad("a", e.to_string()))?;
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(bad(
                "epsilon",
                format!("must be finite and >= 0, got {}", self.epsilon),
            ));
        }
        if self.epsilon > self.epsilon_max {
            return Err(bad(
                "epsilon",
                format!(
                    "{} exceeds epsilon_max = {}",
                    self.epsilon, self.epsilon_max
                ),
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(bad(
                "horizon",
                format!("must be positive, got {}", self.horizon),
            ));
        }
        if !(self.t_first > 0.0 && self.t_first < self.horizon) {
            return Err(bad("t_first", "must lie in (0, horizon)"));
        }
        if !(self.ratio > 1.0) {
            return Err(bad("ratio", format!("must exceed 1, got {}", self.ratio)));
        }
        let dt = self.dt();
        if !(dt > 0.0 && dt <= self.horizon) {
            return Err(bad("dt", format!("must lie in (0, horizon], got {dt}")));
        }
        if let Some(beta) = self.beta {
            if !(beta > 0.0) {
                return Err(bad("beta", format!("must be positive, got {beta}")));
            }
        }
        if !(self.m_bound > 0.0) {
            return Err(bad("m_bound", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(bad("max_iter", "must be at least 1"));
        }
        if !(self.tol >= 0.0) {
            return Err(bad("tol", "must be >= 0"));
        }
        if !(self.q >= (0.5 * self.dimension as f64).max(self.p)) {
            return Err(bad("q", format!("must be >= max(N/2, p), got {}", self.q)));
        }
        if !(self.limit_t_min > 0.0 && self.limit_t_max > self.limit_t_min) {
            return Err(bad("limit_t_min", "need 0 < limit_t_min < limit_t_max"));
        }
        let orlicz = OrliczSpec::full(self.p).map_err(|e| bad("p", e.to_string()))?;
        let nonlinearity = if self.nonlinear {
            let spec = NonlinearitySpec::new(self.m, self.p, self.lambda, self.sign)
                .map_err(|e| bad("m", e.to_string()))?
                .with_cap(self.u_cap)
                .map_err(|e| bad("u_cap", e.to_string()))?;
            Some(spec)
        } else {
            None
        };
        Ok(Setup {
            grid,
            model: Model {
                nonlinearity,
                orlicz,
            },
            weight: Weight {
                sigma: exponents.sigma,
                a: self.a,
            },
            exponents,
        })
    }

    /// The unscaled profile of `data_shape` on `grid`.
    pub fn profile(&self, grid: Grid) -> Result<GridFunction> {
        let n = grid.dim();
        match self.data_shape {
            DataShape::Gaussian => corpus::gaussian(grid, &vec![0.0; n], 1.0, f64::INFINITY),
            DataShape::Indicator => corpus::box_indicator(grid, &vec![-1.0; n], &vec![1.0; n]),
            DataShape::TruncatedPower => corpus::capped_power(grid, self.beta()),
            DataShape::TrigRandom => {
                corpus::trig_random(grid, self.seed, 4, 0.5 * grid.half_width())
            }
        }
    }

    /// Initial datum scaled to `‖u0‖_{exp L^p} = epsilon`.
    pub fn initial_data(&self, grid: Grid) -> Result<GridFunction> {
        if self.epsilon == 0.0 {
            return Ok(GridFunction::zeros(grid));
        }
        let shape = self.profile(grid)?;
        let norm = luxemburg_norm(&shape, &OrliczSpec::full(self.p)?)?;
        Ok(shape.scaled(self.epsilon / norm))
    }

    /// Geometric nodes `0, t_first, t_first r, …, horizon` for the Picard scheme.
    pub fn picard_grid(&self) -> Result<TimeGrid> {
        TimeGrid::geometric(self.t_first, self.horizon, self.ratio)
    }

    /// Length scale of the data below which self-similarity is not expected.
    pub fn data_width(&self, grid: &Grid) -> f64 {
        match self.data_shape {
            DataShape::TruncatedPower => grid.spacing(),
            DataShape::TrigRandom => 1.0 / 3.0,
            DataShape::Gaussian | DataShape::Indicator => 1.0,
        }
    }

    /// Header lines shared by every CSV written for this config.
    pub fn csv_header(&self, units: &str) -> Vec<(String, String)> {
        vec![
            ("config_hash".into(), self.hash()),
            ("seed".into(), self.seed.to_string()),
            ("units".into(), units.into()),
            (
                "parameters".into(),
                format!(
                    "N={} p={} m={} a={} lambda={} sign={} L={} n={} T={} epsilon={} shape={:?} scheme={:?}",
                    self.dimension,
                    self.p,
                    self.m,
                    self.a,
                    self.lambda,
                    self.sign.value(),
                    self.half_width,
                    self.points_per_axis,
                    self.horizon,
                    self.epsilon,
                    self.data_shape,
                    self.scheme
                ),
            ),
        ]
    }
}
