//! Mild formulation `u(t) = e^{tΔ}u0 + ∫_0^t e^{(t-s)Δ} f(u(s)) ds`:
//! the Duhamel map, its Picard iteration, a first-order exponential
//! integrator, and the weighted-norm diagnostics used to measure contraction.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::heat::{SemigroupPlan, Spectrum};
use crate::nonlinearity::{eval_f, NonlinearitySpec};
use crate::orlicz::{lp_norm, luxemburg_norm, OrliczSpec};
use crate::par;

/// Consecutive non-contracting Picard steps tolerated before giving up.
pub const DIVERGENCE_PATIENCE: usize = 3;

/// Equation data: the nonlinearity (`None` switches it off) and the Orlicz
/// norm used for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub nonlinearity: Option<NonlinearitySpec>,
    pub orlicz: OrliczSpec,
}

/// Time weight `t^σ` and Lebesgue exponent `a` of the metric
/// `d(u, v) = sup_{t>0} t^σ ‖u(t) - v(t)‖_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub sigma: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    Uniform,
    Geometric,
}

/// Strictly increasing time nodes starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    times: Vec<f64>,
    refinement: Refinement,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>, refinement: Refinement) -> Result<Self> {
        if times.len() < 2 || times[0] != 0.0 {
            return Err(domain("time grid needs at least two nodes starting at 0"));
        }
        if times
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(domain("time nodes must be finite and strictly increasing"));
        }
        Ok(Self { times, refinement })
    }

    /// `steps + 1` equally spaced nodes on `[0, horizon]`.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || steps == 0 {
            return Err(domain(format!(
                "need horizon > 0 and steps >= 1, got {horizon}, {steps}"
            )));
        }
        let dt = horizon / steps as f64;
        let mut times: Vec<f64> = (0..steps).map(|i| i as f64 * dt).collect();
        times.push(horizon);
        Self::new(times, Refinement::Uniform)
    }

    /// `0, t_1, t_1 ratio, t_1 ratio², …` up to `horizon`, which is always a node.
    pub fn geometric(first: f64, horizon: f64, ratio: f64) -> Result<Self> {
        if !(first > 0.0 && horizon > first && ratio > 1.0) {
            return Err(domain(format!(
                "need 0 < first < horizon and ratio > 1, got {first}, {horizon}, {ratio}"
            )));
        }
        let mut times = vec![0.0, first];
        let mut t = first;
        loop {
            t *= ratio;
            if t >= horizon {
                break;
            }
            times.push(t);
        }
        // Avoid a sliver of a last step.
        let n = times.len();
        if n > 2 && horizon - times[n - 1] < 0.5 * (times[n - 1] - times[n - 2]) {
            times[n - 1] = horizon;
        } else {
            times.push(horizon);
        }
        Self::new(times, Refinement::Geometric)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn refinement(&self) -> Refinement {
        self.refinement
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    /// Trapezoid weights for `∫_0^{t_i}` on the nodes `t_0..=t_i`.
    fn trapezoid_weights(&self, i: usize) -> Vec<f64> {
        let t = &self.times;
        (0..=i)
            .map(|j| {
                let left = if j > 0 { t[j] - t[j - 1] } else { 0.0 };
                let right = if j < i { t[j + 1] - t[j] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    }
}

/// States of one solution on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    time_grid: TimeGrid,
    states: Vec<GridFunction>,
    model: Model,
}

impl Trajectory {
    pub fn new(time_grid: TimeGrid, states: Vec<GridFunction>, model: Model) -> Result<Self> {
        if states.len() != time_grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} states for {} time nodes",
                states.len(),
                time_grid.len()
            )));
        }
        for s in &states[1..] {
            states[0].check_same_grid(s)?;
        }
        Ok(Self {
            time_grid,
            states,
            model,
        })
    }

    /// `t ↦ e^{tΔ}u0` on the given nodes.
    pub fn linear(u0: &GridFunction, time_grid: TimeGrid, model: Model) -> Result<Self> {
        let plan = SemigroupPlan::new(*u0.grid());
        let states = linear_states(&plan, u0, &time_grid)?;
        Self::new(time_grid, states, model)
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time_grid
    }

    pub fn times(&self) -> &[f64] {
        self.time_grid.times()
    }

    pub fn states(&self) -> &[GridFunction] {
        &self.states
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    fn check_aligned(&self, other: &Self) -> Result<()> {
        if self.time_grid.times != other.time_grid.times {
            return Err(Error::GridMismatch(
                "trajectories use different time grids".into(),
            ));
        }
        self.states[0].check_same_grid(&other.states[0])
    }
}

fn linear_states(
    plan: &SemigroupPlan,
    u0: &GridFunction,
    tg: &TimeGrid,
) -> Result<Vec<GridFunction>> {
    let spectrum = plan.forward(u0)?;
    par::collect_indexed(tg.len(), |i| {
        if i == 0 {
            Ok(u0.clone())
        } else {
            plan.inverse(&plan.decay(&spectrum, tg.times[i])?)
        }
    })
    .into_iter()
    .collect()
}

/// `t_i ↦ ∫_0^{t_i} e^{(t_i - s)Δ} g(s) ds` by the trapezoid rule on the nodes,
/// with `g` given by its samples `sources[j] = g(t_j)`.
pub fn integrate(
    plan: &SemigroupPlan,
    tg: &TimeGrid,
    sources: &[GridFunction],
) -> Result<Vec<GridFunction>> {
    if sources.len() != tg.len() {
        return Err(Error::GridMismatch(format!(
            "{} sources for {} time nodes",
            sources.len(),
            tg.len()
        )));
    }
    let spectra: Vec<Spectrum> = par::collect_indexed(sources.len(), |j| plan.forward(&sources[j]))
        .into_iter()
        .collect::<Result<_>>()?;
    let t = tg.times();
    par::collect_indexed(tg.len(), |i| {
        if i == 0 {
            return Ok(GridFunction::zeros(*plan.grid()));
        }
        let mut acc = plan.zero_spectrum();
        for (j, w) in tg.trapezoid_weights(i).into_iter().enumerate() {
            plan.accumulate_decayed(&mut acc, w, &spectra[j], t[i] - t[j])?;
        }
        plan.inverse(&acc)
    })
    .into_iter()
    .collect()
}

/// `I(u)(t) = ∫_0^t e^{(t-s)Δ} f(u(s)) ds` on the trajectory's nodes; all zero
/// when the nonlinearity is off.
pub fn duhamel_integral(u: &Trajectory) -> Result<Vec<GridFunction>> {
    let grid = *u.grid();
    let Some(spec) = u.model.nonlinearity else {
        return Ok(vec![GridFunction::zeros(grid); u.states.len()]);
    };
    let plan = SemigroupPlan::new(grid);
    let sources: Vec<GridFunction> = u
        .states
        .iter()
        .map(|s| eval_f(s, &spec))
        .collect::<Result<_>>()?;
    integrate(&plan, &u.time_grid, &sources)
}

/// `Φ(u)(t) = e^{tΔ}u0 + ∫_0^t e^{(t-s)Δ} f(u(s)) ds`.
pub fn duhamel_apply(u: &Trajectory, u0: &GridFunction) -> Result<Trajectory> {
    u.states[0].check_same_grid(u0)?;
    let plan = SemigroupPlan::new(*u0.grid());
    let lin = linear_states(&plan, u0, &u.time_grid)?;
    let int = duhamel_integral(u)?;
    let states = lin
        .iter()
        .zip(&int)
        .map(|(a, b)| a.add(b))
        .collect::<Result<_>>()?;
    Trajectory::new(u.time_grid.clone(), states, u.model)
}

/// `sup_{t_i > 0} t_i^σ ‖states_i‖_a`.
fn weighted_sup(times: &[f64], states: &[GridFunction], w: Weight) -> Result<f64> {
    let mut best = 0.0_f64;
    for (t, s) in times.iter().zip(states).skip(1) {
        best = best.max(t.powf(w.sigma) * lp_norm(s, w.a)?);
    }
    Ok(best)
}

/// `d(u, v) = sup_{t>0} t^σ ‖u(t) - v(t)‖_a` over the positive nodes.
pub fn metric_d(u: &Trajectory, v: &Trajectory, sigma: f64, a: f64) -> Result<f64> {
    u.check_aligned(v)?;
    let diffs: Vec<GridFunction> = u
        .states
        .iter()
        .zip(&v.states)
        .map(|(x, y)| x.sub(y))
        .collect::<Result<_>>()?;
    weighted_sup(u.times(), &diffs, Weight { sigma, a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    /// `d(u^{n+1}, u^n)` for `n = 0, 1, …`.
    pub distances: Vec<f64>,
    pub converged: bool,
}

impl PicardOutcome {
    /// Successive ratios `d_{n+1} / d_n`.
    pub fn ratios(&self) -> Vec<f64> {
        contraction_ratios(&self.distances)
    }
}

pub fn contraction_ratios(distances: &[f64]) -> Vec<f64> {
    distances
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .collect()
}

/// Picard iteration `u^{n+1} = Φ(u^n)` from `u^0(t) = e^{tΔ}u0`.
///
/// Runs in increment form: `δ^{n+1} = I[DD(u^n, u^{n-1}) δ^n]` with `DD` the
/// divided difference of `f`, so distances far below the size of `u` are
/// resolved. Stops when `d(u^{n+1}, u^n) < tol`.
pub fn picard_iterate(
    u0: &GridFunction,
    time_grid: &TimeGrid,
    model: Model,
    weight: Weight,
    max_iter: usize,
    tol: f64,
) -> Result<PicardOutcome> {
    if max_iter == 0 {
        return Err(domain("Picard needs max_iter >= 1"));
    }
    let plan = SemigroupPlan::new(*u0.grid());
    let mut u = linear_states(&plan, u0, time_grid)?;
    let Some(spec) = model.nonlinearity else {
        return Ok(PicardOutcome {
            trajectory: Trajectory::new(time_grid.clone(), u, model)?,
            distances: vec![0.0],
            converged: true,
        });
    };
    let t = time_grid.times();

    for s in &u {
        spec.check_cap(s)?;
    }
    let sources: Vec<GridFunction> = u.iter().map(|s| eval_f(s, &spec)).collect::<Result<_>>()?;
    let mut delta = integrate(&plan, time_grid, &sources)?;
    let mut u_prev = u.clone();
    u = add_all(&u, &delta)?;
    let mut distances = vec![weighted_sup(t, &delta, weight)?];
    let mut strikes = 0;

    let finished = |d: f64| d == 0.0 || d < tol;
    let mut converged = finished(distances[0]);
    while !converged && distances.len() < max_iter {
        for s in &u {
            spec.check_cap(s)?;
        }
        let sources: Vec<GridFunction> = (0..u.len())
            .map(|j| {
                let (a, b, d) = (&u[j], &u_prev[j], &delta[j]);
                let vals = par::collect_indexed(a.grid().len(), |i| {
                    spec.divided_difference(a.values()[i], b.values()[i]) * d.values()[i]
                });
                GridFunction::new(*a.grid(), vals)
            })
            .collect::<Result<_>>()?;
        delta = integrate(&plan, time_grid, &sources)?;
        u_prev = std::mem::take(&mut u);
        u = add_all(&u_prev, &delta)?;
        let d = weighted_sup(t, &delta, weight)?;
        let last = *distances.last().expect("nonempty");
        distances.push(d);
        if last > 0.0 && d / last >= 1.0 {
            strikes += 1;
            if strikes >= DIVERGENCE_PATIENCE {
                return Err(Error::Divergence {
                    ratio: d / last,
                    iteration: distances.len(),
                });
            }
        } else {
            strikes = 0;
        }
        converged = finished(d);
    }
    Ok(PicardOutcome {
        trajectory: Trajectory::new(time_grid.clone(), u, model)?,
        distances,
        converged,
    })
}

fn add_all(a: &[GridFunction], b: &[GridFunction]) -> Result<Vec<GridFunction>> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// First-order exponential integrator `u_{n+1} = e^{dtΔ}[u_n + dt f(u_n)]` on
/// a uniform grid. Fails with [`Error::FiniteTimeGrowth`] once `‖u‖_∞`
/// exceeds the nonlinearity's cap.
pub fn etd_march(u0: &GridFunction, horizon: f64, dt: f64, model: Model) -> Result<Trajectory> {
    if !(dt > 0.0 && horizon > 0.0 && dt <= horizon) {
        return Err(domain(format!(
            "need 0 < dt <= horizon, got dt = {dt}, horizon = {horizon}"
        )));
    }
    let steps = (horizon / dt).round() as usize;
    if ((steps as f64) * dt - horizon).abs() > 1e-9 * horizon {
        return Err(domain(format!(
            "dt = {dt} does not divide horizon = {horizon}"
        )));
    }
    let time_grid = TimeGrid::uniform(horizon, steps)?;
    let plan = SemigroupPlan::new(*u0.grid());
    let mut states = Vec::with_capacity(steps + 1);
    states.push(u0.clone());
    let mut spectrum = plan.forward(u0)?;
    for n in 0..steps {
        let u = &states[n];
        if let Some(spec) = model.nonlinearity {
            let sup = u.sup_norm();
            if sup > spec.u_cap() {
                return Err(Error::FiniteTimeGrowth {
                    time: time_grid.times()[n],
                    sup,
                    cap: spec.u_cap(),
                });
            }
            let f = plan.forward(&eval_f(u, &spec)?)?;
            spectrum.add_scaled(dt, &f);
        }
        plan.decay_in_place(&mut spectrum, dt)?;
        states.push(plan.inverse(&spectrum)?);
    }
    if let Some(spec) = model.nonlinearity {
        let sup = states[steps].sup_norm();
        if sup > spec.u_cap() {
            return Err(Error::FiniteTimeGrowth {
                time: horizon,
                sup,
                cap: spec.u_cap(),
            });
        }
    }
    Trajectory::new(time_grid, states, model)
}

/// Membership diagnostics for the ball
/// `Y_M = {u : sup_t t^σ ‖u(t)‖_a + sup_t ‖u(t)‖_{exp L^p} <= M}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YmReport {
    pub sup_weighted_a: f64,
    pub sup_orlicz: f64,
    pub m_bound: f64,
    pub member: bool,
}

pub fn ym_report(u: &Trajectory, sigma: f64, a: f64, p: f64, m_bound: f64) -> Result<YmReport> {
    let sup_weighted_a = weighted_sup(u.times(), &u.states, Weight { sigma, a })?;
    let spec = OrliczSpec::full(p)?;
    let norms: Vec<f64> = u
        .states
        .iter()
        .map(|s| luxemburg_norm(s, &spec))
        .collect::<Result<_>>()?;
    let sup_orlicz = norms.into_iter().fold(0.0, f64::max);
    Ok(YmReport {
        sup_weighted_a,
        sup_orlicz,
        m_bound,
        member: sup_weighted_a + sup_orlicz <= m_bound,
    })
}

/// One exported row per time node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub norm_a: f64,
    pub norm_orlicz: f64,
    pub norm_inf: f64,
    pub weighted_a: f64,
}

pub fn trajectory_rows(u: &Trajectory, weight: Weight) -> Result<Vec<TrajectoryRow>> {
    let spec = u.model.orlicz;
    par::collect_indexed(u.states.len(), |i| {
        let s = &u.states[i];
        let t = u.times()[i];
        let norm_a = lp_norm(s, weight.a)?;
        Ok(TrajectoryRow {
            t,
            norm_a,
            norm_orlicz: luxemburg_norm(s, &spec)?,
            norm_inf: s.sup_norm(),
            weighted_a: t.powf(weight.sigma) * norm_a,
        })
    })
    .into_iter()
    .collect()
}

/// CSV with `# key=value` header lines followed by the column row.
pub fn write_trajectory_csv<W: Write>(
    rows: &[TrajectoryRow],
    header: &[(String, String)],
    out: W,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    for (k, v) in header {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "t,norm_a,norm_exp_lp,norm_inf,t_sigma_norm_a")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.t, r.norm_a, r.norm_orlicz, r.norm_inf, r.weighted_a
        )?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::Sign;

    fn model(on: bool) -> Model {
        Model {
            nonlinearity: on.then(|| NonlinearitySpec::new(5.0, 2.0, 1.0, Sign::Plus).unwrap()),
            orlicz: OrliczSpec::full(2.0).unwrap(),
        }
    }

    fn bump(grid: Grid, eps: f64) -> GridFunction {
        GridFunction::from_fn(grid, |x| eps * (-x[0] * x[0]).exp()).unwrap()
    }

    #[test]
    fn time_grids() {
        let u = TimeGrid::uniform(1.0, 4).unwrap();
        assert_eq!(u.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = TimeGrid::geometric(1e-3, 4.0, 1.1).unwrap();
        assert_eq!(g.times()[0], 0.0);
        assert_eq!(g.horizon(), 4.0);
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0], Refinement::Uniform).is_err());
        assert!(TimeGrid::new(vec![0.5, 1.0], Refinement::Uniform).is_err());
    }

    #[test]
    fn trapezoid_weights_integrate_constants() {
        let g = TimeGrid::geometric(0.01, 2.0, 1.3).unwrap();
        for i in 1..g.len() {
            let s: f64 = g.trapezoid_weights(i).iter().sum();
            assert!((s - g.times()[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn integrate_constant_source_in_time() {
        // Source independent of s with zero mean mode only: ∫_0^t e^{(t-s)Δ}c ds = c t.
        let grid = Grid::new(1, 4.0, 32).unwrap();
        let tg = TimeGrid::uniform(1.0, 10).unwrap();
        let plan = SemigroupPlan::new(grid);
        let c = GridFunction::constant(grid, 2.0).unwrap();
        let out = integrate(&plan, &tg, &vec![c; tg.len()]).unwrap();
        for (i, o) in out.iter().enumerate() {
            let want = 2.0 * tg.times()[i];
            assert!(o.values().iter().all(|v| (v - want).abs() < 1e-12));
        }
    }

    #[test]
    fn duhamel_of_zero_and_linear() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let tg = TimeGrid::uniform(1.0, 8).unwrap();
        let zero = GridFunction::zeros(grid);
        let z = Trajectory::linear(&zero, tg.clone(), model(true)).unwrap();
        let out = duhamel_apply(&z, &zero).unwrap();
        assert!(out.states().iter().all(GridFunction::is_zero));

        let u0 = bump(grid, 0.1);
        let lin = Trajectory::linear(&u0, tg, model(false)).unwrap();
        assert_eq!(duhamel_apply(&lin, &u0).unwrap(), lin);
    }

    #[test]
    fn zero_data_converges_immediately() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let tg = TimeGrid::geometric(1e-3, 1.0, 1.5).unwrap();
        let w = Weight {
            sigma: 0.2,
            a: 10.0,
        };
        let out =
            picard_iterate(&GridFunction::zeros(grid), &tg, model(true), w, 10, 1e-30).unwrap();
        assert!(out.converged);
        assert_eq!(out.distances, vec![0.0]);
    }

    #[test]
    fn metric_properties() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let tg = TimeGrid::uniform(1.0, 4).unwrap();
        let u = Trajectory::linear(&bump(grid, 0.3), tg.clone(), model(false)).unwrap();
        let v = Trajectory::linear(&bump(grid, -0.1), tg.clone(), model(false)).unwrap();
        let zero = Trajectory::linear(&GridFunction::zeros(grid), tg, model(false)).unwrap();
        assert_eq!(metric_d(&u, &u, 0.2, 10.0).unwrap(), 0.0);
        let duv = metric_d(&u, &v, 0.2, 10.0).unwrap();
        assert_eq!(duv, metric_d(&v, &u, 0.2, 10.0).unwrap());
        let du0 = metric_d(&u, &zero, 0.2, 10.0).unwrap();
        let r = ym_report(&u, 0.2, 10.0, 2.0, 1.0).unwrap();
        assert_eq!(du0, r.sup_weighted_a);
        assert!(duv <= du0 + metric_d(&zero, &v, 0.2, 10.0).unwrap() + 1e-15);
    }

    #[test]
    fn zero_trajectory_report() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let tg = TimeGrid::uniform(1.0, 4).unwrap();
        let z = Trajectory::linear(&GridFunction::zeros(grid), tg, model(true)).unwrap();
        let r = ym_report(&z, 0.2, 10.0, 2.0, 0.5).unwrap();
        assert_eq!(
            (r.sup_weighted_a, r.sup_orlicz, r.m_bound, r.member),
            (0.0, 0.0, 0.5, true)
        );
    }

    #[test]
    fn etd_is_exact_without_nonlinearity() {
        let grid = Grid::new(1, 8.0, 128).unwrap();
        let u0 = bump(grid, 1.0);
        let traj = etd_march(&u0, 1.0, 0.1, model(false)).unwrap();
        let plan = SemigroupPlan::new(grid);
        let want = plan.apply(&u0, 1.0).unwrap();
        assert!(traj.states().last().unwrap().sub(&want).unwrap().sup_norm() < 1e-13);
        assert!(etd_march(&u0, 1.0, 0.3, model(false)).is_err());
    }

    #[test]
    fn etd_detects_growth() {
        let grid = Grid::new(1, 8.0, 128).unwrap();
        let u0 = bump(grid, 1.5);
        match etd_march(&u0, 4.0, 0.01, model(true)) {
            Err(Error::FiniteTimeGrowth { time, .. }) => assert!(time < 4.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_has_header_and_columns() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let tg = TimeGrid::uniform(1.0, 2).unwrap();
        let u = Trajectory::linear(&bump(grid, 0.3), tg, model(false)).unwrap();
        let rows = trajectory_rows(
            &u,
            Weight {
                sigma: 0.2,
                a: 10.0,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&rows, &[("m".into(), "5".into())], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# m=5");
        assert_eq!(lines[1], "t,norm_a,norm_exp_lp,norm_inf,t_sigma_norm_a");
        assert_eq!(lines.len(), 5);
    }
}
