//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use expheat::experiments::{
    run_decay, run_global_existence, run_inequality_suite, run_small_time_limit, DataShape,
    ExperimentConfig, Scheme, SuiteSizes,
};
use expheat::heat::apply_semigroup;
use expheat::orlicz::luxemburg_norm;
use expheat::params::{best_parameter_solution, eta_constant, gamma_growth_constant};
use expheat::{Grid, GridFunction, OrliczSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn unit_indicator_norm() -> Outcome {
    let g = Grid::new(1, 4.0, 1024).unwrap();
    let u = GridFunction::indicator(g, 0.0, 1.0);
    let norm = luxemburg_norm(&u, &OrliczSpec::full(2.0).unwrap()).unwrap();
    let want = 1.0 / LN_2.sqrt();
    let err = (norm - want).abs();
    outcome(
        err <= 1e-6,
        format!("norm = {norm:.12}, 1/sqrt(ln 2) = {want:.12}, |err| = {err:.3e} (tol 1e-6)"),
    )
}

fn inequality_suite() -> Outcome {
    let start = Instant::now();
    let report = run_inequality_suite(42, SuiteSizes::default()).unwrap();
    let elapsed = start.elapsed();
    let failing: Vec<String> = report
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| {
            format!(
                "{} worst {:.3e} at {}",
                e.name, e.worst_margin, e.worst_case
            )
        })
        .collect();
    let worst = report
        .entries
        .iter()
        .map(|e| format!("{}={:.2e}", e.name, e.worst_margin))
        .collect::<Vec<_>>()
        .join(" ");
    let in_time = elapsed < Duration::from_secs(120);
    outcome(
        report.pass && in_time,
        format!(
            "{} inequalities, elapsed {:.1}s (limit 120s); failing: [{}]; worst margins: {worst}",
            report.entries.len(),
            elapsed.as_secs_f64(),
            failing.join("; ")
        ),
    )
}

fn gaussian(grid: Grid, s: f64) -> GridFunction {
    GridFunction::from_fn(grid, |x| {
        (-x[0] * x[0] / (4.0 * s)).exp() / (4.0 * PI * s).sqrt()
    })
    .unwrap()
}

fn gaussian_transport() -> Outcome {
    let g = Grid::new(1, 8.0, 1024).unwrap();
    let out = apply_semigroup(&gaussian(g, 0.1), 0.4).unwrap();
    let err = out.sub(&gaussian(g, 0.5)).unwrap().sup_norm();
    outcome(err <= 1e-8, format!("sup error {err:.3e} (tol 1e-8)"))
}

fn parameter_witness() -> Outcome {
    let (sols50, worst50) = best_parameter_solution(5, 2.0, 2.0, 5.0, 50).unwrap();
    let (sols25, _) = best_parameter_solution(5, 2.0, 2.0, 5.0, 25).unwrap();
    let all_flags = sols50.iter().all(|s| s.all_satisfied());
    let g50 = gamma_growth_constant(&sols50, 2.0, 2.0).unwrap();
    let g25 = gamma_growth_constant(&sols25, 2.0, 2.0).unwrap();
    let drift = (g50 / g25 - 1.0).abs();
    outcome(
        all_flags && drift <= 0.05,
        format!(
            "r = {}, all flags true for k <= 50: {all_flags} (worst {} = {:.3e}); growth constant {g25:.6} (k<=25) vs {g50:.6} (k<=50), drift {:.2}% (tol 5%)",
            sols50[0].r,
            worst50.0.name(),
            worst50.1,
            100.0 * drift
        ),
    )
}

fn decay_config(dt: f64) -> ExperimentConfig {
    ExperimentConfig {
        dimension: 1,
        p: 2.0,
        m: 5.0,
        a: 10.0,
        half_width: 16.0,
        points_per_axis: 2048,
        horizon: 16.0,
        epsilon: 1e-3,
        data_shape: DataShape::TruncatedPower,
        scheme: Scheme::Etd,
        dt: Some(dt),
        ..Default::default()
    }
}

fn decay_rate() -> Outcome {
    let coarse = run_decay(&decay_config(16.0 / 200.0)).unwrap();
    let fine = run_decay(&decay_config(16.0 / 400.0)).unwrap();
    let slope = coarse.fitted_slope.unwrap();
    let slope_ok = (slope + 0.2).abs() <= 0.1 * 0.2;
    let drift = (fine.max_weighted_norm / coarse.max_weighted_norm - 1.0).abs();
    outcome(
        slope_ok && drift <= 0.05,
        format!(
            "slope {slope:.5} vs -0.2 (tol 10%), window [{:.3e}, {:.3e}] with {} nodes; sup t^0.2 ||u||_10 = {:.6e} (dt) vs {:.6e} (dt/2), drift {:.3}% (tol 5%)",
            coarse.window.0,
            coarse.window.1,
            coarse.samples,
            coarse.max_weighted_norm,
            fine.max_weighted_norm,
            100.0 * drift
        ),
    )
}

fn small_data_config(epsilon: f64) -> ExperimentConfig {
    ExperimentConfig {
        dimension: 1,
        p: 2.0,
        m: 5.0,
        a: 10.0,
        half_width: 8.0,
        points_per_axis: 256,
        horizon: 4.0,
        epsilon,
        data_shape: DataShape::Gaussian,
        scheme: Scheme::Picard,
        t_first: 1e-3,
        ratio: 1.2,
        ..Default::default()
    }
}

fn contraction() -> Outcome {
    let base = small_data_config(1e-4);
    let r1 = run_global_existence(&ExperimentConfig {
        epsilon: 1e-4,
        ..base.clone()
    })
    .unwrap();
    let r2 = run_global_existence(&ExperimentConfig {
        epsilon: 5e-5,
        ..base
    })
    .unwrap();
    let member = r1.ym.is_some_and(|y| y.member);
    let factor = r1.contraction_ratio / r2.contraction_ratio;
    outcome(
        r1.pass && member && r1.contraction_ratio < 0.5 && factor >= 2.0,
        format!(
            "ratio {:.3e} at eps = 1e-4 (need < 0.5), {:.3e} at eps = 5e-5, reduction x{factor:.2} (need >= 2), member of Y_M: {member}",
            r1.contraction_ratio, r2.contraction_ratio
        ),
    )
}

fn small_time_limit() -> Outcome {
    let report = run_small_time_limit(&ExperimentConfig {
        q: 2.0,
        limit_t_min: 1e-6,
        limit_t_max: 1e-2,
        ..small_data_config(0.05)
    })
    .unwrap();
    let exponent = report.exponent.unwrap_or(f64::NAN);
    outcome(
        exponent >= 0.55,
        format!(
            "fitted exponent {exponent:.4} (need >= 0.55; predicted {:.2}) over {} nodes in [{:.0e}, {:.0e}]",
            report.target,
            report.times.len(),
            report.times[0],
            report.times[report.times.len() - 1]
        ),
    )
}

fn eta() -> Outcome {
    let eta = eta_constant();
    let residual = (eta - 2.0 * eta.ln_1p()).abs();
    outcome(
        residual <= 1e-10 && eta > 2.512 && eta < 2.514,
        format!("eta = {eta:.12}, residual {residual:.3e} (tol 1e-10), in (2.512, 2.514)"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("unit indicator Luxemburg norm", unit_indicator_norm),
        ("inequality suite, seed 42", inequality_suite),
        ("heat semigroup Gaussian transport", gaussian_transport),
        ("parameter system witness (5, 2, 2, 5)", parameter_witness),
        ("decay rate of the borderline witness", decay_rate),
        ("Picard contraction at small data", contraction),
        ("small-time limit exponent", small_time_limit),
        ("logarithmic threshold constant", eta),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {}: {} | {name} | {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
