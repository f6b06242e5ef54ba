use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expheat::experiments::output::{svg_loglog, write_json, write_series_csv};
use expheat::experiments::{
    run_decay, run_global_existence, run_inequality_suite, run_small_time_limit, DecayReport,
    ExistenceReport, ExperimentConfig, LimitReport, SuiteReport, SuiteSizes,
};
use expheat::orlicz::{lp_norm, luxemburg_norm, Exponent, OrliczSpec};
use expheat::params::{
    admissible_a_range, best_parameter_solution, classify_case, format_table,
    gamma_growth_constant, sigma_of, K_MAX,
};
use expheat::solver::write_trajectory_csv;
use expheat::Error;
use log::info;
use serde_json::{json, Value};

const PRECEDENCE: &str = "\
Configuration precedence (later wins):
  1. built-in defaults
  2. the JSON file given by --config
  3. --set key=value overrides, in order
  4. --seed and --out

Exit codes: 0 all assertions pass, 1 an assertion or computation failed,
2 invalid invocation or configuration (the failing key is named).";

#[derive(Parser, Debug)]
#[command(name = "expheat", version, about = "Exponential-nonlinearity heat equation laboratory", after_help = PRECEDENCE)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment config (flat, snake_case keys).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV, SVG and JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed override for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config override `key=value`; the value is parsed as JSON, else taken as a string.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// More logging on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Luxemburg and Lebesgue norms of a serialized grid function.
    Norm {
        /// Grid function file (CSV `dim,n,L` layout or binary).
        file: PathBuf,
        /// Orlicz exponent p of exp L^p.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Lebesgue exponents to report; `inf` for the sup norm.
        #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
        q: Vec<String>,
    },
    /// Admissible range of a, σ, the dimensional case and the parameter table.
    Params {
        /// Space dimension.
        #[arg(long = "N")]
        n: usize,
        /// Orlicz exponent.
        #[arg(long)]
        p: f64,
        /// Power of the nonlinearity near zero.
        #[arg(long)]
        m: f64,
        /// Lebesgue exponent of the decay norm.
        #[arg(long)]
        a: Option<f64>,
        /// Largest k in the parameter table.
        #[arg(long, default_value_t = K_MAX)]
        k_max: usize,
    },
    /// Inequality regression suite over the seeded corpus.
    Verify,
    /// Global existence: Picard iteration in the weighted ball.
    Solve,
    /// Decay-rate measurement.
    Decay,
    /// Small-time limit of the Duhamel term.
    Limit,
    /// verify, solve, decay and limit in sequence.
    Suite,
}

/// Failure categories mapped to exit codes.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut doc = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| Failure::Usage(format!("invalid JSON in {}: {e}", path.display())))?
        }
        None => json!({}),
    };
    let Value::Object(map) = &mut doc else {
        return Err(Failure::Usage("config root must be a JSON object".into()));
    };
    for item in &common.overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects key=value, got `{item}`")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
        map.insert(key.trim().to_string(), value);
    }
    if let Some(seed) = common.seed {
        map.insert("seed".into(), json!(seed));
    }
    if let Some(out) = &common.out {
        map.insert("output".into(), json!(out.to_string_lossy()));
    }
    let config = ExperimentConfig::from_value(doc)?;
    config.validate()?;
    Ok(config)
}

fn out_dir(config: &ExperimentConfig) -> Result<PathBuf, Failure> {
    let dir = PathBuf::from(
        config
            .output
            .clone()
            .unwrap_or_else(|| "expheat-out".into()),
    );
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn summary(command: &str, config: &ExperimentConfig, report: Value, pass: bool) -> Value {
    json!({
        "command": command,
        "config_hash": config.hash(),
        "seed": config.seed,
        "config": ExperimentConfig { output: None, ..config.clone() },
        "report": report,
        "pass": pass,
    })
}

const TRAJECTORY_UNITS: &str =
    "t in diffusion time (unit diffusivity); norms in units of u, integrals as Riemann sums with cell volume h^N";

fn write_trajectory(
    dir: &Path,
    name: &str,
    config: &ExperimentConfig,
    rows: &[expheat::solver::TrajectoryRow],
) -> Result<(), Failure> {
    let file = fs::File::create(dir.join(format!("{name}.csv")))?;
    write_trajectory_csv(rows, &config.csv_header(TRAJECTORY_UNITS), file)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.norm_a)).collect();
    let title = format!("{name}: ||u(t)||_{} against t", config.a);
    fs::write(
        dir.join(format!("{name}.svg")),
        svg_loglog(&title, "||u(t)||_a", &pts),
    )?;
    Ok(())
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn do_decay(config: &ExperimentConfig, dir: &Path) -> Result<DecayReport, Failure> {
    info!("decay: running {:?} scheme", config.scheme);
    let report = run_decay(config)?;
    write_trajectory(dir, "decay", config, &report.rows)?;
    let s = summary("decay", config, serde_json::to_value(&report)?, report.pass);
    write_json(&s, &dir.join("decay_summary.json"))?;
    println!(
        "decay: slope {} (target {}), window [{}, {}], sup t^sigma ||u||_a = {}, pass = {}",
        report
            .fitted_slope
            .map_or("n/a".into(), |s| format!("{s:.6}")),
        report.target,
        report.window.0,
        report.window.1,
        report.max_weighted_norm,
        report.pass
    );
    Ok(report)
}

fn do_solve(config: &ExperimentConfig, dir: &Path) -> Result<ExistenceReport, Failure> {
    info!("solve: Picard iteration at epsilon = {}", config.epsilon);
    let report = run_global_existence(config)?;
    if !report.rows.is_empty() {
        write_trajectory(dir, "solve", config, &report.rows)?;
    }
    let s = summary("solve", config, serde_json::to_value(&report)?, report.pass);
    write_json(&s, &dir.join("solve_summary.json"))?;
    if report.smallness_violated {
        println!(
            "solve: smallness violated ({}); largest passing epsilon {}",
            report.failure.as_deref().unwrap_or("unknown"),
            report.largest_passing_epsilon.unwrap_or(0.0)
        );
    } else {
        println!(
            "solve: converged in {} iterations, contraction ratio {:e}, member of Y_M = {}",
            report.distances.len(),
            report.contraction_ratio,
            report.ym.is_some_and(|y| y.member)
        );
    }
    Ok(report)
}

fn do_limit(config: &ExperimentConfig, dir: &Path) -> Result<LimitReport, Failure> {
    info!(
        "limit: geometric nodes in [{}, {}]",
        config.limit_t_min, config.limit_t_max
    );
    let report = run_small_time_limit(config)?;
    let rows: Vec<Vec<f64>> = report
        .times
        .iter()
        .zip(&report.differences)
        .map(|(t, d)| vec![*t, *d])
        .collect();
    let file = fs::File::create(dir.join("limit.csv"))?;
    write_series_csv(
        &config.csv_header(
            "t in diffusion time; difference is the exp L^p Luxemburg norm, units of u",
        ),
        &["t", "norm_exp_lp_difference"],
        &rows,
        file,
    )?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    fs::write(
        dir.join("limit.svg"),
        svg_loglog("||u(t) - e^{tΔ}u0||_exp against t", "difference", &pts),
    )?;
    let s = summary("limit", config, serde_json::to_value(&report)?, report.pass);
    write_json(&s, &dir.join("limit_summary.json"))?;
    println!(
        "limit: exponent {} (threshold {}), pass = {}",
        report.exponent.map_or("n/a".into(), |e| format!("{e:.6}")),
        report.threshold,
        report.pass
    );
    Ok(report)
}

fn do_verify(config: &ExperimentConfig, dir: &Path) -> Result<SuiteReport, Failure> {
    let sizes = SuiteSizes {
        corpus: config.corpus_size,
        n1: config.corpus_n1,
        n3: config.corpus_n3,
    };
    info!(
        "verify: corpus of {} functions from seed {}",
        sizes.corpus, config.seed
    );
    let report = run_inequality_suite(config.seed, sizes)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let mut csv = String::new();
    for (k, v) in config.csv_header("margins are dimensionless: (rhs - lhs) / scale") {
        csv.push_str(&format!("# {k}={v}\n"));
    }
    csv.push_str("inequality,checks,worst_margin,tolerance,pass,worst_case\n");
    for e in &report.entries {
        csv.push_str(&format!(
            "{},{},{},{},{},\"{}\"\n",
            e.name, e.checks, e.worst_margin, e.tolerance, e.pass, e.worst_case
        ));
        println!(
            "verify: {:<34} checks {:>6}  worst margin {:>12.4e}  tol {:.0e}  {}",
            e.name,
            e.checks,
            e.worst_margin,
            e.tolerance,
            if e.pass { "ok" } else { "FAIL" }
        );
    }
    fs::write(dir.join("verify.csv"), csv)?;
    let s = summary(
        "verify",
        config,
        serde_json::to_value(&report)?,
        report.pass,
    );
    write_json(&s, &dir.join("verify_summary.json"))?;
    Ok(report)
}

fn do_norm(file: &Path, p: f64, qs: &[String]) -> Result<bool, Failure> {
    let u =
        expheat::io::load(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let spec = OrliczSpec::full(p).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("luxemburg_norm exp_L^{p} = {}", luxemburg_norm(&u, &spec)?);
    for q in qs {
        let exponent = match q.trim() {
            "inf" | "infinity" => Exponent::Infinity,
            s => Exponent::Finite(
                s.parse()
                    .map_err(|_| Failure::Usage(format!("invalid --q value `{s}`")))?,
            ),
        };
        println!("lp_norm L^{} = {}", q.trim(), lp_norm(&u, exponent)?);
    }
    Ok(true)
}

fn do_params(n: usize, p: f64, m: f64, a: Option<f64>, k_max: usize) -> Result<bool, Failure> {
    let case = classify_case(n, p).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("case: {case:?}");
    let range = match admissible_a_range(n, p, m) {
        Ok(range) => range,
        Err(Error::NoAdmissibleExponent(msg)) => {
            println!("admissible a: empty ({msg})");
            return Ok(true);
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    println!(
        "admissible a: {range} (active lower bound {:?})",
        range.active_lower
    );
    let Some(a) = a else {
        return Ok(true);
    };
    println!("a = {a} admissible: {}", range.contains(a));
    println!(
        "sigma = {}",
        sigma_of(n, m, a).map_err(|e| Failure::Usage(e.to_string()))?
    );
    let (sols, worst) = match best_parameter_solution(n, p, m, a, k_max) {
        Ok(found) => found,
        Err(e) => {
            println!("parameter table unavailable: {e}");
            return Ok(true);
        }
    };
    print!("{}", format_table(&sols));
    if worst.1 <= 0.0 {
        println!("feasible at r = {}", sols[0].r);
    } else {
        println!(
            "no fully feasible lattice point; best r = {}, tightest constraint {} violated by {:e}",
            sols[0].r,
            worst.0.name(),
            worst.1
        );
    }
    println!("growth constant = {}", gamma_growth_constant(&sols, p, m)?);
    Ok(true)
}

fn dispatch(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Norm { file, p, q } => do_norm(file, *p, q),
        Command::Params { n, p, m, a, k_max } => do_params(*n, *p, *m, *a, *k_max),
        other => {
            let config = load_config(&cli.common)?;
            let dir = out_dir(&config)?;
            match other {
                Command::Verify => Ok(do_verify(&config, &dir)?.pass),
                Command::Solve => Ok(do_solve(&config, &dir)?.pass),
                Command::Decay => Ok(do_decay(&config, &dir)?.pass),
                Command::Limit => Ok(do_limit(&config, &dir)?.pass),
                Command::Suite => {
                    let verify = do_verify(&config, &dir)?.pass;
                    let solve = do_solve(&config, &dir)?.pass;
                    let decay = do_decay(&config, &dir)?.pass;
                    let limit = do_limit(&config, &dir)?.pass;
                    let pass = verify && solve && decay && limit;
                    let report = json!({
                        "verify": verify, "solve": solve, "decay": decay, "limit": limit,
                    });
                    write_json(
                        &summary("suite", &config, report, pass),
                        &dir.join("summary.json"),
                    )?;
                    println!("suite: pass = {pass}");
                    Ok(pass)
                }
                Command::Norm { .. } | Command::Params { .. } => unreachable!(),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("expheat: one or more assertions failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("expheat: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("expheat: {msg}");
            ExitCode::from(1)
        }
    }
}
