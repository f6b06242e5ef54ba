//! Exponent bookkeeping: the decay rate `σ`, the dimensional case split,
//! admissible ranges for `a`, the interpolation parameter system
//! `(r, q, θ_k, ρ_k)`, the θ-windows and the constant `η`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{log_beta, log_gamma};

/// Guard band for comparisons against critical values.
pub const GUARD: f64 = 1e-12;
/// Default number of series indices `k` checked.
pub const K_MAX: usize = 50;
/// Largest denominator of the rational lattice for `r`.
pub const MAX_DENOMINATOR: u32 = 64;

/// `σ = 1/(m-1) - N/(2a)`; requires `a > N(m-1)/2`.
pub fn sigma_of(n: usize, m: f64, a: f64) -> Result<f64> {
    if !(m > 1.0) {
        return Err(domain(format!("σ needs m > 1, got {m}")));
    }
    let lo = n as f64 * (m - 1.0) / 2.0;
    if !(a > lo) {
        return Err(domain(format!(
            "σ > 0 needs a > N(m-1)/2 = {lo}, got a = {a}"
        )));
    }
    if a == f64::INFINITY {
        return Ok(1.0 / (m - 1.0));
    }
    Ok(1.0 / (m - 1.0) - n as f64 / (2.0 * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// `N > 2p/(p-1)`
    Supercritical,
    /// `N = 2p/(p-1)`
    Critical,
    /// `N < 2p/(p-1)`
    Subcritical,
}

pub fn critical_dimension(p: f64) -> f64 {
    2.0 * p / (p - 1.0)
}

pub fn classify_case(n: usize, p: f64) -> Result<Case> {
    if !(p > 1.0) {
        return Err(domain(format!("case split needs p > 1, got {p}")));
    }
    let d = n as f64 - critical_dimension(p);
    Ok(if d > GUARD {
        Case::Supercritical
    } else if d < -GUARD {
        Case::Subcritical
    } else {
        Case::Critical
    })
}

/// `p` for which `N = 2p/(p-1)`, i.e. `p = N/(N-2)`.
pub fn critical_p(n: usize) -> Result<f64> {
    if n <= 2 {
        return Err(domain(format!("no finite critical p for N = {n}")));
    }
    Ok(n as f64 / (n as f64 - 2.0))
}

/// Which lower bound on `a` is binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    /// `N(m-1)/2`
    Scaling,
    /// `p(m-1)/(p-1)`
    Orlicz,
    /// `m`
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRange {
    pub case: Case,
    pub lo: f64,
    /// `None` when the range is unbounded above.
    pub hi: Option<f64>,
    pub active_lower: LowerBound,
}

impl AdmissibleRange {
    pub fn contains(&self, a: f64) -> bool {
        a > self.lo && self.hi.is_none_or(|hi| a < hi)
    }
}

impl std::fmt::Display for AdmissibleRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.hi {
            Some(hi) => write!(f, "({}, {})", self.lo, hi),
            None => write!(f, "({}, ∞)", self.lo),
        }
    }
}

/// Open interval of exponents `a` covered by the global existence result.
///
/// Cases `N >= 2p/(p-1)`: `N(m-1)/2 < a < N(m-1)/(2(2-m)_+)`.
/// Case `N < 2p/(p-1)`: the lower end is the largest of `p(m-1)/(p-1)`,
/// `N(m-1)/2` and `m`, and the gate `(2-m)_+ < N(p-1)/(2p)` must hold.
pub fn admissible_a_range(n: usize, p: f64, m: f64) -> Result<AdmissibleRange> {
    if !(m > 1.0) {
        return Err(domain(format!("need m > 1, got {m}")));
    }
    let case = classify_case(n, p)?;
    let nf = n as f64;
    let scaling = nf * (m - 1.0) / 2.0;
    if scaling < p - GUARD {
        return Err(domain(format!("need N(m-1)/2 >= p, got {scaling} < {p}")));
    }
    let deficit = (2.0 - m).max(0.0);
    let hi = (deficit > 0.0).then(|| scaling / deficit);
    let (lo, active_lower) = match case {
        Case::Supercritical | Case::Critical => (scaling, LowerBound::Scaling),
        Case::Subcritical => {
            let gate = nf * (p - 1.0) / (2.0 * p);
            if !(deficit < gate) {
                return Err(Error::NoAdmissibleExponent(format!(
                    "(2-m)+ = {deficit} is not below N(p-1)/(2p) = {gate}"
                )));
            }
            let orlicz = p * (m - 1.0) / (p - 1.0);
            [
                (orlicz, LowerBound::Orlicz),
                (scaling, LowerBound::Scaling),
                (m, LowerBound::Power),
            ]
            .into_iter()
            .fold((f64::NEG_INFINITY, LowerBound::Orlicz), |best, c| {
                if c.0 > best.0 {
                    c
                } else {
                    best
                }
            })
        }
    };
    if let Some(hi) = hi {
        if !(hi > lo) {
            return Err(Error::NoAdmissibleExponent(format!(
                "empty range ({lo}, {hi})"
            )));
        }
    }
    Ok(AdmissibleRange {
        case,
        lo,
        hi,
        active_lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemExponents {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub a: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl ProblemExponents {
    pub fn new(n: usize, p: f64, m: f64, a: f64, lambda: f64) -> Result<Self> {
        if !(m >= p && p > 1.0) {
            return Err(domain(format!("need m >= p > 1, got m = {m}, p = {p}")));
        }
        if !(lambda > 0.0) {
            return Err(domain(format!("need λ > 0, got {lambda}")));
        }
        let range = admissible_a_range(n, p, m)?;
        if !range.contains(a) {
            return Err(domain(format!(
                "a = {a} lies outside the admissible range {range}"
            )));
        }
        let sigma = sigma_of(n, m, a)?;
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(domain(format!("σ = {sigma} is not in (0, 1)")));
        }
        Ok(Self {
            n,
            p,
            m,
            a,
            sigma,
            lambda,
        })
    }
}

/// One constraint of the interpolation parameter system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `1 <= r <= a`
    RRange,
    /// `q >= 1` with `1/r = 1/a + 1/q`
    QRange,
    /// `(N/2)(1/r - 1/a) < 1`
    TimeExponent,
    /// `σ (θ_k P_k + 1) < 1`
    BetaArgument,
    /// `1 - (N/2)(1/r - 1/a) - σ θ_k P_k = 0`
    Equality,
    /// `0 < θ_k < 1`
    ThetaRange,
    /// `1/(q P_k) = θ_k/a + (1 - θ_k)/ρ_k`
    Interpolation,
    /// `p <= ρ_k < ∞`
    RhoRange,
    /// `P_k (1 - θ_k)(1 + ρ_k)/(p ρ_k) <= k` for `k >= 1`
    Behav3,
}

impl Constraint {
    pub const ALL: [Constraint; 9] = [
        Constraint::RRange,
        Constraint::QRange,
        Constraint::TimeExponent,
        Constraint::BetaArgument,
        Constraint::Equality,
        Constraint::ThetaRange,
        Constraint::Interpolation,
        Constraint::RhoRange,
        Constraint::Behav3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::RRange => "r_range",
            Constraint::QRange => "q_range",
            Constraint::TimeExponent => "time_exponent",
            Constraint::BetaArgument => "beta_argument",
            Constraint::Equality => "equality",
            Constraint::ThetaRange => "theta_range",
            Constraint::Interpolation => "interpolation",
            Constraint::RhoRange => "rho_range",
            Constraint::Behav3 => "behav3",
        }
    }
}

/// Parameters for one series index `k`, with the violation of each
/// constraint (`<= 0` means satisfied).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSolution {
    pub k: usize,
    pub r: f64,
    pub q: f64,
    pub theta_k: f64,
    pub rho_k: f64,
    pub violations: Vec<(Constraint, f64)>,
}

/// Residual tolerance for the two identities.
const IDENTITY_TOL: f64 = 1e-12;

impl ParamSolution {
    pub fn flag(&self, c: Constraint) -> bool {
        self.violations
            .iter()
            .find(|(k, _)| *k == c)
            .is_none_or(|&(_, v)| v <= 0.0)
    }

    pub fn all_satisfied(&self) -> bool {
        self.violations.iter().all(|&(_, v)| v <= 0.0)
    }

    /// The most violated constraint.
    pub fn worst(&self) -> (Constraint, f64) {
        self.violations
            .iter()
            .copied()
            .fold((Constraint::RRange, f64::NEG_INFINITY), |best, c| {
                if c.1 > best.1 {
                    c
                } else {
                    best
                }
            })
    }
}

/// Evaluates the parameter system at a given `r` for `k = 0..=k_max`.
pub fn evaluate_parameter_system(
    n: usize,
    p: f64,
    m: f64,
    a: f64,
    r: f64,
    k_max: usize,
) -> Result<Vec<ParamSolution>> {
    let sigma = sigma_of(n, m, a)?;
    if !(r > 0.0) {
        return Err(domain(format!("need r > 0, got {r}")));
    }
    let nf = n as f64;
    let inv_q = 1.0 / r - 1.0 / a;
    let q = 1.0 / inv_q;
    let x = 0.5 * nf * inv_q;
    let c = (1.0 - x) / sigma;
    Ok((0..=k_max)
        .map(|k| {
            let pk = p * k as f64 + m - 1.0;
            let theta = c / pk;
            let denom = inv_q / pk - theta / a;
            let rho = (1.0 - theta) / denom;
            let mut v = Vec::with_capacity(Constraint::ALL.len());
            v.push((Constraint::RRange, (1.0 - r).max(r - a)));
            v.push((
                Constraint::QRange,
                if inv_q > 0.0 { 1.0 - q } else { f64::INFINITY },
            ));
            v.push((Constraint::TimeExponent, x - 1.0 + GUARD));
            v.push((
                Constraint::BetaArgument,
                sigma * (theta * pk + 1.0) - 1.0 + GUARD,
            ));
            let eq = 1.0 - x - sigma * theta * pk;
            v.push((Constraint::Equality, eq.abs() - IDENTITY_TOL));
            v.push((
                Constraint::ThetaRange,
                (GUARD - theta).max(theta - 1.0 + GUARD),
            ));
            let interp = if denom > 0.0 && rho.is_finite() {
                (inv_q / pk - theta / a - (1.0 - theta) / rho).abs() - IDENTITY_TOL
            } else {
                f64::INFINITY
            };
            v.push((Constraint::Interpolation, interp));
            let rho_v = if denom > 0.0 && rho.is_finite() {
                p - rho
            } else {
                f64::INFINITY
            };
            v.push((Constraint::RhoRange, rho_v));
            let behav3 = if k >= 1 {
                pk * (1.0 - theta) * (1.0 + rho) / (p * rho) - k as f64
            } else {
                f64::NEG_INFINITY
            };
            v.push((Constraint::Behav3, behav3));
            ParamSolution {
                k,
                r,
                q,
                theta_k: theta,
                rho_k: rho,
                violations: v,
            }
        })
        .collect())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rational candidates `r = num/den`, `den <= MAX_DENOMINATOR`, inside the band
/// `σ < (N/2)(1/r - 1/a) < 1` with `1 <= r < a`, in increasing order.
pub fn r_lattice(n: usize, m: f64, a: f64) -> Result<Vec<f64>> {
    let sigma = sigma_of(n, m, a)?;
    let nf = n as f64;
    // Band in 1/r.
    let inv_lo = 1.0 / a + 2.0 * sigma / nf;
    let inv_hi = (1.0 / a + 2.0 / nf).min(1.0);
    let (r_lo, r_hi) = (1.0 / inv_hi, (1.0 / inv_lo).min(a));
    let mut out = Vec::new();
    for den in 1..=MAX_DENOMINATOR {
        let first = (r_lo * den as f64).floor().max(1.0) as u32;
        let last = (r_hi * den as f64).ceil() as u32;
        for num in first..=last {
            if gcd(num, den) != 1 {
                continue;
            }
            let r = num as f64 / den as f64;
            let x = 0.5 * nf * (1.0 / r - 1.0 / a);
            if r >= 1.0 && r < a && x > sigma && x < 1.0 {
                out.push(r);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Searches the `r` lattice for a point satisfying every constraint for
/// `k = 0..=k_max`. Requires `N > 2p/(p-1)` and `a` admissible.
///
/// On failure the error names the constraint of the best candidate with the
/// largest violation.
pub fn solve_parameter_system(
    n: usize,
    p: f64,
    m: f64,
    a: f64,
    k_max: usize,
) -> Result<Vec<ParamSolution>> {
    best_parameter_solution(n, p, m, a, k_max).and_then(|(sols, worst)| {
        if worst.1 <= 0.0 {
            Ok(sols)
        } else {
            Err(Error::Infeasible {
                constraint: worst.0,
                violation: worst.1,
                r: sols[0].r,
            })
        }
    })
}

/// The first fully feasible lattice point, or else the candidate with the
/// smallest worst violation, together with that worst `(constraint, violation)`.
pub fn best_parameter_solution(
    n: usize,
    p: f64,
    m: f64,
    a: f64,
    k_max: usize,
) -> Result<(Vec<ParamSolution>, (Constraint, f64))> {
    if classify_case(n, p)? != Case::Supercritical {
        return Err(domain(format!(
            "parameter system needs N > 2p/(p-1), got N = {n}, p = {p}"
        )));
    }
    if !(m >= p) {
        return Err(domain(format!("need m >= p, got m = {m}, p = {p}")));
    }
    let range = admissible_a_range(n, p, m)?;
    if !range.contains(a) {
        return Err(domain(format!(
            "a = {a} lies outside the admissible range {range}"
        )));
    }
    let lattice = r_lattice(n, m, a)?;
    let mut best: Option<(Vec<ParamSolution>, (Constraint, f64))> = None;
    for r in lattice {
        let sols = evaluate_parameter_system(n, p, m, a, r, k_max)?;
        let worst = sols.iter().map(ParamSolution::worst).fold(
            (Constraint::RRange, f64::NEG_INFINITY),
            |b, c| if c.1 > b.1 { c } else { b },
        );
        if worst.1 <= 0.0 {
            return Ok((sols, worst));
        }
        if best.as_ref().is_none_or(|b| worst.1 < b.1 .1) {
            best = Some((sols, worst));
        }
    }
    best.ok_or_else(|| Error::NoAdmissibleExponent("the r band contains no lattice point".into()))
}

/// `max_{1<=k<=K} (Γ(ρ_k/p + 1)^{P_k(1-θ_k)/ρ_k} / k!)^{1/k}`.
pub fn gamma_growth_constant(solutions: &[ParamSolution], p: f64, m: f64) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for s in solutions.iter().filter(|s| s.k >= 1) {
        let pk = p * s.k as f64 + m - 1.0;
        let exponent = pk * (1.0 - s.theta_k) / s.rho_k;
        let log_ratio = exponent * log_gamma(s.rho_k / p + 1.0)? - log_gamma(s.k as f64 + 1.0)?;
        best = best.max(log_ratio / s.k as f64);
    }
    if best == f64::NEG_INFINITY {
        return Err(domain("growth constant needs at least one k >= 1"));
    }
    Ok(best.exp())
}

/// `B(1 - (N/2)(1/r - 1/a), 1 - σ(1 + P_k θ_k))` for one solution.
pub fn beta_bound(n: usize, m: f64, a: f64, p: f64, s: &ParamSolution) -> Result<f64> {
    let sigma = sigma_of(n, m, a)?;
    let x = 0.5 * n as f64 * (1.0 / s.r - 1.0 / a);
    let pk = p * s.k as f64 + m - 1.0;
    Ok(log_beta(1.0 - x, 1.0 - sigma * (1.0 + pk * s.theta_k))?.exp())
}

/// Text table `k, r, q, θ_k, ρ_k` followed by one boolean column per constraint.
pub fn format_table(solutions: &[ParamSolution]) -> String {
    let mut out = String::from("k,r,q,theta_k,rho_k");
    for c in Constraint::ALL {
        out.push(',');
        out.push_str(c.name());
    }
    out.push('\n');
    for s in solutions {
        let _ = write!(out, "{},{},{},{},{}", s.k, s.r, s.q, s.theta_k, s.rho_k);
        for c in Constraint::ALL {
            let _ = write!(out, ",{}", s.flag(c));
        }
        out.push('\n');
    }
    out
}

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

fn window(lo: f64, hi: f64) -> Result<Window> {
    if lo < hi {
        Ok(Window { lo, hi })
    } else {
        Err(Error::EmptyWindow { lo, hi })
    }
}

/// Window `(1 - N(p-1)/(2p))/((pk+m)σ) < θ_k < (m-1)/(pk+m)` for the
/// `exp L^p` estimate when `N <= 2p/(p-1)`.
pub fn theta_window_subcritical(n: usize, p: f64, m: f64, sigma: f64, k: usize) -> Result<Window> {
    if classify_case(n, p)? == Case::Supercritical {
        return Err(domain(format!(
            "window needs N <= 2p/(p-1), got N = {n}, p = {p}"
        )));
    }
    if !(sigma > 0.0) {
        return Err(domain(format!("need σ > 0, got {sigma}")));
    }
    let gate = n as f64 * (p - 1.0) / (2.0 * p);
    let deficit = (2.0 - m).max(0.0);
    if !(deficit < gate) {
        return Err(Error::NoAdmissibleExponent(format!(
            "(2-m)+ = {deficit} is not below N(p-1)/(2p) = {gate}"
        )));
    }
    let pk = p * k as f64 + m;
    window((1.0 - gate) / (pk * sigma), (m - 1.0) / pk)
}

/// Window `(N/(2a) + 1 - N/2)/((pk+m-1)σ) < θ_k < min(m-1, (1-σ)/σ)/(pk+m-1)`
/// for the contraction estimate.
pub fn theta_window_contraction(n: usize, p: f64, m: f64, a: f64, k: usize) -> Result<Window> {
    let sigma = sigma_of(n, m, a)?;
    let nf = n as f64;
    let pk = p * k as f64 + m - 1.0;
    let lo = (nf / (2.0 * a) + 1.0 - nf / 2.0) / (pk * sigma);
    let hi = (m - 1.0).min((1.0 - sigma) / sigma) / pk;
    window(lo, hi)
}

/// `η = inf{z >= 1 : z > 2 ln(1 + z)}`, the positive root of `z = 2 ln(1 + z)`.
pub fn eta_constant() -> f64 {
    let g = |z: f64| z - 2.0 * z.ln_1p();
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Margin of `(ln((t-s)^{-N/2} + 1))^{-1/p} <= 2^{1/p} (t-s)^{N/(2p)}`
/// for `0 <= s <= t - η^{-2/N}`.
pub fn check_log_inequality(t: f64, s: f64, n: usize, p: f64) -> Result<f64> {
    if !(p > 1.0) || n == 0 {
        return Err(domain(format!(
            "need p > 1 and N >= 1, got p = {p}, N = {n}"
        )));
    }
    let nf = n as f64;
    let gap = t - s;
    let threshold = eta_constant().powf(-2.0 / nf);
    if !(s >= 0.0) || !(gap >= threshold * (1.0 - 1e-12)) {
        return Err(domain(format!(
            "need 0 <= s <= t - η^(-2/N) = {}, got s = {s}, t = {t}",
            t - threshold
        )));
    }
    let lhs = gap.powf(-0.5 * nf).ln_1p().powf(-1.0 / p);
    let rhs = 2f64.powf(1.0 / p) * gap.powf(0.5 * nf / p);
    Ok(rhs - lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sigma_examples() {
        assert_relative_eq!(sigma_of(1, 5.0, 10.0).unwrap(), 0.2, max_relative = 1e-15);
        assert_relative_eq!(sigma_of(5, 2.0, 5.0).unwrap(), 0.5, max_relative = 1e-15);
        assert_eq!(sigma_of(1, 5.0, f64::INFINITY).unwrap(), 0.25);
        assert!(sigma_of(1, 5.0, 2.0).is_err());
    }

    #[test]
    fn case_examples() {
        assert_eq!(classify_case(4, 2.0).unwrap(), Case::Critical);
        assert_eq!(classify_case(5, 2.0).unwrap(), Case::Supercritical);
        assert_eq!(classify_case(1, 2.0).unwrap(), Case::Subcritical);
        assert_eq!(
            classify_case(3, critical_p(3).unwrap()).unwrap(),
            Case::Critical
        );
    }

    #[test]
    fn range_examples() {
        let r = admissible_a_range(5, 2.0, 2.0).unwrap();
        assert_eq!((r.lo, r.hi, r.case), (2.5, None, Case::Supercritical));
        let r = admissible_a_range(1, 2.0, 5.0).unwrap();
        assert_eq!(
            (r.lo, r.hi, r.active_lower),
            (8.0, None, LowerBound::Orlicz)
        );
        let r = admissible_a_range(5, 2.0, 1.9).unwrap();
        assert_relative_eq!(r.lo, 2.25, max_relative = 1e-15);
        assert_relative_eq!(r.hi.unwrap(), 22.5, max_relative = 1e-12);
    }

    #[test]
    fn subcritical_gate() {
        // N = 3, p = 1.1: gate N(p-1)/(2p) ≈ 0.136 while (2-m)+ = 0.25.
        assert!(matches!(
            admissible_a_range(3, 1.1, 1.75),
            Err(Error::NoAdmissibleExponent(_))
        ));
        let r = admissible_a_range(2, 1.2, 2.2).unwrap();
        assert_eq!(r.case, Case::Subcritical);
    }

    #[test]
    fn check_mode_example() {
        let sols = evaluate_parameter_system(5, 2.0, 2.0, 5.0, 2.0, 0).unwrap();
        let s = &sols[0];
        assert_relative_eq!(s.q, 10.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(s.theta_k, 0.5, max_relative = 1e-14);
        assert_relative_eq!(s.rho_k, 2.5, max_relative = 1e-13);
        assert!(s.all_satisfied(), "{:?}", s.violations);
    }

    #[test]
    fn theta_times_weight_is_constant() {
        let sols = evaluate_parameter_system(5, 2.0, 2.0, 5.0, 2.0, 20).unwrap();
        for s in &sols {
            let pk = 2.0 * s.k as f64 + 1.0;
            assert_relative_eq!(s.theta_k * pk, 0.5, max_relative = 1e-13);
        }
    }

    #[test]
    fn subcritical_window_example() {
        let w = theta_window_subcritical(1, 2.0, 5.0, 0.2, 0).unwrap();
        assert_relative_eq!(w.lo, 0.75, max_relative = 1e-14);
        assert_relative_eq!(w.hi, 0.8, max_relative = 1e-14);
        assert!(theta_window_subcritical(5, 2.0, 5.0, 0.2, 0).is_err());
    }

    #[test]
    fn eta_value() {
        let eta = eta_constant();
        assert!((eta - 2.0 * eta.ln_1p()).abs() <= 1e-10);
        assert!((eta - 2.512_862_417_252_339).abs() < 1e-12);
    }

    #[test]
    fn log_inequality_boundary() {
        for n in 1..=3 {
            let tau = eta_constant().powf(-2.0 / n as f64);
            assert!(check_log_inequality(tau, 0.0, n, 2.0).unwrap() >= -1e-12);
        }
        assert!(check_log_inequality(0.1, 0.0, 1, 2.0).is_err());
    }

    #[test]
    fn table_has_header_and_rows() {
        let sols = evaluate_parameter_system(5, 2.0, 2.0, 5.0, 2.0, 2).unwrap();
        let t = format_table(&sols);
        assert_eq!(t.lines().count(), 4);
        assert!(t.starts_with("k,r,q,theta_k,rho_k,r_range"));
    }
}
