//! Orlicz-space machinery on the periodic grid: modulars, Luxemburg norms,
//! Lebesgue norms and the inequalities relating them.
//!
//! All integrals are Riemann sums `h^N Σ`. The Luxemburg threshold is 1.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::GridFunction;
use crate::par;
use crate::specfun::log_gamma;

/// Relative tolerance on the Luxemburg norm.
pub const TOL_REL: f64 = 1e-10;
/// Slack allowed on `modular(u, ‖u‖) <= 1`.
pub const TOL_MODULAR: f64 = 1e-8;
/// Slack allowed on inequality margins that hold exactly on the grid.
pub const TOL_INEQ: f64 = 1e-7;

/// Exponent `s^p` above which `φ(s)` is treated as infinite.
const OVERFLOW_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YoungVariant {
    /// `φ(s) = e^{s^p} - 1`, the exp L^p Young function.
    Full,
    /// `φ(s) = e^{s^p} - 1 - s^p`.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrliczSpec {
    p: f64,
    variant: YoungVariant,
}

impl OrliczSpec {
    pub fn new(p: f64, variant: YoungVariant) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(domain(format!(
                "Orlicz exponent must satisfy p > 1, got {p}"
            )));
        }
        Ok(Self { p, variant })
    }

    pub fn full(p: f64) -> Result<Self> {
        Self::new(p, YoungVariant::Full)
    }

    pub fn reduced(p: f64) -> Result<Self> {
        Self::new(p, YoungVariant::Reduced)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn variant(&self) -> YoungVariant {
        self.variant
    }

    /// `φ(s)`, or `+∞` once `s^p` exceeds the overflow threshold.
    pub fn phi(&self, s: f64) -> f64 {
        self.phi_and_weight(s).0
    }

    /// `(φ(s), s φ'(s))`.
    fn phi_and_weight(&self, s: f64) -> (f64, f64) {
        if s == 0.0 {
            return (0.0, 0.0);
        }
        let x = s.powf(self.p);
        if x > OVERFLOW_EXPONENT {
            return (f64::INFINITY, f64::INFINITY);
        }
        let em1 = x.exp_m1();
        match self.variant {
            YoungVariant::Full => (em1, self.p * x * (em1 + 1.0)),
            YoungVariant::Reduced => (expm1_minus_x(x), self.p * x * em1),
        }
    }
}

/// `e^x - 1 - x` without cancellation for small `x`.
fn expm1_minus_x(x: f64) -> f64 {
    if x > 0.5 {
        return x.exp_m1() - x;
    }
    let mut term = x * x / 2.0;
    let mut sum = term;
    let mut k = 2.0;
    while term > 1e-18 * sum {
        k += 1.0;
        term *= x / k;
        sum += term;
    }
    sum
}

/// Riemann sum `h^N Σ φ(|u_i| / λ)`. Returns `+∞` when some `φ` overflows;
/// only its comparison with 1 is meaningful then.
pub fn modular(u: &GridFunction, lam: f64, spec: &OrliczSpec) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(domain(format!("modular requires λ > 0, got {lam}")));
    }
    let inv = 1.0 / lam;
    let cell = u.grid().cell_volume();
    Ok(cell * par::sum_by(u.values(), |v| spec.phi(v.abs() * inv)))
}

fn modular_with_slope(u: &GridFunction, mu: f64, spec: &OrliczSpec) -> (f64, f64) {
    let inv = (-mu).exp();
    let cell = u.grid().cell_volume();
    let (m, w) = par::sum2_by(u.values(), |v| spec.phi_and_weight(v.abs() * inv));
    (cell * m, cell * w)
}

/// Luxemburg norm `inf{λ > 0 : modular(u, λ) <= 1}`.
///
/// Safeguarded Newton on `ln modular` as a function of `ln λ`, keeping a
/// bracket `[lo, hi]` with `modular(lo) > 1 >= modular(hi)`. The returned
/// value is the upper end once `hi / lo <= 1 + TOL_REL / 4`, so
/// `modular(result) <= 1` and `modular(result (1 - TOL_REL)) > 1`.
pub fn luxemburg_norm(u: &GridFunction, spec: &OrliczSpec) -> Result<f64> {
    let sup = u.sup_norm();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let width_target = (TOL_REL / 4.0).ln_1p();
    let eval = |mu: f64| modular_with_slope(u, mu, spec);

    // Expand from λ = ‖u‖_∞ until the bracket straddles the threshold.
    let mut mu = sup.ln();
    let (mut m, mut w) = eval(mu);
    let (mut lo, mut hi);
    let (mut m_lo, mut w_lo, mut m_hi, mut w_hi);
    if m > 1.0 {
        lo = mu;
        (m_lo, w_lo) = (m, w);
        loop {
            mu += std::f64::consts::LN_2;
            (m, w) = eval(mu);
            if m <= 1.0 {
                break;
            }
            lo = mu;
            (m_lo, w_lo) = (m, w);
        }
        hi = mu;
        (m_hi, w_hi) = (m, w);
    } else {
        hi = mu;
        (m_hi, w_hi) = (m, w);
        loop {
            mu -= std::f64::consts::LN_2;
            (m, w) = eval(mu);
            if m > 1.0 {
                break;
            }
            hi = mu;
            (m_hi, w_hi) = (m, w);
        }
        lo = mu;
        (m_lo, w_lo) = (m, w);
    }

    let mut stalled = 0;
    for _ in 0..300 {
        let width = hi - lo;
        if width <= width_target {
            break;
        }
        // Newton step from whichever end has the smaller |ln M|.
        let newton = |mu0: f64, m0: f64, w0: f64| -> f64 {
            if m0.is_finite() && m0 > 0.0 && w0 > 0.0 && w0.is_finite() {
                mu0 + m0.ln() * m0 / w0
            } else {
                f64::NAN
            }
        };
        let from_lo = newton(lo, m_lo, w_lo);
        let from_hi = newton(hi, m_hi, w_hi);
        let use_hi = !m_lo.is_finite() || m_hi.ln().abs() < m_lo.ln().abs();
        let (anchor, step) = if use_hi { (hi, from_hi) } else { (lo, from_lo) };
        let mut cand = step;
        if !(cand > lo && cand < hi) || stalled >= 3 {
            cand = 0.5 * (lo + hi);
            stalled = 0;
        }
        if (cand - anchor).abs() < 0.5 * width_target {
            // Converged from one side: close the bracket around the estimate.
            for probe in [cand - 0.25 * width_target, cand + 0.25 * width_target] {
                if probe > lo && probe < hi {
                    let (mp, wp) = eval(probe);
                    if mp > 1.0 {
                        lo = probe;
                        (m_lo, w_lo) = (mp, wp);
                    } else {
                        hi = probe;
                        (m_hi, w_hi) = (mp, wp);
                    }
                }
            }
            if hi - lo > 0.5 * width {
                stalled += 1;
            }
            continue;
        }
        let (mc, wc) = eval(cand);
        if mc > 1.0 {
            lo = cand;
            (m_lo, w_lo) = (mc, wc);
        } else {
            hi = cand;
            (m_hi, w_hi) = (mc, wc);
        }
        if hi - lo > 0.5 * width {
            stalled += 1;
        } else {
            stalled = 0;
        }
    }
    Ok(hi.exp())
}

/// Lebesgue exponent, with a dedicated variant for `q = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl From<f64> for Exponent {
    fn from(q: f64) -> Self {
        if q == f64::INFINITY {
            Exponent::Infinity
        } else {
            Exponent::Finite(q)
        }
    }
}

/// `‖u‖_q = (h^N Σ |u_i|^q)^{1/q}`, or `max |u_i|` for `q = ∞`.
pub fn lp_norm(u: &GridFunction, q: impl Into<Exponent>) -> Result<f64> {
    match q.into() {
        Exponent::Infinity => Ok(u.sup_norm()),
        Exponent::Finite(q) => {
            if !(q >= 1.0) || !q.is_finite() {
                return Err(domain(format!("Lebesgue exponent must be >= 1, got {q}")));
            }
            let sup = u.sup_norm();
            if sup == 0.0 {
                return Ok(0.0);
            }
            // Scale by the sup so large q neither overflows nor underflows.
            let inv = 1.0 / sup;
            let s = par::sum_by(u.values(), |v| (v.abs() * inv).powf(q));
            Ok(sup * (u.grid().cell_volume() * s).powf(1.0 / q))
        }
    }
}

/// Margin of `‖u‖_q <= Γ(q/p + 1)^{1/q} ‖u‖_{exp L^p}` for `1 <= p <= q < ∞`.
pub fn check_exp_embedding(u: &GridFunction, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0 && q >= p && q.is_finite()) {
        return Err(domain(format!("need 1 < p <= q < ∞, got p = {p}, q = {q}")));
    }
    let norm = luxemburg_norm(u, &OrliczSpec::full(p)?)?;
    let constant = (log_gamma(q / p + 1.0)? / q).exp();
    Ok(constant * norm - lp_norm(u, q)?)
}

/// Margin of `‖e^{λ|u|^p} - 1‖_q <= (λ q K^p)^{1/q}` under the hypotheses
/// `‖u‖_{exp L^p} <= K` and `λ q K^p <= 1`.
pub fn check_exp_power_bound(u: &GridFunction, lam: f64, p: f64, q: f64, k: f64) -> Result<f64> {
    if !(lam > 0.0 && p > 1.0 && q >= 1.0 && k > 0.0) {
        return Err(domain(format!(
            "need λ > 0, p > 1, q >= 1, K > 0; got λ = {lam}, p = {p}, q = {q}, K = {k}"
        )));
    }
    let budget = lam * q * k.powf(p);
    if budget > 1.0 {
        return Err(Error::Hypothesis(format!("λ q K^p = {budget} exceeds 1")));
    }
    let norm = luxemburg_norm(u, &OrliczSpec::full(p)?)?;
    if norm > k * (1.0 + TOL_REL) {
        return Err(Error::Hypothesis(format!(
            "‖u‖_exp L^p = {norm} exceeds K = {k}"
        )));
    }
    let excess = u.map(|v| (lam * v.abs().powf(p)).exp_m1())?;
    Ok(budget.powf(1.0 / q) - lp_norm(&excess, q)?)
}

/// `(‖u‖_p + ‖u‖_{L^φ}) / ‖u‖_{exp L^p}` with `φ` the reduced Young function.
pub fn check_equivalence_slim(u: &GridFunction, p: f64) -> Result<f64> {
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let full = luxemburg_norm(u, &OrliczSpec::full(p)?)?;
    let reduced = luxemburg_norm(u, &OrliczSpec::reduced(p)?)?;
    Ok((lp_norm(u, p)? + reduced) / full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use approx::assert_relative_eq;

    fn unit_indicator() -> GridFunction {
        GridFunction::indicator(Grid::new(1, 4.0, 1024).unwrap(), 0.0, 1.0)
    }

    #[test]
    fn modular_of_unit_indicator() {
        let u = unit_indicator();
        let spec = OrliczSpec::full(2.0).unwrap();
        assert_relative_eq!(
            modular(&u, 1.0, &spec).unwrap(),
            std::f64::consts::E - 1.0,
            max_relative = 1e-14
        );
        let lam = 1.0 / 2f64.ln().sqrt();
        assert_relative_eq!(modular(&u, lam, &spec).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn modular_of_zero_and_bad_lambda() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let spec = OrliczSpec::full(2.0).unwrap();
        assert_eq!(modular(&GridFunction::zeros(g), 0.3, &spec).unwrap(), 0.0);
        assert!(modular(&GridFunction::zeros(g), 0.0, &spec).is_err());
    }

    #[test]
    fn modular_overflow_is_infinite() {
        let u = unit_indicator();
        let spec = OrliczSpec::full(2.0).unwrap();
        assert_eq!(modular(&u, 1e-3, &spec).unwrap(), f64::INFINITY);
    }

    #[test]
    fn luxemburg_of_unit_indicator() {
        let u = unit_indicator();
        let spec = OrliczSpec::full(2.0).unwrap();
        let n = luxemburg_norm(&u, &spec).unwrap();
        assert!((n - 1.0 / 2f64.ln().sqrt()).abs() < 1e-9);
    }

    #[test]
    fn luxemburg_postconditions() {
        let g = Grid::new(1, 8.0, 512).unwrap();
        let u = GridFunction::from_fn(g, |x| (-(x[0] * x[0])).exp() * (1.0 + x[0].sin())).unwrap();
        for spec in [
            OrliczSpec::full(2.0).unwrap(),
            OrliczSpec::reduced(3.0).unwrap(),
        ] {
            let n = luxemburg_norm(&u, &spec).unwrap();
            assert!(modular(&u, n, &spec).unwrap() <= 1.0 + TOL_MODULAR);
            assert!(modular(&u, n * (1.0 - TOL_REL), &spec).unwrap() > 1.0);
        }
    }

    #[test]
    fn reduced_phi_small_argument() {
        let spec = OrliczSpec::reduced(2.0).unwrap();
        let s: f64 = 1e-5;
        let x = s * s;
        assert_relative_eq!(
            spec.phi(s),
            x * x / 2.0 * (1.0 + x / 3.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn lp_norm_examples() {
        let u = unit_indicator();
        for q in [1.0, 2.0, 7.5, 40.0] {
            assert_relative_eq!(lp_norm(&u, q).unwrap(), 1.0, max_relative = 1e-13);
        }
        let g = *u.grid();
        assert_eq!(lp_norm(&GridFunction::zeros(g), 3.0).unwrap(), 0.0);
        let ones = GridFunction::constant(g, 1.0).unwrap();
        assert_relative_eq!(lp_norm(&ones, 1.0).unwrap(), 8.0, max_relative = 1e-14);
        assert_eq!(lp_norm(&u, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&u, 0.5).is_err());
    }

    #[test]
    fn embedding_examples() {
        let u = unit_indicator();
        let margin = check_exp_embedding(&u, 2.0, 2.0).unwrap();
        assert!((margin - (1.0 / 2f64.ln().sqrt() - 1.0)).abs() < 1e-9);
        let z = GridFunction::zeros(*u.grid());
        assert_eq!(check_exp_embedding(&z, 2.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn exp_power_bound_hypothesis_and_zero() {
        let u = unit_indicator();
        let k = luxemburg_norm(&u, &OrliczSpec::full(2.0).unwrap()).unwrap();
        assert!(matches!(
            check_exp_power_bound(&u, 1.0, 2.0, 1.0, k),
            Err(Error::Hypothesis(_))
        ));
        let z = GridFunction::zeros(*u.grid());
        let m = check_exp_power_bound(&z, 1.0, 2.0, 2.0, 0.5).unwrap();
        assert_relative_eq!(m, 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn exp_power_bound_at_unit_budget() {
        // Rescale so ‖u‖ = 1; with λ = q = K = 1 the bound is the modular bound.
        let u = unit_indicator();
        let n = luxemburg_norm(&u, &OrliczSpec::full(2.0).unwrap()).unwrap();
        let v = u.scaled(1.0 / n);
        let k = 1.0 + 2.0 * TOL_REL;
        let m = check_exp_power_bound(&v, 1.0 / (k * k), 2.0, 1.0, k).unwrap();
        assert!(m >= -TOL_INEQ, "margin {m}");
    }

    #[test]
    fn slim_ratio_zero_function() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        assert!(matches!(
            check_equivalence_slim(&GridFunction::zeros(g), 2.0),
            Err(Error::ZeroFunction)
        ));
    }
}
