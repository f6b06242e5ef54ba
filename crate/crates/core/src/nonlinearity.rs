//! The power-exponential nonlinearity `f(u) = ±|u|^{m-1} u e^{λ|u|^p}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::GridFunction;
use crate::orlicz::{self, OrliczSpec};
use crate::par;

/// Default bound on `|u|` accepted by [`eval_f`].
pub const U_CAP: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;
    fn try_from(v: i32) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    m: f64,
    p: f64,
    lambda: f64,
    sign: Sign,
    u_cap: f64,
}

impl NonlinearitySpec {
    pub fn new(m: f64, p: f64, lambda: f64, sign: Sign) -> Result<Self> {
        if !(p > 1.0 && m >= p && m.is_finite()) {
            return Err(domain(format!("need m >= p > 1, got m = {m}, p = {p}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("need λ > 0, got {lambda}")));
        }
        Ok(Self {
            m,
            p,
            lambda,
            sign,
            u_cap: U_CAP,
        })
    }

    pub fn with_cap(mut self, u_cap: f64) -> Result<Self> {
        if !(u_cap > 0.0) || !(self.lambda * u_cap.powf(self.p) < 700.0) {
            return Err(domain(format!(
                "cap {u_cap} leaves e^(λ cap^p) unrepresentable"
            )));
        }
        self.u_cap = u_cap;
        Ok(self)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn sign(&self) -> Sign {
        self.sign
    }
    pub fn u_cap(&self) -> f64 {
        self.u_cap
    }

    /// Pointwise `f(s)`.
    pub fn f(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let a = s.abs();
        self.sign.value() * a.powf(self.m - 1.0) * s * (self.lambda * a.powf(self.p)).exp()
    }

    /// Pointwise `f'(s) = ± e^{λ|s|^p} |s|^{m-1} (m + λ p |s|^p)`.
    pub fn f_prime(&self, s: f64) -> f64 {
        if s == 0.0 {
            return if self.m == 1.0 {
                self.sign.value()
            } else {
                0.0
            };
        }
        let a = s.abs();
        let x = self.lambda * a.powf(self.p);
        self.sign.value() * x.exp() * a.powf(self.m - 1.0) * (self.m + self.p * x)
    }

    /// `(f(a) - f(b)) / (a - b)`, or `f'(a)` when `a == b`.
    ///
    /// Close arguments use 3-point Gauss-Legendre on `∫_0^1 f'(b + τ(a - b)) dτ`
    /// to avoid cancellation in the quotient.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        let scale = a.abs().max(b.abs());
        if d == 0.0 {
            return self.f_prime(a);
        }
        if d.abs() > 1e-3 * scale {
            return (self.f(a) - self.f(b)) / d;
        }
        const OFF: f64 = 0.387_298_334_620_741_7; // sqrt(15)/10
        let at = |tau: f64| self.f_prime(b + tau * d);
        (5.0 * at(0.5 - OFF) + 8.0 * at(0.5) + 5.0 * at(0.5 + OFF)) / 18.0
    }

    pub(crate) fn check_cap(&self, u: &GridFunction) -> Result<()> {
        if let Some((index, &v)) = u
            .values()
            .iter()
            .enumerate()
            .find(|(_, v)| v.abs() > self.u_cap)
        {
            return Err(Error::Overflow {
                index,
                value: v.abs(),
            });
        }
        Ok(())
    }
}

/// `f(u)` pointwise. Fails with the offending index if `|u|` exceeds the cap
/// or the result is not finite.
pub fn eval_f(u: &GridFunction, spec: &NonlinearitySpec) -> Result<GridFunction> {
    spec.check_cap(u)?;
    let values = par::map(u.values(), |v| spec.f(v));
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            index,
            value: u.values()[index].abs(),
        });
    }
    GridFunction::new(*u.grid(), values)
}

/// Smallest `C` with `|f(u) - f(v)| <= C |u - v| (|u|^{m-1} e^{λ|u|^p} + |v|^{m-1} e^{λ|v|^p})`
/// at every grid point; points where both sides vanish contribute 0.
pub fn check_lipschitz_envelope(
    u: &GridFunction,
    v: &GridFunction,
    spec: &NonlinearitySpec,
) -> Result<f64> {
    u.check_same_grid(v)?;
    spec.check_cap(u)?;
    spec.check_cap(v)?;
    let weight = |s: f64| s.abs().powf(spec.m - 1.0) * (spec.lambda * s.abs().powf(spec.p)).exp();
    let ratios = par::collect_indexed(u.grid().len(), |i| {
        let (a, b) = (u.values()[i], v.values()[i]);
        let num = (spec.f(a) - spec.f(b)).abs();
        let den = (a - b).abs() * (weight(a) + weight(b));
        if num == 0.0 {
            0.0
        } else if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    });
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Pointwise partial sum `|u - v| Σ_{k<K} λ^k/k! (|u|^{pk+m-1} + |v|^{pk+m-1})`
/// of the series majorant, with unit constant.
pub fn taylor_majorant(
    u: &GridFunction,
    v: &GridFunction,
    spec: &NonlinearitySpec,
    k_terms: usize,
) -> Result<GridFunction> {
    if k_terms == 0 {
        return Err(domain("taylor_majorant needs at least one term"));
    }
    u.check_same_grid(v)?;
    let partial = |s: f64| {
        let a = s.abs();
        if a == 0.0 {
            return 0.0;
        }
        let x = spec.lambda * a.powf(spec.p);
        let mut term = a.powf(spec.m - 1.0);
        let mut sum = term;
        for k in 1..k_terms {
            term *= x / k as f64;
            sum += term;
        }
        sum
    };
    u.zip_with(v, |a, b| (a - b).abs() * (partial(a) + partial(b)))
}

/// Envelope `|u - v| (|u|^{m-1} e^{λ|u|^p} + |v|^{m-1} e^{λ|v|^p})`, the limit of
/// [`taylor_majorant`] as the number of terms grows.
pub fn lipschitz_envelope(
    u: &GridFunction,
    v: &GridFunction,
    spec: &NonlinearitySpec,
) -> Result<GridFunction> {
    let w = |s: f64| {
        let a = s.abs();
        if a == 0.0 {
            0.0
        } else {
            a.powf(spec.m - 1.0) * (spec.lambda * a.powf(spec.p)).exp()
        }
    };
    u.zip_with(v, |a, b| (a - b).abs() * (w(a) + w(b)))
}

/// Upper bound on the series remainder after `k_terms` terms:
/// `‖u - v‖_∞ 2 w^{m-1} x^K/K! e^x` with `w = max(‖u‖_∞, ‖v‖_∞)`, `x = λ w^p`.
pub fn taylor_tail_bound(
    u: &GridFunction,
    v: &GridFunction,
    spec: &NonlinearitySpec,
    k_terms: usize,
) -> Result<f64> {
    u.check_same_grid(v)?;
    let w = u.sup_norm().max(v.sup_norm());
    if w == 0.0 {
        return Ok(0.0);
    }
    let x = spec.lambda * w.powf(spec.p);
    let k = k_terms as f64;
    let log_tail = k * x.ln() - crate::specfun::log_gamma(k + 1.0)? + x;
    Ok(u.sub(v)?.sup_norm() * 2.0 * w.powf(spec.m - 1.0) * log_tail.exp())
}

/// Smallest `C` with `|f(u)| <= C |u|^m (e^{λ|u|^p} - 1) + C |u|^m` pointwise.
pub fn splitting_constant(u: &GridFunction, spec: &NonlinearitySpec) -> Result<f64> {
    spec.check_cap(u)?;
    let ratio = |s: f64| {
        let a = s.abs();
        if a == 0.0 {
            return 0.0;
        }
        let am = a.powf(spec.m);
        let x = spec.lambda * a.powf(spec.p);
        spec.f(s).abs() / (am * x.exp_m1() + am)
    };
    Ok(par::max_by(u.values(), ratio))
}

/// Measured `‖f(u)‖_r / ‖u‖_{exp L^p}^m`, under the hypothesis `2 r λ K^p <= 1`
/// with `K = ‖u‖_{exp L^p}`.
pub fn norm_bound_constant(u: &GridFunction, spec: &NonlinearitySpec, r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(domain(format!("need r >= 1, got {r}")));
    }
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let k = orlicz::luxemburg_norm(u, &OrliczSpec::full(spec.p)?)?;
    let budget = 2.0 * r * spec.lambda * k.powf(spec.p);
    if budget > 1.0 {
        return Err(Error::Hypothesis(format!("2 r λ K^p = {budget} exceeds 1")));
    }
    Ok(orlicz::lp_norm(&eval_f(u, spec)?, r)? / k.powf(spec.m))
}
