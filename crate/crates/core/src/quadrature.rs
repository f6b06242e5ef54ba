//! Double-exponential (tanh-sinh) quadrature.
//!
//! Tolerates integrable endpoint singularities such as `t^{-β}` at 0, which
//! is what the time kernels of the heat estimates look like.

use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub converged: bool,
}

/// `∫_a^b f` by tanh-sinh with successive step halving.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    let half = 0.5 * (b - a);
    let t_max = 3.5;

    // Node at parameter t, with distances to both endpoints computed directly
    // so that points very close to an endpoint keep their precision.
    let eval = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (c * c);
        // 1 - tanh(s) and 1 + tanh(s) without cancellation.
        let e = (-2.0 * s.abs()).exp();
        let near = 2.0 * e / (1.0 + e);
        let (from_a, from_b) = if s >= 0.0 {
            (2.0 - near, near)
        } else {
            (near, 2.0 - near)
        };
        let x = if from_a <= from_b {
            a + half * from_a
        } else {
            b - half * from_b
        };
        if x <= a || x >= b {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            w * fx
        } else {
            0.0
        }
    };

    refine(eval, half, t_max, rel_tol)
}

/// Trapezoid sums of `eval` over `[-t_max, t_max]` with step halving until
/// two successive levels agree to `rel_tol`.
fn refine<E: Fn(f64) -> f64>(eval: E, scale: f64, t_max: f64, rel_tol: f64) -> Quadrature {
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = scale * h * sum;

    for _level in 0..12 {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while k as f64 * h <= t_max {
            add += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        sum += add;
        let next = scale * h * sum;
        let error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Quadrature {
                value: next,
                error,
                converged: true,
            };
        }
    }
    Quadrature {
        value: estimate,
        error: f64::NAN,
        converged: false,
    }
}

/// `∫_a^∞ f` by the exp-sinh rule `x = a + e^{(π/2) sinh t}`.
pub fn tanh_sinh_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Quadrature {
    let eval = |t: f64| -> f64 {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * e;
        let x = a + e;
        if !(x > a) || !x.is_finite() || !w.is_finite() {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            w * fx
        } else {
            0.0
        }
    };
    refine(eval, 1.0, 5.0, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial() {
        let q = tanh_sinh(|x| x * x, 0.0, 3.0, 1e-12);
        assert!(q.converged);
        assert!((q.value - 9.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let q = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, 1e-12);
        assert!(q.converged);
        assert!((q.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite() {
        // ∫_1^∞ t^{-3/2} dt = 2
        let q = tanh_sinh_to_infinity(|t| t.powf(-1.5), 1.0, 1e-12);
        assert!(q.converged, "{q:?}");
        assert!((q.value - 2.0).abs() < 1e-9);
    }
}
