//! Spectral heat semigroup on the periodic box and the smoothing estimates
//! built on it.
//!
//! `e^{tΔ}` is applied as forward FFT, multiplication by `e^{-t|ξ|²}` with
//! `ξ = πk/L`, inverse FFT. On `[-L, L]^N` this is exact for the periodic
//! problem; it matches the free-space flow while `t <= (L/4)²` and the data
//! sit in the inner half of the box.

use std::f64::consts::LN_2;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Result};
use crate::grid::{Grid, GridFunction};
use crate::orlicz::{self, lp_norm, Exponent, OrliczSpec};
use crate::par;

/// Relative slack for comparisons between the periodic and free-space flows.
pub const PERIODIC_SLACK: f64 = 0.02;

/// Fourier coefficients of a grid function (unnormalized DFT, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    data: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.data
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, c: f64, other: &Spectrum) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }
}

/// FFT plans and the squared frequency lattice for one grid.
pub struct SemigroupPlan {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `ξ_i² = (π k_i / L)²` along one axis, in FFT order.
    xi2: Vec<f64>,
}

impl std::fmt::Debug for SemigroupPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SemigroupPlan")
            .field("grid", &self.grid)
            .finish()
    }
}

impl SemigroupPlan {
    pub fn new(grid: Grid) -> Self {
        let n = grid.points_per_axis();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = std::f64::consts::PI / grid.half_width();
        let xi2 = (0..n)
            .map(|i| {
                let k = if i <= n / 2 {
                    i as f64
                } else {
                    i as f64 - n as f64
                };
                (scale * k).powi(2)
            })
            .collect();
        Self {
            grid,
            forward,
            inverse,
            xi2,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Largest `|ξ|²` on the lattice.
    pub fn max_xi2(&self) -> f64 {
        self.xi2.iter().copied().fold(0.0, f64::max) * self.grid.dim() as f64
    }

    pub fn forward(&self, u: &GridFunction) -> Result<Spectrum> {
        self.check_grid(u.grid())?;
        let mut data: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        Ok(Spectrum {
            grid: self.grid,
            data,
        })
    }

    /// Inverse transform; the imaginary residue is dropped.
    pub fn inverse(&self, s: &Spectrum) -> Result<GridFunction> {
        self.check_grid(&s.grid)?;
        let mut data = s.data.clone();
        self.transform(&mut data, &self.inverse);
        let norm = 1.0 / self.grid.len() as f64;
        let values: Vec<f64> = data.iter().map(|c| c.re * norm).collect();
        debug_assert!({
            let scale = values.iter().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
            data.iter()
                .all(|c| (c.im * norm).abs() <= 1e-12 * scale.max(1.0))
        });
        GridFunction::new(self.grid, values)
    }

    /// Multiplies by `e^{-t|ξ|²}`.
    pub fn decay(&self, s: &Spectrum, t: f64) -> Result<Spectrum> {
        let mut out = s.clone();
        self.decay_in_place(&mut out, t)?;
        Ok(out)
    }

    pub fn decay_in_place(&self, s: &mut Spectrum, t: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain(format!(
                "heat semigroup needs finite t >= 0, got {t}"
            )));
        }
        self.check_grid(&s.grid)?;
        if t == 0.0 {
            return Ok(());
        }
        let factors: Vec<f64> = self.xi2.iter().map(|x| (-t * x).exp()).collect();
        let n = self.grid.points_per_axis();
        let dim = self.grid.dim();
        // Rows along the last axis share the product of the other axes' factors.
        par::for_each_chunk_mut(&mut s.data, n, |row, line| {
            let mut outer = 1.0;
            let mut rest = row;
            for _ in 1..dim {
                outer *= factors[rest % n];
                rest /= n;
            }
            for (c, &f) in line.iter_mut().zip(&factors) {
                *c *= outer * f;
            }
        });
        Ok(())
    }

    /// `acc += c e^{-t|ξ|²} s`.
    pub fn accumulate_decayed(
        &self,
        acc: &mut Spectrum,
        c: f64,
        s: &Spectrum,
        t: f64,
    ) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain(format!(
                "heat semigroup needs finite t >= 0, got {t}"
            )));
        }
        self.check_grid(&acc.grid)?;
        self.check_grid(&s.grid)?;
        let factors: Vec<f64> = self.xi2.iter().map(|x| (-t * x).exp()).collect();
        let n = self.grid.points_per_axis();
        let dim = self.grid.dim();
        par::for_each_chunk_mut(&mut acc.data, n, |row, line| {
            let mut outer = c;
            let mut rest = row;
            for _ in 1..dim {
                outer *= factors[rest % n];
                rest /= n;
            }
            let src = &s.data[row * n..(row + 1) * n];
            for ((a, b), &f) in line.iter_mut().zip(src).zip(&factors) {
                *a += b * (outer * f);
            }
        });
        Ok(())
    }

    /// Zero spectrum on this plan's grid.
    pub fn zero_spectrum(&self) -> Spectrum {
        Spectrum {
            grid: self.grid,
            data: vec![Complex64::new(0.0, 0.0); self.grid.len()],
        }
    }

    /// `e^{tΔ}u`; `t = 0` returns `u` unchanged.
    pub fn apply(&self, u: &GridFunction, t: f64) -> Result<GridFunction> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain(format!(
                "heat semigroup needs finite t >= 0, got {t}"
            )));
        }
        self.check_grid(u.grid())?;
        if t == 0.0 {
            return Ok(u.clone());
        }
        let mut s = self.forward(u)?;
        self.decay_in_place(&mut s, t)?;
        self.inverse(&s)
    }

    fn check_grid(&self, g: &Grid) -> Result<()> {
        if *g != self.grid {
            return Err(crate::error::Error::GridMismatch(format!(
                "plan built for {:?}, operand on {:?}",
                self.grid, g
            )));
        }
        Ok(())
    }

    /// In-place DFT along every axis.
    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.grid.points_per_axis();
        let dim = self.grid.dim();
        let lines_per_block = (par::CHUNK / n).max(1);
        let run = |buf: &mut [Complex64]| {
            par::for_each_chunk_mut(buf, n * lines_per_block, |_, block| fft.process(block));
        };
        // Last axis is contiguous.
        run(data);
        for axis in (0..dim.saturating_sub(1)).rev() {
            let stride = n.pow((dim - 1 - axis) as u32);
            // Gather lines of this axis contiguously, transform, scatter back.
            let src = |b: usize| {
                let line = b / n;
                let j = b % n;
                let (outer, inner) = (line / stride, line % stride);
                outer * n * stride + j * stride + inner
            };
            let mut buf = par::collect_indexed(data.len(), |b| data[src(b)]);
            run(&mut buf);
            let dst = |d: usize| {
                let inner = d % stride;
                let j = (d / stride) % n;
                let outer = d / (stride * n);
                (outer * stride + inner) * n + j
            };
            let out = par::collect_indexed(data.len(), |d| buf[dst(d)]);
            data.copy_from_slice(&out);
        }
    }
}

/// `e^{tΔ}u0` with a freshly built plan.
pub fn apply_semigroup(u0: &GridFunction, t: f64) -> Result<GridFunction> {
    SemigroupPlan::new(*u0.grid()).apply(u0, t)
}

fn inverse_exponent(e: Exponent) -> f64 {
    match e {
        Exponent::Finite(q) => 1.0 / q,
        Exponent::Infinity => 0.0,
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("estimate needs finite t > 0, got {t}")));
    }
    Ok(())
}

/// Margin of `‖e^{tΔ}φ‖_ρ <= t^{-(N/2)(1/r - 1/ρ)} ‖φ‖_r`.
pub fn check_lp_lq_smoothing(
    phi: &GridFunction,
    t: f64,
    r: impl Into<Exponent>,
    rho: impl Into<Exponent>,
) -> Result<f64> {
    check_time(t)?;
    let (r, rho) = (r.into(), rho.into());
    let (ir, irho) = (inverse_exponent(r), inverse_exponent(rho));
    if ir < irho {
        return Err(domain(format!(
            "smoothing needs r <= ρ, got {r:?} > {rho:?}"
        )));
    }
    let n = phi.grid().dim() as f64;
    let rhs = t.powf(-0.5 * n * (ir - irho)) * lp_norm(phi, r)?;
    Ok(rhs - lp_norm(&apply_semigroup(phi, t)?, rho)?)
}

/// Margin of `‖e^{tΔ}φ‖_{exp L^p} <= ‖φ‖_{exp L^p}`.
pub fn check_orlicz_semigroup(phi: &GridFunction, t: f64, p: f64) -> Result<f64> {
    let spec = OrliczSpec::full(p)?;
    let before = orlicz::luxemburg_norm(phi, &spec)?;
    let after = orlicz::luxemburg_norm(&apply_semigroup(phi, t)?, &spec)?;
    Ok(before - after)
}

/// Right-hand side `t^{-N/2q} (ln(t^{-N/2} + 1))^{-1/p} ‖φ‖_q` of the
/// `L^q → exp L^p` estimate.
pub fn prop32_ii_bound(phi: &GridFunction, t: f64, p: f64, q: f64) -> Result<f64> {
    check_time(t)?;
    if !(q >= 1.0 && q <= p) {
        return Err(domain(format!("need 1 <= q <= p, got q = {q}, p = {p}")));
    }
    let n = phi.grid().dim() as f64;
    let log_term = t.powf(-0.5 * n).ln_1p();
    Ok(t.powf(-0.5 * n / q) * log_term.powf(-1.0 / p) * lp_norm(phi, q)?)
}

/// Margin of `‖e^{tΔ}φ‖_{exp L^p} <= t^{-N/2q} (ln(t^{-N/2} + 1))^{-1/p} ‖φ‖_q`.
pub fn check_prop32_ii(phi: &GridFunction, t: f64, p: f64, q: f64) -> Result<f64> {
    let rhs = prop32_ii_bound(phi, t, p, q)?;
    let lhs = orlicz::luxemburg_norm(&apply_semigroup(phi, t)?, &OrliczSpec::full(p)?)?;
    Ok(rhs - lhs)
}

/// Margin of `‖e^{tΔ}φ‖_{exp L^p} <= (ln 2)^{-1/p} (t^{-N/2r} ‖φ‖_r + ‖φ‖_q)`.
pub fn check_prop32_iii(phi: &GridFunction, t: f64, p: f64, q: f64, r: f64) -> Result<f64> {
    check_time(t)?;
    if !(q >= 1.0 && q <= p && r >= 1.0) {
        return Err(domain(format!(
            "need 1 <= q <= p and r >= 1, got q = {q}, p = {p}, r = {r}"
        )));
    }
    let n = phi.grid().dim() as f64;
    let rhs = LN_2.powf(-1.0 / p) * (t.powf(-0.5 * n / r) * lp_norm(phi, r)? + lp_norm(phi, q)?);
    let lhs = orlicz::luxemburg_norm(&apply_semigroup(phi, t)?, &OrliczSpec::full(p)?)?;
    Ok(rhs - lhs)
}

/// `κ(t) = (ln 2)^{-1/p} min{t^{-N/2r} + 1, t^{-N/2} (ln(t^{-N/2} + 1))^{-1/p}}`.
pub fn kappa(t: f64, p: f64, n: usize, r: f64) -> Result<f64> {
    check_time(t)?;
    let nf = n as f64;
    if !(p > 1.0) {
        return Err(domain(format!("κ needs p > 1, got {p}")));
    }
    let crit = 2.0 * p / (p - 1.0);
    if !(nf > crit) {
        return Err(domain(format!(
            "κ needs N > 2p/(p-1) = {crit}, got N = {n}"
        )));
    }
    if !(r > 0.5 * nf) {
        return Err(domain(format!(
            "κ needs r > N/2 = {}, got r = {r}",
            0.5 * nf
        )));
    }
    let s = t.powf(-0.5 * nf);
    let first = t.powf(-0.5 * nf / r) + 1.0;
    let second = s * s.ln_1p().powf(-1.0 / p);
    Ok(LN_2.powf(-1.0 / p) * first.min(second))
}

/// `ζ(t) = (ln 2)^{-1/p} min{1 + t^{-N/2r}, t^{-p/(p-1)} (ln(t^{-p/(p-1)} + 1))^{-1/2p}}`
/// with `N = 2p/(p-1)`.
pub fn zeta(t: f64, p: f64, r: f64) -> Result<f64> {
    check_time(t)?;
    if !(p > 1.0) {
        return Err(domain(format!("ζ needs p > 1, got {p}")));
    }
    let half_n = p / (p - 1.0);
    if !(r > half_n) {
        return Err(domain(format!("ζ needs r > N/2 = {half_n}, got r = {r}")));
    }
    let s = t.powf(-half_n);
    let first = 1.0 + t.powf(-half_n / r);
    let second = s * s.ln_1p().powf(-0.5 / p);
    Ok(LN_2.powf(-1.0 / p) * first.min(second))
}

/// Margin of `‖e^{tΔ}g‖_{L^φ} <= ζ(t) (‖g‖_1 + ‖g‖_{2p} + ‖g‖_r)` with `φ` the
/// reduced Young function. The grid dimension must equal `2p/(p-1)`.
pub fn check_corollary34(g: &GridFunction, t: f64, p: f64, r: f64) -> Result<f64> {
    let n = g.grid().dim() as f64;
    if !(p > 1.0) || (n - 2.0 * p / (p - 1.0)).abs() > 1e-12 {
        return Err(domain(format!(
            "ζ estimate needs N = 2p/(p-1); got N = {n}, p = {p}"
        )));
    }
    let z = zeta(t, p, r)?;
    let data = lp_norm(g, 1.0)? + lp_norm(g, 2.0 * p)? + lp_norm(g, r)?;
    let lhs = orlicz::luxemburg_norm(&apply_semigroup(g, t)?, &OrliczSpec::reduced(p)?)?;
    Ok(z * data - lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian(grid: Grid, s: f64) -> GridFunction {
        let n = grid.dim() as f64;
        GridFunction::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            (-r2 / (4.0 * s)).exp() / (4.0 * std::f64::consts::PI * s).powf(0.5 * n)
        })
        .unwrap()
    }

    #[test]
    fn gaussian_transport() {
        let g = Grid::new(1, 8.0, 1024).unwrap();
        let out = apply_semigroup(&gaussian(g, 0.1), 0.4).unwrap();
        let err = out.sub(&gaussian(g, 0.5)).unwrap().sup_norm();
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn gaussian_transport_2d() {
        let g = Grid::new(2, 8.0, 128).unwrap();
        let out = apply_semigroup(&gaussian(g, 0.2), 0.3).unwrap();
        let err = out.sub(&gaussian(g, 0.5)).unwrap().sup_norm();
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn gaussian_transport_3d_anisotropic_axes() {
        // Product data exercises every axis pass independently.
        let g = Grid::new(3, 8.0, 64).unwrap();
        let f = |x: &[f64], s: [f64; 3]| {
            (0..3)
                .map(|a| {
                    (-(x[a] * x[a]) / (4.0 * s[a])).exp()
                        / (4.0 * std::f64::consts::PI * s[a]).sqrt()
                })
                .product::<f64>()
        };
        let u0 = GridFunction::from_fn(g, |x| f(x, [0.2, 0.3, 0.4])).unwrap();
        let want = GridFunction::from_fn(g, |x| f(x, [0.5, 0.6, 0.7])).unwrap();
        let out = apply_semigroup(&u0, 0.3).unwrap();
        assert!(out.sub(&want).unwrap().sup_norm() < 1e-8);
    }

    #[test]
    fn zero_time_is_identity_and_negative_is_rejected() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let u = GridFunction::indicator(g, 0.0, 1.0);
        assert_eq!(apply_semigroup(&u, 0.0).unwrap(), u);
        assert!(apply_semigroup(&u, -1.0).is_err());
    }

    #[test]
    fn constants_are_invariant() {
        let g = Grid::new(2, 4.0, 16).unwrap();
        let u = GridFunction::constant(g, 2.5).unwrap();
        let out = apply_semigroup(&u, 3.0).unwrap();
        assert!(out.values().iter().all(|&v| (v - 2.5).abs() < 1e-13));
    }

    #[test]
    fn forward_inverse_round_trip() {
        let g = Grid::new(2, 3.0, 16).unwrap();
        let u = GridFunction::from_fn(g, |x| (x[0] * 1.3).sin() + x[1] * 0.1).unwrap();
        let plan = SemigroupPlan::new(g);
        let back = plan.inverse(&plan.forward(&u).unwrap()).unwrap();
        assert!(back.sub(&u).unwrap().sup_norm() < 1e-13);
    }

    #[test]
    fn kappa_example() {
        assert_relative_eq!(
            kappa(1.0, 2.0, 5, 3.0).unwrap(),
            1.0 / LN_2,
            max_relative = 1e-14
        );
        assert!(kappa(1.0, 2.0, 4, 3.0).is_err());
        assert!(kappa(1.0, 2.0, 5, 2.5).is_err());
    }

    #[test]
    fn zeta_example() {
        let want = LN_2.powf(-0.5) * LN_2.powf(-0.25);
        assert_relative_eq!(zeta(1.0, 2.0, 3.0).unwrap(), want, max_relative = 1e-14);
        assert!(zeta(1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn corollary34_requires_matching_dimension() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        assert!(check_corollary34(&GridFunction::zeros(g), 1.0, 3.0, 2.0).is_err());
        let g3 = Grid::new(3, 4.0, 16).unwrap();
        assert_eq!(
            check_corollary34(&GridFunction::zeros(g3), 1.0, 3.0, 2.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn smoothing_rejects_reversed_exponents() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let u = GridFunction::indicator(g, 0.0, 1.0);
        assert!(check_lp_lq_smoothing(&u, 1.0, 3.0, 2.0).is_err());
        assert!(check_lp_lq_smoothing(&u, 1.0, f64::INFINITY, 2.0).is_err());
        assert!(check_lp_lq_smoothing(&u, 1.0, 1.0, f64::INFINITY).unwrap() > 0.0);
    }
}
