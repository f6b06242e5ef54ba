//! Seeded test functions for the inequality suite and the experiments.
//!
//! Every member is supported in the inner half `[-L/2, L/2]^N` of its box so
//! the periodic heat flow does not wrap around for the times the suite uses.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::{Grid, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Gaussian,
    Indicator,
    TruncatedPower,
    TrigRandom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub label: String,
    pub kind: ShapeKind,
    pub u: GridFunction,
}

/// Grids used by the suite: a fine 1-D box and a coarse 3-D box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusGrids {
    pub one_d: Grid,
    pub three_d: Grid,
}

impl CorpusGrids {
    pub fn new(n1: usize, n3: usize) -> Result<Self> {
        Ok(Self {
            one_d: Grid::new(1, 8.0, n1)?,
            three_d: Grid::new(3, 6.0, n3)?,
        })
    }
}

impl Default for CorpusGrids {
    fn default() -> Self {
        Self::new(512, 48).expect("default corpus grids are valid")
    }
}

fn radius(x: &[f64], c: &[f64]) -> f64 {
    x.iter()
        .zip(c)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// `exp(-|x - c|² / w²)`, cut off outside `|x - c| < cutoff`.
pub fn gaussian(grid: Grid, center: &[f64], width: f64, cutoff: f64) -> Result<GridFunction> {
    if !(width > 0.0) {
        return Err(domain(format!(
            "gaussian width must be positive, got {width}"
        )));
    }
    let c = center.to_vec();
    GridFunction::from_fn(grid, move |x| {
        let r = radius(x, &c);
        if r < cutoff {
            (-(r / width).powi(2)).exp()
        } else {
            0.0
        }
    })
}

/// Indicator of the axis-aligned box `∏ [lo_i, hi_i)`.
pub fn box_indicator(grid: Grid, lo: &[f64], hi: &[f64]) -> Result<GridFunction> {
    let (lo, hi) = (lo.to_vec(), hi.to_vec());
    GridFunction::from_fn(grid, move |x| {
        let inside = x.iter().enumerate().all(|(i, v)| *v >= lo[i] && *v < hi[i]);
        f64::from(u8::from(inside))
    })
}

/// `|x - c|^{-β}` on `cap <= |x - c| < outer`, held at `cap^{-β}` inside the cap.
pub fn truncated_power(
    grid: Grid,
    center: &[f64],
    beta: f64,
    cap: f64,
    outer: f64,
) -> Result<GridFunction> {
    if !(beta > 0.0 && cap > 0.0 && outer > cap) {
        return Err(domain(format!(
            "truncated power needs β > 0 and 0 < cap < outer, got β = {beta}, cap = {cap}, outer = {outer}"
        )));
    }
    let c = center.to_vec();
    GridFunction::from_fn(grid, move |x| {
        let r = radius(x, &c);
        if r >= outer {
            0.0
        } else {
            r.max(cap).powf(-beta)
        }
    })
}

/// Random trigonometric polynomial times a smooth window supported in `|x| < support`.
pub fn trig_random(grid: Grid, seed: u64, modes: usize, support: f64) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let terms: Vec<(Vec<f64>, f64, f64)> = (0..modes)
        .map(|_| {
            let k: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            (
                k,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    GridFunction::from_fn(grid, move |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r >= support {
            return 0.0;
        }
        let s = r / support;
        let window = (1.0 - s * s).powi(3);
        let wave: f64 = terms
            .iter()
            .map(|(k, amp, phase)| {
                let arg: f64 = k.iter().zip(x).map(|(a, b)| a * b).sum();
                amp * (arg + phase).cos()
            })
            .sum();
        window * wave
    })
}

/// `|x|^{-β}` on the whole box, held constant inside one cell of the origin.
pub fn capped_power(grid: Grid, beta: f64) -> Result<GridFunction> {
    if !(beta > 0.0) {
        return Err(domain(format!("power data needs β > 0, got {beta}")));
    }
    let h = grid.spacing();
    GridFunction::from_fn(grid, move |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        r.max(h).powf(-beta)
    })
}

/// The borderline witness `|x|^{-2/(m-1)}`, see [`capped_power`].
pub fn borderline(grid: Grid, m: f64) -> Result<GridFunction> {
    if !(m > 1.0) {
        return Err(domain(format!("borderline data needs m > 1, got {m}")));
    }
    capped_power(grid, 2.0 / (m - 1.0))
}

fn random_member(rng: &mut ChaCha8Rng, grid: Grid, index: usize) -> Result<CorpusMember> {
    let dim = grid.dim();
    let inner = 0.5 * grid.half_width();
    let h = grid.spacing();
    let kinds = [
        ShapeKind::Gaussian,
        ShapeKind::Indicator,
        ShapeKind::TruncatedPower,
        ShapeKind::TrigRandom,
    ];
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let amplitude = rng.gen_range(0.25..2.0);
    let u = match kind {
        ShapeKind::Gaussian => {
            let w_min = (2.0 * h).max(0.1);
            let width = rng.gen_range(w_min..w_min + 0.25 * inner);
            let cutoff = inner * 0.9;
            let room = (cutoff - 4.0 * width).max(0.0) / (dim as f64).sqrt();
            let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-room..=room)).collect();
            let cut = cutoff - radius(&c, &vec![0.0; dim]);
            gaussian(grid, &c, width, cut)?
        }
        ShapeKind::Indicator => {
            let mut lo = Vec::with_capacity(dim);
            let mut hi = Vec::with_capacity(dim);
            for _ in 0..dim {
                let a = rng.gen_range(-inner..inner - 4.0 * h);
                let b = rng.gen_range(a + 2.0 * h..inner);
                lo.push(a);
                hi.push(b);
            }
            box_indicator(grid, &lo, &hi)?
        }
        ShapeKind::TruncatedPower => {
            let beta = rng.gen_range(0.1..0.45) * dim as f64;
            let outer = rng.gen_range(0.3..0.9) * inner;
            let cap = rng.gen_range(h..4.0 * h).min(0.5 * outer);
            let room = (inner - outer) / (dim as f64).sqrt();
            let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-room..=room)).collect();
            truncated_power(grid, &c, beta, cap, outer)?.normalized_sup()
        }
        ShapeKind::TrigRandom => {
            let seed = rng.gen();
            let modes = rng.gen_range(1..6);
            let support = rng.gen_range(0.4..1.0) * inner;
            let u = trig_random(grid, seed, modes, support)?;
            u.normalized_sup()
        }
    };
    Ok(CorpusMember {
        label: format!("{index:03}-{kind:?}-N{dim}").to_lowercase(),
        kind,
        u: u.scaled(amplitude),
    })
}

trait NormalizeSup {
    fn normalized_sup(self) -> GridFunction;
}

impl NormalizeSup for GridFunction {
    fn normalized_sup(self) -> GridFunction {
        let s = self.sup_norm();
        if s > 0.0 {
            self.scaled(1.0 / s)
        } else {
            self
        }
    }
}

/// `count` members from `seed`. Every fifth member lives on the 3-D grid.
/// Member 0 is the borderline power `|x|^{-1/2}` (the `m = 5` witness)
/// truncated to the inner half of the 1-D box.
pub fn generate(seed: u64, count: usize, grids: CorpusGrids) -> Result<Vec<CorpusMember>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        if index == 0 {
            let g = grids.one_d;
            let u = truncated_power(g, &[0.0], 0.5, g.spacing(), 0.5 * g.half_width())?;
            out.push(CorpusMember {
                label: "000-borderline-n1".into(),
                kind: ShapeKind::TruncatedPower,
                u,
            });
            continue;
        }
        let grid = if index % 5 == 4 {
            grids.three_d
        } else {
            grids.one_d
        };
        out.push(random_member(&mut rng, grid, index)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CorpusGrids {
        CorpusGrids::new(128, 16).unwrap()
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = generate(7, 12, small()).unwrap();
        let b = generate(7, 12, small()).unwrap();
        assert_eq!(a, b);
        let c = generate(8, 12, small()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn members_live_in_inner_half() {
        for m in generate(3, 30, small()).unwrap() {
            let g = *m.u.grid();
            let inner = 0.5 * g.half_width();
            for (i, v) in m.u.values().iter().enumerate() {
                if *v != 0.0 {
                    let x = g.point(i);
                    assert!(
                        x[..g.dim()].iter().all(|c| c.abs() <= inner + 1e-12),
                        "{} leaks outside the inner half at {x:?}",
                        m.label
                    );
                }
            }
            assert!(!m.u.is_zero(), "{} is identically zero", m.label);
        }
    }

    #[test]
    fn borderline_is_capped_at_one_cell() {
        let g = Grid::new(1, 8.0, 256).unwrap();
        let u = borderline(g, 5.0).unwrap();
        assert!((u.sup_norm() - g.spacing().powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus() {
        assert!(generate(1, 0, small()).unwrap().is_empty());
    }
}
