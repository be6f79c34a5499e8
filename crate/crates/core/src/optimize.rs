//! Derivative-free minimization used by the measurement and classical-state
//! searches: a coarse grid over the Bloch sphere, then adaptive coordinate
//! descent from the best grid cells and from seeded random restarts.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const STEP_FLOOR: f64 = 1e-10;

/// Search settings. Identical configs give bit-identical results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptimizerConfig {
    /// Grid divisions per angle.
    pub grid: usize,
    /// Maximum coordinate-descent passes per local search.
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid: 24,
            iterations: 200,
            restarts: 8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid == 0 || self.iterations == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig(format!(
                "optimizer counts must be >= 1, got {self:?}"
            )));
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Polar/azimuth pairs covering the sphere: θ in `grid + 1` steps over
/// `[0, π]`, φ in `grid` steps over `[0, 2π)`.
pub(crate) fn sphere_grid(grid: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity((grid + 1) * grid);
    for i in 0..=grid {
        let theta = PI * i as f64 / grid as f64;
        for j in 0..grid {
            out.push((theta, 2.0 * PI * j as f64 / grid as f64));
        }
    }
    out
}

/// Uniformly distributed direction on the sphere.
pub(crate) fn random_direction(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    ((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(), 2.0 * PI * v)
}

/// Adaptive coordinate descent. Each coordinate keeps its own step, which
/// grows after a successful move and shrinks after a failed pair of probes.
pub(crate) fn coordinate_descent<F>(mut f: F, start: &[f64], step: f64, passes: usize) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut best = f(&x);
    let mut steps = vec![step; x.len()];
    for _ in 0..passes {
        for i in 0..x.len() {
            let orig = x[i];
            let mut moved = false;
            for dir in [1.0, -1.0] {
                x[i] = orig + dir * steps[i];
                let val = f(&x);
                if val < best {
                    best = val;
                    moved = true;
                    break;
                }
            }
            if moved {
                steps[i] *= 1.5;
            } else {
                x[i] = orig;
                steps[i] *= 0.5;
            }
        }
        if steps.iter().all(|&s| s < STEP_FLOOR) {
            break;
        }
    }
    (x, best)
}

/// Indices of the `k` smallest values, ties broken by index.
pub(crate) fn best_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descent_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.3).powi(2) + 4.0 * (x[1] + 0.7).powi(2);
        let (x, v) = coordinate_descent(f, &[0.0, 0.0], 0.1, 500);
        assert!((x[0] - 1.3).abs() < 1e-8);
        assert!((x[1] + 0.7).abs() < 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn descent_handles_kinks() {
        let f = |x: &[f64]| (x[0] - 0.25).abs() + (x[1] + 2.0).abs();
        let (_, v) = coordinate_descent(f, &[0.0, 0.0], 0.3, 500);
        assert!(v < 1e-9);
    }

    #[test]
    fn grid_covers_poles_and_equator() {
        let g = sphere_grid(24);
        assert_eq!(g.len(), 25 * 24);
        assert!(g.contains(&(0.0, 0.0)));
        assert!(g
            .iter()
            .any(|&(t, p)| (t - PI / 2.0).abs() < 1e-15 && (p - PI / 2.0).abs() < 1e-15));
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn seeded_directions_repeat() {
        let a: Vec<_> = {
            let mut r = OptimizerConfig::with_seed(7).rng();
            (0..5).map(|_| random_direction(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = OptimizerConfig::with_seed(7).rng();
            (0..5).map(|_| random_direction(&mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn best_indices_is_stable() {
        assert_eq!(best_indices(&[3.0, 1.0, 1.0, 0.5], 3), vec![3, 1, 2]);
    }
}
