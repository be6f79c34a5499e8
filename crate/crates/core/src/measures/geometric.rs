use crate::error::Result;
use crate::linalg::{density_spectrum, kron, partial_trace, pauli, trace_norm, ComplexMatrix, Subsystem};
use crate::optimize::{best_indices, coordinate_descent, random_direction, sphere_grid, OptimizerConfig};
use crate::states::BellDiagonalCoeffs;

use super::discord::MeasurementBasis;

/// Number of refined angle searches that get a full nine-parameter polish.
const POLISH_COUNT: usize = 3;
const MAX_BLOCH: f64 = 1.0 - 1e-12;

/// `q Π₊⊗σ₀ + (1−q) Π₋⊗σ₁` with `Π±` from `basis`, acting on qubit A.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalQuantumState {
    pub basis: MeasurementBasis,
    pub q: f64,
    /// Bloch vectors of σ₀ and σ₁.
    pub sigma0: [f64; 3],
    pub sigma1: [f64; 3],
}

impl ClassicalQuantumState {
    pub fn density(&self) -> ComplexMatrix {
        let [plus, minus] = self.basis.projectors();
        let a = kron(&plus, &pauli::qubit_state(self.sigma0)).scale(self.q);
        let b = kron(&minus, &pauli::qubit_state(self.sigma1)).scale(1.0 - self.q);
        &a + &b
    }

    /// Unconstrained coordinates: `[θ, φ, u, v0.., v1..]` with
    /// `q = (1 + sin u)/2` and Bloch vector `r = tanh(|v|) v/|v|`.
    fn from_params(x: &[f64]) -> Self {
        Self {
            basis: MeasurementBasis::new(x[0], x[1]),
            q: (1.0 + x[2].sin()) / 2.0,
            sigma0: squash([x[3], x[4], x[5]]),
            sigma1: squash([x[6], x[7], x[8]]),
        }
    }

    fn to_params(self) -> Vec<f64> {
        let u = (2.0 * self.q - 1.0).clamp(-1.0, 1.0).asin();
        let v0 = unsquash(self.sigma0);
        let v1 = unsquash(self.sigma1);
        vec![
            self.basis.theta,
            self.basis.phi,
            u,
            v0[0],
            v0[1],
            v0[2],
            v1[0],
            v1[1],
            v1[2],
        ]
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn squash(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    if n == 0.0 {
        return [0.0; 3];
    }
    let s = n.tanh() / n;
    v.map(|x| x * s)
}

fn unsquash(r: [f64; 3]) -> [f64; 3] {
    let n = norm3(r);
    if n == 0.0 {
        return [0.0; 3];
    }
    let s = n.min(MAX_BLOCH).atanh() / n;
    r.map(|x| x * s)
}

fn bloch_vector(m: &ComplexMatrix) -> [f64; 3] {
    [2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re]
}

/// Median of `|c1|, |c2|, |c3|`.
pub fn gqd1_bds(c: &BellDiagonalCoeffs) -> Result<f64> {
    c.check_physical()?;
    let mut a = c.as_array().map(f64::abs);
    a.sort_by(f64::total_cmp);
    Ok(a[1])
}

/// `Σ_k (Π_k⊗I) ρ (Π_k⊗I)`: the state after measuring qubit A along `basis`.
fn dephase(rho: &ComplexMatrix, basis: &MeasurementBasis) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let [plus, minus] = basis.projectors();
    let a = rho.conjugate_by(&kron(&plus, &id));
    let b = rho.conjugate_by(&kron(&minus, &id));
    &a + &b
}

/// The dephased state written as a `ClassicalQuantumState`.
fn dephased_state(rho: &ComplexMatrix, basis: &MeasurementBasis) -> ClassicalQuantumState {
    let id = ComplexMatrix::identity(2);
    let [plus, minus] = basis.projectors();
    let branch = |p: &ComplexMatrix| {
        // partial_trace only fails on non-4x4 input
        let m = partial_trace(&rho.conjugate_by(&kron(p, &id)), Subsystem::B).expect("4x4 input");
        let w = m.trace().re;
        if w > 0.0 {
            (w, bloch_vector(&m.scale(1.0 / w)))
        } else {
            (0.0, [0.0; 3])
        }
    };
    let (q, sigma0) = branch(&plus);
    let (_, sigma1) = branch(&minus);
    ClassicalQuantumState {
        basis: *basis,
        q: q.clamp(0.0, 1.0),
        sigma0,
        sigma1,
    }
}

/// Closest classical-quantum state in trace norm and the distance to it.
///
/// Measurement directions are scanned on a grid using the dephased state as
/// the candidate, the most promising directions are refined, and the best
/// few are then polished over all nine parameters.
pub fn closest_classical_quantum(rho: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<(f64, ClassicalQuantumState)> {
    cfg.validate()?;
    density_spectrum(rho)?;

    let angle_objective = |x: &[f64]| trace_norm(&(rho - &dephase(rho, &MeasurementBasis::new(x[0], x[1]))));
    let grid = sphere_grid(cfg.grid);
    let values: Vec<f64> = grid.iter().map(|&(t, p)| angle_objective(&[t, p])).collect();

    let mut starts: Vec<(f64, f64)> = best_indices(&values, cfg.restarts)
        .into_iter()
        .map(|i| grid[i])
        .collect();
    let mut rng = cfg.rng();
    starts.extend((0..cfg.restarts).map(|_| random_direction(&mut rng)));

    let step = std::f64::consts::PI / cfg.grid as f64;
    let mut refined: Vec<(f64, MeasurementBasis)> = starts
        .into_iter()
        .map(|(t, p)| {
            let (x, v) = coordinate_descent(angle_objective, &[t, p], step, cfg.iterations);
            (v, MeasurementBasis::new(x[0], x[1]))
        })
        .collect();
    refined.sort_by(|a, b| a.0.total_cmp(&b.0));

    let full_objective = |x: &[f64]| trace_norm(&(rho - &ClassicalQuantumState::from_params(x).density()));
    let mut best = (f64::INFINITY, dephased_state(rho, &refined[0].1));
    for (_, basis) in refined.iter().take(POLISH_COUNT) {
        let start = dephased_state(rho, basis);
        let start_value = full_objective(&start.to_params());
        if start_value < best.0 {
            best = (start_value, start);
        }
        let (x, v) = coordinate_descent(full_objective, &start.to_params(), 0.05, cfg.iterations);
        if v < best.0 {
            best = (v, ClassicalQuantumState::from_params(&x));
        }
    }
    Ok(best)
}

/// Trace-norm geometric discord by direct minimization.
pub fn gqd1_numeric(rho: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(closest_classical_quantum(rho, cfg)?.0)
}
