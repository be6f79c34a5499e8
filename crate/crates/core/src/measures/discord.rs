use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{density_spectrum, partial_trace, pauli, shannon_entropy, ComplexMatrix, Subsystem, PSD_TOL};
use crate::optimize::{best_indices, coordinate_descent, random_direction, sphere_grid, OptimizerConfig};
use crate::states::BellDiagonalCoeffs;

/// Negative discord above this is roundoff and clamps to zero.
pub const DISCORD_CLAMP_TOL: f64 = 1e-8;

/// Rank-one projective measurement `B± = (I ± n·σ)/2` along
/// `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `[B₊, B₋]`.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let n = self.direction();
        [pauli::qubit_state(n), pauli::qubit_state(n.map(|x| -x))]
    }
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Entropy of the normalized 2×2 state `m / Tr m` together with `Tr m`.
fn qubit_weight_and_entropy(m: &ComplexMatrix) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let weight = a + d;
    if weight <= 0.0 {
        return (0.0, 0.0);
    }
    let half_gap = (((a - d) / 2.0).powi(2) + m[(0, 1)].norm_sqr()).sqrt();
    let hi = ((weight / 2.0 + half_gap) / weight).clamp(0.0, 1.0);
    (weight, shannon_entropy(&[hi, 1.0 - hi]))
}

/// `Tr_B[(I⊗B) ρ]` for a 2×2 operator `B` on the second qubit.
fn measured_on_b(rho: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    acc += b[(l, k)] * rho[(2 * i + k, 2 * j + l)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// `Σ_k P_k S(ρ_A^k)` for the measurement `{I⊗B_k}` on qubit B.
pub fn conditional_entropy(rho: &ComplexMatrix, basis: &MeasurementBasis) -> f64 {
    basis
        .projectors()
        .iter()
        .map(|b| {
            let (w, s) = qubit_weight_and_entropy(&measured_on_b(rho, b));
            w * s
        })
        .sum()
}

fn entropy_of(rho: &ComplexMatrix) -> Result<f64> {
    Ok(shannon_entropy(&density_spectrum(rho)?).max(0.0))
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &ComplexMatrix) -> Result<f64> {
    let s_ab = entropy_of(rho)?;
    let s_a = entropy_of(&partial_trace(rho, Subsystem::A)?)?;
    let s_b = entropy_of(&partial_trace(rho, Subsystem::B)?)?;
    let mi = s_a + s_b - s_ab;
    if mi < -PSD_TOL {
        return Err(Error::InternalConsistency(format!(
            "negative mutual information {mi:e}"
        )));
    }
    Ok(mi.max(0.0))
}

/// `S(ρ_A) − min_{B_k} S(ρ_AB | {B_k})`, measuring qubit B, and the basis
/// attaining it.
pub fn classical_correlation(rho: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<(f64, MeasurementBasis)> {
    cfg.validate()?;
    density_spectrum(rho)?;
    let s_a = entropy_of(&partial_trace(rho, Subsystem::A)?)?;

    let objective = |x: &[f64]| conditional_entropy(rho, &MeasurementBasis::new(x[0], x[1]));
    let grid = sphere_grid(cfg.grid);
    let values: Vec<f64> = grid.iter().map(|&(t, p)| objective(&[t, p])).collect();

    let mut starts: Vec<(f64, f64)> = best_indices(&values, cfg.restarts)
        .into_iter()
        .map(|i| grid[i])
        .collect();
    let mut rng = cfg.rng();
    starts.extend((0..cfg.restarts).map(|_| random_direction(&mut rng)));

    let step = std::f64::consts::PI / cfg.grid as f64;
    let mut best = (f64::INFINITY, MeasurementBasis::new(0.0, 0.0));
    for (t, p) in starts {
        let (x, v) = coordinate_descent(objective, &[t, p], step, cfg.iterations);
        if v < best.0 {
            best = (v, MeasurementBasis::new(x[0], x[1]));
        }
    }
    Ok(((s_a - best.0).max(0.0), best.1))
}

/// Closed-form discord of a Bell-diagonal state.
pub fn qd_bds(c: &BellDiagonalCoeffs) -> Result<f64> {
    c.check_physical()?;
    let mutual: f64 = c
        .bell_eigenvalues()
        .iter()
        .map(|&l| xlog2x(4.0 * l.max(0.0)))
        .sum::<f64>()
        / 4.0;
    let cmax = c.max_abs().min(1.0);
    let classical = (xlog2x(1.0 - cmax) + xlog2x(1.0 + cmax)) / 2.0;
    Ok((mutual - classical).clamp(0.0, 1.0))
}

/// Discord as mutual information minus the optimized classical correlation.
pub fn qd_numeric(rho: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    let mi = mutual_information(rho)?;
    let (cc, _) = classical_correlation(rho, cfg)?;
    let d = mi - cc;
    if d < -DISCORD_CLAMP_TOL {
        return Err(Error::InternalConsistency(format!(
            "classical correlation {cc} exceeds mutual information {mi}"
        )));
    }
    Ok(d.max(0.0))
}
