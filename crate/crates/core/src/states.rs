//! Bell-diagonal states and the two-site XXX Gibbs state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, trace_norm, ComplexMatrix};

/// Bell-basis eigenvalues may dip this far below zero before a coefficient
/// triple is considered unphysical.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Correlation coefficients `c_i = Tr[ρ (σ_i ⊗ σ_i)]` of a Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalCoeffs {
    pub const ZERO: Self = Self {
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
    };

    /// Validated constructor.
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c = Self { c1, c2, c3 };
        c.check_physical()?;
        Ok(c)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Weights on `|ψ⁻>, |φ⁻>, |φ⁺>, |ψ⁺>` in that order.
    pub fn bell_eigenvalues(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            (1.0 - c1 - c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
        ]
    }

    pub fn is_physical(&self) -> bool {
        let finite = self.as_array().iter().all(|c| c.is_finite());
        let bounded = self.as_array().iter().all(|c| c.abs() <= 1.0 + PHYSICAL_TOL);
        finite && bounded && self.bell_eigenvalues().iter().all(|&l| l >= -PHYSICAL_TOL)
    }

    pub fn check_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::UnphysicalCoefficients(self.c1, self.c2, self.c3))
        }
    }

    /// Largest `|c_i|`.
    pub fn max_abs(&self) -> f64 {
        self.c1.abs().max(self.c2.abs()).max(self.c3.abs())
    }
}

/// Gibbs state of `H = (J/4)(σx σx + σy σy + σz σz)` at temperature `T` (k = 1).
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub j: f64,
    pub t: f64,
    /// `J / (4T)`.
    pub alpha: f64,
    pub rho: ComplexMatrix,
    pub coeffs: BellDiagonalCoeffs,
    /// `Z = 2(e^{-α} + e^{α} cosh 2α)`; may be `inf` at extreme α, see
    /// `log_partition_function`.
    pub partition_function: f64,
    pub log_partition_function: f64,
}

/// `J / (4T)`, with `T` validated.
pub fn alpha(j: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() || !j.is_finite() {
        return Err(Error::InvalidTemperature { j, t });
    }
    Ok(j / (4.0 * t))
}

/// Singlet and single-triplet-level populations `(p_s, p_t)` with
/// `p_s + 3 p_t = 1`. The Boltzmann factors are shifted by the largest
/// exponent so no intermediate overflows.
pub(crate) fn level_populations(alpha: f64) -> (f64, f64, f64) {
    let singlet_exp = 3.0 * alpha;
    let triplet_exp = -alpha;
    let shift = singlet_exp.max(triplet_exp);
    let ws = (singlet_exp - shift).exp();
    let wt = (triplet_exp - shift).exp();
    let zs = ws + 3.0 * wt;
    (ws / zs, wt / zs, shift + zs.ln())
}

pub fn thermal_xxx(j: f64, t: f64) -> Result<ThermalState> {
    let alpha = alpha(j, t)?;
    let (p_singlet, p_triplet, log_z) = level_populations(alpha);

    let diag_outer = p_triplet;
    let diag_inner = (p_triplet + p_singlet) / 2.0;
    let off = (p_triplet - p_singlet) / 2.0;
    let rho = ComplexMatrix::from_real(
        4,
        &[
            diag_outer, 0.0, 0.0, 0.0, //
            0.0, diag_inner, off, 0.0, //
            0.0, off, diag_inner, 0.0, //
            0.0, 0.0, 0.0, diag_outer,
        ],
    );
    // c1 = c2 = 2ρ23, c3 = 4ρ11 - 1, both equal p_t - p_s.
    let c = p_triplet - p_singlet;
    let coeffs = BellDiagonalCoeffs { c1: c, c2: c, c3: c };

    Ok(ThermalState {
        j,
        t,
        alpha,
        rho,
        coeffs,
        partition_function: log_z.exp(),
        log_partition_function: log_z,
    })
}

/// `(1/4)[I⊗I + Σ c_i σ_i⊗σ_i]`.
pub fn bds_to_density(c: &BellDiagonalCoeffs) -> Result<ComplexMatrix> {
    c.check_physical()?;
    Ok(bell_diagonal_matrix(c))
}

pub(crate) fn bell_diagonal_matrix(c: &BellDiagonalCoeffs) -> ComplexMatrix {
    let [c1, c2, c3] = c.as_array();
    let q = |x: f64| Complex64::new(x / 4.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_vec(
        4,
        vec![
            q(1.0 + c3),
            z,
            z,
            q(c1 - c2), //
            z,
            q(1.0 - c3),
            q(c1 + c2),
            z, //
            z,
            q(c1 + c2),
            q(1.0 - c3),
            z, //
            q(c1 - c2),
            z,
            z,
            q(1.0 + c3),
        ],
    )
}

/// Result of projecting a two-qubit state onto the Bell-diagonal family.
#[derive(Clone, Copy, Debug)]
pub struct BdsProjection {
    pub coeffs: BellDiagonalCoeffs,
    /// `‖ρ − bds_to_density(coeffs)‖₁`; zero iff the input is Bell-diagonal.
    pub residual: f64,
}

/// Extracts `c_i = Tr[ρ(σ_i⊗σ_i)]` and reports how far `ρ` is from the
/// Bell-diagonal state with those coefficients.
pub fn density_to_bds(rho: &ComplexMatrix) -> Result<BdsProjection> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let [sx, sy, sz] = pauli::all();
    let corr = |s: &ComplexMatrix| (rho * &kron(s, s)).trace().re;
    let coeffs = BellDiagonalCoeffs {
        c1: corr(&sx),
        c2: corr(&sy),
        c3: corr(&sz),
    };
    let residual = trace_norm(&(rho - &bell_diagonal_matrix(&coeffs)));
    Ok(BdsProjection { coeffs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bell, hermitian_eig};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_coupling_is_maximally_mixed() {
        let s = thermal_xxx(0.0, 1.0).unwrap();
        assert_eq!(s.coeffs, BellDiagonalCoeffs::ZERO);
        assert!(s.rho.max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
        assert_abs_diff_eq!(s.partition_function, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn alpha_one_values() {
        let s = thermal_xxx(4.0, 1.0).unwrap();
        assert_eq!(s.alpha, 1.0);
        // Independent evaluation via scipy expm of -H/T.
        assert!((s.partition_function - 21.189175246702035).abs() / 21.19 < 1e-12);
        assert_abs_diff_eq!(s.coeffs.c1, -0.9305533251033541, epsilon = 1e-13);
    }

    #[test]
    fn cold_limit_is_singlet() {
        let s = thermal_xxx(1.0, 0.01).unwrap();
        for c in s.coeffs.as_array() {
            assert_abs_diff_eq!(c, -1.0, epsilon = 1e-8);
        }
        assert!(s.rho.max_abs_diff(&bell::psi_minus()) < 1e-8);
    }

    #[test]
    fn extreme_alpha_stays_finite() {
        for (j, t) in [(5.0, 1e-3), (-5.0, 1e-3), (1e6, 1e-6), (-1e6, 1e-6)] {
            let s = thermal_xxx(j, t).unwrap();
            assert!(s.coeffs.as_array().iter().all(|c| c.is_finite()));
            assert!(s.rho.entries().iter().all(|z| z.re.is_finite()));
            assert!(s.log_partition_function.is_finite());
        }
        // Ferromagnetic ground manifold is the triplet: c -> 1/3.
        assert_abs_diff_eq!(thermal_xxx(-5.0, 1e-3).unwrap().coeffs.c1, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_temperatures_rejected() {
        for t in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(thermal_xxx(1.0, t), Err(Error::InvalidTemperature { .. })));
        }
        assert!(thermal_xxx(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn bds_special_states() {
        let mixed = bds_to_density(&BellDiagonalCoeffs::ZERO).unwrap();
        assert!(mixed.max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-16);
        let singlet = bds_to_density(&BellDiagonalCoeffs::new(-1.0, -1.0, -1.0).unwrap()).unwrap();
        assert!(singlet.max_abs_diff(&bell::psi_minus()) < 1e-15);
        let phi = bds_to_density(&BellDiagonalCoeffs::new(1.0, -1.0, 1.0).unwrap()).unwrap();
        assert!(phi.max_abs_diff(&bell::phi_plus()) < 1e-15);
    }

    #[test]
    fn bds_matrix_matches_pauli_expansion() {
        let c = BellDiagonalCoeffs::new(0.5, -0.3, 0.1).unwrap();
        let mut expected = ComplexMatrix::identity(4);
        for (ci, s) in c.as_array().iter().zip(pauli::all()) {
            expected = &expected + &kron(&s, &s).scale(*ci);
        }
        let expected = expected.scale(0.25);
        assert!(bds_to_density(&c).unwrap().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn bds_eigenvalues_match_formula() {
        let c = BellDiagonalCoeffs::new(0.5, 0.3, 0.1).unwrap();
        let mut expected = c.bell_eigenvalues().to_vec();
        expected.sort_by(|a, b| b.total_cmp(a));
        let got = hermitian_eig(&bds_to_density(&c).unwrap()).unwrap().eigenvalues;
        for (a, b) in got.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn unphysical_coefficients_rejected() {
        assert!(BellDiagonalCoeffs::new(1.0, 1.0, 1.0).is_err());
        assert!(BellDiagonalCoeffs::new(1.2, 0.0, 0.0).is_err());
        let bad = BellDiagonalCoeffs {
            c1: 0.9,
            c2: 0.9,
            c3: 0.9,
        };
        assert!(matches!(bds_to_density(&bad), Err(Error::UnphysicalCoefficients(..))));
    }

    #[test]
    fn density_to_bds_examples() {
        let p = density_to_bds(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(p.coeffs, BellDiagonalCoeffs::ZERO);
        assert!(p.residual < 1e-15);

        let s = thermal_xxx(4.0, 1.0).unwrap();
        let p = density_to_bds(&s.rho).unwrap();
        for c in p.coeffs.as_array() {
            assert_abs_diff_eq!(c, -0.9305533251033541, epsilon = 1e-13);
        }
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn density_to_bds_reports_non_bell_diagonal_residual() {
        // |00><00| is not Bell-diagonal.
        let p = density_to_bds(&ComplexMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(p.coeffs.c3, 1.0, epsilon = 1e-15);
        assert!(p.residual > 0.5);
    }
}
