//! Bit-flip and generalized amplitude damping noise acting identically and
//! independently on both qubits.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, trace_norm, ComplexMatrix};
use crate::states::{bell_diagonal_matrix, BellDiagonalCoeffs};

/// GAD keeps Bell-diagonal states Bell-diagonal only at this mixing value.
pub const GAD_BELL_DIAGONAL_P: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    BitFlip,
    GeneralizedAmplitudeDamping,
}

/// A single-qubit channel and its Kraus operators.
#[derive(Clone, Debug)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
    /// Damping strength; zero and unused for bit flip.
    pub gamma: f64,
    pub kraus: Vec<ComplexMatrix>,
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChannelKind::BitFlip => write!(f, "BF(p={})", self.p),
            ChannelKind::GeneralizedAmplitudeDamping => {
                write!(f, "GAD(gamma={}, p={})", self.gamma, self.p)
            }
        }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// `E0 = √(1−p/2) I`, `E1 = √(p/2) σx`.
pub fn kraus_bf(p: f64) -> Result<ChannelSpec> {
    check_unit("p", p)?;
    let kraus = vec![
        ComplexMatrix::identity(2).scale((1.0 - p / 2.0).sqrt()),
        pauli::x().scale((p / 2.0).sqrt()),
    ];
    Ok(ChannelSpec {
        kind: ChannelKind::BitFlip,
        p,
        gamma: 0.0,
        kraus,
    })
}

pub fn kraus_gad(p: f64, gamma: f64) -> Result<ChannelSpec> {
    check_unit("p", p)?;
    check_unit("gamma", gamma)?;
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    let (keep, decay) = ((1.0 - gamma).sqrt(), gamma.sqrt());
    let kraus = vec![
        ComplexMatrix::from_real(2, &[sp, 0.0, 0.0, sp * keep]),
        ComplexMatrix::from_real(2, &[0.0, sp * decay, 0.0, 0.0]),
        ComplexMatrix::from_real(2, &[sq * keep, 0.0, 0.0, sq]),
        ComplexMatrix::from_real(2, &[0.0, 0.0, sq * decay, 0.0]),
    ];
    Ok(ChannelSpec {
        kind: ChannelKind::GeneralizedAmplitudeDamping,
        p,
        gamma,
        kraus,
    })
}

impl ChannelSpec {
    /// `max |Σ E_k† E_k − I|`.
    pub fn completeness_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2);
        for e in &self.kraus {
            sum = &sum + &(&e.adjoint() * e);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

/// `Σ_{i,j} (E_i⊗E_j) ρ (E_i⊗E_j)†`.
///
/// Both tensor factors are conjugated on the right. Reading the dagger as
/// applying only to the second factor would not preserve the trace.
pub fn apply_channel(rho: &ComplexMatrix, ch: &ChannelSpec) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    for ei in &ch.kraus {
        for ej in &ch.kraus {
            let k = kron(ei, ej);
            out = &out + &rho.conjugate_by(&k);
        }
    }
    Ok(out)
}

/// Closed-form action on Bell-diagonal coefficients.
pub fn evolve_coeffs(c: &BellDiagonalCoeffs, ch: &ChannelSpec) -> Result<BellDiagonalCoeffs> {
    c.check_physical()?;
    match ch.kind {
        ChannelKind::BitFlip => {
            let f = (1.0 - ch.p).powi(2);
            Ok(BellDiagonalCoeffs {
                c1: c.c1,
                c2: c.c2 * f,
                c3: c.c3 * f,
            })
        }
        ChannelKind::GeneralizedAmplitudeDamping => {
            if ch.p != GAD_BELL_DIAGONAL_P {
                return Err(Error::UnsupportedParameters(format!(
                    "GAD coefficient map requires p = 1/2, got p = {}",
                    ch.p
                )));
            }
            let g = 1.0 - ch.gamma;
            Ok(BellDiagonalCoeffs {
                c1: c.c1 * g,
                c2: c.c2 * g,
                c3: c.c3 * g * g,
            })
        }
    }
}

/// Trace distance between the Kraus evolution and the coefficient map.
pub fn verify_channel_consistency(c: &BellDiagonalCoeffs, ch: &ChannelSpec) -> Result<f64> {
    let mapped = evolve_coeffs(c, ch)?;
    let evolved = apply_channel(&bell_diagonal_matrix(c), ch)?;
    Ok(trace_norm(&(&evolved - &bell_diagonal_matrix(&mapped))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bds_to_density, density_to_bds};
    use approx::assert_abs_diff_eq;

    fn coeffs(c1: f64, c2: f64, c3: f64) -> BellDiagonalCoeffs {
        BellDiagonalCoeffs::new(c1, c2, c3).unwrap()
    }

    #[test]
    fn bit_flip_kraus() {
        let id = kraus_bf(0.0).unwrap();
        assert_eq!(id.kraus.len(), 2);
        assert_eq!(id.kraus[0], ComplexMatrix::identity(2));
        assert_eq!(id.kraus[1], ComplexMatrix::zeros(2));

        let full = kraus_bf(1.0).unwrap();
        let h = 0.5f64.sqrt();
        assert!(full.kraus[0].max_abs_diff(&ComplexMatrix::identity(2).scale(h)) < 1e-16);
        assert!(full.kraus[1].max_abs_diff(&pauli::x().scale(h)) < 1e-16);

        for p in [0.0, 0.13, 0.5, 0.77, 1.0] {
            assert!(kraus_bf(p).unwrap().completeness_error() < 1e-15);
        }
    }

    #[test]
    fn gad_kraus() {
        let ch = kraus_gad(0.5, 0.5).unwrap();
        assert_eq!(ch.kraus.len(), 4);
        let (h, q) = (0.5f64.sqrt(), 0.5);
        assert!(ch.kraus[0].max_abs_diff(&ComplexMatrix::from_real(2, &[h, 0.0, 0.0, q])) < 1e-15);
        assert!(ch.kraus[1].max_abs_diff(&ComplexMatrix::from_real(2, &[0.0, q, 0.0, 0.0])) < 1e-15);
        assert!(ch.kraus[2].max_abs_diff(&ComplexMatrix::from_real(2, &[q, 0.0, 0.0, h])) < 1e-15);
        assert!(ch.kraus[3].max_abs_diff(&ComplexMatrix::from_real(2, &[0.0, 0.0, q, 0.0])) < 1e-15);
        for p in [0.0, 0.3, 0.5, 1.0] {
            for g in [0.0, 0.25, 0.9, 1.0] {
                assert!(kraus_gad(p, g).unwrap().completeness_error() < 1e-15);
            }
        }
    }

    #[test]
    fn parameters_out_of_range() {
        assert!(matches!(kraus_bf(-0.1), Err(Error::OutOfRange { name: "p", .. })));
        assert!(matches!(kraus_bf(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            kraus_gad(0.5, 1.01),
            Err(Error::OutOfRange { name: "gamma", .. })
        ));
        assert!(kraus_gad(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn identity_channels() {
        let rho = bds_to_density(&coeffs(0.5, 0.3, 0.1)).unwrap();
        let out = apply_channel(&rho, &kraus_bf(0.0).unwrap()).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-16);
        for p in [0.0, 0.3, 1.0] {
            let out = apply_channel(&rho, &kraus_gad(p, 0.0).unwrap()).unwrap();
            assert!(out.max_abs_diff(&rho) < 1e-15);
        }
    }

    #[test]
    fn full_bit_flip_keeps_only_c1() {
        let rho = bds_to_density(&coeffs(-0.4, 0.3, 0.2)).unwrap();
        let out = apply_channel(&rho, &kraus_bf(1.0).unwrap()).unwrap();
        let p = density_to_bds(&out).unwrap();
        assert_abs_diff_eq!(p.coeffs.c1, -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeffs.c2, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coeffs.c3, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn full_damping_at_half_maps_to_maximally_mixed() {
        let ch = kraus_gad(0.5, 1.0).unwrap();
        let rho = bds_to_density(&coeffs(-0.9, 0.7, 0.8)).unwrap();
        let out = apply_channel(&rho, &ch).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn gad_example_state() {
        let ch = kraus_gad(0.5, 0.4).unwrap();
        let out = apply_channel(&bds_to_density(&coeffs(0.5, 0.3, 0.1)).unwrap(), &ch).unwrap();
        let p = density_to_bds(&out).unwrap();
        assert_abs_diff_eq!(p.coeffs.c1, 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(p.coeffs.c2, 0.18, epsilon = 1e-14);
        assert_abs_diff_eq!(p.coeffs.c3, 0.036, epsilon = 1e-14);
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn coefficient_map_examples() {
        let c = coeffs(-0.9, -0.9, -0.9);
        assert_eq!(evolve_coeffs(&c, &kraus_bf(0.0).unwrap()).unwrap(), c);
        assert_eq!(evolve_coeffs(&c, &kraus_gad(0.5, 0.0).unwrap()).unwrap(), c);

        let bf = evolve_coeffs(&c, &kraus_bf(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(bf.c1, -0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(bf.c2, -0.225, epsilon = 1e-15);
        assert_abs_diff_eq!(bf.c3, -0.225, epsilon = 1e-15);

        let gad = evolve_coeffs(&c, &kraus_gad(0.5, 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(gad.c1, -0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(gad.c2, -0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(gad.c3, -0.225, epsilon = 1e-15);
    }

    #[test]
    fn coefficient_map_rejects_gad_off_half() {
        let err = evolve_coeffs(&coeffs(0.1, 0.1, 0.1), &kraus_gad(0.3, 0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedParameters(_)));
        // The full density-matrix path still accepts it.
        let rho = bds_to_density(&coeffs(0.1, 0.1, 0.1)).unwrap();
        assert!(apply_channel(&rho, &kraus_gad(0.3, 0.5).unwrap()).is_ok());
    }

    #[test]
    fn consistency_residuals() {
        let c = coeffs(0.5, -0.3, 0.1);
        for p in [0.0, 0.2, 0.5, 1.0] {
            assert!(verify_channel_consistency(&c, &kraus_bf(p).unwrap()).unwrap() < 1e-10);
        }
        for g in [0.0, 0.3, 0.5, 1.0] {
            assert!(verify_channel_consistency(&c, &kraus_gad(0.5, g).unwrap()).unwrap() < 1e-10);
        }
        let zero = BellDiagonalCoeffs::ZERO;
        assert!(verify_channel_consistency(&zero, &kraus_gad(0.5, 0.7).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn wrong_dagger_placement_is_not_trace_preserving() {
        // (E_i⊗E_j) ρ (E_i⊗E_j†): only the second factor daggered.
        let ch = kraus_gad(0.5, 0.6).unwrap();
        let rho = bds_to_density(&coeffs(0.2, -0.3, 0.4)).unwrap();
        let mut literal = ComplexMatrix::zeros(4);
        for ei in &ch.kraus {
            for ej in &ch.kraus {
                let left = kron(ei, ej);
                let right = kron(ei, &ej.adjoint());
                literal = &literal + &(&(&left * &rho) * &right);
            }
        }
        assert!((literal.trace().re - 1.0).abs() > 1e-3);
        let proper = apply_channel(&rho, &ch).unwrap();
        assert_abs_diff_eq!(proper.trace().re, 1.0, epsilon = 1e-14);
    }
}
