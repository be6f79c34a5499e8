use crate::error::Result;
use crate::linalg::{density_spectrum, hermitian_eig, kron, pauli, ComplexMatrix};
use crate::states::level_populations;

/// `√λ1 − √λ2 − √λ3 − √λ4` before clamping at zero. Continuous in the state,
/// which makes it the quantity to bisect on when locating sudden death.
pub fn wootters_value(rho: &ComplexMatrix) -> Result<f64> {
    density_spectrum(rho)?;
    let yy = kron(&pauli::y(), &pauli::y());
    let flipped = rho.conj().conjugate_by(&yy);

    // ρ ρ̃ is similar to √ρ ρ̃ √ρ, which is Hermitian and PSD, so its
    // eigenvalues are computed on the Hermitian side.
    let spectrum = hermitian_eig(rho)?;
    let sqrt_vals: Vec<f64> = spectrum.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sqrt_rho = ComplexMatrix::diagonal(&sqrt_vals).conjugate_by(&spectrum.eigenvectors);
    let sandwich = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let mut roots: Vec<f64> = hermitian_eig(&sandwich)?
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots[0] - roots[1] - roots[2] - roots[3])
}

/// Wootters concurrence.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    Ok(wootters_value(rho)?.clamp(0.0, 1.0))
}

/// `max(0, (e^α sinh 2α − e^{−α}) / (e^α cosh 2α + e^{−α}))`, evaluated on
/// normalized level populations so that large |α| does not overflow.
pub fn concurrence_xxx_analytic(alpha: f64) -> f64 {
    let (p_singlet, p_triplet, _) = level_populations(alpha);
    (p_singlet - 3.0 * p_triplet).max(0.0)
}

/// Pieces shared by the noisy closed forms: `(2/Z) e^α sinh 2α` and
/// `(4/Z) e^{−α} − 1`.
fn thermal_terms(alpha: f64) -> (f64, f64) {
    let (p_singlet, p_triplet, _) = level_populations(alpha);
    (p_singlet - p_triplet, 4.0 * p_triplet - 1.0)
}

/// Published closed form for bit-flip noise, transcribed term by term
/// including the `(1+(1+p)²)` factor and the leading 2. Comparison only; it
/// disagrees with the Wootters value of the evolved state.
pub fn concurrence_bf_analytic(alpha: f64, p: f64) -> f64 {
    let (sinh_term, c3_term) = thermal_terms(alpha);
    let first = (sinh_term * (1.0 + (1.0 + p).powi(2))).abs();
    let second = 1.0 + c3_term * (1.0 - p).powi(2);
    2.0 * (first - second).max(0.0)
}

/// Published closed form for generalized amplitude damping (p = 1/2), with
/// the unbalanced bracket closed after the `(1−γ)²` factor. Comparison only.
pub fn concurrence_gad_analytic(alpha: f64, gamma: f64) -> f64 {
    let (sinh_term, c3_term) = thermal_terms(alpha);
    let first = (2.0 * sinh_term * (1.0 - gamma)).abs();
    let second = 1.0 + c3_term * (1.0 - gamma).powi(2);
    2.0 * (first - second).max(0.0)
}
