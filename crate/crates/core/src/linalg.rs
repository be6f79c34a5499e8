//! Small dense complex linear algebra for qubit and two-qubit operators.
//!
//! Everything here works on matrices of dimension 2 or 4, so the routines
//! favour robustness over speed: the eigensolver is a cyclic complex Jacobi
//! iteration and products are plain triple loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to decide whether a matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as roundoff and clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if `entries` is not square.
    pub fn from_vec(dim: usize, entries: Vec<Complex64>) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self { dim, data: entries }
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        Self::from_vec(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() < tol
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    fn frobenius_off_diagonal(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices and friends.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, vec![ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `[σx, σy, σz]`.
    pub fn all() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }

    /// `(I + r·σ)/2` for a Bloch vector `r`.
    pub fn qubit_state(r: [f64; 3]) -> ComplexMatrix {
        ComplexMatrix::from_vec(
            2,
            vec![
                Complex64::new((1.0 + r[2]) / 2.0, 0.0),
                Complex64::new(r[0] / 2.0, -r[1] / 2.0),
                Complex64::new(r[0] / 2.0, r[1] / 2.0),
                Complex64::new((1.0 - r[2]) / 2.0, 0.0),
            ],
        )
    }
}

/// The four Bell states in the computational basis `|00>,|01>,|10>,|11>`.
pub mod bell {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn vec4(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 4] {
        [a, b, c, d].map(|x| Complex64::new(x, 0.0))
    }

    pub fn phi_plus() -> ComplexMatrix {
        ComplexMatrix::outer(&vec4(H, 0.0, 0.0, H))
    }

    pub fn phi_minus() -> ComplexMatrix {
        ComplexMatrix::outer(&vec4(H, 0.0, 0.0, -H))
    }

    pub fn psi_plus() -> ComplexMatrix {
        ComplexMatrix::outer(&vec4(0.0, H, H, 0.0))
    }

    pub fn psi_minus() -> ComplexMatrix {
        ComplexMatrix::outer(&vec4(0.0, H, -H, 0.0))
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|r| self.eigenvectors[(r, i)]).collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::diagonal(&self.eigenvalues);
        lambda.conjugate_by(&self.eigenvectors)
    }
}

/// Subsystem selector for two-qubit operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product with standard block ordering.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let deviation = m.hermitian_deviation();
    if deviation >= HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(m))
}

fn jacobi(m: &ComplexMatrix) -> Spectrum {
    let n = m.dim();
    // Symmetrize so roundoff asymmetry does not leak into the rotations.
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.frobenius_off_diagonal() < JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = v[(r, src)];
        }
    }
    Spectrum {
        eigenvalues,
        eigenvectors: vectors,
    }
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) · R(θ)` acting
/// on the (p, q) plane, updating `a ← U† a U` and `v ← v U`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // Columns p and q of U.
    let u_pp = Complex64::new(c, 0.0);
    let u_qp = -phase.conj() * s;
    let u_pq = Complex64::new(s, 0.0);
    let u_qq = phase.conj() * c;

    let n = a.dim();
    // a ← a U
    for r in 0..n {
        let (ap, aq) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = ap * u_pp + aq * u_qp;
        a[(r, q)] = ap * u_pq + aq * u_qq;
    }
    // a ← U† a
    for col in 0..n {
        let (ap, aq) = (a[(p, col)], a[(q, col)]);
        a[(p, col)] = u_pp.conj() * ap + u_qp.conj() * aq;
        a[(q, col)] = u_pq.conj() * ap + u_qq.conj() * aq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // v ← v U
    for r in 0..n {
        let (vp, vq) = (v[(r, p)], v[(r, q)]);
        v[(r, p)] = vp * u_pp + vq * u_qp;
        v[(r, q)] = vp * u_pq + vq * u_qq;
    }
}

/// Reduced state of a two-qubit operator, keeping `keep`.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::A => rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)],
                Subsystem::B => rho[(i, j)] + rho[(2 + i, 2 + j)],
            };
        }
    }
    Ok(out)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_hermitian(HERMITIAN_TOL) {
        jacobi(m).eigenvalues.iter().map(|x| x.abs()).sum()
    } else {
        let gram = &m.adjoint() * m;
        jacobi(&gram).eigenvalues.iter().map(|x| x.max(0.0).sqrt()).sum()
    }
}

/// Checks the density-matrix preconditions and returns the clamped spectrum.
pub fn density_spectrum(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    let spectrum = hermitian_eig(rho).map_err(|e| Error::NotDensityMatrix(e.to_string()))?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
    }
    spectrum
        .eigenvalues
        .into_iter()
        .map(|x| {
            if x >= 0.0 {
                Ok(x)
            } else if x >= -PSD_TOL {
                Ok(0.0)
            } else {
                Err(Error::NotDensityMatrix(format!("negative eigenvalue {x:e}")))
            }
        })
        .collect()
}

/// `-Σ x log₂ x` over a probability vector, with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eigenvalues = density_spectrum(rho)?;
    Ok(shannon_entropy(&eigenvalues).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let xx = kron(&pauli::x(), &pauli::x());
        let anti = ComplexMatrix::from_real(
            4,
            &[
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0,
            ],
        );
        assert_eq!(xx, anti);
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = ComplexMatrix::from_vec(2, vec![c(0.3, 0.1), c(-1.2, 0.4), c(0.0, 2.0), c(0.7, -0.5)]);
        let b = ComplexMatrix::from_vec(2, vec![c(1.1, 0.0), c(0.2, -0.9), c(-0.4, 0.3), c(0.05, 0.6)]);
        let ab = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(ab[(2 * i + k, 2 * j + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn eig_of_identity_and_pauli_z() {
        let s = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 4]);
        let s = hermitian_eig(&pauli::z()).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, -1.0]);
        let s = hermitian_eig(&pauli::y()).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_reconstructs_complex_hermitian() {
        let m = ComplexMatrix::from_vec(
            4,
            vec![
                c(0.4, 0.0),
                c(0.1, 0.2),
                c(-0.3, 0.05),
                c(0.0, 0.7),
                c(0.1, -0.2),
                c(-1.0, 0.0),
                c(0.25, -0.25),
                c(0.9, 0.1),
                c(-0.3, -0.05),
                c(0.25, 0.25),
                c(0.2, 0.0),
                c(-0.6, 0.0),
                c(0.0, -0.7),
                c(0.9, -0.1),
                c(-0.6, 0.0),
                c(1.3, 0.0),
            ],
        );
        let s = hermitian_eig(&m).unwrap();
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let v = &s.eigenvectors;
        assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn partial_trace_of_product_and_singlet() {
        let ra = pauli::qubit_state([0.3, -0.2, 0.5]);
        let rb = pauli::qubit_state([0.0, 0.6, -0.1]);
        let prod = kron(&ra, &rb);
        assert!(partial_trace(&prod, Subsystem::A).unwrap().max_abs_diff(&ra) < 1e-15);
        assert!(partial_trace(&prod, Subsystem::B).unwrap().max_abs_diff(&rb) < 1e-15);
        let half = ComplexMatrix::identity(2).scale(0.5);
        let singlet = bell::psi_minus();
        assert!(partial_trace(&singlet, Subsystem::A).unwrap().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_qubit_input() {
        let err = partial_trace(&ComplexMatrix::identity(2), Subsystem::A).unwrap_err();
        assert!(matches!(err, Error::BadDimension { expected: 4, actual: 2 }));
    }

    #[test]
    fn trace_norm_simple_cases() {
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::diagonal(&[0.5, -0.5])), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::identity(4)), 4.0, epsilon = 1e-14);
        // Nilpotent |0><1| has a single unit singular value.
        let n = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(trace_norm(&n), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn entropy_of_pure_and_mixed_states() {
        assert_abs_diff_eq!(von_neumann_entropy(&bell::psi_minus()).unwrap(), 0.0, epsilon = 1e-12);
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), 1.0, epsilon = 1e-14);
        let quarter = ComplexMatrix::identity(4).scale(0.25);
        assert_abs_diff_eq!(von_neumann_entropy(&quarter).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn entropy_rejects_invalid_states() {
        let neg = ComplexMatrix::diagonal(&[1.1, -0.1]);
        assert!(matches!(von_neumann_entropy(&neg), Err(Error::NotDensityMatrix(_))));
        let bad_trace = ComplexMatrix::diagonal(&[0.5, 0.4]);
        assert!(matches!(
            von_neumann_entropy(&bad_trace),
            Err(Error::NotDensityMatrix(_))
        ));
        // Roundoff-sized negatives are clamped.
        let tiny = ComplexMatrix::diagonal(&[1.0 + 1e-12, -1e-12]);
        assert!(von_neumann_entropy(&tiny).unwrap() >= 0.0);
    }
}
