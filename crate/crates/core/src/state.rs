//! Single- and two-qubit density matrices.
//!
//! Qubit basis is `{|+>, |->}` (sigma^z eigenvalues +1, -1). The two-qubit
//! basis is the product basis ordered `{|++>, |+->, |-+>, |-->}`, i.e. index
//! `2 * i1 + i2` with `i = 0` for `+`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Matrix2c = Matrix2<C64>;
pub type Matrix4c = Matrix4<C64>;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// sigma^z eigenvalue of each qubit for each product-basis index.
pub const SIGMA1: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
pub const SIGMA2: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// Shorthand for `C64::new`.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_abs_entry<I: IntoIterator<Item = C64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Checks hermiticity, unit trace and positivity within the crate
/// tolerances.
fn check_physical(entries: &[C64], dim: usize, min_eigenvalue: f64) -> Result<()> {
    let mut herm = 0.0f64;
    let mut trace = C64::new(0.0, 0.0);
    for i in 0..dim {
        trace += entries[i * dim + i];
        for j in 0..dim {
            herm = herm.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
        }
    }
    if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Unphysical("non-finite entry".into()));
    }
    if herm > HERMITICITY_TOL {
        return Err(Error::Unphysical(format!("not Hermitian (deviation {herm:e})")));
    }
    if (trace - 1.0).norm() > TRACE_TOL {
        return Err(Error::Unphysical(format!("trace {trace} differs from 1")));
    }
    if min_eigenvalue < -POSITIVITY_TOL {
        return Err(Error::Unphysical(format!("negative eigenvalue {min_eigenvalue:e}")));
    }
    Ok(())
}

fn row_major2(m: &Matrix2c) -> [C64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

fn row_major4(m: &Matrix4c) -> [C64; 16] {
    let mut out = [C64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            out[i * 4 + j] = m[(i, j)];
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix (the anti-Hermitian part is dropped).
pub fn hermitian_eigenvalues4(m: &Matrix4c) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    [ev[0], ev[1], ev[2], ev[3]]
}

pub fn hermitian_eigenvalues2(m: &Matrix2c) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

/// Density matrix of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho: Matrix2c,
}

impl QubitState {
    pub fn from_matrix(rho: Matrix2c) -> Result<Self> {
        let ev = hermitian_eigenvalues2(&rho);
        check_physical(&row_major2(&rho), 2, ev[0])?;
        Ok(QubitState { rho })
    }

    pub(crate) fn from_matrix_unchecked(rho: Matrix2c) -> Self {
        QubitState { rho }
    }

    /// Populations `(alpha, 1 - alpha)` and upper coherence `coherence`.
    pub fn from_parts(alpha: f64, coherence: C64) -> Self {
        QubitState {
            rho: Matrix2c::new(c(alpha, 0.0), coherence, coherence.conj(), c(1.0 - alpha, 0.0)),
        }
    }

    /// `a_plus |+> + a_minus |->`; the amplitudes must be normalized within
    /// `1e-9`.
    pub fn pure(a_plus: C64, a_minus: C64) -> Result<Self> {
        let norm = a_plus.norm_sqr() + a_minus.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Unphysical(format!("amplitudes have norm^2 {norm}")));
        }
        Ok(Self::pure_unchecked(a_plus, a_minus))
    }

    pub(crate) fn pure_unchecked(a_plus: C64, a_minus: C64) -> Self {
        let v = [a_plus, a_minus];
        QubitState {
            rho: Matrix2c::from_fn(|i, j| v[i] * v[j].conj()),
        }
    }

    pub fn plus() -> Self {
        QubitState::from_parts(1.0, c(0.0, 0.0))
    }

    pub fn minus() -> Self {
        QubitState::from_parts(0.0, c(0.0, 0.0))
    }

    /// State with Bloch vector `(x, y, z)`, `|r| <= 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if x * x + y * y + z * z > 1.0 + 1e-12 {
            return Err(Error::Unphysical("Bloch vector longer than 1".into()));
        }
        Ok(QubitState::from_parts(0.5 * (1.0 + z), c(0.5 * x, -0.5 * y)))
    }

    pub fn bloch(&self) -> [f64; 3] {
        let coh = self.rho[(0, 1)];
        [2.0 * coh.re, -2.0 * coh.im, (self.rho[(0, 0)] - self.rho[(1, 1)]).re]
    }

    pub fn matrix(&self) -> &Matrix2c {
        &self.rho
    }

    /// `<+|rho|+>`
    pub fn population_plus(&self) -> f64 {
        self.rho[(0, 0)].re
    }

    /// `<+|rho|->`
    pub fn coherence(&self) -> C64 {
        self.rho[(0, 1)]
    }

    pub fn sigma_z_mean(&self) -> f64 {
        (self.rho[(0, 0)] - self.rho[(1, 1)]).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues2(&self.rho)[0]
    }

    pub fn check_physical(&self) -> Result<()> {
        check_physical(&row_major2(&self.rho), 2, self.min_eigenvalue())
    }
}

/// Density matrix of the two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeState {
    rho: Matrix4c,
}

impl CompositeState {
    pub fn from_matrix(rho: Matrix4c) -> Result<Self> {
        let s = CompositeState { rho };
        s.check_physical()?;
        Ok(s)
    }

    pub(crate) fn from_matrix_unchecked(rho: Matrix4c) -> Self {
        CompositeState { rho }
    }

    pub fn product(first: &QubitState, second: &QubitState) -> Self {
        let a = first.matrix();
        let b = second.matrix();
        CompositeState {
            rho: Matrix4c::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)]),
        }
    }

    /// Pure state from amplitudes in the product basis, normalized within
    /// `1e-9`.
    pub fn pure(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Unphysical(format!("amplitudes have norm^2 {norm}")));
        }
        Ok(CompositeState {
            rho: Matrix4c::from_fn(|i, j| amplitudes[i] * amplitudes[j].conj()),
        })
    }

    /// `(|++> + |-->)/sqrt 2`
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).expect("normalized")
    }

    /// `(|++> - |-->)/sqrt 2`
    pub fn phi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)]).expect("normalized")
    }

    /// `(|+-> + |-+>)/sqrt 2`
    pub fn psi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]).expect("normalized")
    }

    /// `(|+-> - |-+>)/sqrt 2`
    pub fn psi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).expect("normalized")
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.rho
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.rho[(row, col)]
    }

    /// Trace over the second qubit.
    pub fn reduce_to_first(&self) -> QubitState {
        let r = &self.rho;
        QubitState::from_matrix_unchecked(Matrix2c::from_fn(|i, j| {
            r[(2 * i, 2 * j)] + r[(2 * i + 1, 2 * j + 1)]
        }))
    }

    /// Trace over the first qubit.
    pub fn reduce_to_second(&self) -> QubitState {
        let r = &self.rho;
        QubitState::from_matrix_unchecked(Matrix2c::from_fn(|i, j| r[(i, j)] + r[(i + 2, j + 2)]))
    }

    /// Whether the state equals the product of its marginals within `tol`
    /// (max-entry norm).
    pub fn is_product(&self, tol: f64) -> bool {
        let p = CompositeState::product(&self.reduce_to_first(), &self.reduce_to_second());
        max_abs_entry((p.rho - self.rho).iter().copied()) <= tol
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_physical(&self) -> Result<()> {
        check_physical(&row_major4(&self.rho), 4, self.min_eigenvalue())
    }
}

/// Largest entry modulus of `a - b`.
pub fn max_entry_difference2(a: &Matrix2c, b: &Matrix2c) -> f64 {
    max_abs_entry((a - b).iter().copied())
}

pub fn max_entry_difference4(a: &Matrix4c, b: &Matrix4c) -> f64 {
    max_abs_entry((a - b).iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_basis_ordering() {
        let s = CompositeState::product(&QubitState::plus(), &QubitState::minus());
        assert_eq!(s.element(1, 1), c(1.0, 0.0));
        assert_eq!(s.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);
        let s = CompositeState::product(&QubitState::minus(), &QubitState::plus());
        assert_eq!(s.element(2, 2), c(1.0, 0.0));
    }

    #[test]
    fn partial_traces_recover_factors() {
        let a = QubitState::from_bloch(0.3, -0.2, 0.5).unwrap();
        let b = QubitState::from_bloch(-0.6, 0.1, 0.2).unwrap();
        let p = CompositeState::product(&a, &b);
        assert!(max_entry_difference2(p.reduce_to_first().matrix(), a.matrix()) < 1e-15);
        assert!(max_entry_difference2(p.reduce_to_second().matrix(), b.matrix()) < 1e-15);
        assert!(p.is_product(1e-12));
        assert!(!CompositeState::phi_plus().is_product(1e-12));
        p.check_physical().unwrap();
    }

    #[test]
    fn bloch_round_trip() {
        let q = QubitState::from_bloch(0.1, 0.7, -0.4).unwrap();
        let [x, y, z] = q.bloch();
        assert!((x - 0.1).abs() < 1e-15 && (y - 0.7).abs() < 1e-15 && (z + 0.4).abs() < 1e-15);
        assert!(QubitState::from_bloch(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn physicality_checks() {
        let bad = Matrix2c::new(c(0.5, 0.0), c(0.6, 0.0), c(0.6, 0.0), c(0.5, 0.0));
        assert!(matches!(QubitState::from_matrix(bad), Err(Error::Unphysical(_))));
        let bad = Matrix2c::new(c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0));
        assert!(QubitState::from_matrix(bad).is_err());
        let bad = Matrix2c::new(c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
        assert!(QubitState::from_matrix(bad).is_err());
        assert!(QubitState::pure(c(1.0, 0.0), c(0.1, 0.0)).is_err());
        for bell in [
            CompositeState::phi_plus(),
            CompositeState::phi_minus(),
            CompositeState::psi_plus(),
            CompositeState::psi_minus(),
        ] {
            bell.check_physical().unwrap();
            let ev = bell.eigenvalues();
            assert!((ev.iter().copied().fold(f64::MIN, f64::max) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_qubit_amplitudes() {
        let q = QubitState::pure(c(0.1f64.sqrt(), 0.0), c(0.9f64.sqrt(), 0.0)).unwrap();
        assert!((q.population_plus() - 0.1).abs() < 1e-15);
        assert!((q.sigma_z_mean() + 0.8).abs() < 1e-15);
        assert!((q.coherence().re - 0.3).abs() < 1e-15);
    }
}
