//! Exact pure-dephasing dynamics of the two coupled qubits and of the first
//! qubit alone.
//!
//! With `S_z = sigma_1^z + sigma_2^z` coupled to the bath, every product-basis
//! population is conserved and each coherence `rho_mn` only picks up a phase
//! and the damping `exp(-(s_m - s_n)^2 Gamma(t) / 4)`, where `s` is the `S_z`
//! eigenvalue. Tracing out the second qubit leaves
//!
//! ```text
//! rho_1(t) = [[alpha,                          e^{-i phi_1} e^{-Gamma} beta(t)],
//!             [e^{i phi_1} e^{-Gamma} beta*(t), 1 - alpha                     ]]
//! beta(t)  = e^{i theta} <+-|rho(0)|--> + e^{-i theta} <++|rho(0)|-+>
//! ```
//!
//! with `phi_1 = int eps_1` and `theta = int J`. The single-qubit generator
//! follows from the logarithmic derivative of `beta`.

use crate::drive::DriveProfile;
use crate::error::{Error, Result};
use crate::ode::{self, LinearState};
use crate::spectral::DephasingKernel;
use crate::state::{c, CompositeState, Matrix2c, Matrix4c, QubitState, C64, SIGMA1, SIGMA2};

/// Below this modulus `beta` is treated as zero and the effective rates as
/// singular.
pub const BETA_SINGULAR: f64 = 1e-12;

const S_Z: [f64; 4] = [2.0, 0.0, 0.0, -2.0];

/// Phase accumulated by product-basis state `m` up to `t`.
fn energy_phase(drive: &DriveProfile, m: usize, t: f64) -> f64 {
    0.5 * SIGMA1[m] * drive.eps1.integral(t)
        + 0.5 * SIGMA2[m] * drive.eps2.integral(t)
        + 0.5 * SIGMA1[m] * SIGMA2[m] * drive.j.integral(t)
}

/// Composite state at `t` for a given decoherence exponent `Gamma(t)`.
pub fn evolve_composite_with_exponent(
    rho0: &CompositeState,
    drive: &DriveProfile,
    gamma_exponent: f64,
    t: f64,
) -> CompositeState {
    let phase: [f64; 4] = std::array::from_fn(|m| energy_phase(drive, m, t));
    let r = rho0.matrix();
    CompositeState::from_matrix_unchecked(Matrix4c::from_fn(|m, n| {
        if m == n {
            return r[(m, n)];
        }
        let ds = S_Z[m] - S_Z[n];
        let damping = (-0.25 * ds * ds * gamma_exponent).exp();
        r[(m, n)] * C64::from_polar(damping, -(phase[m] - phase[n]))
    }))
}

/// Composite state at `t`.
pub fn evolve_composite<K: DephasingKernel + ?Sized>(
    rho0: &CompositeState,
    drive: &DriveProfile,
    kernel: &K,
    t: f64,
) -> Result<CompositeState> {
    check_time(t)?;
    let g = kernel.exponent(t)?;
    Ok(evolve_composite_with_exponent(rho0, drive, g, t))
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("t", format!("must be >= 0, got {t}")))
    }
}

/// The parts of the composite initial state that survive the partial trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParameters {
    /// `<++|rho|++> + <+-|rho|+->`, conserved.
    pub alpha: f64,
    /// `<+-|rho|-->`, rotating as `e^{i theta}`.
    pub co_rotating: C64,
    /// `<++|rho|-+>`, rotating as `e^{-i theta}`.
    pub counter_rotating: C64,
}

impl ReducedParameters {
    pub fn from_state(rho0: &CompositeState) -> Self {
        ReducedParameters {
            alpha: rho0.element(0, 0).re + rho0.element(1, 1).re,
            co_rotating: rho0.element(1, 3),
            counter_rotating: rho0.element(0, 2),
        }
    }

    pub fn beta(&self, drive: &DriveProfile, t: f64) -> C64 {
        let theta = drive.j.integral(t);
        self.co_rotating * C64::cis(theta) + self.counter_rotating * C64::cis(-theta)
    }

    pub fn beta0(&self) -> C64 {
        self.co_rotating + self.counter_rotating
    }

    /// `d beta / dt`, exact for piecewise-constant couplings (right derivative
    /// at a breakpoint).
    pub fn beta_derivative(&self, drive: &DriveProfile, t: f64) -> C64 {
        let theta = drive.j.integral(t);
        let j = drive.j.value(t);
        C64::new(0.0, j)
            * (self.co_rotating * C64::cis(theta) - self.counter_rotating * C64::cis(-theta))
    }

    /// Reduced state for a given `Gamma(t)`.
    pub fn reduced_state(&self, drive: &DriveProfile, gamma_exponent: f64, t: f64) -> QubitState {
        let coherence =
            C64::cis(-drive.eps1.integral(t)) * (-gamma_exponent).exp() * self.beta(drive, t);
        QubitState::from_parts(self.alpha, coherence)
    }
}

/// `beta(t)` of a composite initial state.
pub fn beta(rho_s0: &CompositeState, drive: &DriveProfile, t: f64) -> C64 {
    ReducedParameters::from_state(rho_s0).beta(drive, t)
}

/// First-qubit state at `t`.
pub fn reduced_qubit<K: DephasingKernel + ?Sized>(
    rho_s0: &CompositeState,
    drive: &DriveProfile,
    kernel: &K,
    t: f64,
) -> Result<QubitState> {
    check_time(t)?;
    let g = kernel.exponent(t)?;
    Ok(ReducedParameters::from_state(rho_s0).reduced_state(drive, g, t))
}

/// Effective single-qubit rates. The auxiliary contributions are `None`
/// where `|beta(t)| < BETA_SINGULAR`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRates {
    /// Bath rate `gamma(t)`.
    pub gamma: f64,
    pub gamma_tilde: Option<f64>,
    pub j_tilde: Option<f64>,
    pub gamma_aux: Option<f64>,
}

impl EffectiveRates {
    pub fn is_finite(&self) -> bool {
        self.gamma_tilde.is_some()
    }
}

impl ReducedParameters {
    /// `(gamma_aux, j_tilde)` from `beta'/beta`, or `None` at a zero of
    /// `beta`.
    pub fn auxiliary_rates(&self, drive: &DriveProfile, t: f64) -> Option<(f64, f64)> {
        let b = self.beta(drive, t);
        if b.norm() < BETA_SINGULAR {
            return None;
        }
        // beta / |beta|^2 * d(beta*)/dt = conj(beta' / beta)
        let log_derivative = (self.beta_derivative(drive, t) / b).conj();
        Some((-log_derivative.re, log_derivative.im))
    }

    pub fn effective_rates(&self, drive: &DriveProfile, gamma: f64, t: f64) -> EffectiveRates {
        match self.auxiliary_rates(drive, t) {
            Some((aux, j_tilde)) => EffectiveRates {
                gamma,
                gamma_tilde: Some(gamma + aux),
                j_tilde: Some(j_tilde),
                gamma_aux: Some(aux),
            },
            None => EffectiveRates {
                gamma,
                gamma_tilde: None,
                j_tilde: None,
                gamma_aux: None,
            },
        }
    }
}

/// `gamma_tilde`, `J_tilde` and `gamma_aux` of the first qubit at `t`.
pub fn effective_rates<K: DephasingKernel + ?Sized>(
    rho_s0: &CompositeState,
    drive: &DriveProfile,
    kernel: &K,
    t: f64,
) -> Result<EffectiveRates> {
    check_time(t)?;
    let gamma = kernel.rate(t)?;
    Ok(ReducedParameters::from_state(rho_s0).effective_rates(drive, gamma, t))
}

/// Closed form of `gamma_aux` for a product initial state, in terms of the
/// second qubit's `<sigma^z>`. `None` where the denominator vanishes.
pub fn gamma_aux_product(sigma2z_mean: f64, drive: &DriveProfile, t: f64) -> Result<Option<f64>> {
    if !(-1.0..=1.0).contains(&sigma2z_mean) {
        return Err(Error::invalid("sigma2z_mean", format!("must lie in [-1, 1], got {sigma2z_mean}")));
    }
    check_time(t)?;
    let weight = 1.0 - sigma2z_mean * sigma2z_mean;
    let theta = drive.j.integral(t);
    let s = theta.sin();
    let denominator = 1.0 - weight * s * s;
    if denominator < BETA_SINGULAR {
        return Ok(None);
    }
    Ok(Some(0.5 * drive.j.value(t) * weight * (2.0 * theta).sin() / denominator))
}

/// Right-hand side of the single-qubit master equation,
/// `-i[(eps_1 + J~) sigma^z / 2, rho] + gamma~/2 (sigma^z rho sigma^z - rho)`.
pub fn reduced_generator(rho: &Matrix2c, eps1: f64, j_tilde: f64, gamma_tilde: f64) -> Matrix2c {
    let omega = eps1 + j_tilde;
    let coherence = rho[(0, 1)] * c(-gamma_tilde, -omega);
    Matrix2c::new(c(0.0, 0.0), coherence, coherence.conj(), c(0.0, 0.0))
}

/// Integrates the single-qubit master equation with the effective rates of
/// `rho_s0` from its reduced state at `t = 0`, sampling every `stride`
/// steps. Fails if `beta` vanishes at any stage time.
pub fn propagate_reduced<K: DephasingKernel + ?Sized>(
    rho_s0: &CompositeState,
    drive: &DriveProfile,
    kernel: &K,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<Vec<(f64, QubitState)>> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let params = ReducedParameters::from_state(rho_s0);
    let rho0 = params.reduced_state(drive, 0.0, 0.0);
    let stride = stride.max(1);
    let mut samples = Vec::with_capacity(steps / stride + 1);
    ode::integrate(
        |t, rho: &Matrix2c| {
            let gamma = kernel.rate(t).map_err(|e| e.at(t))?;
            let rates = params.effective_rates(drive, gamma, t);
            match (rates.gamma_tilde, rates.j_tilde) {
                (Some(g), Some(j)) => Ok(reduced_generator(rho, drive.eps1.value(t), j, g)),
                _ => Err(Error::invalid("beta", "vanishes along the trajectory").at(t)),
            }
        },
        *rho0.matrix(),
        0.0,
        dt,
        steps,
        |n, t, rho| {
            if n % stride == 0 {
                samples.push((t, QubitState::from_matrix_unchecked(*rho)));
            }
            Ok(())
        },
    )?;
    Ok(samples)
}

/// Operation elements `[Pi_0, Pi_+, Pi_-]` reproducing the reduced state at
/// `t` from the reduced state at 0. They depend on the composite initial
/// state through `beta(t)/beta(0)`.
pub fn kraus_elements(
    rho_s0: &CompositeState,
    drive: &DriveProfile,
    gamma_exponent: f64,
    t: f64,
) -> Result<[Matrix2c; 3]> {
    check_time(t)?;
    let params = ReducedParameters::from_state(rho_s0);
    let b0 = params.beta0();
    if b0.norm() < BETA_SINGULAR {
        return Err(Error::UndefinedRepresentation("beta(0) = 0".into()));
    }
    let ratio = params.beta(drive, t) / b0;
    let damping = (-gamma_exponent).exp();
    let mut radicand = 1.0 - damping * ratio.norm();
    if radicand < 0.0 {
        if radicand < -1e-12 {
            return Err(Error::InvalidRepresentation(format!(
                "|beta(t)/beta(0)| = {} exceeds exp(Gamma) = {}",
                ratio.norm(),
                1.0 / damping
            )));
        }
        radicand = 0.0;
    }
    let root = ratio.sqrt();
    let half_phase = 0.5 * drive.eps1.integral(t);
    let amp = (-0.5 * gamma_exponent).exp();
    let z = c(0.0, 0.0);
    let pi0 = Matrix2c::new(
        C64::from_polar(amp, -half_phase) * root,
        z,
        z,
        C64::from_polar(amp, half_phase) * root.conj(),
    );
    let r = c(radicand.sqrt(), 0.0);
    let pi_plus = Matrix2c::new(r, z, z, z);
    let pi_minus = Matrix2c::new(z, z, z, r);
    Ok([pi0, pi_plus, pi_minus])
}

/// `sum_k Pi_k rho Pi_k^dagger`
pub fn apply_operation(elements: &[Matrix2c], rho: &QubitState) -> QubitState {
    let out = elements
        .iter()
        .fold(Matrix2c::zeros(), |acc, p| acc + p * rho.matrix() * p.adjoint());
    QubitState::from_matrix_unchecked(out)
}

/// Delta weights `(2 J m, (2J)^2 (-1)^{m+1} m)` of the auxiliary-qubit
/// component of the spectral density, for `m = 1..=m_max`.
pub fn aux_spectral_weights(j: f64, m_max: usize) -> Result<Vec<(f64, f64)>> {
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::invalid("J", format!("must be positive, got {j}")));
    }
    if m_max == 0 {
        return Err(Error::invalid("m_max", "must be at least 1"));
    }
    Ok((1..=m_max)
        .map(|m| {
            let m = m as f64;
            let sign = if m as usize % 2 == 1 { 1.0 } else { -1.0 };
            (2.0 * j * m, 4.0 * j * j * sign * m)
        })
        .collect())
}

/// Effective temperature `(2J / eps_2) T` weighting the auxiliary harmonics.
pub fn spin_temperature(j: f64, eps2: f64, temperature: f64) -> Result<f64> {
    if eps2 == 0.0 || !eps2.is_finite() {
        return Err(Error::invalid("eps2", "must be non-zero"));
    }
    Ok(2.0 * j / eps2 * temperature)
}

/// Whether the single-qubit map is linear in its initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapLinearity {
    ProductState,
    NoCoupling,
    NonLinear,
}

impl MapLinearity {
    pub fn of(rho_s0: &CompositeState, drive: &DriveProfile) -> Self {
        if drive.coupling_vanishes() {
            MapLinearity::NoCoupling
        } else if rho_s0.is_product(1e-12) {
            MapLinearity::ProductState
        } else {
            MapLinearity::NonLinear
        }
    }

    pub fn is_linear(self) -> bool {
        !matches!(self, MapLinearity::NonLinear)
    }

    pub fn annotation(self) -> &'static str {
        match self {
            MapLinearity::ProductState => "reduced map linear (product initial state)",
            MapLinearity::NoCoupling => "reduced map linear (no qubit-qubit coupling)",
            MapLinearity::NonLinear => "map non-linear / CPTP not guaranteed",
        }
    }
}

impl LinearState for QubitState {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        QubitState::from_matrix_unchecked(self.matrix().add_scaled(k.matrix(), h))
    }
}
