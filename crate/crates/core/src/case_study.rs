//! Two qubits coupled to the bath through `S_x = sigma_1^x + sigma_2^x`
//! instead of `S_z`, at zero temperature.
//!
//! The composite dynamics is taken Born–Markov and secular: jumps run down the
//! ladder `|++> -> |+s> -> |-->` at the Bohr frequencies `eps + J` and
//! `eps - J`, with rate `J(w)` at each. The antisymmetric state
//! `|-s> = (|+-> - |-+>)/sqrt 2` is dark and traps population.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::markov::{qubit_trace_distance, DistanceTrajectory};
use crate::ode::rk4_step;
use crate::spectral::SpectralDensity;
use crate::state::{c, CompositeState, Matrix4c, QubitState, C64};

/// Abort threshold for negative eigenvalues along an integration.
pub const POSITIVITY_ABORT: f64 = 1e-7;
/// Upper bound on `dt * (max rate + ||H||)`.
pub const STEP_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudyParams {
    pub eps: f64,
    pub j: f64,
    pub density: SpectralDensity,
}

impl CaseStudyParams {
    pub fn new(eps: f64, j: f64, density: SpectralDensity) -> Result<Self> {
        if !(eps.is_finite() && j.is_finite()) || !(eps > j && j > 0.0) {
            return Err(Error::UnsupportedRegime(format!(
                "requires eps > J > 0, got eps = {eps}, J = {j}"
            )));
        }
        if density.is_discrete() {
            return Err(Error::invalid("density", "needs a continuous spectral density"));
        }
        density.validate()?;
        Ok(CaseStudyParams { eps, j, density })
    }

    /// `(eps + J, eps - J)`
    pub fn bohr_frequencies(&self) -> (f64, f64) {
        (self.eps + self.j, self.eps - self.j)
    }

    /// Decay rate of the lower transition, which sets the single-qubit time
    /// scale.
    pub fn lower_rate(&self) -> Result<f64> {
        self.density.evaluate(self.eps - self.j)
    }
}

/// Hamiltonian plus jump operators with their rates.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladGenerator {
    pub hamiltonian: Matrix4c,
    pub jumps: Vec<(Matrix4c, f64)>,
}

fn ket(amplitudes: [f64; 4]) -> [C64; 4] {
    amplitudes.map(|a| c(a, 0.0))
}

fn outer(a: &[C64; 4], b: &[C64; 4]) -> Matrix4c {
    Matrix4c::from_fn(|i, j| a[i] * b[j].conj())
}

/// `sigma_1^x + sigma_2^x` in the product basis.
pub fn collective_sx() -> Matrix4c {
    let mut m = Matrix4c::zeros();
    for i in 0..4 {
        m[(i, i ^ 2)] += c(1.0, 0.0);
        m[(i, i ^ 1)] += c(1.0, 0.0);
    }
    m
}

/// `|+s>` and `|-s>`.
pub fn symmetric_states() -> ([C64; 4], [C64; 4]) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (ket([0.0, h, h, 0.0]), ket([0.0, h, -h, 0.0]))
}

pub fn build_generator(p: &CaseStudyParams) -> Result<LindbladGenerator> {
    let (eps, j) = (p.eps, p.j);
    let hamiltonian = Matrix4c::from_diagonal(&nalgebra::Vector4::new(
        c(eps + 0.5 * j, 0.0),
        c(-0.5 * j, 0.0),
        c(-0.5 * j, 0.0),
        c(-eps + 0.5 * j, 0.0),
    ));
    let sx = collective_sx();
    let pp = ket([1.0, 0.0, 0.0, 0.0]);
    let mm = ket([0.0, 0.0, 0.0, 1.0]);
    let (sym, _) = symmetric_states();
    let element = |bra: &[C64; 4], k: &[C64; 4]| -> C64 {
        (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| bra[a].conj() * sx[(a, b)] * k[b])
            .sum()
    };
    let (upper, lower) = p.bohr_frequencies();
    let upper_jump = outer(&sym, &pp) * element(&sym, &pp);
    let lower_jump = outer(&mm, &sym) * element(&mm, &sym);
    Ok(LindbladGenerator {
        hamiltonian,
        jumps: vec![
            (upper_jump, p.density.evaluate(upper)?),
            (lower_jump, p.density.evaluate(lower)?),
        ],
    })
}

impl LindbladGenerator {
    pub fn max_rate(&self) -> f64 {
        self.jumps.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    /// Largest eigenvalue modulus of the Hamiltonian.
    pub fn hamiltonian_norm(&self) -> f64 {
        self.hamiltonian
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()))
    }

    pub fn apply(&self, rho: &Matrix4c) -> Matrix4c {
        let i = c(0.0, 1.0);
        let mut out = (self.hamiltonian * rho - rho * self.hamiltonian) * (-i);
        for (l, rate) in &self.jumps {
            let ld = l.adjoint();
            let ldl = ld * l;
            out += (l * rho * ld - (ldl * rho + rho * ldl) * c(0.5, 0.0)) * c(*rate, 0.0);
        }
        out
    }

    /// Step size `1e-2 / max(scale)` over the Hamiltonian and jump rates.
    pub fn default_step(&self) -> f64 {
        1e-2 / self.hamiltonian_norm().max(self.max_rate())
    }

    fn check_step(&self, dt: f64) -> Result<()> {
        let product = dt * (self.max_rate() + self.hamiltonian_norm());
        if !(dt > 0.0) || !(product < STEP_LIMIT) {
            return Err(Error::StepTooLarge {
                dt,
                product,
                limit: STEP_LIMIT,
            });
        }
        Ok(())
    }
}

/// Composite states at each time in `times`, propagated with RK4 steps no
/// longer than `dt`. Negative eigenvalues below `-POSITIVITY_ABORT` abort.
pub fn integrate(g: &LindbladGenerator, rho0: &CompositeState, times: &[f64], dt: f64) -> Result<Vec<CompositeState>> {
    g.check_step(dt)?;
    if times.first().is_some_and(|t| *t < 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times", "must be non-negative and strictly increasing"));
    }
    let mut rho = *rho0.matrix();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let mut f = |_t: f64, y: &Matrix4c| Ok(g.apply(y));
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt).ceil() as usize;
            let h = span / steps as f64;
            for k in 0..steps {
                rho = rk4_step(&mut f, t + k as f64 * h, &rho, h)?;
                let state = CompositeState::from_matrix_unchecked(rho);
                let min = state.min_eigenvalue();
                if min < -POSITIVITY_ABORT {
                    return Err(Error::Positivity {
                        time: t + (k + 1) as f64 * h,
                        min_eigenvalue: min,
                    });
                }
            }
        }
        t = target;
        out.push(CompositeState::from_matrix_unchecked(rho));
    }
    Ok(out)
}

/// Uniform grid `[0, t_end]` with `n` points.
pub fn uniform_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::invalid("t_end", format!("must be positive, got {t_end}")));
    }
    Ok((0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect())
}

/// Closed-form reduced state of the first qubit when the second starts in
/// `|->`.
pub fn analytic_reduced(rho1_0: &QubitState, p: &CaseStudyParams, t: f64) -> Result<QubitState> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    let rate = p.lower_rate()?;
    let factor = 0.5 * (1.0 + (-rate * t).exp());
    let alpha = rho1_0.population_plus() * factor * factor;
    let coherence = rho1_0.coherence() * C64::from_polar(factor, -(p.eps - p.j) * t);
    Ok(QubitState::from_parts(alpha, coherence))
}

/// Trace distance between the reduced states of `first ⊗ aux` and
/// `second ⊗ aux` on `times`.
pub fn case_study_distance(
    pair: (&QubitState, &QubitState),
    aux: &QubitState,
    p: &CaseStudyParams,
    times: &[f64],
    dt: Option<f64>,
) -> Result<DistanceTrajectory> {
    let traj = reduced_pair_trajectories(pair, aux, p, times, dt)?;
    let d = traj.0.iter().zip(&traj.1).map(|(a, b)| qubit_trace_distance(a, b)).collect();
    DistanceTrajectory::new(times.to_vec(), d)
}

/// Composite trajectories of both members of a pair, integrated in parallel.
pub fn composite_pair_trajectories(
    pair: (&CompositeState, &CompositeState),
    p: &CaseStudyParams,
    times: &[f64],
    dt: Option<f64>,
) -> Result<(Vec<CompositeState>, Vec<CompositeState>)> {
    let g = build_generator(p)?;
    let dt = dt.unwrap_or_else(|| g.default_step());
    let mut results: Vec<Result<Vec<CompositeState>>> = [pair.0, pair.1]
        .par_iter()
        .map(|rho| integrate(&g, rho, times, dt))
        .collect();
    let b = results.pop().expect("two members")?;
    let a = results.pop().expect("two members")?;
    Ok((a, b))
}

fn reduced_pair_trajectories(
    pair: (&QubitState, &QubitState),
    aux: &QubitState,
    p: &CaseStudyParams,
    times: &[f64],
    dt: Option<f64>,
) -> Result<(Vec<QubitState>, Vec<QubitState>)> {
    let a = CompositeState::product(pair.0, aux);
    let b = CompositeState::product(pair.1, aux);
    let (ta, tb) = composite_pair_trajectories((&a, &b), p, times, dt)?;
    Ok((
        ta.iter().map(|s| s.reduce_to_first()).collect(),
        tb.iter().map(|s| s.reduce_to_first()).collect(),
    ))
}
