//! Bath spectral densities and the dephasing integrals built on them.
//!
//! Units: hbar = k_B = 1. Frequencies and temperatures are measured in the
//! cutoff frequency of the exponential-cutoff families.
//!
//! For a density `J(w)` and temperature `T` the bath enters the two-qubit
//! dynamics only through
//!
//! ```text
//! gamma(t) = int dw J(w)/w   sin(w t)     coth(w / 2T)
//! Gamma(t) = int dw J(w)/w^2 (1 - cos wt) coth(w / 2T)      (= int_0^t gamma)
//! ```
//!
//! Both are evaluated in the frequency domain by [`quadrature::integrate`],
//! with panels aligned to the period `2 pi / t` of the oscillating factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// One bath mode of a discrete density: coupling weight `|g_k|^2` at
/// frequency `w_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub weight: f64,
    pub frequency: f64,
}

/// Bath spectral density `J(w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralDensity {
    /// `eta w exp(-w / omega_c)`
    Ohmic { eta: f64, omega_c: f64 },
    /// `eta w^s exp(-w / omega_c) omega_c^(1 - s)`
    PowerLaw { eta: f64, s: f64, omega_c: f64 },
    /// Structured bath peaked near `peak` with full width `width / 2`:
    /// `2 eta w peak^4 / ((w^2 - peak^2)^2 + (w width / 2)^2)`.
    Lorentzian { eta: f64, peak: f64, width: f64 },
    /// Finite set of modes, `sum_k |g_k|^2 delta(w - w_k)`.
    Discrete { modes: Vec<Mode> },
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {value}")))
    }
}

impl SpectralDensity {
    pub fn ohmic(eta: f64, omega_c: f64) -> Self {
        SpectralDensity::Ohmic { eta, omega_c }
    }

    pub fn power_law(eta: f64, s: f64, omega_c: f64) -> Self {
        SpectralDensity::PowerLaw { eta, s, omega_c }
    }

    pub fn lorentzian(eta: f64, peak: f64, width: f64) -> Self {
        SpectralDensity::Lorentzian { eta, peak, width }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectralDensity::Ohmic { eta, omega_c } => {
                positive("eta", *eta)?;
                positive("omega_c", *omega_c)
            }
            SpectralDensity::PowerLaw { eta, s, omega_c } => {
                positive("eta", *eta)?;
                positive("s", *s)?;
                positive("omega_c", *omega_c)
            }
            SpectralDensity::Lorentzian { eta, peak, width } => {
                positive("eta", *eta)?;
                positive("peak", *peak)?;
                positive("width", *width)
            }
            SpectralDensity::Discrete { modes } => {
                if modes.is_empty() {
                    return Err(Error::invalid("modes", "discrete bath needs at least one mode"));
                }
                for m in modes {
                    positive("weight", m.weight)?;
                    positive("frequency", m.frequency)?;
                }
                Ok(())
            }
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, SpectralDensity::Discrete { .. })
    }

    /// `J(w)` for the continuous families.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::invalid("omega", format!("must be non-negative, got {omega}")));
        }
        match self {
            SpectralDensity::Discrete { .. } => Err(Error::invalid(
                "spectral",
                "a discrete density is a weighted comb; use the mode sums",
            )),
            _ => Ok(self.density(omega)),
        }
    }

    /// Unchecked `J(w)`; zero for discrete baths.
    fn density(&self, omega: f64) -> f64 {
        match *self {
            SpectralDensity::Ohmic { eta, omega_c } => eta * omega * (-omega / omega_c).exp(),
            SpectralDensity::PowerLaw { eta, s, omega_c } => {
                if omega == 0.0 {
                    return 0.0;
                }
                eta * omega.powf(s) * (-omega / omega_c).exp() * omega_c.powf(1.0 - s)
            }
            SpectralDensity::Lorentzian { eta, peak, width } => {
                let p2 = peak * peak;
                let detuning = omega * omega - p2;
                let damping = 0.5 * width * omega;
                2.0 * eta * omega * p2 * p2 / (detuning * detuning + damping * damping)
            }
            SpectralDensity::Discrete { .. } => 0.0,
        }
    }

    /// `J(w)/w` as `w -> 0`.
    fn low_frequency_slope(&self) -> f64 {
        match *self {
            SpectralDensity::Ohmic { eta, .. } => eta,
            SpectralDensity::PowerLaw { eta, s, .. } => {
                if s == 1.0 {
                    eta
                } else if s > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SpectralDensity::Lorentzian { eta, .. } => 2.0 * eta,
            SpectralDensity::Discrete { .. } => 0.0,
        }
    }

    /// Upper end of the frequency domain for a given `omega_max_factor`.
    pub fn cutoff(&self, omega_max_factor: f64) -> f64 {
        match *self {
            SpectralDensity::Ohmic { omega_c, .. } | SpectralDensity::PowerLaw { omega_c, .. } => {
                omega_max_factor * omega_c
            }
            SpectralDensity::Lorentzian { peak, width, .. } => {
                (omega_max_factor * peak).max(omega_max_factor * width).max(10.0)
            }
            SpectralDensity::Discrete { ref modes } => {
                modes.iter().map(|m| m.frequency).fold(0.0, f64::max)
            }
        }
    }
}

/// Bath temperature in units of the cutoff frequency.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 && value.is_finite() {
            Ok(Temperature(value))
        } else {
            Err(Error::invalid("temperature", format!("must be >= 0, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `coth(w / 2T)`, replaced by 1 at `T = 0`.
    pub fn thermal_factor(self, omega: f64) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else {
            1.0 / (omega / (2.0 * self.0)).tanh()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Multiple of the cutoff (or of the Lorentzian peak/width) bounding the
    /// frequency domain.
    pub omega_max_factor: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            omega_max_factor: 40.0,
            max_intervals: 200_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        if !(self.omega_max_factor >= 10.0) || !self.omega_max_factor.is_finite() {
            return Err(Error::invalid(
                "omega_max_factor",
                format!("must be >= 10, got {}", self.omega_max_factor),
            ));
        }
        if self.max_intervals == 0 {
            return Err(Error::invalid("max_intervals", "must be at least 1"));
        }
        Ok(())
    }
}

/// Source of the bath dephasing rate `gamma(t)` and exponent `Gamma(t)`.
pub trait DephasingKernel: Sync {
    fn rate(&self, t: f64) -> Result<f64>;
    fn exponent(&self, t: f64) -> Result<f64>;
}

/// A spectral density at a temperature, integrated with a fixed quadrature
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Bath {
    pub density: SpectralDensity,
    pub temperature: Temperature,
    pub quadrature: QuadratureConfig,
}

impl Bath {
    pub fn new(density: SpectralDensity, temperature: Temperature) -> Result<Self> {
        density.validate()?;
        Ok(Bath {
            density,
            temperature,
            quadrature: QuadratureConfig::default(),
        })
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureConfig) -> Result<Self> {
        quadrature.validate()?;
        self.quadrature = quadrature;
        Ok(self)
    }

    pub fn renormalization_shift(&self, t: f64) -> Result<f64> {
        renormalization_shift(&self.density, t, &self.quadrature)
    }
}

impl DephasingKernel for Bath {
    fn rate(&self, t: f64) -> Result<f64> {
        dephasing_rate(&self.density, self.temperature, t, &self.quadrature)
    }

    fn exponent(&self, t: f64) -> Result<f64> {
        dephasing_exponent(&self.density, self.temperature, t, &self.quadrature)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("t", format!("must be >= 0, got {t}")))
    }
}

/// `1 - cos x` without cancellation.
fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

fn integrate_oscillatory<F: Fn(f64) -> f64>(
    sd: &SpectralDensity,
    t: f64,
    q: &QuadratureConfig,
    integrand: F,
) -> Result<f64> {
    q.validate()?;
    let upper = sd.cutoff(q.omega_max_factor);
    let period = std::f64::consts::TAU / t;
    let breaks = if upper > period {
        quadrature::periodic_breaks(upper, period, 8)
    } else {
        quadrature::periodic_breaks(upper, 0.0, 8)
    };
    quadrature::integrate(integrand, &breaks, q.abs_tol, q.rel_tol, q.max_intervals).map(|r| r.value)
}

/// Dephasing rate `gamma(t)`.
pub fn dephasing_rate(sd: &SpectralDensity, temp: Temperature, t: f64, q: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    sd.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if let SpectralDensity::Discrete { modes } = sd {
        return Ok(modes
            .iter()
            .map(|m| m.weight / m.frequency * (m.frequency * t).sin() * temp.thermal_factor(m.frequency))
            .sum());
    }
    let slope = sd.low_frequency_slope();
    let at_zero = if temp.value() > 0.0 { 2.0 * temp.value() * t * slope } else { 0.0 };
    integrate_oscillatory(sd, t, q, |w| {
        if w == 0.0 {
            at_zero
        } else {
            sd.density(w) / w * (w * t).sin() * temp.thermal_factor(w)
        }
    })
}

/// Decoherence exponent `Gamma(t) = int_0^t gamma`, from its frequency-domain
/// form.
pub fn dephasing_exponent(
    sd: &SpectralDensity,
    temp: Temperature,
    t: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    check_time(t)?;
    sd.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if let SpectralDensity::Discrete { modes } = sd {
        return Ok(modes
            .iter()
            .map(|m| {
                m.weight / (m.frequency * m.frequency)
                    * one_minus_cos(m.frequency * t)
                    * temp.thermal_factor(m.frequency)
            })
            .sum());
    }
    let slope = sd.low_frequency_slope();
    let at_zero = if temp.value() > 0.0 { temp.value() * t * t * slope } else { 0.0 };
    integrate_oscillatory(sd, t, q, |w| {
        if w == 0.0 {
            at_zero
        } else {
            sd.density(w) / (w * w) * one_minus_cos(w * t) * temp.thermal_factor(w)
        }
    })
}

/// Bath-induced shift of the qubit-qubit coupling, `int dw J(w)(1 - cos wt)/w`.
/// Configured couplings are taken as already renormalized; this is reported
/// for diagnostics only.
pub fn renormalization_shift(sd: &SpectralDensity, t: f64, q: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    sd.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if let SpectralDensity::Discrete { modes } = sd {
        return Ok(modes
            .iter()
            .map(|m| m.weight / m.frequency * one_minus_cos(m.frequency * t))
            .sum());
    }
    integrate_oscillatory(sd, t, q, |w| {
        if w == 0.0 {
            0.0
        } else {
            sd.density(w) / w * one_minus_cos(w * t)
        }
    })
}

/// Midpoint discretization into `n_modes` modes on `[0, omega_max]`.
pub fn discretize(sd: &SpectralDensity, n_modes: usize, omega_max: f64) -> Result<SpectralDensity> {
    sd.validate()?;
    if sd.is_discrete() {
        return Err(Error::invalid("spectral", "already discrete"));
    }
    if n_modes == 0 {
        return Err(Error::invalid("n_modes", "must be at least 1"));
    }
    positive("omega_max", omega_max)?;
    let step = omega_max / n_modes as f64;
    let modes = (0..n_modes)
        .map(|k| {
            let frequency = (k as f64 + 0.5) * step;
            Mode {
                weight: sd.density(frequency) * step,
                frequency,
            }
        })
        .filter(|m| m.weight > 0.0)
        .collect::<Vec<_>>();
    if modes.is_empty() {
        return Err(Error::invalid("omega_max", "all discretized weights vanish"));
    }
    Ok(SpectralDensity::Discrete { modes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn ohmic_closed_form_value() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        let v = sd.evaluate(1.0).unwrap();
        assert!((v - 0.1 * (-1.0f64).exp()).abs() < 1e-16);
        assert!((v - 0.036_787_944_117_144_23).abs() < 1e-15);
    }

    #[test]
    fn every_family_vanishes_at_zero() {
        for sd in [
            SpectralDensity::ohmic(0.1, 1.0),
            SpectralDensity::power_law(0.1, 3.0, 1.0),
            SpectralDensity::power_law(0.1, 0.5, 1.0),
            SpectralDensity::lorentzian(0.1, 0.01, 0.01),
        ] {
            assert_eq!(sd.evaluate(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn lorentzian_at_peak() {
        // 2 eta W^5 / (W w / 2)^2 = 8 eta W^3 / w^2; mpmath at 50 digits
        // gives 0.008 (exact in decimal) for eta = 0.1, W = w = 0.01.
        let sd = SpectralDensity::lorentzian(0.1, 0.01, 0.01);
        let v = sd.evaluate(0.01).unwrap();
        assert!((v - 8e-3).abs() < 1e-17, "{v}");
    }

    #[test]
    fn ohmic_matches_power_law_with_unit_exponent() {
        let a = SpectralDensity::ohmic(0.3, 2.0);
        let b = SpectralDensity::power_law(0.3, 1.0, 2.0);
        for k in 0..200 {
            let w = 0.05 * k as f64;
            let (x, y) = (a.evaluate(w).unwrap(), b.evaluate(w).unwrap());
            assert!((x - y).abs() <= 1e-15 * x.abs().max(1e-300), "w = {w}");
        }
    }

    #[test]
    fn evaluate_rejects_negative_frequency_and_discrete() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        assert!(matches!(sd.evaluate(-1.0), Err(Error::InvalidParameter { .. })));
        let d = discretize(&sd, 4, 1.0).unwrap();
        assert!(d.evaluate(0.5).is_err());
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(SpectralDensity::ohmic(0.0, 1.0).validate().is_err());
        assert!(SpectralDensity::power_law(0.1, -1.0, 1.0).validate().is_err());
        assert!(SpectralDensity::lorentzian(0.1, 0.01, f64::NAN).validate().is_err());
        let bad = SpectralDensity::Discrete {
            modes: vec![Mode { weight: 0.1, frequency: 0.0 }],
        };
        assert!(bad.validate().is_err());
        assert!(Temperature::new(-0.1).is_err());
        let mut cfg = q();
        cfg.omega_max_factor = 5.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ohmic_zero_temperature_rate_and_exponent() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        let g = dephasing_rate(&sd, Temperature::ZERO, 1.0, &q()).unwrap();
        assert!((g - 0.05).abs() < 1e-12, "{g}");
        let big_g = dephasing_exponent(&sd, Temperature::ZERO, 1.0, &q()).unwrap();
        assert!((big_g - 0.05 * 2f64.ln()).abs() < 1e-12);
        assert!((big_g - 0.034_657_359_027_997_26).abs() < 1e-12);
    }

    #[test]
    fn super_ohmic_rate_goes_negative() {
        let sd = SpectralDensity::power_law(0.1, 3.0, 1.0);
        let g = dephasing_rate(&sd, Temperature::ZERO, 2.0, &q()).unwrap();
        assert!((g + 0.0032).abs() < 1e-12, "{g}");
    }

    #[test]
    fn everything_vanishes_at_time_zero() {
        let sd = SpectralDensity::lorentzian(0.1, 0.01, 0.01);
        let t = Temperature::new(0.3).unwrap();
        assert_eq!(dephasing_rate(&sd, t, 0.0, &q()).unwrap(), 0.0);
        assert_eq!(dephasing_exponent(&sd, t, 0.0, &q()).unwrap(), 0.0);
        assert_eq!(renormalization_shift(&sd, 0.0, &q()).unwrap(), 0.0);
        let d = discretize(&sd, 100, 1.0).unwrap();
        assert_eq!(dephasing_rate(&d, t, 0.0, &q()).unwrap(), 0.0);
    }

    #[test]
    fn negative_time_is_rejected() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        assert!(dephasing_rate(&sd, Temperature::ZERO, -1.0, &q()).is_err());
        assert!(dephasing_exponent(&sd, Temperature::ZERO, f64::NAN, &q()).is_err());
    }

    #[test]
    fn renormalization_shift_closed_form() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        let s = renormalization_shift(&sd, 1.0, &q()).unwrap();
        assert!((s - 0.05).abs() < 1e-12);
        let mut last = 0.0;
        for t in [0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
            let s = renormalization_shift(&sd, t, &q()).unwrap();
            let exact = 0.1 * (1.0 - 1.0 / (1.0 + t * t));
            assert!((s - exact).abs() < 1e-10, "t = {t}: {s} vs {exact}");
            assert!(s > last);
            last = s;
        }
        assert!((last - 0.1).abs() < 1e-4);
    }

    #[test]
    fn single_mode_discretization() {
        let sd = SpectralDensity::ohmic(0.1, 1.0);
        let d = discretize(&sd, 1, 2.0).unwrap();
        match d {
            SpectralDensity::Discrete { modes } => {
                assert_eq!(modes.len(), 1);
                assert_eq!(modes[0].frequency, 1.0);
                assert!((modes[0].weight - 2.0 * 0.1 * (-1.0f64).exp()).abs() < 1e-16);
            }
            _ => unreachable!(),
        }
        assert!(discretize(&sd, 0, 1.0).is_err());
        assert!(discretize(&sd, 10, 0.0).is_err());
    }

    #[test]
    fn thermal_factor_limits() {
        assert_eq!(Temperature::ZERO.thermal_factor(1e-300), 1.0);
        let t = Temperature::new(0.5).unwrap();
        assert!((t.thermal_factor(1e-6) - 1e6).abs() / 1e6 < 1e-9);
        assert!((t.thermal_factor(100.0) - 1.0).abs() < 1e-15);
    }
}
