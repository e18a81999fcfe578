use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::drive::PiecewiseConstant;
use crate::error::{Error, Result};
use crate::spectral::SpectralDensity;

use super::config::{Output, ScenarioConfig};
use super::run::run_scenario;

/// Scalar configuration field varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Temperature,
    Coupling,
    /// `<sigma_2^z>` of the second qubit, in `[-1, 1]`.
    Sigma2z,
    /// `|<+|aux>|^2` of the second qubit, in `[0, 1]`.
    AuxPopulation,
    Eta,
    Exponent,
    Peak,
    Width,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" => Axis::Temperature,
            "J" => Axis::Coupling,
            "sigma2z" => Axis::Sigma2z,
            "aux_population" => Axis::AuxPopulation,
            "eta" => Axis::Eta,
            "s" => Axis::Exponent,
            "Omega" => Axis::Peak,
            "l" => Axis::Width,
            other => return Err(Error::UnknownAxis(other.to_string())),
        })
    }
}

impl Axis {
    pub const NAMES: [&'static str; 8] = ["T", "J", "sigma2z", "aux_population", "eta", "s", "Omega", "l"];

    /// Copy of `cfg` with this axis set to `v`.
    pub fn apply(self, cfg: &ScenarioConfig, v: f64) -> Result<ScenarioConfig> {
        let mut out = cfg.clone();
        let bad = |what: &str| Error::config("axis", format!("{what} cannot be swept for this configuration"));
        match self {
            Axis::Temperature => out.temperature = v,
            Axis::Coupling => match (&mut out.drive, &mut out.case_study) {
                (_, Some(cs)) => cs.j = v,
                (Some(d), None) => d.j = PiecewiseConstant::constant(v),
                (None, None) => return Err(bad("J")),
            },
            Axis::Sigma2z | Axis::AuxPopulation => {
                let p = if self == Axis::Sigma2z { 0.5 * (1.0 + v) } else { v };
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::config("values", format!("{v} out of range for this axis")));
                }
                let amps = [p.sqrt(), (1.0 - p).sqrt()];
                out.initial_state = out.initial_state.with_second(amps)?;
                if let Some(pair) = &out.pair {
                    out.pair = Some(pair.with_second(amps)?);
                }
            }
            Axis::Eta => match &mut out.spectral {
                SpectralDensity::Ohmic { eta, .. }
                | SpectralDensity::PowerLaw { eta, .. }
                | SpectralDensity::Lorentzian { eta, .. } => *eta = v,
                SpectralDensity::Discrete { .. } => return Err(bad("eta")),
            },
            Axis::Exponent => match out.spectral {
                SpectralDensity::Ohmic { eta, omega_c } | SpectralDensity::PowerLaw { eta, omega_c, .. } => {
                    out.spectral = SpectralDensity::power_law(eta, v, omega_c)
                }
                _ => return Err(bad("s")),
            },
            Axis::Peak | Axis::Width => match &mut out.spectral {
                SpectralDensity::Lorentzian { peak, width, .. } => {
                    if self == Axis::Peak {
                        *peak = v
                    } else {
                        *width = v
                    }
                }
                _ => return Err(bad("Omega / l")),
            },
        }
        Ok(out)
    }
}

/// Summary of one sweep point. `None` where the quantity does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub min_gamma: Option<f64>,
    pub min_gamma_tilde: Option<f64>,
    pub blp_composite: Option<f64>,
    pub blp_reduced: Option<f64>,
}

pub fn sweep(cfg: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    let axis: Axis = axis.parse()?;
    if values.is_empty() {
        return Err(Error::Empty("sweep values"));
    }
    let mut base = cfg.clone();
    base.outputs = if base.case_study.is_some() {
        vec![Output::Reduced]
    } else {
        vec![Output::Rhp]
    };
    if base.pair.is_some() {
        base.outputs.push(Output::Blp);
    }
    values
        .par_iter()
        .map(|&v| {
            let report = run_scenario(&axis.apply(&base, v)?)?;
            Ok(SweepRow {
                value: v,
                min_gamma: report.composite.rhp_min_rate(),
                min_gamma_tilde: report.reduced.rhp_min_rate(),
                blp_composite: report.composite.blp_measure(),
                blp_reduced: report.reduced.blp_measure(),
            })
        })
        .collect()
}

pub fn sweep_to_csv(axis: &str, rows: &[SweepRow]) -> String {
    let mut out = String::from("# units: rates [omega_c], blp measures [1]\n");
    writeln!(out, "{axis},min_gamma,min_gamma_tilde,blp_composite,blp_reduced").unwrap();
    let f = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.16e}"));
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            f(Some(r.value)),
            f(r.min_gamma),
            f(r.min_gamma_tilde),
            f(r.blp_composite),
            f(r.blp_reduced)
        )
        .unwrap();
    }
    out
}
