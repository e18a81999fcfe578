//! Built-in scenarios reproducing the figure regimes.
//!
//! Where a figure leaves a temperature or coupling open, the presets use a
//! representative value per regime and run one panel per value.

use rayon::prelude::*;
use serde::Serialize;

use crate::drive::DriveProfile;
use crate::error::{Error, Result};
use crate::spectral::{QuadratureConfig, SpectralDensity};

use super::config::{CaseStudySpec, Grid, Output, ScenarioConfig, StateSpec};
use super::run::{run_scenario, RunReport};

pub const PRESETS: [&str; 7] = ["fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig3"];

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn lorentzian() -> SpectralDensity {
    SpectralDensity::lorentzian(0.1, 0.01, 0.01)
}

fn ohmic() -> SpectralDensity {
    SpectralDensity::ohmic(0.1, 1.0)
}

/// `(|+> -+ |->)/sqrt 2 ⊗ aux`
fn equatorial_pair(aux: [f64; 2]) -> (StateSpec, StateSpec) {
    (
        StateSpec::product_real([H, -H], aux),
        StateSpec::product_real([H, H], aux),
    )
}

fn base(label: String, spectral: SpectralDensity, temperature: f64, j: f64, aux: [f64; 2], grid: Grid) -> ScenarioConfig {
    let (a, b) = equatorial_pair(aux);
    ScenarioConfig {
        label: Some(label),
        spectral,
        temperature,
        drive: Some(DriveProfile::constant(0.0, 0.0, j)),
        initial_state: a,
        pair: Some(b),
        grid,
        outputs: vec![],
        quadrature: QuadratureConfig::default(),
        case_study: None,
    }
}

fn fig2(label: &str, outputs: Vec<Output>) -> ScenarioConfig {
    let aux = [0.1f64.sqrt(), 0.9f64.sqrt()];
    let grid = Grid {
        t_end: 3000.0,
        n_points: 1501,
    };
    ScenarioConfig {
        outputs,
        ..base(label.into(), lorentzian(), 2.5e-3, 2e-3, aux, grid)
    }
}

/// Panel configurations of a preset.
pub fn preset_configs(name: &str) -> Result<Vec<ScenarioConfig>> {
    use Output::*;
    let rates_only = vec![Gamma, GammaExponent, Rhp];
    let knob = vec![Gamma, GammaTilde, DistanceComposite, DistanceReduced, Blp, Rhp];
    let plus_x = [H, H];
    let out = match name {
        "fig1a" => [0.0, 0.1, 1.0]
            .iter()
            .map(|&t| ScenarioConfig {
                outputs: rates_only.clone(),
                ..base(format!("fig1a T={t}"), ohmic(), t, 0.0, plus_x, Grid { t_end: 20.0, n_points: 401 })
            })
            .collect(),
        "fig1b" => [2.5e-3, 1e-2, 1e-1]
            .iter()
            .map(|&t| ScenarioConfig {
                outputs: rates_only.clone(),
                ..base(format!("fig1b T={t}"), lorentzian(), t, 0.0, plus_x, Grid { t_end: 2000.0, n_points: 1001 })
            })
            .collect(),
        "fig1c" => [0.05, 0.1]
            .iter()
            .map(|&j| ScenarioConfig {
                outputs: knob.clone(),
                ..base(format!("fig1c J={j}"), ohmic(), 0.1, j, plus_x, Grid { t_end: 100.0, n_points: 1001 })
            })
            .collect(),
        "fig1d" => [2e-3, 5e-3]
            .iter()
            .map(|&j| ScenarioConfig {
                outputs: knob.clone(),
                ..base(format!("fig1d J={j}"), lorentzian(), 1e-2, j, plus_x, Grid { t_end: 2000.0, n_points: 1001 })
            })
            .collect(),
        "fig2a" => vec![fig2("fig2a", vec![Gamma, GammaTilde, GammaAux, Rhp])],
        "fig2b" => vec![fig2("fig2b", vec![DistanceComposite, DistanceReduced, Blp])],
        "fig3" => {
            let aux = [0.9, 0.19f64.sqrt()];
            let (a, b) = equatorial_pair(aux);
            vec![ScenarioConfig {
                label: Some("fig3".into()),
                spectral: ohmic(),
                temperature: 0.0,
                drive: None,
                initial_state: a,
                pair: Some(b),
                grid: Grid {
                    t_end: 1200.0,
                    n_points: 1201,
                },
                outputs: vec![Reduced, DistanceComposite, DistanceReduced, Blp],
                quadrature: QuadratureConfig::default(),
                case_study: Some(CaseStudySpec { eps: 0.1, j: 0.01 }),
            }]
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(out)
}

/// Reports of all panels of a preset, in panel order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetReport {
    pub name: String,
    pub panels: Vec<RunReport>,
}

impl PresetReport {
    pub fn panel(&self, label: &str) -> Option<&RunReport> {
        self.panels.iter().find(|p| p.config.label.as_deref() == Some(label))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.panels {
            out.push_str(&format!("# panel {}\n", p.config.label.as_deref().unwrap_or(&self.name)));
            out.push_str(&p.to_csv());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_preset(name: &str) -> Result<PresetReport> {
    let configs = preset_configs(name)?;
    let panels = configs.par_iter().map(run_scenario).collect::<Result<Vec<_>>>()?;
    Ok(PresetReport {
        name: name.to_string(),
        panels,
    })
}
