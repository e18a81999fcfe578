use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::case_study::composite_pair_trajectories;
use crate::drive::DriveProfile;
use crate::dynamics::{evolve_composite_with_exponent, EffectiveRates, MapLinearity, ReducedParameters};
use crate::error::{Error, Result};
use crate::markov::{
    blp_witness, composite_trace_distance, qubit_trace_distance, reduced_trace_distance, rhp_witness,
    DistanceTrajectory, MarkovVerdict, WITNESS_TOL,
};
use crate::spectral::{Bath, DephasingKernel};
use crate::state::{CompositeState, QubitState};

use super::config::{Output, ScenarioConfig};

const BASIS: [&str; 4] = ["pp", "pm", "mp", "mm"];

/// One named column of samples; `None` marks a singular sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub unit: &'static str,
    pub values: Vec<Option<f64>>,
}

impl Series {
    fn new(name: impl Into<String>, unit: &'static str, values: Vec<Option<f64>>) -> Self {
        Series {
            name: name.into(),
            unit,
            values,
        }
    }

    fn dense(name: impl Into<String>, unit: &'static str, values: impl IntoIterator<Item = f64>) -> Self {
        Series::new(name, unit, values.into_iter().map(Some).collect())
    }

    pub fn min(&self) -> Option<f64> {
        self.values.iter().flatten().copied().reduce(f64::min)
    }
}

/// Everything produced by one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    pub composite: MarkovVerdict,
    pub reduced: MarkovVerdict,
    pub annotations: Vec<String>,
}

fn fmt_num(out: &mut String, v: Option<f64>) {
    match v {
        Some(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
        _ => out.push_str("NA"),
    }
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn fmt_float(v: Option<f64>) -> String {
    let mut s = String::new();
    fmt_num(&mut s, v);
    s
}

impl RunReport {
    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn distance_trajectory(&self, name: &str) -> Option<DistanceTrajectory> {
        let s = self.series(name)?;
        let d = s.values.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        DistanceTrajectory::new(self.times.clone(), d).ok()
    }

    fn write_verdict(out: &mut String, level: &str, v: &MarkovVerdict) {
        writeln!(
            out,
            "# {level}: rhp_min_rate={} rhp_indivisible={} blp_measure={} blp_backflow={}",
            fmt_float(v.rhp_min_rate()),
            fmt_opt(v.rhp_indivisible()),
            fmt_float(v.blp_measure()),
            fmt_opt(v.blp_backflow()),
        )
        .unwrap();
    }

    /// CSV with a comment header carrying units, verdicts and annotations.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.config.label {
            writeln!(out, "# scenario {label}").unwrap();
        }
        out.push_str("# units: t [1/omega_c]");
        for s in &self.series {
            write!(out, ", {} [{}]", s.name, s.unit).unwrap();
        }
        out.push('\n');
        Self::write_verdict(&mut out, "composite", &self.composite);
        Self::write_verdict(&mut out, "reduced", &self.reduced);
        for a in self.annotations.iter().chain(&self.reduced.annotation) {
            writeln!(out, "# note: {a}").unwrap();
        }
        out.push('t');
        for s in &self.series {
            write!(out, ",{}", s.name).unwrap();
        }
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            fmt_num(&mut out, Some(*t));
            for s in &self.series {
                out.push(',');
                fmt_num(&mut out, s.values[k]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn sample<F>(times: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    times.par_iter().map(|&t| f(t).map_err(|e| e.at(t))).collect()
}

fn composite_columns(states: &[CompositeState], series: &mut Vec<Series>) {
    for i in 0..4 {
        for j in i..4 {
            let name = format!("rho_{}_{}", BASIS[i], BASIS[j]);
            if i == j {
                series.push(Series::dense(name, "1", states.iter().map(|s| s.element(i, i).re)));
            } else {
                series.push(Series::dense(format!("{name}_re"), "1", states.iter().map(|s| s.element(i, j).re)));
                series.push(Series::dense(format!("{name}_im"), "1", states.iter().map(|s| s.element(i, j).im)));
            }
        }
    }
}

fn reduced_columns(states: &[QubitState], series: &mut Vec<Series>) {
    series.push(Series::dense("reduced_pp", "1", states.iter().map(|s| s.population_plus())));
    series.push(Series::dense("reduced_pm_re", "1", states.iter().map(|s| s.coherence().re)));
    series.push(Series::dense("reduced_pm_im", "1", states.iter().map(|s| s.coherence().im)));
}

fn blp(times: &[f64], d: &[f64]) -> Result<Option<crate::markov::BlpWitness>> {
    let traj = DistanceTrajectory::new(times.to_vec(), d.to_vec())?;
    blp_witness(&traj, WITNESS_TOL).map(Some)
}

/// Runs one scenario. Output is a pure function of the configuration.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.case_study.is_some() {
        run_case_study(cfg)
    } else {
        run_dephasing(cfg)
    }
}

fn run_dephasing(cfg: &ScenarioConfig) -> Result<RunReport> {
    let drive: &DriveProfile = cfg.drive.as_ref().expect("validated");
    let bath = Bath::new(cfg.spectral.clone(), cfg.temperature()?)?.with_quadrature(cfg.quadrature)?;
    let times = cfg.grid.times();
    let mut annotations = Vec::new();

    let first = cfg.initial_state.build("initial_state")?;
    annotations.extend(first.warning.clone());
    let second = cfg.pair.as_ref().map(|p| p.build("pair")).transpose()?;
    if let Some(w) = second.as_ref().and_then(|s| s.warning.clone()) {
        annotations.push(w);
    }

    use Output::*;
    let need_rate = [Gamma, GammaTilde, JTilde, GammaAux, Rhp].iter().any(|o| cfg.wants(*o));
    let need_exp = [GammaExponent, Composite, Reduced, DistanceComposite, DistanceReduced, Blp]
        .iter()
        .any(|o| cfg.wants(*o));
    let rates = if need_rate { Some(sample(&times, |t| bath.rate(t))?) } else { None };
    let exps = if need_exp { Some(sample(&times, |t| bath.exponent(t))?) } else { None };

    let params = ReducedParameters::from_state(&first.state);
    let mut series = Vec::new();
    if let (true, Some(r)) = (cfg.wants(Gamma), &rates) {
        series.push(Series::dense("gamma", "omega_c", r.iter().copied()));
    }
    if let (true, Some(g)) = (cfg.wants(GammaExponent), &exps) {
        series.push(Series::dense("Gamma", "1", g.iter().copied()));
    }
    let effective: Option<Vec<EffectiveRates>> = rates.as_ref().map(|r| {
        times
            .iter()
            .zip(r)
            .map(|(&t, &g)| params.effective_rates(drive, g, t))
            .collect()
    });
    if let Some(eff) = &effective {
        if cfg.wants(GammaTilde) {
            series.push(Series::new("gamma_tilde", "omega_c", eff.iter().map(|e| e.gamma_tilde).collect()));
        }
        if cfg.wants(JTilde) {
            series.push(Series::new("j_tilde", "omega_c", eff.iter().map(|e| e.j_tilde).collect()));
        }
        if cfg.wants(GammaAux) {
            series.push(Series::new("gamma_aux", "omega_c", eff.iter().map(|e| e.gamma_aux).collect()));
        }
        let singular = eff.iter().filter(|e| e.gamma_tilde.is_none()).count();
        if singular > 0 {
            annotations.push(format!("gamma_tilde singular (beta = 0) at {singular} of {} samples", times.len()));
        }
    }

    let evolve = |rho: &CompositeState| -> Vec<CompositeState> {
        let g = exps.as_ref().expect("exponent sampled");
        times
            .iter()
            .zip(g)
            .map(|(&t, &gt)| evolve_composite_with_exponent(rho, drive, gt, t))
            .collect()
    };
    if cfg.wants(Composite) {
        composite_columns(&evolve(&first.state), &mut series);
    }
    if cfg.wants(Reduced) {
        let g = exps.as_ref().expect("exponent sampled");
        let reduced: Vec<QubitState> = times
            .iter()
            .zip(g)
            .map(|(&t, &gt)| params.reduced_state(drive, gt, t))
            .collect();
        reduced_columns(&reduced, &mut series);
    }

    let mut composite = MarkovVerdict {
        rhp: None,
        blp: None,
        annotation: None,
    };
    let mut reduced = composite.clone();

    let wants_distance = [DistanceComposite, DistanceReduced, Blp].iter().any(|o| cfg.wants(*o));
    if let (Some(second), true) = (&second, wants_distance) {
        let g = exps.as_ref().expect("exponent sampled");
        let other = ReducedParameters::from_state(&second.state);
        let wants_dc = cfg.wants(DistanceComposite) || cfg.wants(Blp);
        if wants_dc {
            let a = evolve(&first.state);
            let b = evolve(&second.state);
            let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| composite_trace_distance(x, y)).collect();
            if cfg.wants(Blp) {
                composite.blp = blp(&times, &d)?;
            }
            if cfg.wants(DistanceComposite) {
                series.push(Series::dense("distance_composite", "1", d));
            }
        }
        let d: Vec<f64> = times
            .iter()
            .zip(g)
            .map(|(&t, &gt)| reduced_trace_distance(&params, &other, drive, gt, t))
            .collect();
        if cfg.wants(Blp) {
            reduced.blp = blp(&times, &d)?;
        }
        if cfg.wants(DistanceReduced) {
            series.push(Series::dense("distance_reduced", "1", d));
        }
    }

    if cfg.wants(Rhp) {
        let r = rates.as_ref().expect("rate sampled");
        composite.rhp = Some(rhp_witness(&r.iter().map(|x| Some(*x)).collect::<Vec<_>>(), WITNESS_TOL)?);
        let eff = effective.as_ref().expect("rate sampled");
        match rhp_witness(&eff.iter().map(|e| e.gamma_tilde).collect::<Vec<_>>(), WITNESS_TOL) {
            Ok(w) => reduced.rhp = Some(w),
            Err(Error::NoFiniteSamples) => {
                annotations.push("gamma_tilde singular at every sample; no reduced RHP verdict".into())
            }
            Err(e) => return Err(e),
        }
    }

    let mut linearity = MapLinearity::of(&first.state, drive);
    if let Some(s) = &second {
        let l = MapLinearity::of(&s.state, drive);
        if !l.is_linear() {
            linearity = l;
        }
    }
    if !linearity.is_linear() {
        reduced.annotation = Some(linearity.annotation().to_string());
    }

    Ok(RunReport {
        config: cfg.clone(),
        times,
        series,
        composite,
        reduced,
        annotations,
    })
}

fn run_case_study(cfg: &ScenarioConfig) -> Result<RunReport> {
    use Output::*;
    let params = cfg.case_study_params()?.expect("case study configured");
    let times = cfg.grid.times();
    let mut annotations = vec!["S_x coupling: Born-Markov secular composite generator at T = 0".to_string()];
    let first = cfg.initial_state.build("initial_state")?;
    annotations.extend(first.warning.clone());
    let second = match &cfg.pair {
        Some(p) => {
            let s = p.build("pair")?;
            annotations.extend(s.warning.clone());
            s.state
        }
        None => first.state,
    };
    let (a, b) = composite_pair_trajectories((&first.state, &second), &params, &times, None)?;
    let ra: Vec<QubitState> = a.iter().map(|s| s.reduce_to_first()).collect();
    let rb: Vec<QubitState> = b.iter().map(|s| s.reduce_to_first()).collect();

    let mut series = Vec::new();
    if cfg.wants(Composite) {
        composite_columns(&a, &mut series);
    }
    if cfg.wants(Reduced) {
        reduced_columns(&ra, &mut series);
    }
    let mut composite = MarkovVerdict {
        rhp: None,
        blp: None,
        annotation: None,
    };
    let mut reduced = composite.clone();
    if cfg.pair.is_some() {
        let dc: Vec<f64> = a.iter().zip(&b).map(|(x, y)| composite_trace_distance(x, y)).collect();
        let dr: Vec<f64> = ra.iter().zip(&rb).map(|(x, y)| qubit_trace_distance(x, y)).collect();
        if cfg.wants(Blp) {
            composite.blp = blp(&times, &dc)?;
            reduced.blp = blp(&times, &dr)?;
        }
        if cfg.wants(DistanceComposite) {
            series.push(Series::dense("distance_composite", "1", dc));
        }
        if cfg.wants(DistanceReduced) {
            series.push(Series::dense("distance_reduced", "1", dr));
        }
    }
    Ok(RunReport {
        config: cfg.clone(),
        times,
        series,
        composite,
        reduced,
        annotations,
    })
}
