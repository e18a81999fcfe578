use serde::{Deserialize, Serialize};

use crate::case_study::CaseStudyParams;
use crate::drive::DriveProfile;
use crate::error::{Error, Result};
use crate::spectral::{QuadratureConfig, SpectralDensity, Temperature};
use crate::state::{c, CompositeState, Matrix4c, QubitState, C64};

/// Amplitude norms within this distance of 1 are accepted as is.
pub const NORM_EXACT: f64 = 1e-9;
/// Amplitude norms within this distance of 1 are renormalized with a warning;
/// anything further off is rejected.
pub const NORM_REPAIRABLE: f64 = 1e-6;

/// A complex amplitude written either as a real number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> C64 {
        match self {
            Amplitude::Real(x) => c(x, 0.0),
            Amplitude::Complex([re, im]) => c(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Initial two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    /// `(a+ |+> + a- |->) ⊗ (b+ |+> + b- |->)`
    Product { first: [Amplitude; 2], second: [Amplitude; 2] },
    /// Amplitudes in the basis `|++>, |+->, |-+>, |-->`.
    Pure { amplitudes: [Amplitude; 4] },
    Bell { name: BellState },
    /// Density matrix given by its real and imaginary parts, row-major.
    Matrix { re: [[f64; 4]; 4], im: [[f64; 4]; 4] },
}

/// A built initial state plus any warning raised while normalizing it.
#[derive(Debug, Clone)]
pub struct BuiltState {
    pub state: CompositeState,
    pub warning: Option<String>,
    /// Second-qubit state when the state is a product.
    pub second: Option<QubitState>,
}

fn normalize<const N: usize>(field: &str, amps: &[Amplitude; N]) -> Result<([C64; N], Option<String>)> {
    let mut v: [C64; N] = amps.map(Amplitude::value);
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::config(field, "amplitudes must be finite"));
    }
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dev = (norm - 1.0).abs();
    if dev <= NORM_EXACT {
        return Ok((v, None));
    }
    if dev <= NORM_REPAIRABLE {
        for z in v.iter_mut() {
            *z /= norm;
        }
        return Ok((v, Some(format!("{field}: amplitudes renormalized (norm {norm:.12})"))));
    }
    Err(Error::config(field, format!("amplitudes not normalized (norm {norm})")))
}

impl StateSpec {
    pub fn build(&self, field: &str) -> Result<BuiltState> {
        match self {
            StateSpec::Product { first, second } => {
                let (a, wa) = normalize(&format!("{field}.first"), first)?;
                let (b, wb) = normalize(&format!("{field}.second"), second)?;
                let q1 = QubitState::pure_unchecked(a[0], a[1]);
                let q2 = QubitState::pure_unchecked(b[0], b[1]);
                let warning = match (wa, wb) {
                    (Some(x), Some(y)) => Some(format!("{x}; {y}")),
                    (x, y) => x.or(y),
                };
                Ok(BuiltState {
                    state: CompositeState::product(&q1, &q2),
                    warning,
                    second: Some(q2),
                })
            }
            StateSpec::Pure { amplitudes } => {
                let (a, warning) = normalize(field, amplitudes)?;
                let state = CompositeState::pure(a).map_err(|e| Error::config(field, e.to_string()))?;
                Ok(BuiltState {
                    state,
                    warning,
                    second: None,
                })
            }
            StateSpec::Bell { name } => Ok(BuiltState {
                state: match name {
                    BellState::PhiPlus => CompositeState::phi_plus(),
                    BellState::PhiMinus => CompositeState::phi_minus(),
                    BellState::PsiPlus => CompositeState::psi_plus(),
                    BellState::PsiMinus => CompositeState::psi_minus(),
                },
                warning: None,
                second: None,
            }),
            StateSpec::Matrix { re, im } => {
                let m = Matrix4c::from_fn(|i, j| c(re[i][j], im[i][j]));
                let state = CompositeState::from_matrix(m).map_err(|e| Error::config(field, e.to_string()))?;
                Ok(BuiltState {
                    state,
                    warning: None,
                    second: None,
                })
            }
        }
    }

    /// Product of two real-amplitude pure states.
    pub fn product_real(first: [f64; 2], second: [f64; 2]) -> Self {
        StateSpec::Product {
            first: first.map(Amplitude::Real),
            second: second.map(Amplitude::Real),
        }
    }

    /// Replaces the second factor of a product state.
    pub(crate) fn with_second(&self, second: [f64; 2]) -> Result<Self> {
        match self {
            StateSpec::Product { first, .. } => Ok(StateSpec::Product {
                first: *first,
                second: second.map(Amplitude::Real),
            }),
            _ => Err(Error::config("initial_state", "sweeping the second qubit needs a product state")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_end: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::config("grid.n_points", format!("must be >= 2, got {}", self.n_points)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::config("grid.t_end", format!("must be positive, got {}", self.t_end)));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n).map(|k| self.t_end * k as f64 / (n - 1) as f64).collect()
    }
}

/// Requested series and verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Gamma,
    #[serde(rename = "Gamma")]
    GammaExponent,
    GammaTilde,
    JTilde,
    GammaAux,
    Composite,
    Reduced,
    DistanceComposite,
    DistanceReduced,
    Blp,
    Rhp,
}

impl Output {
    pub const ALL: [Output; 11] = [
        Output::Gamma,
        Output::GammaExponent,
        Output::GammaTilde,
        Output::JTilde,
        Output::GammaAux,
        Output::Composite,
        Output::Reduced,
        Output::DistanceComposite,
        Output::DistanceReduced,
        Output::Blp,
        Output::Rhp,
    ];

    fn needs_pair(self) -> bool {
        matches!(self, Output::DistanceComposite | Output::DistanceReduced | Output::Blp)
    }

    fn available_in_case_study(self) -> bool {
        matches!(
            self,
            Output::Composite | Output::Reduced | Output::DistanceComposite | Output::DistanceReduced | Output::Blp
        )
    }
}

/// Qubit splitting and coupling of the `S_x`-coupled model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseStudySpec {
    pub eps: f64,
    pub j: f64,
}

/// One scenario: bath, drive, initial state(s), grid and requested outputs.
///
/// With `case_study` set the qubits couple to the bath through `S_x` and the
/// drive is replaced by `case_study.eps` and `case_study.j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub spectral: SpectralDensity,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveProfile>,
    pub initial_state: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<StateSpec>,
    pub grid: Grid,
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_study: Option<CaseStudySpec>,
}

fn wrap(field: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Config { .. } => e,
        e => Error::config(field, e.to_string()),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn temperature(&self) -> Result<Temperature> {
        Temperature::new(self.temperature).map_err(wrap("temperature"))
    }

    pub fn case_study_params(&self) -> Result<Option<CaseStudyParams>> {
        match self.case_study {
            None => Ok(None),
            Some(cs) => CaseStudyParams::new(cs.eps, cs.j, self.spectral.clone())
                .map(Some)
                .map_err(wrap("case_study")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spectral.validate().map_err(wrap("spectral"))?;
        self.temperature()?;
        self.grid.validate()?;
        self.quadrature.validate().map_err(wrap("quadrature"))?;
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "at least one output is required"));
        }
        if self.pair.is_none() {
            if let Some(o) = self.outputs.iter().find(|o| o.needs_pair()) {
                return Err(Error::config("pair", format!("output {o:?} needs a second initial state")));
            }
        }
        self.initial_state.build("initial_state")?;
        if let Some(p) = &self.pair {
            p.build("pair")?;
        }
        if self.case_study.is_some() {
            self.case_study_params()?;
            if self.temperature != 0.0 {
                return Err(Error::config("temperature", "the case study is defined at T = 0"));
            }
            if self.drive.is_some() {
                return Err(Error::config("drive", "not used with case_study; set case_study.eps and case_study.j"));
            }
            if let Some(o) = self.outputs.iter().find(|o| !o.available_in_case_study()) {
                return Err(Error::config("outputs", format!("{o:?} is not available with case_study")));
            }
        } else if self.drive.is_none() {
            return Err(Error::config("drive", "missing"));
        }
        Ok(())
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}
