//! Exact dephasing of two coupled qubits in a common bosonic bath, the
//! reduced dynamics of one of them, and witnesses of non-Markovian behavior.

pub mod case_study;
pub mod drive;
pub mod dynamics;
pub mod error;
pub mod markov;
pub mod ode;
pub mod quadrature;
pub mod scenario;
pub mod spectral;
pub mod state;

pub use drive::{DriveProfile, PiecewiseConstant};
pub use dynamics::{EffectiveRates, MapLinearity, ReducedParameters};
pub use error::{Error, Result};
pub use markov::{BlpWitness, DistanceTrajectory, MarkovVerdict, RhpWitness};
pub use spectral::{Bath, DephasingKernel, QuadratureConfig, SpectralDensity, Temperature};
pub use state::{CompositeState, QubitState, C64};
pub use scenario::{run_preset, run_scenario, sweep, PresetReport, RunReport, ScenarioConfig};
