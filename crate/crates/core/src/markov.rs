//! Trace distance and the two Markovianity witnesses: back-flow of
//! distinguishability (BLP) and negativity of the time-local rate (RHP).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::ReducedParameters;
use crate::drive::DriveProfile;
use crate::error::{Error, Result};
use crate::state::{hermitian_eigenvalues2, CompositeState, Matrix2c, QubitState, C64};

/// Threshold applied to rates and distance increments.
pub const WITNESS_TOL: f64 = 1e-9;

/// `D(a, b) = Tr|a - b| / 2` for 2x2 or 4x4 density matrices.
pub fn trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
    if !a.is_square() || !b.is_square() || a.nrows() != b.nrows() || !matches!(a.nrows(), 2 | 4) {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    let diff = a - b;
    if diff.nrows() == 2 {
        let m = Matrix2c::from_fn(|i, j| diff[(i, j)]);
        return Ok(qubit_distance(&m));
    }
    let h = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    Ok((0.5 * ev.iter().map(|x| x.abs()).sum::<f64>()).min(1.0))
}

/// Trace distance of the difference of two single-qubit states.
fn qubit_distance(diff: &Matrix2c) -> f64 {
    // Traceless Hermitian difference: eigenvalues are +-sqrt(dz^2 + |dc|^2).
    let dz = 0.5 * (diff[(0, 0)].re - diff[(1, 1)].re);
    let dc = 0.5 * (diff[(0, 1)] + diff[(1, 0)].conj());
    let trace = 0.5 * (diff[(0, 0)].re + diff[(1, 1)].re);
    if trace.abs() > 1e-12 {
        let ev = hermitian_eigenvalues2(diff);
        return 0.5 * (ev[0].abs() + ev[1].abs());
    }
    (dz * dz + dc.norm_sqr()).sqrt().min(1.0)
}

pub fn qubit_trace_distance(a: &QubitState, b: &QubitState) -> f64 {
    qubit_distance(&(a.matrix() - b.matrix()))
}

pub fn composite_trace_distance(a: &CompositeState, b: &CompositeState) -> f64 {
    let da = DMatrix::from_fn(4, 4, |i, j| a.element(i, j));
    let db = DMatrix::from_fn(4, 4, |i, j| b.element(i, j));
    trace_distance(&da, &db).expect("both 4x4")
}

/// Closed-form distance between two reduced states sharing the bath and the
/// drive: `sqrt((alpha_a - alpha_b)^2 + e^{-2 Gamma} |beta_a - beta_b|^2)`.
pub fn reduced_trace_distance(
    a: &ReducedParameters,
    b: &ReducedParameters,
    drive: &DriveProfile,
    gamma_exponent: f64,
    t: f64,
) -> f64 {
    let dp = a.alpha - b.alpha;
    let dc = (a.beta(drive, t) - b.beta(drive, t)).norm() * (-gamma_exponent).exp();
    (dp * dp + dc * dc).sqrt()
}

/// Distance samples on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTrajectory {
    times: Vec<f64>,
    distances: Vec<f64>,
}

impl DistanceTrajectory {
    pub fn new(times: Vec<f64>, distances: Vec<f64>) -> Result<Self> {
        if times.len() != distances.len() {
            return Err(Error::invalid("distances", "one sample per time required"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("times", "grid must be strictly increasing"));
        }
        if let Some(d) = distances.iter().find(|d| !(**d >= -1e-12 && **d <= 1.0 + 1e-12)) {
            return Err(Error::invalid("distances", format!("{d} outside [0, 1]")));
        }
        Ok(DistanceTrajectory { times, distances })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Largest single-step increase (negative if strictly decreasing).
    pub fn max_increase(&self) -> f64 {
        self.distances
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Central-difference derivative on the grid (one-sided at the ends).
    pub fn derivative(&self) -> Vec<f64> {
        let n = self.times.len();
        (0..n)
            .map(|k| {
                let (lo, hi) = (k.saturating_sub(1), (k + 1).min(n - 1));
                if lo == hi {
                    0.0
                } else {
                    (self.distances[hi] - self.distances[lo]) / (self.times[hi] - self.times[lo])
                }
            })
            .collect()
    }
}

/// Back-flow witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlpWitness {
    /// Sum of the positive increments of `D`.
    pub measure: f64,
    pub backflow: bool,
    pub max_increase: f64,
}

pub fn blp_witness(d: &DistanceTrajectory, tol: f64) -> Result<BlpWitness> {
    if d.distances.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: d.distances.len(),
        });
    }
    let measure = d
        .distances
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .sum::<f64>();
    Ok(BlpWitness {
        measure,
        backflow: measure > tol,
        max_increase: d.max_increase(),
    })
}

/// Divisibility witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhpWitness {
    pub min_rate: f64,
    pub indivisible: bool,
    /// Samples excluded because the rate is singular there.
    pub singular_samples: usize,
}

pub fn rhp_witness(rates: &[Option<f64>], tol: f64) -> Result<RhpWitness> {
    if rates.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let finite: Vec<f64> = rates.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::NoFiniteSamples);
    }
    let min_rate = finite.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RhpWitness {
        min_rate,
        indivisible: min_rate < -tol,
        singular_samples: rates.len() - finite.len(),
    })
}

/// Witnesses for one level (composite or reduced) of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovVerdict {
    pub rhp: Option<RhpWitness>,
    pub blp: Option<BlpWitness>,
    pub annotation: Option<String>,
}

impl MarkovVerdict {
    pub fn rhp_min_rate(&self) -> Option<f64> {
        self.rhp.map(|r| r.min_rate)
    }

    pub fn rhp_indivisible(&self) -> Option<bool> {
        self.rhp.map(|r| r.indivisible)
    }

    pub fn blp_measure(&self) -> Option<f64> {
        self.blp.map(|b| b.measure)
    }

    pub fn blp_backflow(&self) -> Option<bool> {
        self.blp.map(|b| b.backflow)
    }
}

/// A pair of antipodal pure qubit states, `+n` and `-n` on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntipodalPair {
    pub polar: f64,
    pub azimuth: f64,
}

impl AntipodalPair {
    pub fn states(&self) -> (QubitState, QubitState) {
        let (st, ct) = self.polar.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        let n = [st * cp, st * sp, ct];
        (
            QubitState::from_bloch(n[0], n[1], n[2]).expect("unit vector"),
            QubitState::from_bloch(-n[0], -n[1], -n[2]).expect("unit vector"),
        )
    }

    /// Grid over the sphere with `resolution` polar and `2 * resolution`
    /// azimuthal steps (a single pole pair for `resolution = 1`).
    pub fn sphere_grid(resolution: usize) -> Vec<AntipodalPair> {
        if resolution <= 1 {
            return vec![AntipodalPair { polar: 0.0, azimuth: 0.0 }];
        }
        let mut out = Vec::new();
        for i in 0..=resolution {
            let polar = std::f64::consts::PI * i as f64 / resolution as f64 / 2.0;
            for k in 0..2 * resolution {
                let azimuth = std::f64::consts::PI * k as f64 / resolution as f64;
                out.push(AntipodalPair { polar, azimuth });
                if i == 0 {
                    break;
                }
            }
        }
        out
    }
}

/// Result of [`grid_pair_search`]: a lower bound to the BLP measure over all
/// pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSearch {
    pub best: AntipodalPair,
    pub measure: f64,
    pub evaluated: usize,
}

/// Exhaustive search over `family` for the pair with the largest back-flow
/// measure, as computed by `measure`.
pub fn grid_pair_search<F>(family: &[AntipodalPair], mut measure: F) -> Result<PairSearch>
where
    F: FnMut(&AntipodalPair) -> Result<f64>,
{
    let mut best: Option<(AntipodalPair, f64)> = None;
    for pair in family {
        let m = measure(pair)?;
        if best.map_or(true, |(_, b)| m > b) {
            best = Some((*pair, m));
        }
    }
    let (best, measure) = best.ok_or(Error::Empty("pair family"))?;
    Ok(PairSearch {
        best,
        measure,
        evaluated: family.len(),
    })
}
