//! Piecewise-constant control fields `eps_1(t)`, `eps_2(t)` and `J(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A right-continuous step function on `[0, inf)`.
///
/// `values[k]` holds on `[breakpoints[k], breakpoints[k + 1])`; the last value
/// extends to infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    /// Integral up to each breakpoint.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StepRepr {
    Constant(f64),
    Steps { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl TryFrom<StepRepr> for PiecewiseConstant {
    type Error = Error;

    fn try_from(repr: StepRepr) -> Result<Self> {
        match repr {
            StepRepr::Constant(v) => PiecewiseConstant::new(vec![0.0], vec![v]),
            StepRepr::Steps { breakpoints, values } => PiecewiseConstant::new(breakpoints, values),
        }
    }
}

impl From<PiecewiseConstant> for StepRepr {
    fn from(f: PiecewiseConstant) -> Self {
        if f.values.len() == 1 {
            StepRepr::Constant(f.values[0])
        } else {
            StepRepr::Steps {
                breakpoints: f.breakpoints,
                values: f.values,
            }
        }
    }
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::invalid(
                "breakpoints",
                "need one value per breakpoint and at least one segment",
            ));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::invalid("breakpoints", "first breakpoint must be 0"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("breakpoints", "must be finite and strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "must be finite"));
        }
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 1..breakpoints.len() {
            acc += values[k - 1] * (breakpoints[k] - breakpoints[k - 1]);
            cumulative.push(acc);
        }
        Ok(PiecewiseConstant {
            breakpoints,
            values,
            cumulative,
        })
    }

    pub fn constant(value: f64) -> Self {
        PiecewiseConstant {
            breakpoints: vec![0.0],
            values: vec![value],
            cumulative: vec![0.0],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|b| *b <= t).saturating_sub(1)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.values[self.segment(t)]
    }

    /// Exact `int_0^t f`.
    pub fn integral(&self, t: f64) -> f64 {
        let k = self.segment(t);
        self.cumulative[k] + self.values[k] * (t - self.breakpoints[k])
    }

    /// Largest absolute value taken by the function.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Scales every segment value.
    pub fn scaled(&self, factor: f64) -> Self {
        PiecewiseConstant::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * factor).collect(),
        )
        .expect("scaling preserves validity")
    }
}

/// Qubit splittings and qubit-qubit coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveProfile {
    pub eps1: PiecewiseConstant,
    pub eps2: PiecewiseConstant,
    pub j: PiecewiseConstant,
}

impl DriveProfile {
    pub fn constant(eps1: f64, eps2: f64, j: f64) -> Self {
        DriveProfile {
            eps1: PiecewiseConstant::constant(eps1),
            eps2: PiecewiseConstant::constant(eps2),
            j: PiecewiseConstant::constant(j),
        }
    }

    /// Fastest angular frequency appearing in the drive.
    pub fn max_frequency(&self) -> f64 {
        self.eps1.max_abs() + self.eps2.max_abs() + self.j.max_abs()
    }

    pub fn coupling_vanishes(&self) -> bool {
        self.j.values().iter().all(|v| *v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_is_exact_and_continuous() {
        let f = PiecewiseConstant::new(vec![0.0, 1.0, 3.0], vec![2.0, -1.0, 0.5]).unwrap();
        assert_eq!(f.integral(0.0), 0.0);
        assert_eq!(f.integral(0.5), 1.0);
        assert_eq!(f.integral(1.0), 2.0);
        assert_eq!(f.integral(2.0), 1.0);
        assert_eq!(f.integral(3.0), 0.0);
        assert_eq!(f.integral(5.0), 1.0);
        for b in [1.0, 3.0] {
            let left = f.integral(b - 1e-12);
            let right = f.integral(b + 1e-12);
            assert!((left - right).abs() < 1e-11);
        }
        assert_eq!(f.value(1.0), -1.0);
        assert_eq!(f.value(0.999), 2.0);
        assert_eq!(f.value(10.0), 0.5);
    }

    #[test]
    fn rejects_malformed_steps() {
        assert!(PiecewiseConstant::new(vec![], vec![]).is_err());
        assert!(PiecewiseConstant::new(vec![0.5], vec![1.0]).is_err());
        assert!(PiecewiseConstant::new(vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(PiecewiseConstant::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(PiecewiseConstant::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn serde_accepts_constants_and_steps() {
        let c: PiecewiseConstant = serde_json::from_str("0.25").unwrap();
        assert_eq!(c, PiecewiseConstant::constant(0.25));
        assert_eq!(serde_json::to_string(&c).unwrap(), "0.25");
        let s: PiecewiseConstant = serde_json::from_str(r#"{"breakpoints":[0,2],"values":[1,0]}"#).unwrap();
        assert_eq!(s.integral(10.0), 2.0);
        let back: PiecewiseConstant = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<PiecewiseConstant>(r#"{"breakpoints":[1],"values":[1]}"#).is_err());
    }
}
