//! Globally adaptive Gauss–Kronrod integration over a list of panels.
//!
//! The caller supplies the initial panel boundaries. For the oscillatory
//! bath integrals these are the zeros of the oscillating factor, so every
//! panel starts out holding a single period and bisection is only spent on
//! the panels whose local error estimate dominates the total.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Outcome of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// 21-point Kronrod rule with the embedded 10-point Gauss rule; returns
/// `(kronrod, |kronrod - gauss|)`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).abs())
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` and bisecting the worst panel until the summed error
/// estimate drops below `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Integral> {
    if breaks.len() < 2 {
        return Err(Error::invalid("breaks", "need at least two panel boundaries"));
    }
    if breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("breaks", "panel boundaries must increase"));
    }

    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let (v, e) = gk21(&f, w[0], w[1]);
        evaluations += 21;
        value += v;
        error += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }

    let target = |value: f64| abs_tol.max(rel_tol * value.abs());
    while error > target(value) {
        if heap.len() >= max_intervals {
            return Err(Error::Quadrature {
                value,
                error,
                tolerance: target(value),
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap holds every panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel can no longer be split in floating point.
            return Err(Error::Quadrature {
                value,
                error,
                tolerance: target(value),
                intervals: heap.len() + 1,
            });
        }
        let (lv, le) = gk21(&f, worst.a, mid);
        let (rv, re) = gk21(&f, mid, worst.b);
        evaluations += 42;
        value += lv + rv - worst.value;
        error += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }

    // Re-sum to shed the drift of the running totals.
    let intervals = heap.len();
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral {
        value,
        error,
        intervals,
        evaluations,
    })
}

/// Panel boundaries on `[0, upper]` at multiples of `period`, with at least
/// `min_panels` panels. A `period` of zero or one longer than the domain
/// yields uniform panels.
pub fn periodic_breaks(upper: f64, period: f64, min_panels: usize) -> Vec<f64> {
    let min_panels = min_panels.max(1);
    let count = if period > 0.0 && period.is_finite() {
        ((upper / period).ceil() as usize).max(min_panels)
    } else {
        min_panels
    };
    let step = if count > min_panels && period > 0.0 {
        period
    } else {
        upper / count as f64
    };
    let mut breaks: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
    breaks.push(upper);
    breaks.dedup_by(|b, a| *b <= *a);
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], 1e-14, 1e-14, 10).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn oscillatory_integrand_over_periodic_panels() {
        // int_0^40 e^{-x} sin(20 x) dx = 20/401 (1 - e^{-40}(...)) ~ 20/401
        let t = 20.0;
        let breaks = periodic_breaks(40.0, 2.0 * PI / t, 8);
        let r = integrate(|x| (-x).exp() * (t * x).sin(), &breaks, 1e-14, 1e-12, 10_000).unwrap();
        let exact = t / (1.0 + t * t) * (1.0 - (-40.0f64).exp() * ((t * 40.0).cos() + (t * 40.0).sin() / t));
        assert!((r.value - exact).abs() < 1e-13, "{} vs {}", r.value, exact);
    }

    #[test]
    fn adaptive_refinement_handles_a_peak() {
        let w: f64 = 1e-3;
        let r = integrate(|x| w / ((x - 0.3).powi(2) + w * w), &[0.0, 1.0], 1e-12, 1e-10, 5_000).unwrap();
        let exact = (0.7 / w).atan() + (0.3 / w).atan();
        assert!((r.value - exact).abs() < 1e-9);
        assert!(r.intervals > 1);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let err = integrate(|x: f64| (1.0 / x).sin() / x, &[1e-9, 1.0], 1e-15, 1e-15, 4).unwrap_err();
        match err {
            Error::Quadrature { intervals, error, .. } => {
                assert_eq!(intervals, 4);
                assert!(error > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn periodic_breaks_cover_domain() {
        let b = periodic_breaks(10.0, 3.0, 2);
        assert_eq!(b, vec![0.0, 3.0, 6.0, 9.0, 10.0]);
        let b = periodic_breaks(10.0, 100.0, 4);
        assert_eq!(b, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let b = periodic_breaks(10.0, 0.0, 1);
        assert_eq!(b, vec![0.0, 10.0]);
    }
}
