#![allow(dead_code)]

use std::io::Write;

use knob_core::state::{Matrix2c, Matrix4c};
use knob_core::{CompositeState, QubitState, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn gaussian_like(r: &mut StdRng) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// `G G^dagger / Tr` for a random complex `G`.
pub fn random_composite(r: &mut StdRng) -> CompositeState {
    let g = Matrix4c::from_fn(|_, _| gaussian_like(r));
    let m = g * g.adjoint();
    let tr = m.trace();
    CompositeState::from_matrix(m / tr).expect("positive by construction")
}

pub fn random_qubit(r: &mut StdRng) -> QubitState {
    let g = Matrix2c::from_fn(|_, _| gaussian_like(r));
    let m = g * g.adjoint();
    let tr = m.trace();
    QubitState::from_matrix(m / tr).expect("positive by construction")
}

pub fn random_pure_qubit(r: &mut StdRng) -> QubitState {
    let a = gaussian_like(r);
    let b = gaussian_like(r);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    QubitState::pure(a / n, b / n).unwrap()
}

/// Prints one result line past the test harness capture.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[acceptance {id:>2}] {verdict} {name}: {detail}").unwrap();
    out.flush().unwrap();
}
