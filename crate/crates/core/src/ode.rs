//! Classical fixed-step fourth-order Runge–Kutta.

use crate::error::Result;
use crate::state::{Matrix2c, Matrix4c, C64};

/// States that can be combined as `y + h k`.
pub trait LinearState: Clone {
    fn add_scaled(&self, k: &Self, h: f64) -> Self;
}

impl LinearState for Matrix2c {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        self + k * C64::new(h, 0.0)
    }
}

impl LinearState for Matrix4c {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        self + k * C64::new(h, 0.0)
    }
}

/// One step of size `h` from `(t, y)` for `y' = f(t, y)`.
pub fn rk4_step<S, F>(f: &mut F, t: f64, y: &S, h: f64) -> Result<S>
where
    S: LinearState,
    F: FnMut(f64, &S) -> Result<S>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &y.add_scaled(&k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &y.add_scaled(&k2, 0.5 * h))?;
    let k4 = f(t + h, &y.add_scaled(&k3, h))?;
    Ok(y
        .add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0))
}

/// Integrates from `t0` in `steps` steps of `dt`, calling `observe` after
/// every step (and once on the initial state with step index 0).
pub fn integrate<S, F, O>(mut f: F, y0: S, t0: f64, dt: f64, steps: usize, mut observe: O) -> Result<S>
where
    S: LinearState,
    F: FnMut(f64, &S) -> Result<S>,
    O: FnMut(usize, f64, &S) -> Result<()>,
{
    let mut y = y0;
    observe(0, t0, &y)?;
    for n in 0..steps {
        let t = t0 + n as f64 * dt;
        y = rk4_step(&mut f, t, &y, dt)?;
        observe(n + 1, t0 + (n + 1) as f64 * dt, &y)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_convergence_on_rotation() {
        // y' = -i w y on the (0, 0) entry
        let w = 2.0;
        let exact = C64::new(0.0, -w * 1.0).exp();
        let mut errors = Vec::new();
        for steps in [20usize, 40] {
            let dt = 1.0 / steps as f64;
            let y0 = Matrix2c::identity();
            let y = integrate(
                |_, y: &Matrix2c| Ok(y * C64::new(0.0, -w)),
                y0,
                0.0,
                dt,
                steps,
                |_, _, _| Ok(()),
            )
            .unwrap();
            errors.push((y[(0, 0)] - exact).norm());
        }
        let order = (errors[0] / errors[1]).log2();
        assert!((order - 4.0).abs() < 0.2, "observed order {order}");
    }

    #[test]
    fn observer_sees_every_step() {
        let mut seen = Vec::new();
        integrate(
            |_, y: &Matrix2c| Ok(*y),
            Matrix2c::identity(),
            1.0,
            0.5,
            3,
            |n, t, _| {
                seen.push((n, t));
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(seen, vec![(0, 1.0), (1, 1.5), (2, 2.0), (3, 2.5)]);
    }
}
