//! C^∞ monotone transition built from the `exp(-1/x)` partition function.

use crate::error::{check_domain, Result};
use crate::quadrature::gauss_legendre;

/// Smooth monotone step: 0 below `ramp_start`, 1 above `ramp_end`.
///
/// Inside the ramp, with `u` the normalised coordinate,
/// `s(u) = 1 / (1 + exp(1/u - 1/(1-u)))`, which is the usual
/// `ψ(u) / (ψ(u) + ψ(1-u))` with `ψ(u) = exp(-1/u)` written without underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothStep {
    ramp_start: f64,
    ramp_end: f64,
}

impl SmoothStep {
    pub fn new(ramp_start: f64, ramp_end: f64) -> Result<Self> {
        check_domain(
            "ramp_end",
            ramp_end,
            ramp_start.is_finite() && ramp_end > ramp_start,
            "ramp_end must exceed ramp_start",
        )?;
        Ok(Self {
            ramp_start,
            ramp_end,
        })
    }

    pub fn ramp_start(&self) -> f64 {
        self.ramp_start
    }

    pub fn ramp_end(&self) -> f64 {
        self.ramp_end
    }

    fn width(&self) -> f64 {
        self.ramp_end - self.ramp_start
    }

    fn unit(&self, x: f64) -> f64 {
        (x - self.ramp_start) / self.width()
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = self.unit(x);
        if u <= 0.0 {
            0.0
        } else if u >= 1.0 {
            1.0
        } else {
            unit_step(u).0
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let u = self.unit(x);
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            unit_step_derivative(u) / self.width()
        }
    }

    /// `∫_{-∞}^x step(y) dy`.
    pub fn integral(&self, x: f64) -> f64 {
        let u = self.unit(x);
        let w = self.width();
        if u <= 0.0 {
            0.0
        } else if u >= 1.0 {
            // the unit step is antisymmetric about 1/2, so its mass on [0,1] is 1/2
            w * 0.5 + (x - self.ramp_end)
        } else {
            w * unit_integral(u)
        }
    }
}

/// Returns `(s(u), 1 - s(u))` for `u` in `(0, 1)`, both computed without cancellation.
fn unit_step(u: f64) -> (f64, f64) {
    let g = 1.0 / u - 1.0 / (1.0 - u);
    (1.0 / (1.0 + g.exp()), 1.0 / (1.0 + (-g).exp()))
}

fn unit_step_derivative(u: f64) -> f64 {
    let (s, c) = unit_step(u);
    s * c * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)))
}

/// `∫_0^v s(u) du` for `v` in `[0, 1]`.
fn unit_integral(v: f64) -> f64 {
    if v > 0.5 {
        // s(u) + s(1-u) = 1
        v - 0.5 + unit_integral(1.0 - v)
    } else if v <= 0.0 {
        0.0
    } else {
        gauss_legendre(|u| if u <= 0.0 { 0.0 } else { unit_step(u).0 }, 0.0, v, 6)
    }
}
