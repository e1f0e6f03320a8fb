use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{check_domain, Result};

/// `(vol(S^{n-1}), ω_n)`: the area of the unit sphere in `R^n` and the volume
/// of the unit ball.
pub fn sphere_constant(n: u32) -> Result<(f64, f64)> {
    check_domain("n", n as f64, n >= 1, "n must be at least 1")?;
    let half = 0.5 * n as f64;
    let surface = 2.0 * PI.powf(half) / gamma(half);
    Ok((surface, surface / n as f64))
}

/// Area of the unit `(n-1)`-sphere.
pub(crate) fn sphere_area(n: u32) -> f64 {
    let half = 0.5 * n as f64;
    2.0 * PI.powf(half) / gamma(half)
}
