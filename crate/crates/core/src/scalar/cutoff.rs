//! Smooth approximations `χ_δ` of the Heaviside function `1_{x ≤ 0}` on `[0, π/2]`.
//!
//! `χ_δ(x) = (1 - γ_δ(x)) · exp(-β_δ(x))` with
//! `β_δ(x) = β(x^δ/δ - 1)` and `γ_δ(x) = γ(1 + x/δ - π/(2δ))`, where
//! `β(y) = 2 ∫_0^y σ` for a smooth step `σ` ramping on `[0, 1/4]` and `γ` is a
//! smooth step ramping on `[0, 1/2]`.
//!
//! For small `δ` the transition of `χ_δ` happens at `x ≈ δ^{1/δ}`, which leaves
//! the range of `f64` once `δ ≲ 1/140`. Weighted derivative ratios are therefore
//! evaluated in the variable `u = ln x` below [`LOG_SWITCH`]. Plain integrals of
//! `χ_δ` are resolved above [`RADIUS_FLOOR`]; the part below it contributes at
//! most `RADIUS_FLOOR` in absolute terms.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{check_domain, Result};
use crate::quadrature::AdaptiveSimpson;
use crate::scalar::smooth_step::SmoothStep;

/// Smallest radius at which plain integrals of `χ_δ` are resolved.
pub const RADIUS_FLOOR: f64 = 1e-300;

/// Ratio between consecutive geometric resolution nodes.
pub(crate) const GEOMETRIC_RATIO: f64 = 1.189_207_115_002_721; // 2^(1/4)

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFamily {
    delta: f64,
    beta_step: SmoothStep,
    gamma_step: SmoothStep,
    eta: f64,
}

impl CutoffFamily {
    pub fn new(delta: f64) -> Result<Self> {
        check_domain("delta", delta, delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]")?;
        Ok(Self {
            delta,
            beta_step: SmoothStep::new(0.0, 0.25)?,
            gamma_step: SmoothStep::new(0.0, 0.5)?,
            eta: plateau_radius(delta),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Plateau radius `η_δ = min{δ^{1/δ}, δ/2}`: `χ_δ = 1` below it and `0`
    /// above `π/2 - η_δ`. Underflows to zero for small `δ`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn beta(&self, y: f64) -> f64 {
        2.0 * self.beta_step.integral(y)
    }

    pub fn beta_d1(&self, y: f64) -> f64 {
        2.0 * self.beta_step.value(y)
    }

    pub fn beta_d2(&self, y: f64) -> f64 {
        2.0 * self.beta_step.derivative(y)
    }

    pub fn gamma(&self, z: f64) -> f64 {
        self.gamma_step.value(z)
    }

    pub fn gamma_d1(&self, z: f64) -> f64 {
        self.gamma_step.derivative(z)
    }

    /// `(χ_δ(x), χ_δ'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            return (1.0, 0.0);
        }
        let d = self.delta;
        let x_pow = (d * x.ln()).exp();
        let y = x_pow / d - 1.0;
        let z = 1.0 + x / d - FRAC_PI_2 / d;

        let g = self.gamma(z);
        let g1 = self.gamma_d1(z) / d;
        let (b, b1) = if y > 0.0 {
            (self.beta(y), self.beta_d1(y) * x_pow / x)
        } else {
            (0.0, 0.0)
        };
        let decay = (-b).exp();
        let value = (1.0 - g) * decay;
        let slope = if decay == 0.0 {
            0.0
        } else {
            -(g1 + (1.0 - g) * b1) * decay
        };
        (value, slope)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    /// `-dχ_δ/du` at `x = e^u` for `x` below [`LOG_SWITCH`], where `γ_δ ≡ 0`.
    fn log_slope(&self, u: f64) -> f64 {
        let d = self.delta;
        let scaled = (d * u).exp() / d;
        let y = scaled - 1.0;
        if y <= 0.0 {
            return 0.0;
        }
        let b = self.beta(y);
        self.beta_d1(y) * d * scaled * (-b).exp()
    }

    /// `ln` of the radius below which `χ_δ ≡ 1` (exact, never underflows).
    pub fn log_plateau_radius(&self) -> f64 {
        self.delta.ln() / self.delta
    }

    /// Weighted derivative ratio `∫_0^r -χ_δ' sin / sin r` on the verification
    /// grid built from `uniform_points` uniform radii and geometric nodes with the
    /// given ratio, extended into the log variable below [`LOG_SWITCH`].
    pub fn ratio_profile(
        &self,
        uniform_points: usize,
        ratio: f64,
        quad: &AdaptiveSimpson,
    ) -> Result<Vec<RatioSample>> {
        let ln_nodes = log_nodes(self.log_plateau_radius(), self.delta);
        let x_nodes = verification_grid(self.eta, uniform_points, ratio);
        self.ratios(&ln_nodes, &x_nodes, quad)
    }

    /// Ratios at `ln_nodes` (ascending, at most `ln LOG_SWITCH`) followed by
    /// `x_nodes` (ascending, in `(LOG_SWITCH, π/2)`; entries at or below the
    /// switch are evaluated in the log variable).
    pub(crate) fn ratios(
        &self,
        ln_nodes: &[f64],
        x_nodes: &[f64],
        quad: &AdaptiveSimpson,
    ) -> Result<Vec<RatioSample>> {
        let ln_switch = LOG_SWITCH.ln();
        let mut all_ln: Vec<f64> = ln_nodes.to_vec();
        let mut upper = Vec::new();
        for &x in x_nodes {
            if x <= LOG_SWITCH {
                all_ln.push(x.ln());
            } else {
                upper.push(x);
            }
        }
        all_ln.sort_by(f64::total_cmp);
        let u0 = self.log_plateau_radius();
        // scale of the ratio is O(δ); keep the tolerance relative to it
        let local = AdaptiveSimpson {
            tol: quad.tol * self.delta,
            ..*quad
        };
        let mut out = Vec::with_capacity(all_ln.len() + upper.len());
        let mut u = u0;
        let mut acc = 0.0;
        let advance = |to: f64, u: &mut f64, acc: &mut f64| -> Result<()> {
            if to <= *u {
                return Ok(());
            }
            let from = (*u).max(to - KERNEL_SPAN);
            let part = local
                .integrate(|v| self.log_slope(v) * (v - to).exp(), from, to)?
                .value;
            *acc = *acc * (*u - to).exp() + part;
            *u = to;
            Ok(())
        };
        for &target in &all_ln {
            let mut next = u;
            while next < target {
                next = (next + log_step(self.delta)).min(target);
                advance(next, &mut u, &mut acc)?;
            }
            out.push(RatioSample {
                ln_r: target,
                ratio: if target <= u0 { 0.0 } else { acc },
            });
        }
        if upper.is_empty() {
            return Ok(out);
        }
        let mut next = u;
        while next < ln_switch {
            next = (next + log_step(self.delta)).min(ln_switch);
            advance(next, &mut u, &mut acc)?;
        }
        let (start, offset) = if self.eta > LOG_SWITCH {
            (self.eta, 0.0)
        } else {
            (LOG_SWITCH, acc.max(0.0) * LOG_SWITCH.sin())
        };
        let integrand = |x: f64| -self.eval(x).1 * x.sin();
        let running = running_integrals(integrand, start, &upper, quad)?;
        for (x, i) in upper.iter().zip(running) {
            out.push(RatioSample {
                ln_r: x.ln(),
                ratio: (offset + i) / x.sin(),
            });
        }
        Ok(out)
    }

    /// `∫_0^r -χ_δ'(x) sin(x) dx / sin(r)` for `r` in `(0, π/2)`.
    pub fn weighted_derivative_ratio(&self, r: f64, quad: &AdaptiveSimpson) -> Result<f64> {
        check_domain(
            "r",
            r,
            r > 0.0 && r < FRAC_PI_2,
            "r must lie in (0, pi/2)",
        )?;
        Ok(self.ratios(&[], &[r], quad)?[0].ratio)
    }

    /// Supremum of the weighted derivative ratio over the verification grid.
    /// Returns `(sup, ln of the maximising radius)`.
    pub fn sup_weighted_ratio(
        &self,
        uniform_points: usize,
        quad: &AdaptiveSimpson,
    ) -> Result<(f64, f64)> {
        let samples = self.ratio_profile(uniform_points, GEOMETRIC_RATIO, quad)?;
        let mut best = (0.0, samples[0].ln_r);
        for s in &samples {
            if s.ratio > best.0 {
                best = (s.ratio, s.ln_r);
            }
        }
        Ok(best)
    }
}

/// One point of the weighted derivative ratio profile. Radii are stored by
/// their logarithm since the interesting ones may be far below `f64` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub ln_r: f64,
    pub ratio: f64,
}

/// Below this radius `sin x = x` to machine precision and cutoff integrals are
/// evaluated in the variable `u = ln x`.
pub const LOG_SWITCH: f64 = 1e-8;

/// Width in `u` beyond which the exponential kernel `e^{u - u_r}` is negligible.
const KERNEL_SPAN: f64 = 40.0;

/// `χ_δ` varies on a scale `~1/δ` in `u`; sixteen nodes per unit of that scale.
fn log_step(delta: f64) -> f64 {
    (0.0625 / delta).min(1.0)
}

/// Log-variable verification nodes from the plateau edge up to `ln LOG_SWITCH`.
fn log_nodes(u0: f64, delta: f64) -> Vec<f64> {
    let top = LOG_SWITCH.ln();
    let step = log_step(delta);
    let mut out = Vec::new();
    let mut u = u0 + step;
    while u < top {
        out.push(u);
        u += step;
    }
    out
}

pub(crate) fn plateau_radius(delta: f64) -> f64 {
    delta.powf(1.0 / delta).min(0.5 * delta)
}

/// `(χ_δ(x), χ_δ'(x))` for a single evaluation.
pub fn eval_cutoff(delta: f64, x: f64) -> Result<(f64, f64)> {
    Ok(CutoffFamily::new(delta)?.eval(x))
}

pub fn weighted_derivative_ratio(delta: f64, r: f64) -> Result<f64> {
    CutoffFamily::new(delta)?.weighted_derivative_ratio(r, &AdaptiveSimpson::default())
}

/// Geometric nodes `lo, lo·q, lo·q², …` strictly below `hi`.
pub(crate) fn geometric_nodes(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = lo;
    while x < hi {
        out.push(x);
        x *= ratio;
    }
    out
}

/// Radii in `(0, π/2]` used to verify cutoff inequalities: `uniform_points`
/// equally spaced radii together with geometric nodes from
/// `max(η_δ, LOG_SWITCH)`. Smaller radii are covered in the log variable.
pub fn verification_grid(eta: f64, uniform_points: usize, ratio: f64) -> Vec<f64> {
    let start = eta.max(LOG_SWITCH);
    let mut grid = geometric_nodes(start, FRAC_PI_2, ratio);
    grid.extend((1..=uniform_points).map(|i| FRAC_PI_2 * i as f64 / uniform_points as f64));
    grid.retain(|&r| r > 0.0 && r < FRAC_PI_2);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Running integrals `∫_start^r f` at each sorted radius (zero for `r ≤ start`),
/// resolved on geometric panels so that features at any scale above `start`
/// are seen by the adaptive rule.
pub(crate) fn running_integrals<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    radii: &[f64],
    quad: &AdaptiveSimpson,
) -> Result<Vec<f64>> {
    let top = radii.iter().copied().fold(start, f64::max);
    let mut nodes = geometric_nodes(start, top, GEOMETRIC_RATIO);
    nodes.extend(radii.iter().copied().filter(|&r| r > start));
    nodes.push(top);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let running = quad.cumulative(&f, &nodes)?;
    Ok(radii
        .iter()
        .map(|&r| {
            if r <= start {
                0.0
            } else {
                running[nodes.partition_point(|&n| n < r)]
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_delta_outside_unit_interval() {
        assert!(CutoffFamily::new(0.0).is_err());
        assert!(CutoffFamily::new(1.5).is_err());
        assert!(CutoffFamily::new(f64::NAN).is_err());
        assert!(eval_cutoff(-0.1, 0.3).unwrap_err().is_usage());
    }

    #[test]
    fn plateau_at_half() {
        let c = CutoffFamily::new(0.5).unwrap();
        assert_eq!(c.eta(), 0.25);
        assert_eq!(c.eval(0.2), (1.0, 0.0));
        assert_eq!(c.eval(FRAC_PI_2).0, 0.0);
    }

    #[test]
    fn beta_building_block_properties() {
        let c = CutoffFamily::new(0.5).unwrap();
        for i in -20..200 {
            let y = i as f64 * 0.01;
            if y <= 0.0 {
                assert_eq!(c.beta(y), 0.0);
            }
            if y >= 0.5 {
                assert!(c.beta(y) >= y);
            }
            assert!(c.beta_d1(y) >= 0.0);
            assert!(c.beta_d2(y) >= 0.0);
            if y <= 0.0 {
                assert_eq!(c.gamma(y), 0.0);
            }
            if y >= 0.5 {
                assert_eq!(c.gamma(y), 1.0);
            }
        }
        assert!((c.beta(1.0) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for &d in &[1.0, 0.5, 0.3, 0.1] {
            let c = CutoffFamily::new(d).unwrap();
            for i in 1..60 {
                let x = FRAC_PI_2 * i as f64 / 60.0;
                let h = 1e-6 * x;
                let fd = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
                let an = c.eval(x).1;
                assert!(
                    (fd - an).abs() <= 1e-6 * (1.0 + an.abs()),
                    "delta={d} x={x}: {fd} vs {an}"
                );
            }
        }
    }

    #[test]
    fn ratio_vanishes_on_plateau() {
        assert_eq!(weighted_derivative_ratio(0.5, 0.1).unwrap(), 0.0);
        assert!(weighted_derivative_ratio(0.5, FRAC_PI_2).is_err());
    }

    #[test]
    fn ratio_is_continuous_across_log_switch() {
        let c = CutoffFamily::new(0.05).unwrap();
        let q = AdaptiveSimpson::default();
        let below = c.ratios(&[], &[LOG_SWITCH * (1.0 - 1e-9)], &q).unwrap()[0].ratio;
        let above = c.ratios(&[], &[LOG_SWITCH * (1.0 + 1e-9)], &q).unwrap()[0].ratio;
        assert!(below > 0.0);
        assert!((below - above).abs() < 1e-8 * below, "{below} vs {above}");
    }

    #[test]
    fn sup_ratio_tracks_delta_for_tiny_delta() {
        // the peak sits far below f64 range; only the log variable sees it
        let q = AdaptiveSimpson::default();
        for k in [10, 14] {
            let d = 0.5f64.powi(k);
            let (sup, ln_r) = CutoffFamily::new(d).unwrap().sup_weighted_ratio(64, &q).unwrap();
            assert!(ln_r < -745.0);
            assert!(sup > 1.5 * d && sup < 2.5 * d, "delta={d} sup={sup}");
        }
    }

    #[test]
    fn running_integrals_resolve_tiny_scales() {
        // a bump of width ~1e-40 is invisible to a uniform rule on [0, 1]
        let f = |x: f64| {
            let u = (x / 1e-40).ln();
            (-u * u).exp() / x
        };
        let v = running_integrals(f, 1e-60, &[1.0], &AdaptiveSimpson::default()).unwrap();
        assert!((v[0] - std::f64::consts::PI.sqrt()).abs() < 1e-8);
    }
}
