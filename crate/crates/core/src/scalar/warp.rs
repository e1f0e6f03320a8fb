//! Warping functions `φ_t` interpolating between `sin r` and `t·sin r`.
//!
//! `φ_t(r) = ∫_0^r (t + (1-t) χ_t(x)) cos(x) dx` with `χ_t = χ_{δ(t)}`. The value
//! is computed by quadrature; both derivatives come from closed forms.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{check_domain, Result};
use crate::geometry::profile::{Jet, Profile};
use crate::quadrature::AdaptiveSimpson;
use crate::scalar::cutoff::{running_integrals, CutoffFamily, RADIUS_FLOOR};
use crate::scalar::selection::DeltaSelector;

const UNIFORM_KNOTS: usize = 256;

#[derive(Debug, Clone)]
pub struct WarpProfile {
    t: f64,
    cutoff: CutoffFamily,
    quad: AdaptiveSimpson,
    /// Sorted knots in `[start, π/2]` with the running integral of `χ cos` at each.
    knots: Vec<f64>,
    running: Vec<f64>,
    start: f64,
}

impl WarpProfile {
    /// Builds `φ_t` with `δ(t)` chosen by `selector`.
    pub fn new(t: f64, selector: &DeltaSelector) -> Result<Self> {
        check_domain("t", t, t > 0.0 && t <= 1.0, "t must lie in (0, 1]")?;
        let delta = selector.select(t)?;
        Self::with_delta(t, delta, selector.quad)
    }

    pub fn with_delta(t: f64, delta: f64, quad: AdaptiveSimpson) -> Result<Self> {
        check_domain("t", t, t > 0.0 && t <= 1.0, "t must lie in (0, 1]")?;
        let cutoff = CutoffFamily::new(delta)?;
        let start = cutoff.eta().max(RADIUS_FLOOR);
        let mut knots: Vec<f64> = (0..=UNIFORM_KNOTS)
            .map(|i| FRAC_PI_2 * i as f64 / UNIFORM_KNOTS as f64)
            .filter(|&r| r > start)
            .collect();
        knots.push(start);
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let base = cutoff.eta().sin();
        let running = running_integrals(|x| cutoff.value(x) * x.cos(), start, &knots, &quad)?
            .into_iter()
            .map(|v| v + base)
            .collect();
        Ok(Self {
            t,
            cutoff,
            quad,
            knots,
            running,
            start,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn delta(&self) -> f64 {
        self.cutoff.delta()
    }

    pub fn cutoff(&self) -> &CutoffFamily {
        &self.cutoff
    }

    /// `∫_0^r χ_t(x) cos(x) dx`.
    fn cutoff_cos_integral(&self, r: f64) -> Result<f64> {
        let eta = self.cutoff.eta();
        if r <= eta {
            return Ok(r.sin());
        }
        if r <= self.start {
            return Ok(eta.sin());
        }
        let k = self.knots.partition_point(|&x| x <= r) - 1;
        let from = self.knots[k];
        if from == r {
            return Ok(self.running[k]);
        }
        let local = if r - from < 1e-3 * from || from > 1e-3 {
            AdaptiveSimpson {
                tol: (self.quad.tol * (r - from) / FRAC_PI_2).max(f64::MIN_POSITIVE),
                ..self.quad
            }
            .integrate(|x| self.cutoff.value(x) * x.cos(), from, r)?
            .value
        } else {
            running_integrals(|x| self.cutoff.value(x) * x.cos(), from, &[r], &self.quad)?[0]
        };
        Ok(self.running[k] + local)
    }

    /// `(φ_t(r), φ_t'(r), φ_t''(r))`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64)> {
        check_domain(
            "r",
            r,
            (0.0..=FRAC_PI_2).contains(&r),
            "r must lie in [0, pi/2]",
        )?;
        let t = self.t;
        let (s, c) = r.sin_cos();
        let (chi, dchi) = self.cutoff.eval(r);
        let phi = if t == 1.0 {
            s
        } else {
            t * s + (1.0 - t) * self.cutoff_cos_integral(r)?
        };
        let dphi = c * (t + (1.0 - t) * chi);
        let ddphi = -t * s + (1.0 - t) * (dchi * c - chi * s);
        Ok((phi, dphi, ddphi))
    }

    /// `t + (1-t)·χ_t(r)`, the factor with `φ_t' = cos · factor`.
    fn slope_factor(&self, r: f64) -> f64 {
        self.t + (1.0 - self.t) * self.cutoff.value(r)
    }
}

impl Profile for WarpProfile {
    fn length(&self) -> f64 {
        FRAC_PI_2
    }

    fn jet(&self, r: f64) -> Result<Jet> {
        let (value, d1, d2) = self.eval(r)?;
        Ok(Jet { value, d1, d2 })
    }

    fn slope_defect(&self, r: f64) -> Result<f64> {
        // 1 - cos²·k² = sin² + cos²·(1-k)(1+k) with 1-k = (1-t)(1-χ)
        let (s, c) = r.sin_cos();
        let k = self.slope_factor(r);
        let one_minus_k = (1.0 - self.t) * (1.0 - self.cutoff.value(r));
        Ok(s * s + c * c * one_minus_k * (1.0 + k))
    }
}

pub fn eval_warp(t: f64, r: f64) -> Result<(f64, f64, f64)> {
    WarpProfile::new(t, &DeltaSelector::default())?.eval(r)
}

/// A signed check value with the radius where it is worst.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub at_r: f64,
}

/// Grid verification of the warping-function inequalities.
///
/// `curvature_gap` and `curvature_floor` pass when non-negative, `collapse`
/// passes when non-positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarpReport {
    pub t: f64,
    pub delta: f64,
    /// `min (-φ''/φ - tan·φ'/φ)`.
    pub curvature_gap: Extremum,
    /// `min (tan·φ'/φ - max{t, 1-t})`.
    pub curvature_floor: Extremum,
    /// `max (φ - 3t·sin r)` over `r > t`.
    pub collapse: Extremum,
    pub phi_at_zero: f64,
    pub dphi_at_zero_residual: f64,
    pub dphi_at_end: f64,
    /// `φ(π/2) - t`.
    pub end_value_margin: f64,
}

impl WarpReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.curvature_gap.value >= -tol
            && self.curvature_floor.value >= -tol
            && self.collapse.value <= tol
            && self.phi_at_zero.abs() <= tol
            && self.dphi_at_zero_residual.abs() <= tol
            && self.dphi_at_end.abs() <= tol
            && self.end_value_margin >= 0.0
    }
}

impl WarpProfile {
    pub fn verify(&self, grid_size: usize) -> Result<WarpReport> {
        check_domain(
            "grid_size",
            grid_size as f64,
            grid_size >= 2,
            "grid_size must be at least 2",
        )?;
        let t = self.t;
        let floor = t.max(1.0 - t);
        let mut gap = Extremum {
            value: f64::INFINITY,
            at_r: 0.0,
        };
        let mut lower = gap;
        let mut collapse = Extremum {
            value: f64::NEG_INFINITY,
            at_r: 0.0,
        };
        for i in 1..=grid_size {
            let r = FRAC_PI_2 * i as f64 / grid_size as f64;
            let (phi, _, ddphi) = self.eval(r)?;
            // tan·φ' = sin·(t + (1-t)χ), finite at π/2
            let tan_term = r.sin() * self.slope_factor(r) / phi;
            let g = -ddphi / phi - tan_term;
            if g < gap.value {
                gap = Extremum { value: g, at_r: r };
            }
            let l = tan_term - floor;
            if l < lower.value {
                lower = Extremum { value: l, at_r: r };
            }
            if r > t {
                let c = phi - 3.0 * t * r.sin();
                if c > collapse.value {
                    collapse = Extremum { value: c, at_r: r };
                }
            }
        }
        let (phi0, dphi0, _) = self.eval(0.0)?;
        let (phi_end, dphi_end, _) = self.eval(FRAC_PI_2)?;
        Ok(WarpReport {
            t,
            delta: self.delta(),
            curvature_gap: gap,
            curvature_floor: lower,
            collapse,
            phi_at_zero: phi0,
            dphi_at_zero_residual: dphi0 - 1.0,
            dphi_at_end: dphi_end,
            end_value_margin: phi_end - t,
        })
    }
}

pub fn verify_warp_properties(t: f64, grid_size: usize) -> Result<WarpReport> {
    WarpProfile::new(t, &DeltaSelector::default())?.verify(grid_size)
}
