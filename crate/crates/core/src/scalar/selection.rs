//! Choice of the cutoff parameter `δ(t)` used by the warping functions.
//!
//! For a given `t` the selector walks the geometric candidate grid
//! `1, 1/2, 1/4, …` and returns the first (largest) `δ` satisfying
//!
//! * (a) `χ_δ(t) ≤ t`, and
//! * (b) `∫_0^r -χ_δ' sin ≤ min{t²/(1-t), t} · sin(r)` on the verification grid.
//!
//! The constant in (b) is read as `1` at `t = 1`.

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::quadrature::AdaptiveSimpson;
use crate::scalar::cutoff::{CutoffFamily, GEOMETRIC_RATIO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSelector {
    /// Candidates are `2^{-k}` for `k = 0..=max_halvings`.
    pub max_halvings: u32,
    /// Uniform radii in the verification grid (geometric nodes are added on top).
    pub uniform_points: usize,
    /// Ratio between geometric verification nodes.
    pub geometric_ratio: f64,
    pub quad: AdaptiveSimpson,
}

impl Default for DeltaSelector {
    fn default() -> Self {
        Self {
            max_halvings: 24,
            uniform_points: 512,
            geometric_ratio: GEOMETRIC_RATIO,
            quad: AdaptiveSimpson::default(),
        }
    }
}

/// Outcome of checking (a) and (b) for one `(t, δ)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaCheck {
    pub t: f64,
    pub delta: f64,
    /// `t - χ_δ(t)`; non-negative passes.
    pub plateau_margin: f64,
    /// `min_r (bound - ∫_0^r -χ_δ' sin / sin r)`; non-negative passes.
    pub integral_margin: f64,
    /// `ln r` at the worst radius (the radius itself may underflow).
    pub worst_ln_r: f64,
}

impl DeltaCheck {
    pub fn passes(&self) -> bool {
        self.plateau_margin >= 0.0 && self.integral_margin >= 0.0
    }
}

/// `min{t²/(1-t), t}`, continued by its limit `1` at `t = 1`.
pub fn integral_bound(t: f64) -> f64 {
    if t >= 1.0 {
        1.0
    } else {
        (t * t / (1.0 - t)).min(t)
    }
}

impl DeltaSelector {
    pub fn with_resolution(self, uniform_points: usize, geometric_ratio: f64) -> Self {
        Self {
            uniform_points,
            geometric_ratio,
            ..self
        }
    }

    pub fn check(&self, t: f64, delta: f64) -> Result<DeltaCheck> {
        let cutoff = CutoffFamily::new(delta)?;
        let plateau_margin = t - cutoff.value(t);
        let bound = integral_bound(t);
        let samples = cutoff.ratio_profile(self.uniform_points, self.geometric_ratio, &self.quad)?;
        let mut integral_margin = f64::INFINITY;
        let mut worst_ln_r = samples[0].ln_r;
        for s in &samples {
            // relative slack for quadrature error
            let margin = bound * (1.0 + 1e-9) - s.ratio;
            if margin < integral_margin {
                integral_margin = margin;
                worst_ln_r = s.ln_r;
            }
        }
        Ok(DeltaCheck {
            t,
            delta,
            plateau_margin,
            integral_margin,
            worst_ln_r,
        })
    }

    /// Largest candidate `δ` passing (a) and (b) for this `t`.
    pub fn select(&self, t: f64) -> Result<f64> {
        check_domain("t", t, t > 0.0 && t <= 1.0, "t must lie in (0, 1]")?;
        let mut first_failure = 'a';
        for k in 0..=self.max_halvings {
            let delta = 0.5f64.powi(k as i32);
            let check = self.check(t, delta)?;
            if check.passes() {
                return Ok(delta);
            }
            if k == 0 {
                first_failure = if check.plateau_margin < 0.0 { 'a' } else { 'b' };
            }
        }
        Err(Error::NoDeltaCandidate {
            t,
            condition: first_failure,
        })
    }

    /// Selections for a sweep of `t` values, capped so that `δ` never increases
    /// as `t` decreases. Output is in the order of `ts`.
    pub fn select_sweep(&self, ts: &[f64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..ts.len()).collect();
        order.sort_by(|&i, &j| ts[j].total_cmp(&ts[i]));
        let mut out = vec![0.0; ts.len()];
        let mut cap = 1.0f64;
        for i in order {
            let d = self.select(ts[i])?.min(cap);
            cap = d;
            out[i] = d;
        }
        Ok(out)
    }
}

pub fn select_delta(t: f64) -> Result<f64> {
    DeltaSelector::default().select(t)
}
