//! The collapsing link metrics `h(t) = c(t) · (dr² + cos² r g_{S^{p-1}} + φ_t² g_{S^{q-1}})`
//! on `S^{p+q-1}` and their volume normalisation.

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::geometry::{Cosine, CurvatureMinimum, DoublyWarpedMetric, Profile};
use crate::quadrature::AdaptiveSimpson;
use crate::scalar::{DeltaSelector, WarpProfile};

/// Smooth-sphere end conditions must hold to this accuracy.
pub const END_TOL: f64 = 1e-8;
/// Certification threshold for the minimum curvature eigenvalue.
pub const CURVATURE_TOL: f64 = 1e-6;

/// Metric scale factor `c(t) = max{1-t, t}`.
pub fn link_scale(t: f64) -> f64 {
    t.max(1.0 - t)
}

#[derive(Debug, Clone)]
pub struct LinkMetric {
    t: f64,
    metric: DoublyWarpedMetric<Cosine, WarpProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkSummary {
    pub p: u32,
    pub q: u32,
    pub t: f64,
    pub delta: f64,
    pub scale: f64,
    pub volume: f64,
    pub min_curvature: f64,
    pub argmin_r: f64,
}

impl LinkMetric {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn delta(&self) -> f64 {
        self.metric.b().delta()
    }

    pub fn metric(&self) -> &DoublyWarpedMetric<Cosine, WarpProfile> {
        &self.metric
    }

    pub fn warp(&self) -> &WarpProfile {
        self.metric.b()
    }

    pub fn volume(&self, quad: &AdaptiveSimpson) -> Result<f64> {
        self.metric.volume(quad)
    }

    pub fn min_curvature(&self, grid_size: usize) -> Result<CurvatureMinimum> {
        self.metric.min_curvature(grid_size)
    }

    pub fn summary(&self, grid_size: usize, quad: &AdaptiveSimpson) -> Result<LinkSummary> {
        let min = self.min_curvature(grid_size)?;
        Ok(LinkSummary {
            p: self.metric.p(),
            q: self.metric.q(),
            t: self.t,
            delta: self.delta(),
            scale: self.metric.scale(),
            volume: self.volume(quad)?,
            min_curvature: min.min,
            argmin_r: min.argmin_r,
        })
    }

    /// `sup_r √c(t) · φ_t(r)` over `grid_size + 1` uniform radii.
    pub fn fiber_sup(&self, grid_size: usize) -> Result<f64> {
        let l = self.metric.length();
        let mut sup = 0.0f64;
        for i in 0..=grid_size {
            let r = if i == grid_size {
                l
            } else {
                l * i as f64 / grid_size as f64
            };
            sup = sup.max(self.warp().jet(r)?.value);
        }
        Ok(self.metric.scale().sqrt() * sup)
    }
}

pub fn build_link_with(p: u32, q: u32, t: f64, selector: &DeltaSelector) -> Result<LinkMetric> {
    check_domain("t", t, t > 0.0 && t <= 1.0, "t must lie in (0, 1]")?;
    let warp = WarpProfile::new(t, selector)?;
    let metric = DoublyWarpedMetric::new(p, q, Cosine, warp, link_scale(t))?;
    let ends = metric.end_residuals()?;
    if !ends.passes(END_TOL) {
        return Err(Error::OutOfRegime {
            r: 0.0,
            reason: "smooth-sphere end conditions violated",
        });
    }
    Ok(LinkMetric { t, metric })
}

pub fn build_link(p: u32, q: u32, t: f64) -> Result<LinkMetric> {
    build_link_with(p, q, t, &DeltaSelector::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseRow {
    pub t: f64,
    pub scale: f64,
    /// `sup_r √c(t) · φ_t(r)`.
    pub fiber_sup: f64,
    /// `3t`, the bound on `φ_t` beyond `r = t`.
    pub far_bound: f64,
    /// `4t`, adding the contribution of `r ≤ t`.
    pub total_bound: f64,
}

pub fn collapse_diagnostic(p: u32, q: u32, t_grid: &[f64], grid_size: usize) -> Result<Vec<CollapseRow>> {
    let selector = DeltaSelector::default();
    t_grid
        .iter()
        .map(|&t| {
            let link = build_link_with(p, q, t, &selector)?;
            Ok(CollapseRow {
                t,
                scale: link.metric.scale(),
                fiber_sup: link.fiber_sup(grid_size)?,
                far_bound: 3.0 * t,
                total_bound: 4.0 * t,
            })
        })
        .collect()
}

/// `h(t)` rescaled so that its volume does not exceed that of `h(1/m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedLink {
    pub m: u32,
    pub t: f64,
    pub c_m: f64,
    /// `min{1, c_m(t)} · c(t)`.
    pub effective_scale: f64,
    /// Volume of the metric at the effective scale, recomputed by quadrature.
    pub volume: f64,
    /// `Vol(h(1/m))`.
    pub reference_volume: f64,
}

impl NormalizedLink {
    pub fn from_link(link: &LinkMetric, m: u32, reference_volume: f64, quad: &AdaptiveSimpson) -> Result<Self> {
        let metric = link.metric();
        let dim = (metric.p() + metric.q() - 1) as f64;
        let own = metric.volume(quad)?;
        let c_m = (reference_volume / own).powf(2.0 / dim);
        let effective_scale = c_m.min(1.0) * metric.scale();
        let volume = metric.clone().with_scale(effective_scale)?.volume(quad)?;
        Ok(Self {
            m,
            t: link.t(),
            c_m,
            effective_scale,
            volume,
            reference_volume,
        })
    }
}

pub fn reference_volume(p: u32, q: u32, m: u32, quad: &AdaptiveSimpson) -> Result<f64> {
    check_domain("m", m as f64, m >= 1, "m must be at least 1")?;
    build_link(p, q, 1.0 / m as f64)?.volume(quad)
}

pub fn volume_normalization(p: u32, q: u32, m: u32, t: f64) -> Result<NormalizedLink> {
    let quad = AdaptiveSimpson::default();
    let reference = reference_volume(p, q, m, &quad)?;
    NormalizedLink::from_link(&build_link(p, q, t)?, m, reference, &quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scale_convention() {
        assert_eq!(link_scale(1.0), 1.0);
        assert_eq!(link_scale(0.25), 0.75);
        assert_eq!(link_scale(0.5), 0.5);
    }

    #[test]
    fn round_link_is_unit_sphere() {
        let link = build_link(2, 2, 1.0).unwrap();
        let s = link.summary(256, &AdaptiveSimpson::default()).unwrap();
        assert!((s.min_curvature - 1.0).abs() < 1e-12);
        assert!((s.volume - 2.0 * PI * PI).abs() < 1e-9);
        assert_eq!(link.fiber_sup(64).unwrap(), 1.0);
    }

    #[test]
    fn normalization_is_identity_at_own_reference() {
        let n = volume_normalization(2, 2, 2, 0.5).unwrap();
        assert!((n.c_m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_link(1, 2, 0.5).unwrap_err().is_usage());
        assert!(build_link(2, 2, 0.0).unwrap_err().is_usage());
        assert!(volume_normalization(2, 2, 0, 0.5).unwrap_err().is_usage());
    }
}
