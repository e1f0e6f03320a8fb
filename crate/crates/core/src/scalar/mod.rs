//! Scalar building blocks: smooth steps, the cutoff family, `δ(t)` and `φ_t`.

pub mod cutoff;
pub mod selection;
pub mod smooth_step;
pub mod warp;

pub use cutoff::{
    eval_cutoff, weighted_derivative_ratio, CutoffFamily, RatioSample, LOG_SWITCH, RADIUS_FLOOR,
};
pub use selection::{integral_bound, select_delta, DeltaCheck, DeltaSelector};
pub use smooth_step::SmoothStep;
pub use warp::{eval_warp, verify_warp_properties, Extremum, WarpProfile, WarpReport};
