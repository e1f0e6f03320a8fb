//! Numerical toolkit for collapsing link metrics on spheres and for
//! rotationally symmetric steady and expanding Ricci solitons.
//!
//! The most used types are re-exported at the crate root; the modules hold the
//! full API.

pub mod error;
pub mod geometry;
pub mod link;
pub mod ode;
pub mod quadrature;
pub mod scalar;
pub mod soliton;

pub use error::{Error, Result};
pub use geometry::{
    sphere_constant, validate_ideal_boundary, BoundaryData, BoundaryReport, ConditionResult, Cosine,
    CurvatureMinimum, CurvatureSpectrum, DoublyWarpedMetric, Jet, Profile, Sine,
};
pub use link::{
    build_link, build_link_with, collapse_diagnostic, link_scale, reference_volume, volume_normalization,
    CollapseRow, LinkMetric, LinkSummary, NormalizedLink,
};
pub use quadrature::AdaptiveSimpson;
pub use scalar::{
    eval_cutoff, eval_warp, select_delta, verify_warp_properties, weighted_derivative_ratio, CutoffFamily,
    DeltaSelector, WarpProfile, WarpReport,
};
pub use soliton::{
    asymptotic_volume_ratio, avr_inequality_check, ball_volume, blowup_extract, blowup_extract_with, check_identities,
    integrate_soliton, integrate_soliton_with, solve_expander, solve_expander_with, volume_scale, volume_scale_with, AvrReport,
    BlowupRow, BlowupTable, IdentityReport, RotSolitonProfile, ShootingOptions, ShootingResult, SolitonKind,
    SolitonOptions, VolumeScale, VolumeScaleOptions,
};
