//! Rotationally symmetric steady and expanding gradient Ricci solitons.

pub mod blowup;
pub mod identities;
pub mod profile;
pub mod shooting;
pub mod volume_scale;

pub use profile::{integrate_soliton, integrate_soliton_with, RotSolitonProfile, SolitonKind, SolitonOptions};
pub use blowup::{blowup_extract, blowup_extract_with, bryant_profile, BlowupRow, BlowupTable};
pub use identities::{check_identities, IdentityReport, Residual};
pub use shooting::{
    asymptotic_volume_ratio, avr_cross_check, avr_inequality_check, solve_expander, solve_expander_with,
    AvrReport, ShootingOptions, ShootingResult, ShootingSummary,
};
pub use volume_scale::{ball_volume, volume_scale, volume_scale_with, VolumeScale, VolumeScaleOptions};
