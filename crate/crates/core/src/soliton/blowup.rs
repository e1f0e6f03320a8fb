//! Expanders with shrinking cone angle, rescaled to unit curvature at the
//! origin, compared against the Bryant steady soliton.
//!
//! Rescaling an expander by `R(o)` gives a soliton with expanding constant
//! `1/(2R(o))`. As the cone closes `R(o) → ∞`, so the rescaled profiles should
//! approach the steady soliton with `R(o) = 1`.

use serde::Serialize;

use crate::error::{check_domain, Result};
use crate::soliton::profile::{integrate_soliton, RotSolitonProfile, SolitonKind};
use crate::soliton::shooting::{solve_expander_with, ShootingOptions};

/// Comparison window `s ∈ [0, S_MAX]` in curvature-normalised units.
pub const S_MAX: f64 = 5.0;
/// Uniform sample count on the comparison window.
pub const SAMPLES: usize = 501;
pub const BLOWUP_HEADER: [&str; 6] = ["c", "kappa_star", "R_origin", "avr", "eps_coeff", "dist_to_bryant"];

/// The steady soliton with `R(o) = 1`, i.e. `κ = 1/(n(n-1))`, out to `r_max`.
pub fn bryant_profile(n: u32, r_max: f64) -> Result<RotSolitonProfile> {
    check_domain("n", n as f64, n >= 3, "the Bryant soliton needs n >= 3")?;
    integrate_soliton(n, SolitonKind::Steady, 1.0 / (n * (n - 1)) as f64, r_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupRow {
    pub c: f64,
    pub kappa_star: f64,
    #[serde(rename = "R_origin")]
    pub r_origin: f64,
    pub avr: f64,
    /// Expanding constant `1/(2R(o))` of the rescaled soliton.
    pub eps_coeff: f64,
    /// `sup_{s ∈ [0, S_MAX]} |√R ŵ(s/√R) - w_B(s)|`.
    pub dist_to_bryant: f64,
}

impl BlowupRow {
    pub fn values(&self) -> [f64; 6] {
        [
            self.c,
            self.kappa_star,
            self.r_origin,
            self.avr,
            self.eps_coeff,
            self.dist_to_bryant,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupTable {
    pub n: u32,
    pub rows: Vec<BlowupRow>,
}

fn strictly<F: Fn(f64, f64) -> bool>(rows: &[BlowupRow], key: fn(&BlowupRow) -> f64, ok: F) -> bool {
    rows.windows(2).all(|w| ok(key(&w[0]), key(&w[1])))
}

impl BlowupTable {
    pub fn r_origin_increasing(&self) -> bool {
        strictly(&self.rows, |r| r.r_origin, |a, b| b > a)
    }

    pub fn eps_coeff_decreasing(&self) -> bool {
        strictly(&self.rows, |r| r.eps_coeff, |a, b| b < a)
    }

    pub fn distance_decreasing(&self) -> bool {
        strictly(&self.rows, |r| r.dist_to_bryant, |a, b| b < a)
    }

    pub fn final_distance(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.dist_to_bryant)
    }

    /// All three monotone trends hold and the last distance is at most `tol`.
    pub fn certified(&self, tol: f64) -> bool {
        self.r_origin_increasing()
            && self.eps_coeff_decreasing()
            && self.distance_decreasing()
            && self.final_distance() <= tol
    }
}

/// Sup distance on `[0, S_MAX]` between the rescaled `expander` and `bryant`.
pub fn distance_to_bryant(expander: &RotSolitonProfile, bryant: &RotSolitonProfile) -> Result<f64> {
    let scale = expander.r_origin().sqrt();
    let mut worst: f64 = 0.0;
    for i in 1..SAMPLES {
        let s = S_MAX * i as f64 / (SAMPLES - 1) as f64;
        let w_hat = scale * expander.eval_w(s / scale)?[0];
        worst = worst.max((w_hat - bryant.eval_w(s)?[0]).abs());
    }
    Ok(worst)
}

pub fn blowup_extract_with(n: u32, c_list: &[f64], opts: &ShootingOptions) -> Result<BlowupTable> {
    check_domain("c_list", c_list.len() as f64, c_list.len() >= 3, "need at least three cone angles")?;
    for &c in c_list {
        check_domain("c", c, c > 0.0 && c < 1.0, "cone angles must lie in (0, 1)")?;
    }
    for w in c_list.windows(2) {
        check_domain("c", w[1], w[1] < w[0], "cone angles must be strictly decreasing")?;
    }
    let bryant = bryant_profile(n, S_MAX)?;
    let mut rows = Vec::with_capacity(c_list.len());
    for &c in c_list {
        let res = solve_expander_with(n, c, opts)?;
        rows.push(BlowupRow {
            c,
            kappa_star: res.kappa_star,
            r_origin: res.r_origin,
            avr: res.avr,
            eps_coeff: 0.5 / res.r_origin,
            dist_to_bryant: distance_to_bryant(&res.profile, &bryant)?,
        });
    }
    Ok(BlowupTable { n, rows })
}

pub fn blowup_extract(n: u32, c_list: &[f64]) -> Result<BlowupTable> {
    blowup_extract_with(n, c_list, &ShootingOptions::default())
}
