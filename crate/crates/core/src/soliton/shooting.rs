//! Shooting on the vertex curvature `κ` for expanders asymptotic to the cone
//! `dr² + c² r² g_{S^{n-1}}`.
//!
//! Far out `w = c r + α/r + O(r^{-3})`, so `w' + r w''/2` estimates the cone
//! angle with an `O(r^{-4})` error long before `w'` itself settles. A coarse
//! bisection uses that estimate at moderate radii; a few secant steps then tune
//! `w'(r_max)` itself, with `r_max` fixed by the stop rule `|w''| r ≤ tol`.

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::geometry::sphere::sphere_area;
use crate::soliton::profile::{run, RotSolitonProfile, SolitonKind, SolitonOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Target accuracy for `|w'(r_max) - c|` and the stop rule `|w''| r ≤ tol`.
    pub tol: f64,
    pub ode: SolitonOptions,
    pub kappa_low: f64,
    pub kappa_high: f64,
    /// Largest `κ` tried while expanding the bracket.
    pub kappa_cap: f64,
    /// Stop-rule tolerance of the coarse phase.
    pub coarse_tol: f64,
    /// Integration never runs past this radius.
    pub r_cap: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            ode: SolitonOptions::default(),
            kappa_low: 1e-6,
            kappa_high: 1.0,
            kappa_cap: 1e8,
            coarse_tol: 1e-4,
            r_cap: 2e4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub n: u32,
    pub c: f64,
    pub kappa_star: f64,
    /// `w'(r_max)`.
    pub achieved_slope: f64,
    pub slope_err: f64,
    pub r_origin: f64,
    /// Closed form `|S^{n-1}| c^{n-1} / n`.
    pub avr: f64,
    /// Limit of `V(r) = |S^{n-1}| ∫_0^r w^{n-1} / r^n`, extrapolated as
    /// `2 V(r_max) - V(r_max/2)` to remove the `O(1/r)` term left by the
    /// constant offset in `w = c r + b + O(1/r)`.
    pub avr_direct: f64,
    /// `V(r_max)` itself.
    pub avr_at_r_max: f64,
    pub r_max: f64,
    /// Every `(κ, slope)` pair evaluated, coarse estimates first.
    pub evaluations: Vec<(f64, f64)>,
    pub profile: RotSolitonProfile,
}

/// JSON view of a [`ShootingResult`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingSummary {
    pub n: u32,
    pub c: f64,
    pub kappa_star: f64,
    #[serde(rename = "R_origin")]
    pub r_origin: f64,
    pub avr: f64,
    pub r_max: f64,
    pub slope_err: f64,
}

impl ShootingResult {
    pub fn summary(&self) -> ShootingSummary {
        ShootingSummary {
            n: self.n,
            c: self.c,
            kappa_star: self.kappa_star,
            r_origin: self.r_origin,
            avr: self.avr,
            r_max: self.r_max,
            slope_err: self.slope_err,
        }
    }
}

/// `|S^{n-1}| c^{n-1} / n`, the volume growth `lim vol B(o, r)/r^n` of the cone.
pub fn asymptotic_volume_ratio(n: u32, c: f64) -> Result<f64> {
    check_domain("n", n as f64, n >= 2, "n must be at least 2")?;
    check_domain("c", c, c > 0.0 && c <= 1.0, "cone angle must lie in (0, 1]")?;
    Ok(sphere_area(n) * c.powi(n as i32 - 1) / n as f64)
}

/// Closed-form and direct AVR; fails when they differ by more than `rel`.
pub fn avr_cross_check(result: &ShootingResult, rel: f64) -> Result<(f64, f64)> {
    let (closed, direct) = (result.avr, result.avr_direct);
    if (closed - direct).abs() > rel * closed {
        return Err(Error::AvrMismatch { closed, direct });
    }
    Ok((closed, direct))
}

const COARSE_ITERATIONS: usize = 80;

fn r_min(n: u32, kappa: f64) -> f64 {
    let ro = (n * (n - 1)) as f64 * kappa;
    4.0 * (1.0 / ro.sqrt()).max(1.0)
}

/// Secant estimate of `w''` over radial spans of relative width `SPAN`.
///
/// In the far field the ODE is stiff with rate `≈ r/2`, so `w''` evaluated from
/// the right-hand side carries the integration error of `w'` amplified by `r`.
/// Differencing `w'` over a macroscopic span keeps the estimate at the level of
/// the error in `w'` itself.
struct CurvatureMonitor {
    anchor: (f64, f64),
    estimate: Option<f64>,
}

const SPAN: f64 = 0.1;

impl CurvatureMonitor {
    fn new() -> Self {
        Self {
            anchor: (0.0, 0.0),
            estimate: None,
        }
    }

    /// Feeds `(r, w')`; returns the latest `w''` estimate.
    fn feed(&mut self, r: f64, dw: f64) -> Option<f64> {
        let (r0, dw0) = self.anchor;
        if r0 == 0.0 {
            self.anchor = (r, dw);
        } else if r >= (1.0 + SPAN) * r0 {
            self.estimate = Some((dw - dw0) / (r - r0));
            self.anchor = (r, dw);
        }
        self.estimate
    }
}

/// Stop rule shared by both phases: `|w''| r ≤ tol` beyond `r_min`, or `w' ≤ 0`.
fn stop_rule(
    lo: f64,
    tol: f64,
    monitor: &mut CurvatureMonitor,
) -> impl FnMut(f64, &[f64; 5], &[f64; 5]) -> bool + '_ {
    move |r, y, _| {
        let est = monitor.feed(r, 1.0 - y[1]);
        y[1] >= 1.0 || (r >= lo && est.is_some_and(|d| d.abs() * r <= tol))
    }
}

/// Cone-angle estimate `w' + r w''/2` once the coarse stop rule holds.
/// A profile that turns over (`w' ≤ 0`) reports its current slope.
fn coarse_slope(n: u32, kappa: f64, opts: &ShootingOptions) -> Result<f64> {
    let mut monitor = CurvatureMonitor::new();
    let (_, out) = run(
        n,
        SolitonKind::Expanding,
        kappa,
        opts.r_cap,
        &opts.ode,
        &mut stop_rule(r_min(n, kappa), opts.coarse_tol, &mut monitor),
        false,
    )?;
    let (r, slope) = (out.r, 1.0 - out.y[1]);
    if slope <= 0.0 {
        return Ok(slope);
    }
    if r >= opts.r_cap {
        return Err(Error::OutOfRegime {
            r,
            reason: "stop rule not met before the radius cap",
        });
    }
    Ok(slope + 0.5 * r * monitor.estimate.unwrap_or(0.0))
}

/// Full solve: `w'(r_max)` with `r_max` from the stop rule.
fn fine_slope(n: u32, kappa: f64, opts: &ShootingOptions) -> Result<(f64, RotSolitonProfile)> {
    let mut monitor = CurvatureMonitor::new();
    let (prof, out) = run(
        n,
        SolitonKind::Expanding,
        kappa,
        opts.r_cap,
        &opts.ode,
        &mut stop_rule(r_min(n, kappa), opts.tol, &mut monitor),
        true,
    )?;
    if out.r >= opts.r_cap {
        return Err(Error::OutOfRegime {
            r: out.r,
            reason: "stop rule not met before the radius cap",
        });
    }
    Ok((1.0 - out.y[1], prof.expect("recorded")))
}

struct Tracker {
    points: Vec<(f64, f64)>,
}

impl Tracker {
    /// Records `(κ, s)` and aborts if slopes are not strictly decreasing in `κ`
    /// among the points of the same phase.
    fn push(&mut self, kappa: f64, slope: f64, from: usize) -> Result<()> {
        for &(k, s) in &self.points[from..] {
            let bad = (k < kappa && s <= slope) || (k > kappa && s >= slope);
            if bad {
                return Err(Error::NonMonotoneShooting {
                    kappa_a: k,
                    slope_a: s,
                    kappa_b: kappa,
                    slope_b: slope,
                });
            }
        }
        self.points.push((kappa, slope));
        Ok(())
    }
}

pub fn solve_expander_with(n: u32, c: f64, opts: &ShootingOptions) -> Result<ShootingResult> {
    check_domain("n", n as f64, n >= 2, "n must be at least 2")?;
    check_domain("c", c, c > 0.0 && c < 1.0, "cone angle must lie in (0, 1)")?;
    check_domain("tol", opts.tol, opts.tol >= 1e-7, "shooting tolerance must be at least 1e-7")?;
    let mut track = Tracker { points: Vec::new() };

    // coarse phase: bracket then bisect on the extrapolated cone angle
    let (mut lo, mut hi) = (opts.kappa_low, opts.kappa_high);
    let mut s_lo = coarse_slope(n, lo, opts)?;
    track.push(lo, s_lo, 0)?;
    if s_lo <= c {
        return Err(Error::BracketFailure {
            target: c,
            slope_low: s_lo,
            slope_high: s_lo,
        });
    }
    let mut s_hi = coarse_slope(n, hi, opts)?;
    track.push(hi, s_hi, 0)?;
    while s_hi > c {
        if hi >= opts.kappa_cap {
            return Err(Error::BracketFailure {
                target: c,
                slope_low: s_hi,
                slope_high: s_lo,
            });
        }
        lo = hi;
        s_lo = s_hi;
        hi *= 4.0;
        s_hi = coarse_slope(n, hi, opts)?;
        track.push(hi, s_hi, 0)?;
    }
    let coarse_goal = 0.01 * opts.tol;
    for _ in 0..COARSE_ITERATIONS {
        if hi - lo <= 1e-9 * hi {
            break;
        }
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        let s = coarse_slope(n, mid, opts)?;
        track.push(mid, s, 0)?;
        if s > c {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
            s_hi = s;
        }
        if (s - c).abs() <= coarse_goal {
            break;
        }
    }
    let mut slope_per_kappa = (s_hi - s_lo) / (hi - lo);
    let mut kappa = if s_lo == s_hi {
        lo
    } else {
        lo + (c - s_lo) / slope_per_kappa
    };

    // fine phase: secant on w'(r_max)
    let fine_start = track.points.len();
    let (mut s, mut prof) = fine_slope(n, kappa, opts)?;
    track.push(kappa, s, fine_start)?;
    for _ in 0..8 {
        if (s - c).abs() <= 0.25 * opts.tol {
            break;
        }
        let next = kappa - (s - c) / slope_per_kappa;
        let (s_next, p_next) = fine_slope(n, next, opts)?;
        track.push(next, s_next, fine_start)?;
        if s_next != s {
            slope_per_kappa = (s_next - s) / (next - kappa);
        }
        kappa = next;
        s = s_next;
        prof = p_next;
    }

    let r_max = prof.r_max();
    let avr = asymptotic_volume_ratio(n, c)?;
    let ratio = |r: f64| -> Result<f64> { Ok(sphere_area(n) * prof.eval_vol(r)? / r.powi(n as i32)) };
    let avr_at_r_max = ratio(r_max)?;
    let avr_direct = 2.0 * avr_at_r_max - ratio(0.5 * r_max)?;
    Ok(ShootingResult {
        n,
        c,
        kappa_star: kappa,
        achieved_slope: s,
        slope_err: (s - c).abs(),
        r_origin: prof.r_origin(),
        avr,
        avr_direct,
        avr_at_r_max,
        r_max,
        evaluations: track.points,
        profile: prof,
    })
}

pub fn solve_expander(n: u32, c: f64, tol: f64) -> Result<ShootingResult> {
    solve_expander_with(
        n,
        c,
        &ShootingOptions {
            tol,
            ..ShootingOptions::default()
        },
    )
}

/// Ball and sub-level-set volume ratios against their AVR bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvrReport {
    pub avr: f64,
    /// `vol B(o, √R(o)) / R(o)^{n/2}`.
    pub ball_ratio: f64,
    /// `4^n · AVR`.
    pub ball_bound: f64,
    /// `vol {f ≤ 9R(o)/4} / (13R(o)/4)^{n/2}`.
    pub sublevel_ratio: f64,
    /// `2^n · AVR`.
    pub sublevel_bound: f64,
}

impl AvrReport {
    pub fn ball_slack(&self) -> f64 {
        self.ball_bound - self.ball_ratio
    }

    pub fn sublevel_slack(&self) -> f64 {
        self.sublevel_bound - self.sublevel_ratio
    }

    pub fn holds(&self) -> bool {
        self.ball_slack() > 0.0 && self.sublevel_slack() > 0.0
    }
}

pub fn avr_inequality_check(result: &ShootingResult) -> Result<AvrReport> {
    let p = &result.profile;
    let ro = p.r_origin();
    check_domain("R(o)", ro, ro > 0.0, "requires R(o) > 0")?;
    let nf = p.n as f64;
    let area = sphere_area(p.n);
    let radius = ro.sqrt();
    let ball = area * p.eval_vol(radius)?;

    // f is increasing, so {f ≤ level} is the ball out to f⁻¹(level)
    let level = 2.25 * ro;
    if p.f[p.len() - 1] < level {
        return Err(Error::ProfileTooShort {
            needed: level,
            available: p.f[p.len() - 1],
        });
    }
    let k = p.f.partition_point(|&v| v < level);
    let (mut a, mut b) = if k == 0 { (0.0, p.r[0]) } else { (p.r[k - 1], p.r[k]) };
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if p.eval_f(m)?[0] < level {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    let sub = area * p.eval_vol(0.5 * (a + b))?;
    Ok(AvrReport {
        avr: result.avr,
        ball_ratio: ball / ro.powf(0.5 * nf),
        ball_bound: 4f64.powi(p.n as i32) * result.avr,
        sublevel_ratio: sub / (level + ro).powf(0.5 * nf),
        sublevel_bound: 2f64.powi(p.n as i32) * result.avr,
    })
}
