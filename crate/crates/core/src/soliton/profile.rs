//! Rotationally symmetric gradient solitons `g = dr² + w(r)² g_{S^{n-1}}` with
//! potential `f(r)`, solving `Ric + (ε/2) g = ∇²f`:
//!
//! ```text
//! f'' = -(n-1) w''/w + ε/2
//! w w' f' = -w w'' + (n-2)(1 - w'²) + ε w²/2
//! ```
//!
//! The state carries `u = 1 - w'` so that `1 - w'² = u(2 - u)` keeps full
//! relative precision near the origin.

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::ode::{self, Control, Outcome, System, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolitonKind {
    Steady,
    Expanding,
}

impl SolitonKind {
    pub fn epsilon(self) -> f64 {
        match self {
            SolitonKind::Steady => 0.0,
            SolitonKind::Expanding => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Radius where the series seed hands over to the integrator.
    pub seam: f64,
    /// Samples are kept when `r` has grown by at least this fraction.
    pub record_spacing: f64,
}

impl Default for SolitonOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            seam: 1e-3,
            record_spacing: 1e-3,
        }
    }
}

impl SolitonOptions {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 1e-3 * rel_tol,
            ..self
        }
    }
}

/// Taylor data at the origin: `w = r + a3 r³ + a5 r⁵`, `f' = b1 r + b3 r³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    n: f64,
    a3: f64,
    a5: f64,
    b1: f64,
    b3: f64,
}

impl Series {
    pub fn new(n: u32, epsilon: f64, kappa: f64) -> Self {
        let nf = n as f64;
        let b1 = (nf - 1.0) * kappa + 0.5 * epsilon;
        let e = epsilon;
        let a5 = (52.0 * b1 * b1 * nf - 40.0 * b1 * b1 - 28.0 * b1 * e * nf
            + 16.0 * b1 * e
            + e * e * nf
            + 2.0 * e * e)
            / (480.0 * (nf - 1.0).powi(2) * (nf + 2.0));
        Self {
            n: nf,
            a3: -kappa / 6.0,
            a5,
            b1,
            b3: b1 * (e - 2.0 * b1) / (3.0 * (nf + 2.0)),
        }
    }

    /// `(w, 1 - w', w'')`.
    pub fn w(&self, r: f64) -> (f64, f64, f64) {
        let r2 = r * r;
        (
            r * (1.0 + r2 * (self.a3 + self.a5 * r2)),
            -r2 * (3.0 * self.a3 + 5.0 * self.a5 * r2),
            r * (6.0 * self.a3 + 20.0 * self.a5 * r2),
        )
    }

    /// `(f, f', f'')` with `f(0) = 0`.
    pub fn f(&self, r: f64) -> (f64, f64, f64) {
        let r2 = r * r;
        (
            r2 * (0.5 * self.b1 + 0.25 * self.b3 * r2),
            r * (self.b1 + self.b3 * r2),
            self.b1 + 3.0 * self.b3 * r2,
        )
    }

    /// `∫_0^r w^{n-1}` to the order of the seed.
    pub fn vol(&self, r: f64) -> f64 {
        let n = self.n;
        r.powf(n) * (1.0 / n + (n - 1.0) * self.a3 * r * r / (n + 2.0))
    }
}

pub(crate) struct SolitonSystem {
    n: f64,
    eps: f64,
}

impl SolitonSystem {
    pub(crate) fn new(n: u32, kind: SolitonKind) -> Self {
        Self {
            n: n as f64,
            eps: kind.epsilon(),
        }
    }

    /// `w''` from `(w, u, f')`.
    pub(crate) fn ddw(&self, w: f64, u: f64, df: f64) -> f64 {
        ((self.n - 2.0) * u * (2.0 - u) + 0.5 * self.eps * w * w - w * (1.0 - u) * df) / w
    }
}

/// State `[w, 1 - w', f, f', ∫w^{n-1}]`.
impl System<5> for SolitonSystem {
    fn rhs(&self, r: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
        let (w, u, df) = (y[0], y[1], y[3]);
        if w.is_nan() || w <= 0.0 || !y.iter().all(|v| v.is_finite()) {
            return Err(Error::OutOfRegime {
                r,
                reason: "warping function reached zero",
            });
        }
        let ddw = self.ddw(w, u, df);
        let ddf = -(self.n - 1.0) * ddw / w + 0.5 * self.eps;
        Ok([1.0 - u, -ddw, df, ddf, w.powi(self.n as i32 - 1)])
    }
}

/// A solved profile sampled on an adaptive grid starting at the seam.
#[derive(Debug, Clone)]
pub struct RotSolitonProfile {
    pub n: u32,
    pub kind: SolitonKind,
    pub kappa: f64,
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    /// `1 - w'`.
    pub u: Vec<f64>,
    pub ddw: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
    pub ddf: Vec<f64>,
    /// `∫_0^r w^{n-1}`.
    pub vol: Vec<f64>,
    series: Series,
}

pub const PROFILE_HEADER: [&str; 7] = ["r", "w", "dw", "f", "df", "R", "gradf2"];

impl RotSolitonProfile {
    pub fn seam(&self) -> f64 {
        self.r[0]
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn epsilon(&self) -> f64 {
        self.kind.epsilon()
    }

    /// `R(o) = n(n-1)κ`.
    pub fn r_origin(&self) -> f64 {
        let n = self.n as f64;
        n * (n - 1.0) * self.kappa
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn dw(&self, i: usize) -> f64 {
        1.0 - self.u[i]
    }

    /// Scalar curvature `-2(n-1) w''/w + (n-1)(n-2)(1 - w'²)/w²` at sample `i`.
    pub fn scalar_curvature(&self, i: usize) -> f64 {
        let n = self.n as f64;
        let (w, u) = (self.w[i], self.u[i]);
        -2.0 * (n - 1.0) * self.ddw[i] / w + (n - 1.0) * (n - 2.0) * u * (2.0 - u) / (w * w)
    }

    pub fn grad_f2(&self, i: usize) -> f64 {
        self.df[i] * self.df[i]
    }

    /// Rows `r, w, w', f, f', R, |∇f|²`.
    pub fn rows(&self) -> Vec<[f64; 7]> {
        (0..self.len())
            .map(|i| {
                [
                    self.r[i],
                    self.w[i],
                    self.dw(i),
                    self.f[i],
                    self.df[i],
                    self.scalar_curvature(i),
                    self.grad_f2(i),
                ]
            })
            .collect()
    }

    fn locate(&self, r: f64) -> Result<Option<usize>> {
        if r.is_nan() || r < 0.0 || r > self.r_max() {
            return Err(Error::ProfileTooShort {
                needed: r,
                available: self.r_max(),
            });
        }
        if r <= self.seam() {
            return Ok(None);
        }
        Ok(Some(
            self.r.partition_point(|&x| x < r).clamp(1, self.r.len() - 1) - 1,
        ))
    }

    fn interpolate(&self, i: usize, r: f64, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        hermite5(self.r[i], self.r[i + 1], a, b, r)
    }

    /// `(w, w', w'')` anywhere on `[0, r_max]`.
    pub fn eval_w(&self, r: f64) -> Result<[f64; 3]> {
        Ok(match self.locate(r)? {
            None => {
                let (w, u, ddw) = self.series.w(r);
                [w, 1.0 - u, ddw]
            }
            Some(i) => {
                let node = |j: usize| [self.w[j], self.dw(j), self.ddw[j]];
                self.interpolate(i, r, node(i), node(i + 1))
            }
        })
    }

    /// `(f, f', f'')` anywhere on `[0, r_max]`.
    pub fn eval_f(&self, r: f64) -> Result<[f64; 3]> {
        Ok(match self.locate(r)? {
            None => {
                let (f, df, ddf) = self.series.f(r);
                [f, df, ddf]
            }
            Some(i) => {
                let node = |j: usize| [self.f[j], self.df[j], self.ddf[j]];
                self.interpolate(i, r, node(i), node(i + 1))
            }
        })
    }

    /// `∫_0^r w^{n-1}` anywhere on `[0, r_max]`.
    pub fn eval_vol(&self, r: f64) -> Result<f64> {
        let m = self.n as i32 - 1;
        Ok(match self.locate(r)? {
            None => self.series.vol(r),
            Some(i) => {
                let node = |j: usize| {
                    let w = self.w[j];
                    [
                        self.vol[j],
                        w.powi(m),
                        m as f64 * w.powi(m - 1) * self.dw(j),
                    ]
                };
                self.interpolate(i, r, node(i), node(i + 1))[0]
            }
        })
    }
}

/// Quintic Hermite interpolation from value, slope and curvature at both ends.
/// Returns `(p, p', p'')` at `x`.
pub(crate) fn hermite5(x0: f64, x1: f64, a: [f64; 3], b: [f64; 3], x: f64) -> [f64; 3] {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let c0 = a[0];
    let c1 = h * a[1];
    let c2 = 0.5 * h * h * a[2];
    let p = b[0] - (c0 + c1 + c2);
    let d = h * b[1] - (c1 + 2.0 * c2);
    let s = h * h * b[2] - 2.0 * c2;
    let c3 = 10.0 * p - 4.0 * d + 0.5 * s;
    let c4 = -15.0 * p + 7.0 * d - s;
    let c5 = 6.0 * p - 3.0 * d + 0.5 * s;
    let v = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
    let dv = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
    let ddv = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
    [v, dv / h, ddv / (h * h)]
}

/// Per-step view handed to stop rules: `r`, state and its derivative.
pub(crate) type StopRule<'a> = dyn FnMut(f64, &[f64; 5], &[f64; 5]) -> bool + 'a;

pub(crate) fn check_params(n: u32, kappa: f64) -> Result<()> {
    check_domain("n", n as f64, n >= 2, "n must be at least 2")?;
    check_domain("kappa", kappa, kappa >= 0.0, "kappa must be non-negative")
}

/// Integrates from the seam until `r_end` or until `stop` returns true.
/// When `record` is false only the final state is returned.
pub(crate) fn run(
    n: u32,
    kind: SolitonKind,
    kappa: f64,
    r_end: f64,
    opts: &SolitonOptions,
    stop: &mut StopRule<'_>,
    record: bool,
) -> Result<(Option<RotSolitonProfile>, Outcome<5>)> {
    check_params(n, kappa)?;
    let r0 = opts.seam;
    check_domain("r_max", r_end, r_end > r0, "r_max must exceed the seam radius")?;
    let series = Series::new(n, kind.epsilon(), kappa);
    let system = SolitonSystem::new(n, kind);
    let (w0, u0, _) = series.w(r0);
    let (f0, df0, _) = series.f(r0);
    let y0 = [w0, u0, f0, df0, series.vol(r0)];
    // second derivatives from the equations so that stored samples are consistent
    let dy0 = system.rhs(r0, &y0)?;
    let (ddw0, ddf0) = (-dy0[1], dy0[3]);
    let mut prof = RotSolitonProfile {
        n,
        kind,
        kappa,
        r: vec![r0],
        w: vec![w0],
        u: vec![u0],
        ddw: vec![ddw0],
        f: vec![f0],
        df: vec![df0],
        ddf: vec![ddf0],
        vol: vec![y0[4]],
        series,
    };
    let push = |p: &mut RotSolitonProfile, r: f64, y: &[f64; 5], dy: &[f64; 5]| {
        p.r.push(r);
        p.w.push(y[0]);
        p.u.push(y[1]);
        p.ddw.push(-dy[1]);
        p.f.push(y[2]);
        p.df.push(y[3]);
        p.ddf.push(dy[3]);
        p.vol.push(y[4]);
    };
    let tol = Tolerances {
        rel: opts.rel_tol,
        abs: opts.abs_tol,
    };
    let mut last = r0;
    let outcome = ode::integrate(&system, r0, y0, r_end, tol, &[], |r, y, dy| {
        if record && r - last >= opts.record_spacing * r {
            push(&mut prof, r, y, dy);
            last = r;
        }
        Ok(if stop(r, y, dy) {
            Control::Stop
        } else {
            Control::Continue
        })
    })?;
    if !record {
        return Ok((None, outcome));
    }
    if prof.r_max() < outcome.r {
        push(&mut prof, outcome.r, &outcome.y, &outcome.dy);
    }
    Ok((Some(prof), outcome))
}

/// Integrates a soliton with vertex sectional curvature `kappa` out to `r_max`.
pub fn integrate_soliton_with(
    n: u32,
    kind: SolitonKind,
    kappa: f64,
    r_max: f64,
    opts: &SolitonOptions,
) -> Result<RotSolitonProfile> {
    let (prof, _) = run(n, kind, kappa, r_max, opts, &mut |_, _, _| false, true)?;
    Ok(prof.expect("recording run returns a profile"))
}

pub fn integrate_soliton(n: u32, kind: SolitonKind, kappa: f64, r_max: f64) -> Result<RotSolitonProfile> {
    integrate_soliton_with(n, kind, kappa, r_max, &SolitonOptions::default())
}
