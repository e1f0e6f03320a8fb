//! Volume scale `v(x) = sup{r : vol B(x, r) ≥ ω_n r^n / 2}` for centers on a ray
//! from the origin of a rotationally symmetric profile.
//!
//! The 2-plane through the origin and the center is totally geodesic with metric
//! `dr² + w(r)² dθ²`. A ball is the union of geodesic segments of length `≤ R`
//! from its center, and it meets each distance sphere `{r = r'}` in a polar cap
//! `θ ≤ θ*(r')`. Geodesics are labelled by their Clairaut constant `J = w(s)`,
//! where `s` is the turning radius, so `θ*` follows from cumulative integrals
//! `∫ J / (w √(w² - J²))` and `∫ w / √(w² - J²)` tabulated once per `s`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::geometry::sphere::sphere_area;
use crate::quadrature::gauss_legendre_pair;
use crate::soliton::profile::RotSolitonProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeScaleOptions {
    /// Uniform radial nodes on `[0, r_max]`.
    pub grid: usize,
    /// Ratio between consecutive candidate radii in the outward scan.
    pub growth: f64,
    /// Relative width at which bisection stops.
    pub rel_tol: f64,
}

impl Default for VolumeScaleOptions {
    fn default() -> Self {
        Self {
            grid: 1000,
            growth: 1.2,
            rel_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeScale {
    pub r_point: f64,
    pub v: f64,
    /// Set when every candidate radius up to `radius_cap` stays above
    /// half-Euclidean volume, so `v` is only a lower bound.
    pub capped: bool,
    /// Largest radius whose ball fits inside the profile.
    pub radius_cap: f64,
    /// `vol B(x, v) / (ω_n v^n)`.
    pub ratio_at_v: f64,
}

/// `∫_0^θ sin^{n-2}`.
fn polar_cap(n: u32, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let mut lo = theta; // k = 0
    if n == 2 {
        return lo;
    }
    let mut hi = 1.0 - c; // k = 1
    let mut k = 1;
    while k < n - 2 {
        k += 1;
        let next = -s.powi(k as i32 - 1) * c / k as f64 + (k - 1) as f64 / k as f64 * lo;
        lo = hi;
        hi = next;
    }
    hi
}

fn fold(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        2.0 * PI - t
    } else {
        t
    }
}

/// Largest folded angle on the segment `[a, b]` of the `(θ, L)` family that
/// lies within length `radius`, if any.
fn reach(a: (f64, f64), b: (f64, f64), radius: f64) -> Option<f64> {
    let ((ta, la), (tb, lb)) = (a, b);
    // an unreachable end contributes nothing; keep the other one if it is inside
    match (la.is_finite(), lb.is_finite()) {
        (true, true) => {}
        (true, false) => return (la <= radius).then(|| fold(ta)),
        (false, true) => return (lb <= radius).then(|| fold(tb)),
        (false, false) => return None,
    }
    let (t1, t2) = match (la <= radius, lb <= radius) {
        (true, true) => (ta, tb),
        (false, false) => return None,
        (ina, _) => {
            let t = ta + (tb - ta) * (radius - la) / (lb - la);
            if ina {
                (ta, t)
            } else {
                (t, tb)
            }
        }
    };
    let (lo, hi) = (t1.min(t2), t1.max(t2));
    let first = ((lo - PI) / (2.0 * PI)).ceil();
    if (hi - PI) / (2.0 * PI) >= first {
        return Some(PI);
    }
    Some(fold(lo).max(fold(hi)))
}

/// Geodesic families from one center, tabulated against a radial grid.
struct BallTable {
    n: u32,
    grid: Vec<f64>,
    w: Vec<f64>,
    center: usize,
    /// Turning radii, ascending; the tail coincides with `grid[1..]`.
    turning: Vec<f64>,
    /// `turning[j] = grid[first_node[j]]`, or `first_node[j] = 1` for the
    /// sub-grid radii which sit below `grid[1]`.
    first_node: Vec<usize>,
    /// `(θ, L)` from `turning[j]` out to each grid node.
    cumulative: Vec<Vec<(f64, f64)>>,
}

impl BallTable {
    fn new<F: Fn(f64) -> Result<f64>>(n: u32, r_max: f64, center: f64, nodes: usize, w: F) -> Result<Self> {
        let mut grid: Vec<f64> = (0..=nodes).map(|i| r_max * i as f64 / nodes as f64).collect();
        let k = grid.partition_point(|&r| r < center);
        let center_idx = if k < grid.len() && (grid[k] - center).abs() <= 1e-12 * r_max {
            grid[k] = center;
            k
        } else {
            grid.insert(k, center);
            k
        };
        let wv = grid.iter().map(|&r| w(r)).collect::<Result<Vec<_>>>()?;

        let mut turning: Vec<f64> = (1..=40).rev().map(|e| grid[1] * 0.5f64.powi(e)).collect();
        let mut first_node = vec![1; turning.len()];
        for (i, &r) in grid.iter().enumerate().skip(1) {
            turning.push(r);
            first_node.push(i);
        }
        let cumulative = turning
            .iter()
            .zip(&first_node)
            .map(|(&s, &first)| tabulate(&grid, first, s, &w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            grid,
            w: wv,
            center: center_idx,
            turning,
            first_node,
            cumulative,
        })
    }

    fn at(&self, j: usize, i: usize) -> (f64, f64) {
        if self.first_node[j] > i {
            (0.0, 0.0)
        } else {
            self.cumulative[j][i]
        }
    }

    /// `θ*` on the sphere through `grid[i]`, or `None` outside the ball.
    fn cap_angle(&self, i: usize, radius: f64) -> Option<f64> {
        let (m, big) = (i.min(self.center), i.max(self.center));
        let (rm, rb) = (self.grid[m], self.grid[big]);
        if rb - rm > radius {
            return None;
        }
        if m == 0 {
            return Some(PI);
        }
        let last = self.turning.partition_point(|&s| s <= rm) - 1;
        let mut family = Vec::with_capacity(2 * last + 4);
        family.push((0.0, rb - rm));
        for j in 0..=last {
            let (a, b) = (self.at(j, big), self.at(j, m));
            family.push((a.0 - b.0, a.1 - b.1));
        }
        for j in (0..=last).rev() {
            let (a, b) = (self.at(j, big), self.at(j, m));
            family.push((a.0 + b.0, a.1 + b.1));
        }
        family.push((PI, rb + rm));
        family
            .windows(2)
            .filter_map(|p| reach(p[0], p[1], radius))
            .reduce(f64::max)
    }

    fn volume(&self, radius: f64) -> f64 {
        let dens = |i: usize| match self.cap_angle(i, radius) {
            Some(t) => self.w[i].powi(self.n as i32 - 1) * polar_cap(self.n, t),
            None => 0.0,
        };
        let rho = self.grid[self.center];
        let (lo, hi) = (rho - radius, rho + radius);
        let mut total = 0.0;
        let mut prev = (self.grid[0], dens(0));
        if lo > 0.0 {
            prev = (lo, 0.0);
        }
        for i in 1..self.grid.len() {
            let r = self.grid[i];
            if r <= prev.0 {
                continue;
            }
            if r >= hi {
                // θ* vanishes at the far end unless the center is the origin
                let end = if self.center == 0 {
                    let (a, b) = (self.w[i - 1], self.w[i]);
                    let w = a + (b - a) * (hi - self.grid[i - 1]) / (r - self.grid[i - 1]);
                    w.powi(self.n as i32 - 1) * polar_cap(self.n, PI)
                } else {
                    0.0
                };
                total += 0.5 * (prev.1 + end) * (hi - prev.0);
                break;
            }
            let d = dens(i);
            total += 0.5 * (prev.1 + d) * (r - prev.0);
            prev = (r, d);
        }
        sphere_area(self.n - 1) * total
    }
}

/// `(θ, L)` along the geodesic with turning radius `s`, from `s` to every grid
/// node at or beyond `grid[first]`. The substitution `r = s + τ²` removes the
/// inverse square-root singularity at the turning point. Where `w` is flat to
/// machine precision the length is infinite.
fn tabulate<F: Fn(f64) -> Result<f64>>(grid: &[f64], first: usize, s: f64, w: &F) -> Result<Vec<(f64, f64)>> {
    let j = w(s)?;
    let err = std::cell::Cell::new(None);
    let eval = |r: f64| -> f64 {
        w(r).unwrap_or_else(|e| {
            err.set(Some(e));
            f64::NAN
        })
    };
    let panel = |a: f64, b: f64| -> (f64, f64) {
        let (ta, tb) = ((a - s).max(0.0).sqrt(), (b - s).sqrt());
        let root = |tau: f64| {
            let wr = eval(s + tau * tau);
            (wr, ((wr - j) * (wr + j)).max(0.0).sqrt())
        };
        // the τ factor cancels the root's zero at the turning point
        let (theta, len) = gauss_legendre_pair(
            |tau| {
                let (wr, q) = root(tau);
                if q == 0.0 {
                    // w has saturated to J in f64: the geodesic never leaves this radius
                    (0.0, f64::INFINITY)
                } else {
                    (2.0 * tau * j / (wr * q), 2.0 * tau * wr / q)
                }
            },
            ta,
            tb,
        );
        (theta, len)
    };

    let mut out = vec![(0.0, 0.0); grid.len()];
    let mut acc = (0.0, 0.0);
    let mut a = s;
    // geometric refinement between s and the first grid node above it
    while 2.0 * a < grid[first] && a > 0.0 {
        let p = panel(a, 2.0 * a);
        acc = (acc.0 + p.0, acc.1 + p.1);
        a *= 2.0;
    }
    for (i, &b) in grid.iter().enumerate().skip(first) {
        if b > a {
            let p = panel(a, b);
            acc = (acc.0 + p.0, acc.1 + p.1);
            a = b;
        }
        out[i] = acc;
    }
    match err.take() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn volume_scale_impl<F: Fn(f64) -> Result<f64>>(
    n: u32,
    r_max: f64,
    r_point: f64,
    w: F,
    opts: &VolumeScaleOptions,
) -> Result<VolumeScale> {
    check_domain("r_point", r_point, r_point >= 0.0, "center radius must be non-negative")?;
    if r_point >= r_max {
        return Err(Error::ProfileTooShort {
            needed: r_point,
            available: r_max,
        });
    }
    let table = BallTable::new(n, r_max, r_point, opts.grid, w)?;
    let ball = sphere_area(n) / n as f64;
    let ratio = |r: f64| table.volume(r) / (ball * r.powi(n as i32));
    let cap = r_max - r_point;
    let start = 8.0 * r_max / opts.grid as f64;
    if start >= cap {
        return Err(Error::ProfileTooShort {
            needed: r_point + start,
            available: r_max,
        });
    }
    if ratio(start) < 0.5 {
        return Err(Error::OutOfRegime {
            r: r_point,
            reason: "ball volume below half-Euclidean at the grid resolution",
        });
    }

    // last passing radius in a geometric scan, then bisection to the crossing
    let mut radii = Vec::new();
    let mut r = start;
    while r < cap {
        radii.push(r);
        r *= opts.growth;
    }
    radii.push(cap);
    let pass: Vec<bool> = radii.iter().map(|&r| ratio(r) >= 0.5).collect();
    let last = pass.iter().rposition(|&p| p).expect("first radius passes");
    if last + 1 == radii.len() {
        return Ok(VolumeScale {
            r_point,
            v: cap,
            capped: true,
            radius_cap: cap,
            ratio_at_v: ratio(cap),
        });
    }
    let (mut lo, mut hi) = (radii[last], radii[last + 1]);
    while hi - lo > opts.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) >= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(VolumeScale {
        r_point,
        v: lo,
        capped: false,
        radius_cap: cap,
        ratio_at_v: ratio(lo),
    })
}

pub fn volume_scale_with(profile: &RotSolitonProfile, r_point: f64, opts: &VolumeScaleOptions) -> Result<VolumeScale> {
    volume_scale_impl(profile.n, profile.r_max(), r_point, |r| Ok(profile.eval_w(r)?[0]), opts)
}

pub fn volume_scale(profile: &RotSolitonProfile, r_point: f64) -> Result<VolumeScale> {
    volume_scale_with(profile, r_point, &VolumeScaleOptions::default())
}

/// `vol B(x, radius)` for the center at distance `r_point` from the origin.
pub fn ball_volume(profile: &RotSolitonProfile, r_point: f64, radius: f64, grid: usize) -> Result<f64> {
    check_domain("radius", radius, radius > 0.0, "radius must be positive")?;
    if r_point + radius > profile.r_max() {
        return Err(Error::ProfileTooShort {
            needed: r_point + radius,
            available: profile.r_max(),
        });
    }
    let table = BallTable::new(profile.n, profile.r_max(), r_point, grid, |r| Ok(profile.eval_w(r)?[0]))?;
    Ok(table.volume(radius))
}
