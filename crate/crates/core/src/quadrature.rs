//! One-dimensional quadrature.
//!
//! [`AdaptiveSimpson`] is the workhorse for every integral of a smooth bounded
//! integrand in the crate. [`gauss_legendre`] is a fixed composite rule used where
//! the integrand is known to be analytic on the panel and speed matters.

use crate::error::{Error, Result};

/// Adaptive Simpson rule with Richardson correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSimpson {
    /// Absolute tolerance for the whole interval.
    pub tol: f64,
    /// Hard cap on the number of interval subdivisions.
    pub max_subdivisions: usize,
    /// Intervals are always split at least this many times before accepting.
    pub min_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_subdivisions: 1 << 20,
            min_depth: 2,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

const MAX_DEPTH: u32 = 60;

impl AdaptiveSimpson {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 0,
            });
        }
        if b < a {
            let mut res = self.integrate(f, b, a)?;
            res.value = -res.value;
            return Ok(res);
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let mut evaluations = 3;
        let mut stack = vec![Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: simpson(a, b, fa, fm, fb),
            tol: self.tol,
            depth: 0,
        }];
        let mut value = 0.0;
        let mut error_estimate = 0.0;
        let mut subdivisions = 0usize;

        while let Some(p) = stack.pop() {
            let m = 0.5 * (p.a + p.b);
            let lm = 0.5 * (p.a + m);
            let rm = 0.5 * (m + p.b);
            let flm = f(lm);
            let frm = f(rm);
            evaluations += 2;
            let left = simpson(p.a, m, p.fa, flm, p.fm);
            let right = simpson(m, p.b, p.fm, frm, p.fb);
            let delta = left + right - p.whole;
            let converged = p.depth >= self.min_depth && delta.abs() <= 15.0 * p.tol;
            let exhausted = p.depth >= MAX_DEPTH || lm <= p.a || rm >= p.b;
            if converged || exhausted {
                value += left + right + delta / 15.0;
                error_estimate += delta.abs() / 15.0;
                continue;
            }
            subdivisions += 1;
            if subdivisions > self.max_subdivisions {
                return Err(Error::Quadrature {
                    achieved: f64::INFINITY,
                    requested: self.tol,
                });
            }
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }

        if !value.is_finite() || error_estimate > self.tol {
            return Err(Error::Quadrature {
                achieved: error_estimate,
                requested: self.tol,
            });
        }
        Ok(Integral {
            value,
            error_estimate,
            evaluations,
        })
    }

    /// Integrates over consecutive panels of a sorted node list and returns the
    /// running integral at every node (first entry is zero).
    ///
    /// Half the tolerance is shared in proportion to panel width, half equally
    /// between panels, so very narrow panels keep a usable budget.
    pub fn cumulative<F: Fn(f64) -> f64>(&self, f: F, nodes: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(nodes.len());
        if nodes.is_empty() {
            return Ok(out);
        }
        let span = (nodes[nodes.len() - 1] - nodes[0]).abs().max(f64::MIN_POSITIVE);
        let panels = (nodes.len() - 1).max(1) as f64;
        let mut acc = 0.0;
        out.push(0.0);
        for w in nodes.windows(2) {
            let weight = 0.5 * (w[1] - w[0]).abs() / span + 0.5 / panels;
            let share = Self {
                tol: (self.tol * weight).max(f64::MIN_POSITIVE),
                ..*self
            };
            acc += share.integrate(&f, w[0], w[1])?.value;
            out.push(acc);
        }
        Ok(out)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Composite 10-point Gauss-Legendre rule on `panels` equal panels.
/// Single-panel 10-point Gauss-Legendre rule for two integrands sharing work.
pub(crate) fn gauss_legendre_pair<F: Fn(f64) -> (f64, f64)>(f: F, a: f64, b: f64) -> (f64, f64) {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let (mut s, mut t) = (0.0, 0.0);
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let (p, q) = f(mid - half * x);
        let (u, v) = f(mid + half * x);
        s += w * (p + u);
        t += w * (q + v);
    }
    (s * half, t * half)
}

pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// Composite trapezoid rule on `n` equal panels. Used as an independent
/// cross-check in tests and diagnostics.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + i as f64 * h);
    }
    s * h
}
