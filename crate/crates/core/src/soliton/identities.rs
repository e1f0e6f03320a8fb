//! Pointwise residuals of the soliton identities along a solved profile.
//!
//! With `ε ∈ {0, 1}` and `f(o) = 0`:
//!
//! * trace: `R + εn/2 = Δf`,
//! * first integral: `R + |∇f|² - εf = R(o)`,
//! * gradient: `∇R = -2 Ric(∇f)`,
//! * sandwich (expanding only): `r²/4 ≤ f ≤ (r + 2√R(o))²/4`.
//!
//! Each residual is reported in absolute form and relative to `1 + Σ|terms|`;
//! expander potentials grow like `r²/4`, so only the relative form is
//! meaningful along long profiles.

use serde::Serialize;

use crate::soliton::profile::{RotSolitonProfile, SolitonKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub absolute: f64,
    pub relative: f64,
    /// Radius of the worst relative residual.
    pub at_r: f64,
}

impl Residual {
    fn new() -> Self {
        Self {
            absolute: 0.0,
            relative: 0.0,
            at_r: f64::NAN,
        }
    }

    fn push(&mut self, r: f64, value: f64, terms: &[f64]) {
        let a = value.abs();
        let scale = 1.0 + terms.iter().map(|t| t.abs()).sum::<f64>();
        self.absolute = self.absolute.max(a);
        if a / scale > self.relative || self.at_r.is_nan() {
            self.relative = a / scale;
            self.at_r = r;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub trace: Residual,
    pub first_integral: Residual,
    pub gradient: Residual,
    /// `max(0, r²/4 - f)`; `None` for steady profiles.
    pub sandwich_lower: Option<Residual>,
    /// `max(0, f - (r + 2√R(o))²/4)`; `None` for steady profiles.
    pub sandwich_upper: Option<Residual>,
}

impl IdentityReport {
    pub fn all(&self) -> Vec<(&'static str, Residual)> {
        let mut out = vec![
            ("trace", self.trace),
            ("first_integral", self.first_integral),
            ("gradient", self.gradient),
        ];
        if let Some(s) = self.sandwich_lower {
            out.push(("sandwich_lower", s));
        }
        if let Some(s) = self.sandwich_upper {
            out.push(("sandwich_upper", s));
        }
        out
    }

    pub fn max_relative(&self) -> f64 {
        self.all().iter().fold(0.0, |m, (_, r)| m.max(r.relative))
    }
}

/// `(R', Ric_rr)` at sample `i` from the analytic third derivative of `w`.
fn curvature_slope(p: &RotSolitonProfile, i: usize) -> (f64, f64) {
    let n = p.n as f64;
    let eps = p.epsilon();
    let (w, u, w2, df, ddf) = (p.w[i], p.u[i], p.ddw[i], p.df[i], p.ddf[i]);
    let w1 = 1.0 - u;
    // w'' = N / w with N = (n-2)(1-w'²) + εw²/2 - w w' f'
    let dn = -2.0 * (n - 2.0) * w1 * w2 + eps * w * w1
        - w1 * w1 * df
        - w * w2 * df
        - w * w1 * ddf;
    let w3 = (dn - w1 * w2) / w;
    let defect = u * (2.0 - u);
    let dr = -2.0 * (n - 1.0) * (w3 / w - w2 * w1 / (w * w))
        + (n - 1.0) * (n - 2.0) * (-2.0 * w1 * w2 / (w * w) - 2.0 * defect * w1 / (w * w * w));
    (dr, -(n - 1.0) * w2 / w)
}

pub fn check_identities(p: &RotSolitonProfile) -> IdentityReport {
    let n = p.n as f64;
    let eps = p.epsilon();
    let ro = p.r_origin();
    let expanding = p.kind == SolitonKind::Expanding;
    let mut trace = Residual::new();
    let mut first = Residual::new();
    let mut gradient = Residual::new();
    let mut lower = Residual::new();
    let mut upper = Residual::new();
    for i in 0..p.len() {
        let r = p.r[i];
        let big_r = p.scalar_curvature(i);
        let (f, df, ddf) = (p.f[i], p.df[i], p.ddf[i]);
        let lap_term = (n - 1.0) * p.dw(i) / p.w[i] * df;
        trace.push(
            r,
            big_r + 0.5 * eps * n - (ddf + lap_term),
            &[big_r, 0.5 * eps * n, ddf, lap_term],
        );
        first.push(
            r,
            big_r + df * df - eps * f - ro,
            &[big_r, df * df, eps * f, ro],
        );
        let (dr, ric) = curvature_slope(p, i);
        gradient.push(r, dr + 2.0 * ric * df, &[dr, 2.0 * ric * df]);
        if expanding {
            lower.push(r, (0.25 * r * r - f).max(0.0), &[f]);
            let cap = 0.25 * (r + 2.0 * ro.sqrt()).powi(2);
            upper.push(r, (f - cap).max(0.0), &[f]);
        }
    }
    IdentityReport {
        trace,
        first_integral: first,
        gradient,
        sandwich_lower: expanding.then_some(lower),
        sandwich_upper: expanding.then_some(upper),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::profile::integrate_soliton;

    #[test]
    fn cigar_first_integral() {
        let p = integrate_soliton(2, SolitonKind::Steady, 2.0, 8.0).unwrap();
        let rep = check_identities(&p);
        assert!(rep.first_integral.absolute <= 1e-8, "{rep:?}");
        assert!(rep.sandwich_lower.is_none());
    }

    #[test]
    fn gaussian_is_exact() {
        let p = integrate_soliton(4, SolitonKind::Expanding, 0.0, 5.0).unwrap();
        let rep = check_identities(&p);
        assert!(rep.max_relative() <= 1e-12, "{rep:?}");
    }

    #[test]
    fn bryant_three() {
        let p = integrate_soliton(3, SolitonKind::Steady, 1.0, 30.0).unwrap();
        let rep = check_identities(&p);
        assert!(rep.max_relative() <= 1e-7, "{rep:?}");
    }
}
