//! Doubly warped products `scale · (dr² + a(r)² g_{S^{p-1}} + b(r)² g_{S^{q-1}})`.

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::geometry::profile::Profile;
use crate::geometry::sphere::sphere_area;
use crate::quadrature::AdaptiveSimpson;

#[derive(Debug, Clone)]
pub struct DoublyWarpedMetric<A, B> {
    p: u32,
    q: u32,
    a: A,
    b: B,
    scale: f64,
}

/// Global minimum over all five eigenvalue curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureMinimum {
    pub min: f64,
    pub argmin_r: f64,
    /// Zero-based index into the eigenvalue tuple.
    pub eig_index: usize,
}

/// Eigenvalue curves on a uniform grid including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSpectrum {
    pub r: Vec<f64>,
    pub eigenvalues: Vec<[f64; 5]>,
    pub minimum: CurvatureMinimum,
}

/// Residuals of the smooth-sphere end conditions. `a_start` and `b_end` must be
/// positive; every other entry should vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndResiduals {
    pub a_start: f64,
    pub da_start: f64,
    pub b_start: f64,
    pub db_start_minus_one: f64,
    pub a_end: f64,
    pub da_end_plus_one: f64,
    pub b_end: f64,
    pub db_end: f64,
}

impl EndResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.da_start,
            self.b_start,
            self.db_start_minus_one,
            self.a_end,
            self.da_end_plus_one,
            self.db_end,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.a_start > 0.0 && self.b_end > 0.0 && self.max_residual() <= tol
    }
}

impl<A: Profile, B: Profile> DoublyWarpedMetric<A, B> {
    pub fn new(p: u32, q: u32, a: A, b: B, scale: f64) -> Result<Self> {
        check_domain("p", p as f64, p >= 2, "p must be at least 2")?;
        check_domain("q", q as f64, q >= 2, "q must be at least 2")?;
        check_domain("scale", scale, scale > 0.0, "scale must be positive")?;
        let length = a.length();
        check_domain(
            "length",
            b.length(),
            length > 0.0 && b.length() == length,
            "both profiles must share the domain [0, L] with L > 0",
        )?;
        Ok(Self { p, q, a, b, scale })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn length(&self) -> f64 {
        self.a.length()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn a(&self) -> &A {
        &self.a
    }

    pub fn b(&self) -> &B {
        &self.b
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(self.p, self.q, self.a, self.b, scale)
    }

    /// `(-a''/a, -b''/b, (1-a'²)/a², (1-b'²)/b², -a'b'/(ab)) / scale` at an
    /// interior radius.
    pub fn curvature_eigenvalues(&self, r: f64) -> Result<[f64; 5]> {
        let l = self.length();
        check_domain("r", r, r > 0.0 && r < l, "r must lie strictly inside (0, L)")?;
        let a = self.a.jet(r)?;
        let b = self.b.jet(r)?;
        if !(a.value > 0.0 && b.value > 0.0) {
            return Err(Error::DegenerateMetric { r });
        }
        let da = self.a.slope_defect(r)?;
        let db = self.b.slope_defect(r)?;
        let s = self.scale;
        Ok([
            -a.d2 / a.value / s,
            -b.d2 / b.value / s,
            da / (a.value * a.value) / s,
            db / (b.value * b.value) / s,
            -a.d1 * b.d1 / (a.value * b.value) / s,
        ])
    }

    /// Minimum of all eigenvalue curves over the interior points of a uniform
    /// grid with `grid_size` panels. Ties go to the smaller radius, then index.
    pub fn min_curvature(&self, grid_size: usize) -> Result<CurvatureMinimum> {
        check_domain(
            "grid_size",
            grid_size as f64,
            grid_size >= 64,
            "grid_size must be at least 64",
        )?;
        let h = self.length() / grid_size as f64;
        let mut best = CurvatureMinimum {
            min: f64::INFINITY,
            argmin_r: f64::NAN,
            eig_index: 0,
        };
        for i in 1..grid_size {
            let r = h * i as f64;
            for (k, &lam) in self.curvature_eigenvalues(r)?.iter().enumerate() {
                if lam < best.min {
                    best = CurvatureMinimum {
                        min: lam,
                        argmin_r: r,
                        eig_index: k,
                    };
                }
            }
        }
        Ok(best)
    }

    /// Eigenvalue curves on `grid_size + 1` uniform points. Endpoint values are
    /// one-sided limits from Richardson extrapolation of the even expansion.
    pub fn spectrum(&self, grid_size: usize) -> Result<CurvatureSpectrum> {
        let minimum = self.min_curvature(grid_size)?;
        let l = self.length();
        let h = l / grid_size as f64;
        let mut r = Vec::with_capacity(grid_size + 1);
        let mut eigenvalues = Vec::with_capacity(grid_size + 1);
        for i in 0..=grid_size {
            let x = if i == grid_size { l } else { h * i as f64 };
            r.push(x);
            let lam = if i == 0 {
                self.richardson(h, 2.0 * h)?
            } else if i == grid_size {
                self.richardson(l - h, l - 2.0 * h)?
            } else {
                self.curvature_eigenvalues(x)?
            };
            eigenvalues.push(lam);
        }
        Ok(CurvatureSpectrum {
            r,
            eigenvalues,
            minimum,
        })
    }

    fn richardson(&self, near: f64, far: f64) -> Result<[f64; 5]> {
        let n = self.curvature_eigenvalues(near)?;
        let f = self.curvature_eigenvalues(far)?;
        Ok(std::array::from_fn(|k| (4.0 * n[k] - f[k]) / 3.0))
    }

    /// `scale^{(p+q-1)/2} · |S^{p-1}| · |S^{q-1}| · ∫_0^L a^{p-1} b^{q-1} dr`.
    pub fn volume(&self, quad: &AdaptiveSimpson) -> Result<f64> {
        let (pm, qm) = (self.p as i32 - 1, self.q as i32 - 1);
        let failure = RefCell::new(None);
        let integral = quad.integrate(
            |r| match (self.a.jet(r), self.b.jet(r)) {
                (Ok(a), Ok(b)) => a.value.powi(pm) * b.value.powi(qm),
                (Err(e), _) | (_, Err(e)) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            0.0,
            self.length(),
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let integral = integral?.value;
        let dim = (self.p + self.q - 1) as f64;
        Ok(self.scale.powf(0.5 * dim) * sphere_area(self.p) * sphere_area(self.q) * integral)
    }

    pub fn end_residuals(&self) -> Result<EndResiduals> {
        let l = self.length();
        let (a0, b0) = (self.a.jet(0.0)?, self.b.jet(0.0)?);
        let (al, bl) = (self.a.jet(l)?, self.b.jet(l)?);
        Ok(EndResiduals {
            a_start: a0.value,
            da_start: a0.d1,
            b_start: b0.value,
            db_start_minus_one: b0.d1 - 1.0,
            a_end: al.value,
            da_end_plus_one: al.d1 + 1.0,
            b_end: bl.value,
            db_end: bl.d1,
        })
    }

    /// Rows `r, a, a', a'', b, b', b''` on `grid_size + 1` uniform points.
    pub fn sample(&self, grid_size: usize) -> Result<Vec<[f64; 7]>> {
        let l = self.length();
        (0..=grid_size)
            .map(|i| {
                let r = if i == grid_size {
                    l
                } else {
                    l * i as f64 / grid_size as f64
                };
                let a = self.a.jet(r)?;
                let b = self.b.jet(r)?;
                Ok([r, a.value, a.d1, a.d2, b.value, b.d1, b.d2])
            })
            .collect()
    }
}

pub const PROFILE_HEADER: [&str; 7] = ["r", "a", "da", "dda", "b", "db", "ddb"];
pub const EIGENVALUE_HEADER: [&str; 6] = ["r", "eig1", "eig2", "eig3", "eig4", "eig5"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::{Cosine, Sine};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn round(scale: f64) -> DoublyWarpedMetric<Cosine, Sine> {
        DoublyWarpedMetric::new(2, 2, Cosine, Sine, scale).unwrap()
    }

    #[test]
    fn round_sphere_is_flat_spectrum() {
        let m = round(1.0);
        for i in 1..100 {
            let lam = m.curvature_eigenvalues(FRAC_PI_2 * i as f64 / 100.0).unwrap();
            for l in lam {
                assert!((l - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(round(4.0).curvature_eigenvalues(0.7).unwrap(), [0.25; 5]);
        assert!((round(0.5).min_curvature(64).unwrap().min - 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoints_rejected() {
        let m = round(1.0);
        assert!(m.curvature_eigenvalues(0.0).is_err());
        assert!(m.curvature_eigenvalues(FRAC_PI_2).is_err());
        assert!(m.min_curvature(10).is_err());
    }

    #[test]
    fn unit_three_sphere_volume() {
        let v = round(1.0).volume(&AdaptiveSimpson::default()).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn spectrum_endpoints_are_finite() {
        let s = round(1.0).spectrum(64).unwrap();
        assert_eq!(s.r.len(), 65);
        for l in s.eigenvalues[0].iter().chain(&s.eigenvalues[64]) {
            assert!((l - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn round_end_residuals() {
        let e = round(1.0).end_residuals().unwrap();
        assert!(e.passes(1e-15));
    }

    #[test]
    fn rejects_small_dimensions() {
        assert!(DoublyWarpedMetric::new(1, 2, Cosine, Sine, 1.0).is_err());
        assert!(DoublyWarpedMetric::new(2, 2, Cosine, Sine, 0.0).is_err());
    }
}
