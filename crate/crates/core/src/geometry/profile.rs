//! Warping profiles on an interval `[0, L]`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{check_domain, Result};

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

pub trait Profile {
    /// Right endpoint `L` of the domain.
    fn length(&self) -> f64;

    fn jet(&self, r: f64) -> Result<Jet>;

    /// `1 - f'(r)²`. Implementors with a cancellation-free form should override.
    fn slope_defect(&self, r: f64) -> Result<f64> {
        let j = self.jet(r)?;
        Ok(1.0 - j.d1 * j.d1)
    }
}

fn check_quarter(r: f64) -> Result<()> {
    check_domain(
        "r",
        r,
        (0.0..=FRAC_PI_2).contains(&r),
        "r must lie in [0, pi/2]",
    )
}

/// `cos r` on `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cosine;

/// `sin r` on `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sine;

impl Profile for Cosine {
    fn length(&self) -> f64 {
        FRAC_PI_2
    }

    fn jet(&self, r: f64) -> Result<Jet> {
        check_quarter(r)?;
        let (s, c) = r.sin_cos();
        Ok(Jet {
            value: c,
            d1: -s,
            d2: -c,
        })
    }

    fn slope_defect(&self, r: f64) -> Result<f64> {
        check_quarter(r)?;
        Ok(r.cos().powi(2))
    }
}

impl Profile for Sine {
    fn length(&self) -> f64 {
        FRAC_PI_2
    }

    fn jet(&self, r: f64) -> Result<Jet> {
        check_quarter(r)?;
        let (s, c) = r.sin_cos();
        Ok(Jet {
            value: s,
            d1: c,
            d2: -s,
        })
    }

    fn slope_defect(&self, r: f64) -> Result<f64> {
        check_quarter(r)?;
        Ok(r.sin().powi(2))
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn length(&self) -> f64 {
        (**self).length()
    }
    fn jet(&self, r: f64) -> Result<Jet> {
        (**self).jet(r)
    }
    fn slope_defect(&self, r: f64) -> Result<f64> {
        (**self).slope_defect(r)
    }
}
