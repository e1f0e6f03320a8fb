//! Dormand-Prince 5(4) integrator with PI step-size control.
//!
//! The solver is specialised to small fixed-size states. Accepted steps are
//! streamed to an observer rather than stored; a caller-supplied list of stop
//! points is hit exactly.

use crate::error::{Error, Result};

/// Right-hand side `y' = f(r, y)`. Returning an error aborts the integration.
pub trait System<const N: usize> {
    fn rhs(&self, r: f64, y: &[f64; N]) -> Result<[f64; N]>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

/// Decision returned by the per-step observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Final state of an integration.
#[derive(Debug, Clone, Copy)]
pub struct Outcome<const N: usize> {
    pub r: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates from `r0` to at most `r_end`.
///
/// `observer` is called after each accepted step with the new point and may stop
/// the integration early. `stops` (sorted, inside `(r0, r_end]`) are hit exactly.
pub fn integrate<const N: usize, S, O>(
    system: &S,
    r0: f64,
    y0: [f64; N],
    r_end: f64,
    tol: Tolerances,
    stops: &[f64],
    mut observer: O,
) -> Result<Outcome<N>>
where
    S: System<N>,
    O: FnMut(f64, &[f64; N], &[f64; N]) -> Result<Control>,
{
    let mut accepted = 0;
    let mut rejected = 0;
    let mut r = r0;
    let mut y = y0;
    let mut k1 = system.rhs(r, &y)?;
    let mut h = initial_step(r0, &y0, &k1, tol, r_end - r0);
    let mut err_prev = 1e-4_f64;
    let mut stop_idx = stops.partition_point(|&s| s <= r0);

    while r < r_end {
        let target = if stop_idx < stops.len() {
            stops[stop_idx].min(r_end)
        } else {
            r_end
        };
        let mut hit_target = false;
        if r + h >= target {
            h = target - r;
            hit_target = true;
        }
        if h <= 1e-14 * r.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { r });
        }

        let k2 = system.rhs(r + C2 * h, &axpy(&y, &[(A21, &k1)], h))?;
        let k3 = system.rhs(r + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h))?;
        let k4 = system.rhs(
            r + C4 * h,
            &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
        )?;
        let k5 = system.rhs(
            r + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        )?;
        let k6 = system.rhs(
            r + h,
            &axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        )?;
        let y_new = axpy(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = system.rhs(r + h, &y_new)?;

        let mut err = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(0.2, 5.0)
            };
            err_prev = err.max(1e-4);
            r = if hit_target { target } else { r + h };
            y = y_new;
            k1 = k7;
            accepted += 1;
            if hit_target && stop_idx < stops.len() && target == stops[stop_idx] {
                stop_idx += 1;
            }
            if observer(r, &y, &k1)? == Control::Stop {
                break;
            }
            h *= fac;
        } else {
            rejected += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 1.0)
            } else {
                0.1
            };
            h *= fac;
        }
    }
    Ok(Outcome {
        r,
        y,
        dy: k1,
        accepted,
        rejected,
    })
}

fn initial_step<const N: usize>(
    r0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    tol: Tolerances,
    span: f64,
) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = tol.abs + tol.rel * y0[i].abs();
        d0 += (y0[i] / sc).powi(2);
        d1 += (f0[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(span).min(0.1 * r0.abs().max(1e-3))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;
    impl System<2> for Oscillator {
        fn rhs(&self, _r: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
            Ok([y[1], -y[0]])
        }
    }

    #[test]
    fn harmonic_oscillator_is_accurate() {
        let tol = Tolerances {
            rel: 1e-10,
            abs: 1e-12,
        };
        let out = integrate(&Oscillator, 0.0, [0.0, 1.0], 10.0, tol, &[], |_, _, _| {
            Ok(Control::Continue)
        })
        .unwrap();
        assert_eq!(out.r, 10.0);
        assert!((out.y[0] - 10f64.sin()).abs() < 1e-8);
        assert!((out.dy[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn stops_are_hit_exactly() {
        let tol = Tolerances {
            rel: 1e-8,
            abs: 1e-10,
        };
        let stops = [0.5, 1.25, 3.0];
        let mut seen = Vec::new();
        integrate(&Oscillator, 0.0, [0.0, 1.0], 4.0, tol, &stops, |r, _, _| {
            seen.push(r);
            Ok(Control::Continue)
        })
        .unwrap();
        for s in stops {
            assert!(seen.contains(&s));
        }
    }

    #[test]
    fn observer_can_stop_early() {
        let tol = Tolerances {
            rel: 1e-8,
            abs: 1e-10,
        };
        let out = integrate(&Oscillator, 0.0, [0.0, 1.0], 100.0, tol, &[], |r, _, _| {
            Ok(if r > 1.0 {
                Control::Stop
            } else {
                Control::Continue
            })
        })
        .unwrap();
        assert!(out.r < 2.0);
    }
}
