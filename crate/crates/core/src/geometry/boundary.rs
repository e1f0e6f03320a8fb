//! Necessary conditions on sampled ideal-boundary warping data `(L, a, b)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// Samples of `a` and `b` on a grid `r_0 < r_1 < … < r_N` with `L = r_N - r_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub r: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst signed violation (positive means violated).
    pub worst: f64,
    pub at_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub length: f64,
    pub conditions: Vec<ConditionResult>,
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

pub const LENGTH: &str = "L <= pi/2";
pub const RANGE: &str = "a, b in [0, 1]";
pub const A_LIPSCHITZ: &str = "a 1-Lipschitz";
pub const B_LIPSCHITZ: &str = "b 1-Lipschitz";
pub const A_CONCAVE: &str = "a concave";
pub const B_CONCAVE: &str = "b concave";
pub const A_MONOTONE: &str = "a non-increasing";
pub const B_MONOTONE: &str = "b non-decreasing";
pub const A_END: &str = "a(L) = 0";
pub const B_START: &str = "b(0) = 0";

struct Worst {
    value: f64,
    at_r: f64,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            at_r: f64::NAN,
        }
    }

    fn push(&mut self, value: f64, r: f64) {
        if value > self.value {
            self.value = value;
            self.at_r = r;
        }
    }

    fn finish(self, name: &'static str, tol: f64) -> ConditionResult {
        ConditionResult {
            name,
            passed: self.value <= tol,
            worst: self.value,
            at_r: self.at_r,
        }
    }
}

impl BoundaryData {
    pub fn new(r: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if r.len() != a.len() || r.len() != b.len() {
            return Err(Error::Malformed(format!(
                "column lengths differ: r={}, a={}, b={}",
                r.len(),
                a.len(),
                b.len()
            )));
        }
        if r.len() < 3 {
            return Err(Error::Malformed("at least three samples are required".into()));
        }
        if let Some(i) = r.iter().chain(&a).chain(&b).position(|x| !x.is_finite()) {
            return Err(Error::Malformed(format!("non-finite value at entry {i}")));
        }
        if let Some(i) = r.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneGrid { index: i + 1 });
        }
        Ok(Self { r, a, b })
    }

    pub fn length(&self) -> f64 {
        self.r[self.r.len() - 1] - self.r[0]
    }

    /// Samples `a`, `b` on `n + 1` uniform points of `[0, length]`.
    pub fn from_fns(length: f64, n: usize, a: impl Fn(f64) -> f64, b: impl Fn(f64) -> f64) -> Result<Self> {
        let r: Vec<f64> = (0..=n).map(|i| length * i as f64 / n as f64).collect();
        let av = r.iter().map(|&x| a(x)).collect();
        let bv = r.iter().map(|&x| b(x)).collect();
        Self::new(r, av, bv)
    }
}

/// Checks the necessary conditions on ideal-boundary data. Each condition
/// reports its worst violation; `tol` is the slack allowed for all of them.
pub fn validate_ideal_boundary(data: &BoundaryData, tol: f64) -> BoundaryReport {
    let (r, a, b) = (&data.r, &data.a, &data.b);
    let n = r.len();
    let length = data.length();

    let mut len = Worst::new();
    len.push(length - FRAC_PI_2, r[n - 1]);
    // a negative length cannot arise from a validated grid

    let mut range = Worst::new();
    let (mut a_lip, mut b_lip) = (Worst::new(), Worst::new());
    let (mut a_cav, mut b_cav) = (Worst::new(), Worst::new());
    let (mut a_mon, mut b_mon) = (Worst::new(), Worst::new());
    for i in 0..n {
        for v in [a[i], b[i]] {
            range.push(-v, r[i]);
            range.push(v - 1.0, r[i]);
        }
        if i + 1 < n {
            let h = r[i + 1] - r[i];
            let (sa, sb) = ((a[i + 1] - a[i]) / h, (b[i + 1] - b[i]) / h);
            a_lip.push(sa.abs() - 1.0, r[i]);
            b_lip.push(sb.abs() - 1.0, r[i]);
            a_mon.push(a[i + 1] - a[i], r[i]);
            b_mon.push(b[i] - b[i + 1], r[i]);
            if i > 0 {
                // slope jump times the mean spacing: a second difference in value units
                let hl = r[i] - r[i - 1];
                let mean = 0.5 * (h + hl);
                let ca = (sa - (a[i] - a[i - 1]) / hl) * mean;
                let cb = (sb - (b[i] - b[i - 1]) / hl) * mean;
                a_cav.push(ca, r[i]);
                b_cav.push(cb, r[i]);
            }
        }
    }
    let mut a_end = Worst::new();
    a_end.push(a[n - 1], r[n - 1]);
    let mut b_start = Worst::new();
    b_start.push(b[0], r[0]);

    BoundaryReport {
        length,
        conditions: vec![
            len.finish(LENGTH, 0.0),
            range.finish(RANGE, tol),
            a_lip.finish(A_LIPSCHITZ, tol),
            b_lip.finish(B_LIPSCHITZ, tol),
            a_cav.finish(A_CONCAVE, tol),
            b_cav.finish(B_CONCAVE, tol),
            a_mon.finish(A_MONOTONE, tol),
            b_mon.finish(B_MONOTONE, tol),
            a_end.finish(A_END, tol),
            b_start.finish(B_START, tol),
        ],
    }
}
