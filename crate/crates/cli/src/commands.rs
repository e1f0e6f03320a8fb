//! Subcommand implementations. Each returns the checks it performed and the
//! files it wrote; exit-code policy lives in the caller.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use solitons_core::geometry::boundary::BoundaryData;
use solitons_core::geometry::metric::{EIGENVALUE_HEADER, PROFILE_HEADER as LINK_HEADER};
use solitons_core::link::CURVATURE_TOL;
use solitons_core::soliton::blowup::BLOWUP_HEADER;
use solitons_core::soliton::profile::PROFILE_HEADER as SOLITON_HEADER;
use solitons_core::{
    avr_inequality_check, blowup_extract_with, build_link_with, check_identities, integrate_soliton_with,
    solve_expander_with, validate_ideal_boundary, AdaptiveSimpson, DeltaSelector, NormalizedLink,
    RotSolitonProfile, ShootingOptions, SolitonKind, SolitonOptions,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::export::{csv_string, json_string, write_atomic};

/// Identity residuals (relative) at or below this certify a soliton run.
pub const IDENTITY_TOL: f64 = 1e-6;
/// Tolerance for the boundary-data conditions.
pub const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, value: f64) -> Self {
        Self {
            name: name.into(),
            passed,
            value,
        }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub worst_residual: Option<f64>,
    pub artifacts: Vec<PathBuf>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn emit(&mut self, dir: &Path, name: String, contents: &str) -> Result<(), CliError> {
        let path = dir.join(name);
        write_atomic(&path, contents)?;
        self.artifacts.push(path);
        Ok(())
    }
}

fn quad(cfg: &RunConfig) -> AdaptiveSimpson {
    AdaptiveSimpson {
        tol: cfg.quadrature_tol,
        ..AdaptiveSimpson::default()
    }
}

fn selector(cfg: &RunConfig) -> DeltaSelector {
    DeltaSelector {
        quad: quad(cfg),
        ..DeltaSelector::default()
    }
}

fn ode(cfg: &RunConfig) -> SolitonOptions {
    SolitonOptions::default().with_rel_tol(cfg.ode_rel_tol)
}

pub fn link_build(cfg: &RunConfig, p: u32, q: u32, t: f64) -> Result<Report, CliError> {
    let link = build_link_with(p, q, t, &selector(cfg))?;
    let spectrum = link.metric().spectrum(cfg.grid_size)?;
    let summary = link.summary(cfg.grid_size, &quad(cfg))?;
    let samples = link.metric().sample(cfg.grid_size)?;
    let eig_rows: Vec<[f64; 6]> = spectrum
        .r
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(&r, e)| [r, e[0], e[1], e[2], e[3], e[4]])
        .collect();

    let mut rep = Report::default();
    let stem = format!("link_p{p}_q{q}_t{t}");
    let dir = &cfg.output_dir;
    rep.emit(dir, format!("{stem}_profile.csv"), &csv_string(&LINK_HEADER, &samples))?;
    rep.emit(dir, format!("{stem}_eigenvalues.csv"), &csv_string(&EIGENVALUE_HEADER, &eig_rows))?;
    rep.emit(dir, format!("{stem}_summary.json"), &json_string(&summary)?)?;
    let min = summary.min_curvature;
    rep.checks.push(Check::new("min_curvature >= 1 - 1e-6", min >= 1.0 - CURVATURE_TOL, min));
    rep.worst_residual = Some((1.0 - min).max(0.0));
    Ok(rep)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct FamilyRow {
    t: f64,
    c_m: f64,
    volume: f64,
    min_curvature: f64,
    collapse_sup: f64,
}

pub fn link_family(cfg: &RunConfig, p: u32, q: u32, m: u32, t_grid: &[f64]) -> Result<Report, CliError> {
    if t_grid.is_empty() {
        return Err(CliError::Usage("t grid must not be empty".into()));
    }
    if m == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    let (sel, quad) = (selector(cfg), quad(cfg));
    let reference = build_link_with(p, q, 1.0 / m as f64, &sel)?.volume(&quad)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut rep = Report::default();
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let link = build_link_with(p, q, t, &sel)?;
        let norm = NormalizedLink::from_link(&link, m, reference, &quad)?;
        let scaled = link.metric().clone().with_scale(norm.effective_scale)?;
        let min = scaled.min_curvature(cfg.grid_size)?.min;
        let collapse_sup = link.fiber_sup(cfg.grid_size)? * (norm.effective_scale / link.metric().scale()).sqrt();
        let excess = norm.volume / reference - 1.0;
        worst = worst.max(excess);
        rep.checks.push(Check::new(format!("volume <= Vol(h(1/m)) at t = {t}"), excess <= 1e-9, excess));
        rows.push(FamilyRow {
            t,
            c_m: norm.c_m,
            volume: norm.volume,
            min_curvature: min,
            collapse_sup,
        });
    }
    let table: Vec<[f64; 5]> = rows
        .iter()
        .map(|r| [r.t, r.c_m, r.volume, r.min_curvature, r.collapse_sup])
        .collect();
    rep.emit(
        &cfg.output_dir,
        format!("link_family_p{p}_q{q}_m{m}.csv"),
        &csv_string(&["t", "c_m", "volume", "min_curvature", "collapse_sup"], &table),
    )?;
    rep.worst_residual = Some(worst);
    Ok(rep)
}

fn soliton_outputs(cfg: &RunConfig, stem: &str, prof: &RotSolitonProfile, rep: &mut Report) -> Result<(), CliError> {
    let ids = check_identities(prof);
    rep.emit(&cfg.output_dir, format!("{stem}_profile.csv"), &csv_string(&SOLITON_HEADER, prof.rows()))?;
    rep.emit(&cfg.output_dir, format!("{stem}_identities.json"), &json_string(&ids)?)?;
    for (name, r) in ids.all() {
        rep.checks.push(Check::new(name, r.relative <= IDENTITY_TOL, r.relative));
    }
    let worst = ids.max_relative();
    rep.worst_residual = Some(rep.worst_residual.map_or(worst, |w| w.max(worst)));
    Ok(())
}

pub fn soliton_steady(cfg: &RunConfig, n: u32, kappa: f64, r_max: f64) -> Result<Report, CliError> {
    let prof = integrate_soliton_with(n, SolitonKind::Steady, kappa, r_max, &ode(cfg))?;
    let mut rep = Report::default();
    soliton_outputs(cfg, &format!("soliton_steady_n{n}_kappa{kappa}"), &prof, &mut rep)?;
    Ok(rep)
}

pub fn soliton_expanding(cfg: &RunConfig, n: u32, cone_angle: f64) -> Result<Report, CliError> {
    let opts = ShootingOptions {
        tol: cfg.shooting_tol,
        ode: ode(cfg),
        ..ShootingOptions::default()
    };
    let res = solve_expander_with(n, cone_angle, &opts)?;
    let avr = avr_inequality_check(&res)?;
    let stem = format!("soliton_expanding_n{n}_c{cone_angle}");
    let mut rep = Report::default();
    rep.emit(
        &cfg.output_dir,
        format!("{stem}_shooting.json"),
        &json_string(&json!({ "result": res.summary(), "avr_check": avr, "avr_direct": res.avr_direct }))?,
    )?;
    rep.checks.push(Check::new("|w'(r_max) - c| <= shooting_tol", res.slope_err <= cfg.shooting_tol, res.slope_err));
    rep.checks.push(Check::new("ball volume ratio <= 4^n AVR", avr.ball_slack() > 0.0, avr.ball_slack()));
    rep.checks.push(Check::new("sub-level volume ratio <= 2^n AVR", avr.sublevel_slack() > 0.0, avr.sublevel_slack()));
    soliton_outputs(cfg, &stem, &res.profile, &mut rep)?;
    Ok(rep)
}

pub fn blowup(cfg: &RunConfig, n: u32, c_list: &[f64]) -> Result<Report, CliError> {
    let opts = ShootingOptions {
        tol: cfg.shooting_tol,
        ode: ode(cfg),
        ..ShootingOptions::default()
    };
    let table = blowup_extract_with(n, c_list, &opts)?;
    let mut rep = Report::default();
    let rows: Vec<[f64; 6]> = table.rows.iter().map(|r| r.values()).collect();
    rep.emit(&cfg.output_dir, format!("blowup_n{n}.csv"), &csv_string(&BLOWUP_HEADER, &rows))?;
    let last_eps = table.rows.last().map_or(f64::NAN, |r| r.eps_coeff);
    rep.checks.push(Check::new("dist_to_bryant decreasing", table.distance_decreasing(), table.final_distance()));
    rep.checks.push(Check::new("eps_coeff decreasing", table.eps_coeff_decreasing(), last_eps));
    rep.checks.push(Check::new("R_origin increasing", table.r_origin_increasing(), table.rows.last().map_or(f64::NAN, |r| r.r_origin)));
    rep.worst_residual = Some(table.final_distance());
    Ok(rep)
}

/// Parses a boundary CSV with header `r,a,b`.
pub fn parse_boundary_csv(text: &str) -> Result<BoundaryData, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let malformed = |e: csv::Error| CliError::Usage(format!("malformed boundary CSV: {e}"));
    let header = reader.headers().map_err(malformed)?.clone();
    if header.iter().collect::<Vec<_>>() != ["r", "a", "b"] {
        let found = header.iter().collect::<Vec<_>>().join(",");
        return Err(CliError::Usage(format!("expected header `r,a,b`, found `{found}`")));
    }
    let (mut r, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for row in reader.deserialize::<(f64, f64, f64)>() {
        let (x, y, z) = row.map_err(malformed)?;
        r.push(x);
        a.push(y);
        b.push(z);
    }
    Ok(BoundaryData::new(r, a, b)?)
}

pub fn boundary_check(cfg: &RunConfig, input: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let data = parse_boundary_csv(&text)?;
    let report = validate_ideal_boundary(&data, BOUNDARY_TOL);
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("boundary");
    let mut rep = Report::default();
    rep.emit(&cfg.output_dir, format!("{stem}_report.json"), &json_string(&report)?)?;
    let mut worst: f64 = 0.0;
    for c in &report.conditions {
        rep.checks.push(Check::new(c.name, c.passed, c.worst));
        if !c.passed {
            worst = worst.max(c.worst.abs());
        }
    }
    rep.worst_residual = Some(worst);
    Ok(rep)
}
