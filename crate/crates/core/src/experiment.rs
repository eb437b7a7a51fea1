//! Reproducible sweeps over `(s, ε, k)` and their CSV / JSON reports.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: rows are
//! computed in a fixed order, sorted by `(s asc, ε desc, k asc)` and written
//! with a fixed float format, so two runs of the same config produce the same
//! bytes. Wall-clock timings are the one exception; set `timing = false` to
//! write `0` instead.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::critical::{
    constrained_min, dedup_pairs, descend, multiplicity_seeds, project_box_mean_zero, step_seed, truncation_check,
    DescentOptions,
};
use crate::energy::{constant_energy, KernelMatrix, RegimeParams};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::potential::DoubleWell;
use crate::test_family::empirical_bound;

/// Exact CSV header.
pub const CSV_HEADER: &str =
    "s,eps,k,regime,empirical_bound,m_eps,pair_count,energy_of_zero,seed,num_cells,sample_count,runtime_ms";

/// Smallest grid accepted by the sweeps.
pub const MIN_SWEEP_CELLS: usize = 64;

/// Slack used when comparing pair energies against the bracket `[m_ε, bound]`.
pub const BRACKET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Bounds,
    Multiplicity,
    ZeroScaling,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub s_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub k_list: Vec<usize>,
    pub num_cells: usize,
    /// Random sphere samples per bound (the signed axes are always added).
    pub sample_count: usize,
    pub seed: u64,
    pub grad_tol: f64,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub domain: (f64, f64),
    /// Sampled members used as descent starts, on top of the `k` axis members.
    pub member_seeds: usize,
    /// Random piecewise-linear descent starts.
    pub random_seeds: usize,
    pub max_iters: usize,
    /// Record wall-clock time per row; `false` writes 0 so reports are byte-stable.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            s_list: vec![0.75],
            eps_list: vec![0.1],
            k_list: vec![1],
            num_cells: 256,
            sample_count: 64,
            seed: 0,
            grad_tol: 1e-10,
            output_path: None,
            format: OutputFormat::Csv,
            domain: (0.0, 1.0),
            member_seeds: 8,
            random_seeds: 4,
            max_iters: 20_000,
            timing: true,
        }
    }
}

fn config_err(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        field,
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s_list.is_empty() {
            return Err(config_err("s_list", "empty"));
        }
        if let Some(s) = self.s_list.iter().find(|s| !(**s > 0.0 && **s < 1.0)) {
            return Err(config_err("s_list", format!("{s} is not in (0, 1)")));
        }
        if self.eps_list.is_empty() {
            return Err(config_err("eps_list", "empty"));
        }
        if let Some(e) = self.eps_list.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(config_err("eps_list", format!("{e} is not a positive number")));
        }
        if self.eps_list.contains(&1.0) {
            return Err(config_err("eps_list", "eps = 1 is not allowed"));
        }
        if self.k_list.is_empty() {
            return Err(config_err("k_list", "empty"));
        }
        if self.k_list.contains(&0) {
            return Err(config_err("k_list", "k must be at least 1"));
        }
        if self.num_cells < MIN_SWEEP_CELLS {
            return Err(config_err(
                "num_cells",
                format!("{} is below the minimum of {MIN_SWEEP_CELLS}", self.num_cells),
            ));
        }
        if self.sample_count == 0 {
            return Err(config_err("sample_count", "must be at least 1"));
        }
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return Err(config_err("grad_tol", format!("{} is not positive", self.grad_tol)));
        }
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(config_err("domain", format!("need finite a < b, got ({a}, {b})")));
        }
        if self.max_iters == 0 {
            return Err(config_err("max_iters", "must be at least 1"));
        }
        Ok(())
    }

    fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.domain.0, self.domain.1, self.num_cells)
    }

    fn descent_options(&self) -> DescentOptions {
        DescentOptions {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            ..DescentOptions::default()
        }
    }

    fn params(&self, s: f64, eps: f64) -> Result<RegimeParams> {
        RegimeParams::new(s, eps).map_err(|e| match e {
            Error::InvalidParameter(reason) => config_err("s_list", reason),
            other => other,
        })
    }
}

/// One report line. Fields an experiment does not compute stay `None` and
/// are written as empty CSV cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub s: f64,
    pub eps: f64,
    pub k: Option<usize>,
    pub regime: &'static str,
    pub empirical_bound: Option<f64>,
    pub m_eps: Option<f64>,
    pub pair_count: Option<usize>,
    pub energy_of_zero: Option<f64>,
    pub seed: u64,
    pub num_cells: usize,
    pub sample_count: usize,
    pub runtime_ms: u64,
    /// Energies of the distinct pairs, ascending. Only in JSON.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pair_energies: Vec<f64>,
    /// Descents that ended in an error. Only in JSON.
    #[serde(skip_serializing_if = "is_zero")]
    pub failed_descents: usize,
    /// Converged descents violating `|u| <= 1`. Only in JSON.
    #[serde(skip_serializing_if = "is_zero")]
    pub truncation_violations: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl ReportRow {
    fn new(cfg: &ExperimentConfig, params: &RegimeParams, k: Option<usize>) -> Self {
        ReportRow {
            s: params.s(),
            eps: params.eps(),
            k,
            regime: params.regime().tag(),
            empirical_bound: None,
            m_eps: None,
            pair_count: None,
            energy_of_zero: None,
            seed: cfg.seed,
            num_cells: cfg.num_cells,
            sample_count: cfg.sample_count,
            runtime_ms: 0,
            pair_energies: Vec::new(),
            failed_descents: 0,
            truncation_violations: 0,
        }
    }

    /// Whether every pair energy lies in `[m_ε - tol, bound + tol]`.
    pub fn pairs_bracketed(&self, tol: f64) -> bool {
        match (self.m_eps, self.empirical_bound) {
            (Some(lo), Some(hi)) => self.pair_energies.iter().all(|&e| e >= lo - tol && e <= hi + tol),
            _ => true,
        }
    }
}

fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| a.s.total_cmp(&b.s).then(b.eps.total_cmp(&a.eps)).then(a.k.cmp(&b.k)));
}

struct Timer {
    start: Option<Instant>,
}

impl Timer {
    fn start(enabled: bool) -> Self {
        Timer {
            start: enabled.then(Instant::now),
        }
    }

    fn millis(&self) -> u64 {
        self.start.map_or(0, |t| t.elapsed().as_millis() as u64)
    }
}

/// Upper side of the bracket: the largest energy over sampled test-family members.
fn bound_for(cfg: &ExperimentConfig, k: usize, km: &KernelMatrix, params: &RegimeParams) -> Result<f64> {
    empirical_bound(
        k,
        params.eps(),
        km,
        params,
        &DoubleWell::standard(),
        cfg.sample_count,
        cfg.seed,
    )
}

/// Zero-mean starts for the constrained minimisation: the antisymmetric step
/// and the descent seeds, each moved onto the constraint set.
fn constrained_seeds(grid: &Grid1D, seeds: &[Field]) -> Vec<Field> {
    let mut out = vec![step_seed(grid)];
    for f in seeds {
        let v = project_box_mean_zero(f.values());
        if let Ok(f) = Field::new(*grid, v) {
            out.push(f);
        }
    }
    out
}

/// Empirical bound and energy of zero for every `(s, ε, k)`.
pub fn run_bound_table(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let well = DoubleWell::standard();
    let mut rows = Vec::new();
    for &s in &cfg.s_list {
        for &eps in &cfg.eps_list {
            let params = cfg.params(s, eps)?;
            let km = KernelMatrix::build(&grid, &params)?;
            for &k in &cfg.k_list {
                let timer = Timer::start(cfg.timing);
                let mut row = ReportRow::new(cfg, &params, Some(k));
                row.empirical_bound = Some(bound_for(cfg, k, &km, &params)?);
                row.energy_of_zero = Some(constant_energy(0.0, &grid, &params, &well));
                row.runtime_ms = timer.millis();
                rows.push(row);
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Multi-start descent on the extended energy for every `(s, ε, k)`,
/// reporting the distinct nonconstant pairs together with the bracket
/// `[m_ε, bound]` they are expected to fall into.
///
/// A failed descent is counted in `failed_descents` and the sweep goes on;
/// only a failure of every constrained start aborts the run.
pub fn run_multiplicity_sweep(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let well = DoubleWell::extended();
    let opts = cfg.descent_options();
    let mut rows = Vec::new();
    for &s in &cfg.s_list {
        for &eps in &cfg.eps_list {
            let params = cfg.params(s, eps)?;
            let km = KernelMatrix::build(&grid, &params)?;
            for &k in &cfg.k_list {
                let timer = Timer::start(cfg.timing);
                let mut row = ReportRow::new(cfg, &params, Some(k));
                row.empirical_bound = Some(bound_for(cfg, k, &km, &params)?);
                row.energy_of_zero = Some(constant_energy(0.0, &grid, &params, &DoubleWell::standard()));

                let seeds: Vec<Field> =
                    multiplicity_seeds(k, eps, &grid, cfg.member_seeds, cfg.random_seeds, cfg.seed)?
                        .into_iter()
                        .map(|(_, f)| f)
                        .collect();
                let mut records = Vec::with_capacity(seeds.len());
                for u0 in &seeds {
                    match descend(u0, &km, &params, &well, &opts) {
                        Ok(rec) => {
                            if rec.converged && !truncation_check(&rec) {
                                row.truncation_violations += 1;
                            }
                            records.push(rec);
                        }
                        Err(_) => row.failed_descents += 1,
                    }
                }
                let pairs = dedup_pairs(&records, &km);
                row.pair_count = Some(pairs.len());
                row.pair_energies = pairs.iter().map(|p| p.energy).collect();

                let cmin = constrained_min(&km, &params, &well, &opts, &constrained_seeds(&grid, &seeds))?;
                row.m_eps = Some(cmin.energy_value);
                row.runtime_ms = timer.millis();
                rows.push(row);
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// `F_ε(0)` for every `(s, ε)`; `k` is left empty.
pub fn run_zero_energy_scaling(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let well = DoubleWell::standard();
    let mut rows = Vec::new();
    for &s in &cfg.s_list {
        for &eps in &cfg.eps_list {
            let timer = Timer::start(cfg.timing);
            let params = cfg.params(s, eps)?;
            let mut row = ReportRow::new(cfg, &params, None);
            row.energy_of_zero = Some(constant_energy(0.0, &grid, &params, &well));
            row.runtime_ms = timer.millis();
            rows.push(row);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Zero-energy rows followed by the full multiplicity rows (which already
/// carry the bounds), merged into one sorted table.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut rows = run_zero_energy_scaling(cfg)?;
    rows.extend(run_multiplicity_sweep(cfg)?);
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn run(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Vec<ReportRow>> {
    match experiment {
        Experiment::Bounds => run_bound_table(cfg),
        Experiment::Multiplicity => run_multiplicity_sweep(cfg),
        Experiment::ZeroScaling => run_zero_energy_scaling(cfg),
        Experiment::All => run_all(cfg),
    }
}

/// 17 significant digits.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for r in rows {
        w.write_record([
            fmt_float(r.s),
            fmt_float(r.eps),
            opt(r.k, |k| k.to_string()),
            r.regime.to_string(),
            opt(r.empirical_bound, fmt_float),
            opt(r.m_eps, fmt_float),
            opt(r.pair_count, |n| n.to_string()),
            opt(r.energy_of_zero, fmt_float),
            r.seed.to_string(),
            r.num_cells.to_string(),
            r.sample_count.to_string(),
            r.runtime_ms.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config: &'a ExperimentConfig,
    rows: &'a [ReportRow],
}

pub fn write_json<W: Write>(cfg: &ExperimentConfig, rows: &[ReportRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &JsonReport { config: cfg, rows }).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Report bytes in the configured format.
pub fn render(cfg: &ExperimentConfig, rows: &[ReportRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => write_csv(rows, &mut buf)?,
        OutputFormat::Json => write_json(cfg, rows, &mut buf)?,
    }
    Ok(buf)
}

/// Runs `experiment` and writes the report to `cfg.output_path` or stdout.
pub fn run_and_write(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Vec<ReportRow>> {
    let rows = run(cfg, experiment)?;
    let bytes = render(cfg, &rows)?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(rows)
}
