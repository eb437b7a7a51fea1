//! Critical points of the energy by steepest descent.
//!
//! [`descend`] runs plain (optionally mean-zero) steepest descent on the
//! extended energy, whose critical points all take values in `[-1, 1]`.
//! [`constrained_min`] minimises over fields with zero mean and values in
//! `[-1, 1]` by projected descent, giving the lower threshold `m_ε`.
//! [`dedup_pairs`] folds the converged results into distinct `±u` pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{energy_change_raw, energy_raw, gradient_raw, KernelMatrix, RegimeParams};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::potential::DoubleWell;
use crate::test_family::{build_member, sample_sphere};

/// Below this step the line search gives up.
pub const MIN_STEP: f64 = 1e-14;
/// Fields with `max u - min u` below this count as constant.
pub const CONSTANT_TOL: f64 = 1e-8;
/// Slack allowed on `|u| <= 1`.
pub const TRUNCATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    Fixed,
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub max_iters: usize,
    /// Threshold on the sup-norm of the (projected) discrete gradient.
    pub grad_tol: f64,
    pub step_rule: StepRule,
    pub initial_step: f64,
    pub shrink: f64,
    pub mean_zero: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            max_iters: 20_000,
            grad_tol: 1e-10,
            step_rule: StepRule::Backtracking,
            initial_step: 1.0,
            shrink: 0.5,
            mean_zero: false,
        }
    }
}

impl DescentOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grad_tol must be positive, got {}",
                self.grad_tol
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "initial_step must be positive, got {}",
                self.initial_step
            )));
        }
        if self.step_rule == StepRule::Backtracking && !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shrink must lie in (0, 1), got {}",
                self.shrink
            )));
        }
        Ok(())
    }
}

/// Outcome of one descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointRecord {
    pub field: Field,
    pub energy_value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub is_constant: bool,
    pub mean_value: f64,
    /// Energy of every accepted iterate, starting with the initial one. Later
    /// entries accumulate the accepted (nonpositive) changes, so the trace is
    /// non-increasing even where direct evaluation would jitter by an ulp.
    pub energy_trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Constraint {
    Free,
    MeanZero,
    MeanZeroBox,
}

fn mean(v: &[f64], grid: &Grid1D) -> f64 {
    grid.h() * v.iter().sum::<f64>() / grid.length()
}

/// Euclidean projection onto `{ v : -1 <= v_i <= 1, Σ v_i = 0 }`.
///
/// The projection has the form `clamp(v - μ)` for a scalar shift `μ`; the
/// shift is bracketed by bisection and then solved exactly on the free set.
pub fn project_box_mean_zero(v: &[f64]) -> Vec<f64> {
    let clamped_sum = |mu: f64| -> f64 { v.iter().map(|x| (x - mu).clamp(-1.0, 1.0)).sum() };
    let (lo0, hi0) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let mut lo = lo0 - 1.0;
    let mut hi = hi0 + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = clamped_sum(mid);
        if f > 0.0 {
            lo = mid;
        } else if f < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
            break;
        }
    }
    let mu0 = 0.5 * (lo + hi);
    // exact shift on the set left free by mu0
    let (mut free_sum, mut n_free, mut n_up, mut n_low) = (0.0, 0usize, 0usize, 0usize);
    for &x in v {
        let y = x - mu0;
        if y >= 1.0 {
            n_up += 1;
        } else if y <= -1.0 {
            n_low += 1;
        } else {
            free_sum += x;
            n_free += 1;
        }
    }
    let mu = if n_free > 0 {
        (free_sum + n_up as f64 - n_low as f64) / n_free as f64
    } else {
        mu0
    };
    v.iter().map(|x| (x - mu).clamp(-1.0, 1.0)).collect()
}

struct Problem<'a> {
    km: &'a KernelMatrix,
    params: &'a RegimeParams,
    well: &'a DoubleWell,
    constraint: Constraint,
}

impl Problem<'_> {
    fn grid(&self) -> &Grid1D {
        self.km.grid()
    }

    fn energy(&self, u: &[f64]) -> f64 {
        energy_raw(u, self.km, self.params, self.well)
    }

    fn energy_change(&self, u: &[f64], v: &[f64]) -> f64 {
        energy_change_raw(u, v, self.km, self.params, self.well)
    }

    fn project(&self, u: Vec<f64>) -> Vec<f64> {
        match self.constraint {
            Constraint::Free => u,
            Constraint::MeanZero => {
                let m = mean(&u, self.grid());
                u.into_iter().map(|v| v - m).collect()
            }
            Constraint::MeanZeroBox => project_box_mean_zero(&u),
        }
    }

    /// Gradient and the search direction derived from it.
    fn direction(&self, u: &[f64], g: &mut [f64], d: &mut [f64]) {
        gradient_raw(u, self.km, self.params, self.well, g);
        match self.constraint {
            Constraint::Free => d.copy_from_slice(g),
            Constraint::MeanZero => {
                let m = g.iter().sum::<f64>() / g.len() as f64;
                for (di, gi) in d.iter_mut().zip(g.iter()) {
                    *di = gi - m;
                }
            }
            Constraint::MeanZeroBox => {
                let trial: Vec<f64> = u.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                let p = project_box_mean_zero(&trial);
                for ((di, ui), pi) in d.iter_mut().zip(u).zip(p) {
                    *di = ui - pi;
                }
            }
        }
    }

    fn step(&self, u: &[f64], d: &[f64], t: f64) -> Vec<f64> {
        let raw: Vec<f64> = u.iter().zip(d).map(|(a, b)| a - t * b).collect();
        match self.constraint {
            Constraint::MeanZeroBox => project_box_mean_zero(&raw),
            _ => raw,
        }
    }

    fn run(&self, u0: &[f64], opts: &DescentOptions) -> Result<CriticalPointRecord> {
        opts.validate()?;
        let n = u0.len();
        let mut u = self.project(u0.to_vec());
        let mut e = self.energy(&u);
        let mut g = vec![0.0; n];
        let mut d = vec![0.0; n];
        self.direction(&u, &mut g, &mut d);
        let mut trace = vec![e];
        let mut step = opts.initial_step;
        let mut iterations = 0;
        let mut converged = false;
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

        loop {
            if g.iter().any(|x| x.is_nan()) || !e.is_finite() {
                return Err(Error::Numerical {
                    iteration: iterations,
                    iterate: u,
                });
            }
            if sup(&d) <= opts.grad_tol {
                converged = true;
                break;
            }
            if iterations >= opts.max_iters {
                break;
            }
            // acceptance compares the directly computed change, which stays
            // meaningful after the two energies agree to every printed digit
            let (u_new, e_new) = match opts.step_rule {
                StepRule::Fixed => {
                    let u_new = self.step(&u, &d, step);
                    let e_new = e + self.energy_change(&u, &u_new);
                    (u_new, e_new)
                }
                StepRule::Backtracking => loop {
                    let u_new = self.step(&u, &d, step);
                    let de = self.energy_change(&u, &u_new);
                    if de <= 0.0 {
                        break (u_new, e + de);
                    }
                    step *= opts.shrink;
                    if step < MIN_STEP {
                        return Err(Error::Stagnation {
                            iteration: iterations,
                            min_step: MIN_STEP,
                        });
                    }
                },
            };
            let mut g_new = vec![0.0; n];
            let mut d_new = vec![0.0; n];
            self.direction(&u_new, &mut g_new, &mut d_new);
            if opts.step_rule == StepRule::Backtracking {
                // Barzilai-Borwein trial length for the next line search
                let (mut ss, mut sy) = (0.0, 0.0);
                for i in 0..n {
                    let si = u_new[i] - u[i];
                    ss += si * si;
                    sy += si * (d_new[i] - d[i]);
                }
                step = if sy > 0.0 && ss > 0.0 {
                    (ss / sy).clamp(1e-10, 1e10)
                } else {
                    opts.initial_step
                };
            }
            u = u_new;
            e = e_new;
            g = g_new;
            d = d_new;
            trace.push(e);
            iterations += 1;
        }

        let grid = *self.grid();
        let field = Field::from_raw(grid, u);
        Ok(CriticalPointRecord {
            energy_value: self.energy(field.values()),
            grad_norm: sup(&d),
            iterations,
            converged,
            is_constant: field.oscillation() < CONSTANT_TOL,
            mean_value: field.mean(),
            field,
            energy_trace: trace,
        })
    }
}

/// Steepest descent from `u0`. With `opts.mean_zero` every iterate is kept
/// at zero mean and the gradient is replaced by its mean-zero part.
pub fn descend(
    u0: &Field,
    km: &KernelMatrix,
    params: &RegimeParams,
    p: &DoubleWell,
    opts: &DescentOptions,
) -> Result<CriticalPointRecord> {
    if u0.grid() != km.grid() {
        return Err(Error::GridMismatch);
    }
    let problem = Problem {
        km,
        params,
        well: p,
        constraint: if opts.mean_zero {
            Constraint::MeanZero
        } else {
            Constraint::Free
        },
    };
    problem.run(u0.values(), opts)
}

/// Whether the record stays inside `[-1, 1]` up to [`TRUNCATION_TOL`].
pub fn truncation_check(rec: &CriticalPointRecord) -> bool {
    rec.field.max_abs() <= 1.0 + TRUNCATION_TOL
}

/// Multi-start projected descent over zero-mean fields with values in
/// `[-1, 1]`. Returns the lowest converged record (or the lowest record if
/// none converged); its energy is the threshold `m_ε`.
pub fn constrained_min(
    km: &KernelMatrix,
    params: &RegimeParams,
    p: &DoubleWell,
    opts: &DescentOptions,
    seeds: &[Field],
) -> Result<CriticalPointRecord> {
    let problem = Problem {
        km,
        params,
        well: p,
        constraint: Constraint::MeanZeroBox,
    };
    let mut failures = Vec::new();
    let mut best: Option<CriticalPointRecord> = None;
    for (i, seed) in seeds.iter().enumerate() {
        if seed.grid() != km.grid() {
            failures.push(format!("start {i}: grid mismatch"));
            continue;
        }
        match problem.run(seed.values(), opts) {
            Ok(rec) => {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        (rec.converged && !b.converged)
                            || (rec.converged == b.converged && rec.energy_value < b.energy_value)
                    }
                };
                if better {
                    best = Some(rec);
                }
            }
            Err(e) => failures.push(format!("start {i}: {e}")),
        }
    }
    best.ok_or_else(|| {
        if failures.is_empty() {
            Error::AllStartsFailed("no starting fields given".into())
        } else {
            Error::AllStartsFailed(failures.join("; "))
        }
    })
}

/// A distinct nonconstant critical pair `(u, -u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPair {
    /// Oriented to have nonnegative mean.
    pub representative: Field,
    pub energy: f64,
    /// Indices (into the input slice) of the records folded into this pair.
    pub members: Vec<usize>,
}

/// Default clustering radius `1e-3 · sqrt(|Ω|)` in the discrete L² norm.
pub fn default_dedup_tol(grid: &Grid1D) -> f64 {
    1e-3 * grid.length().sqrt()
}

pub fn dedup_pairs(records: &[CriticalPointRecord], km: &KernelMatrix) -> Vec<CriticalPair> {
    dedup_pairs_with_tol(records, default_dedup_tol(km.grid()))
}

/// Clusters converged nonconstant records up to sign; the lowest-index record
/// of each cluster represents it. Records within `tol` of a constant field
/// are dropped along with the exact constants. Pairs come back sorted by energy.
pub fn dedup_pairs_with_tol(records: &[CriticalPointRecord], tol: f64) -> Vec<CriticalPair> {
    let mut pairs: Vec<CriticalPair> = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        if !rec.converged || rec.is_constant {
            continue;
        }
        // within the clustering radius of a constant (typically of ±1)
        let flat = Field::constant(*rec.field.grid(), rec.field.mean());
        if rec.field.l2_distance(&flat) <= tol {
            continue;
        }
        let hit = pairs.iter_mut().find(|pair| {
            pair.representative.l2_distance(&rec.field) <= tol
                || pair.representative.l2_distance(&rec.field.neg()) <= tol
        });
        match hit {
            Some(pair) => pair.members.push(i),
            None => {
                let representative = if rec.field.mean() < 0.0 {
                    rec.field.neg()
                } else {
                    rec.field.clone()
                };
                pairs.push(CriticalPair {
                    representative,
                    energy: rec.energy_value,
                    members: vec![i],
                });
            }
        }
    }
    pairs.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.members[0].cmp(&b.members[0])));
    pairs
}

/// Where a descent seed came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedKind {
    Axis(usize),
    Member(usize),
    Random(usize),
}

/// Seeds for a multiplicity search: the positive coordinate-axis members,
/// `member_count` sampled members and `random_count` random fields.
///
/// Random fields interpolate `k + 2` uniform values in `[-1, 1]` linearly
/// across the domain. Only one sign of each seed is produced since the
/// descent maps `-u0` to the negated result.
pub fn multiplicity_seeds(
    k: usize,
    eps: f64,
    grid: &Grid1D,
    member_count: usize,
    random_count: usize,
    seed: u64,
) -> Result<Vec<(SeedKind, Field)>> {
    let mut out = Vec::new();
    let polys = sample_sphere(k, member_count, seed);
    for m in 1..=k {
        out.push((SeedKind::Axis(m), build_member(&polys[2 * m], eps, grid)?));
    }
    for (j, poly) in polys.iter().skip(2 * (k + 1)).enumerate() {
        out.push((SeedKind::Member(j), build_member(poly, eps, grid)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1d);
    for j in 0..random_count {
        out.push((SeedKind::Random(j), random_field(grid, k + 2, &mut rng)));
    }
    Ok(out)
}

/// Piecewise-linear random field through `knots` uniform values in `[-1, 1]`.
pub fn random_field(grid: &Grid1D, knots: usize, rng: &mut impl Rng) -> Field {
    let knots = knots.max(2);
    let vals: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let values = grid
        .nodes()
        .map(|x| {
            let t = (x - grid.a()) / grid.length() * (knots - 1) as f64;
            let j = (t.floor() as usize).min(knots - 2);
            let w = t - j as f64;
            (1.0 - w) * vals[j] + w * vals[j + 1]
        })
        .collect();
    Field::from_raw(*grid, values)
}

/// The antisymmetric step `sign(x - midpoint)`, a feasible zero-mean start.
pub fn step_seed(grid: &Grid1D) -> Field {
    let mid = grid.midpoint();
    let values = grid
        .nodes()
        .map(|x| {
            if x < mid {
                -1.0
            } else if x > mid {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Field::from_raw(*grid, values)
}
