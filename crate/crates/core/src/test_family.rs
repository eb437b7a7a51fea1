//! Cosine polynomials on the unit sphere, their mollified signs, and the
//! finite sample of the resulting family of fields.
//!
//! A coefficient vector `λ = (λ0, …, λk)` with `|λ| = 1` defines
//! `φ(t) = Σ λm cos(m t)`. The member built from it is the moving average of
//! `sign φ` over windows of half-width `ε`, evaluated at the grid nodes. It is
//! `±1` away from the zeros of `φ` and ramps with slope at most `1/ε` near them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::energy::{energy, KernelMatrix, RegimeParams};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::potential::DoubleWell;

/// Tolerance on `|λ| = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Sign-change scan points per unit of `k` over the search interval.
pub const SCAN_PER_DEGREE: usize = 512;
/// Bisection stops once the bracket is this narrow.
pub const BISECT_TOL: f64 = 1e-12;
/// Extrema with `|φ|` below this and no crossing are reported as tangential.
pub const TANGENTIAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CosinePoly {
    lambda: Vec<f64>,
}

impl CosinePoly {
    /// Takes coefficients that are already on the unit sphere.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidParameter("empty coefficient vector".into()));
        }
        let norm = lambda.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm.is_nan() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "coefficients must have unit norm, got {norm}"
            )));
        }
        Ok(CosinePoly { lambda })
    }

    /// Rescales `lambda` onto the unit sphere.
    pub fn normalized(lambda: Vec<f64>) -> Result<Self> {
        let norm = lambda.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter("cannot normalise a zero vector".into()));
        }
        Ok(CosinePoly {
            lambda: lambda.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Unit coordinate vector `±e_m` in `R^(k+1)`.
    pub fn axis(k: usize, m: usize, negative: bool) -> Self {
        let mut lambda = vec![0.0; k + 1];
        lambda[m] = if negative { -1.0 } else { 1.0 };
        CosinePoly { lambda }
    }

    pub fn degree(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.lambda
    }

    pub fn neg(&self) -> CosinePoly {
        CosinePoly {
            lambda: self.lambda.iter().map(|c| -c).collect(),
        }
    }

    /// `φ(t)`, with `cos(m t)` generated by the Chebyshev recurrence.
    pub fn eval(&self, t: f64) -> f64 {
        let c1 = t.cos();
        let mut acc = self.lambda[0];
        let (mut prev, mut cur) = (1.0, c1);
        for &l in &self.lambda[1..] {
            acc += l * cur;
            let next = 2.0 * c1 * cur - prev;
            prev = cur;
            cur = next;
        }
        acc
    }

    /// `φ'(t) = -Σ m λm sin(m t)`.
    pub fn eval_deriv(&self, t: f64) -> f64 {
        self.lambda
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, l)| -(m as f64) * l * (m as f64 * t).sin())
            .sum()
    }
}

/// Zeros of a cosine polynomial on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    /// Strictly increasing.
    pub zeros: Vec<f64>,
    /// Near-tangential touch points that do not change the sign of `φ`.
    pub tangential: Vec<f64>,
}

impl ZeroSet {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// Whether `t` lies within `eps` of a zero.
    pub fn within(&self, t: f64, eps: f64) -> bool {
        self.zeros.iter().any(|z| (t - z).abs() < eps)
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisection on a sign-changing bracket; symmetric under `f -> -f`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if sign(fm) == sign(flo) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the sign changes of `φ` in `[a, b]`.
///
/// A uniform scan at resolution `(b - a) / (512 k)` brackets the simple zeros,
/// which bisection then refines. Inside each scan cell without a sign change
/// the derivative is checked for an extremum: if `φ` crosses zero at it, the
/// pair of close zeros is split there, and if it only grazes zero the point is
/// listed as tangential.
pub fn find_zeros(p: &CosinePoly, a: f64, b: f64) -> ZeroSet {
    let k = p.degree().max(1);
    let steps = SCAN_PER_DEGREE * k;
    let dt = (b - a) / steps as f64;
    let at = |j: usize| if j == steps { b } else { a + j as f64 * dt };
    let f = |t: f64| p.eval(t);

    let mut zeros = Vec::new();
    let mut tangential = Vec::new();
    let mut t0 = at(0);
    let mut f0 = f(t0);
    if f0 == 0.0 {
        zeros.push(t0);
    }
    for j in 1..=steps {
        let t1 = at(j);
        let f1 = f(t1);
        if f1 == 0.0 {
            zeros.push(t1);
        } else if f0 != 0.0 {
            if sign(f0) != sign(f1) {
                zeros.push(bisect(f, t0, t1, f0));
            } else {
                let d0 = p.eval_deriv(t0);
                let d1 = p.eval_deriv(t1);
                // an interior extremum pointing towards zero
                if sign(d0) != sign(d1) && sign(d0) == -sign(f0) {
                    let te = bisect(|t| p.eval_deriv(t), t0, t1, d0);
                    let fe = f(te);
                    if sign(fe) == -sign(f0) {
                        zeros.push(bisect(f, t0, te, f0));
                        zeros.push(bisect(f, te, t1, fe));
                    } else if fe.abs() < TANGENTIAL_TOL {
                        tangential.push(te);
                    }
                }
            }
        }
        t0 = t1;
        f0 = f1;
    }
    zeros.dedup();
    ZeroSet { zeros, tangential }
}

/// Window average of `sign φ` over `[t - eps, t + eps]`, given every sign
/// change of `φ` inside that window in increasing order.
fn window_average(p: &CosinePoly, zeros: &[f64], t: f64, eps: f64) -> f64 {
    let lo = t - eps;
    let hi = t + eps;
    let start = zeros.partition_point(|&z| z <= lo);
    let end = zeros.partition_point(|&z| z < hi);
    let inner = &zeros[start..end];
    if inner.is_empty() {
        return sign(p.eval(t)) as f64;
    }
    let mut acc = 0.0;
    let mut left = lo;
    for &z in inner.iter().chain(std::iter::once(&hi)) {
        if z > left {
            acc += sign(p.eval(0.5 * (left + z))) as f64 * (z - left);
        }
        left = z;
    }
    (acc / (2.0 * eps)).clamp(-1.0, 1.0)
}

/// `L_ε(φ)(t)`: the mean of `sign φ` over `[t - ε, t + ε]`, computed exactly
/// from the zeros of `φ` in the window.
pub fn smoothed_sign(p: &CosinePoly, t: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let zs = find_zeros(p, t - eps, t + eps);
    Ok(window_average(p, &zs.zeros, t, eps))
}

/// The member of the test family generated by `p`, sampled on `grid`.
pub fn build_member(p: &CosinePoly, eps: f64, grid: &Grid1D) -> Result<Field> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let zs = find_zeros(p, grid.a() - eps, grid.b() + eps);
    let values = grid.nodes().map(|x| window_average(p, &zs.zeros, x, eps)).collect();
    Field::new(*grid, values)
}

/// Deterministic finite sample of the unit sphere in `R^(k+1)`.
///
/// The `2(k+1)` signed coordinate axes come first, followed by `count`
/// normalised standard-normal draws from a ChaCha8 stream seeded with `seed`.
/// Samples with the same seed are therefore nested as `count` grows.
pub fn sample_sphere(k: usize, count: usize, seed: u64) -> Vec<CosinePoly> {
    let mut out = Vec::with_capacity(2 * (k + 1) + count);
    for m in 0..=k {
        out.push(CosinePoly::axis(k, m, false));
        out.push(CosinePoly::axis(k, m, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 2 * (k + 1) + count {
        let v: Vec<f64> = (0..=k).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Ok(p) = CosinePoly::normalized(v) {
            out.push(p);
        }
    }
    out
}

/// Largest energy over a sampled set of members: an empirical stand-in for
/// the uniform bound on the family.
pub fn empirical_bound(
    k: usize,
    eps: f64,
    km: &KernelMatrix,
    params: &RegimeParams,
    p: &DoubleWell,
    count: usize,
    seed: u64,
) -> Result<f64> {
    let grid = km.grid();
    let mut best = 0.0f64;
    for poly in sample_sphere(k, count, seed) {
        let u = build_member(&poly, eps, grid)?;
        best = best.max(energy(&u, km, params, p)?);
    }
    Ok(best)
}
