//! Cell-centred uniform grids on a bounded interval and the fields sampled on them.

use crate::error::{Error, Result};

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 8;

/// Uniform partition of `(a, b)` into `num_cells` cells of width `h`.
///
/// Nodes sit at the cell centres `a + (i + 1/2) h`, so two distinct nodes are
/// always at least `h` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    num_cells: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, num_cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::InvalidGrid(format!("need finite a < b, got ({a}, {b})")));
        }
        if num_cells < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells, got {num_cells}"
            )));
        }
        Ok(Grid1D {
            a,
            b,
            num_cells,
            h: (b - a) / num_cells as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    /// Cell width.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Measure of the domain, `b - a`.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn node(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_cells).map(move |i| self.node(i))
    }

    /// Midpoint of the domain.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

/// A real function sampled at the nodes of a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field {
    /// Wraps `values`; fails if the length does not match or an entry is not finite.
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_cells() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values for {} cells",
                values.len(),
                grid.num_cells()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Field { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.num_cells());
        for (index, x) in grid.nodes().enumerate() {
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            values.push(value);
        }
        Ok(Field { grid, values })
    }

    pub fn constant(grid: Grid1D, c: f64) -> Self {
        Field {
            grid,
            values: vec![c; grid.num_cells()],
        }
    }

    pub(crate) fn from_raw(grid: Grid1D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.num_cells());
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Average value, `(h / |Ω|) Σ u_i`.
    pub fn mean(&self) -> f64 {
        let sum: f64 = self.values.iter().sum();
        self.grid.h() * sum / self.grid.length()
    }

    /// Subtracts the mean so that the result integrates to zero.
    pub fn project_mean_zero(&self) -> Field {
        let m = self.mean();
        let mut values: Vec<f64> = self.values.iter().map(|v| v - m).collect();
        // one correction pass absorbs the rounding left by the first subtraction
        let residual = mean_of(&values, &self.grid);
        if residual != 0.0 {
            values.iter_mut().for_each(|v| *v -= residual);
        }
        Field::from_raw(self.grid, values)
    }

    pub fn neg(&self) -> Field {
        Field::from_raw(self.grid, self.values.iter().map(|v| -v).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max u - min u`.
    pub fn oscillation(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// Discrete L² distance `sqrt(h Σ (u_i - v_i)²)`.
    pub fn l2_distance(&self, other: &Field) -> f64 {
        let ss: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (self.grid.h() * ss).sqrt()
    }
}

fn mean_of(values: &[f64], grid: &Grid1D) -> f64 {
    grid.h() * values.iter().sum::<f64>() / grid.length()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(1.0, 0.0, 16).is_err());
        assert!(Grid1D::new(0.0, 1.0, 7).is_err());
        assert!(Grid1D::new(0.0, f64::INFINITY, 16).is_err());
    }

    #[test]
    fn from_fn_samples_cell_centres() {
        let g = Grid1D::new(0.0, 1.0, 8).unwrap();
        let z = Field::from_fn(g, |_| 0.0).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));

        let x = Field::from_fn(g, |x| x).unwrap();
        assert_eq!(x.values()[0], 0.0625);
        assert_eq!(x.values()[7], 0.9375);
    }

    #[test]
    fn from_fn_four_cells() {
        // grids need 8 cells; the first half of (0, 2) reproduces the cells of (0, 1) split in 4
        let g = Grid1D::new(0.0, 2.0, 8).unwrap();
        let x = Field::from_fn(g, |x| x).unwrap();
        assert_eq!(&x.values()[..4], &[0.125, 0.375, 0.625, 0.875]);
        let step = Field::from_fn(g, |x| (x - 0.5).signum()).unwrap();
        assert_eq!(&step.values()[..4], &[-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn from_fn_reports_non_finite_node() {
        let g = unit(8);
        let err = Field::from_fn(g, |x| if x > 0.5 { f64::NAN } else { x }).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 4, .. }));
    }

    #[test]
    fn mean_examples() {
        let g = unit(16);
        assert_eq!(Field::constant(g, 3.25).mean(), 3.25);
        let step = Field::from_fn(g, |x| (x - 0.5).signum()).unwrap();
        assert_eq!(step.mean(), 0.0);
        let lin = Field::from_fn(unit(1024), |x| x).unwrap();
        assert_eq!(lin.mean(), 0.5);
    }

    #[test]
    fn projection_examples() {
        let g = unit(16);
        let p = Field::constant(g, 5.0).project_mean_zero();
        assert!(p.values().iter().all(|&v| v == 0.0));

        let step = Field::from_fn(g, |x| (x - 0.5).signum()).unwrap();
        assert_eq!(step.project_mean_zero(), step);

        let lin = Field::from_fn(g, |x| x).unwrap().project_mean_zero();
        let expect = Field::from_fn(g, |x| x - 0.5).unwrap();
        assert!(lin.l2_distance(&expect) < 1e-15);
    }

    #[test]
    fn oscillation_and_distance() {
        let g = unit(8);
        let u = Field::from_fn(g, |x| x).unwrap();
        assert!((u.oscillation() - 0.875).abs() < 1e-15);
        assert_eq!(u.l2_distance(&u), 0.0);
        assert_eq!(u.neg().neg(), u);
    }

    proptest::proptest! {
        #[test]
        fn projected_mean_vanishes(vals in proptest::collection::vec(-1e3f64..1e3, 8..64)) {
            let g = unit(vals.len());
            let u = Field::new(g, vals).unwrap();
            let p = u.project_mean_zero();
            proptest::prop_assert!(p.mean().abs() <= 1e-13 * u.max_abs().max(1.0));
        }

        #[test]
        fn affine_mean_is_exact(c0 in -5.0f64..5.0, c1 in -5.0f64..5.0) {
            let g = Grid1D::new(-1.0, 3.0, 64).unwrap();
            let u = Field::from_fn(g, |x| c0 + c1 * x).unwrap();
            let exact = c0 + c1 * 1.0;
            proptest::prop_assert!((u.mean() - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        }
    }
}
