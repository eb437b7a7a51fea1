//! Fractional Allen-Cahn energies on one-dimensional domains.
//!
//! The crate evaluates the three regime-weighted fractional Allen-Cahn
//! functionals on a cell-centred grid, builds the cosine / mollified-sign test
//! family used to bound them from above, and searches for critical points by
//! steepest descent. [`experiment`] ties these together into reproducible
//! sweeps with CSV or JSON reports.

pub mod critical;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod potential;
pub mod test_family;

pub use critical::{
    constrained_min, dedup_pairs, descend, truncation_check, CriticalPair, CriticalPointRecord, DescentOptions,
    StepRule,
};
pub use energy::{energy, frac_laplacian_diag, gradient, seminorm, KernelMatrix, Regime, RegimeParams};
pub use error::{Error, Result};
pub use grid::{Field, Grid1D};
pub use potential::{DoubleWell, WellKind};
pub use test_family::{build_member, empirical_bound, find_zeros, sample_sphere, smoothed_sign, CosinePoly, ZeroSet};
