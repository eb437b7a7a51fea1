//! Multi-start descent at s = 3/4 on (0, π): distinct critical pairs and the
//! bracket [m_ε, bound] they fall into, as ε shrinks.
use std::f64::consts::PI;

use fracac::experiment::{run_multiplicity_sweep, ExperimentConfig};

fn main() {
    let cfg = ExperimentConfig {
        s_list: vec![0.75],
        eps_list: vec![0.4, 0.2, 0.1, 0.05],
        k_list: vec![1, 2],
        domain: (0.0, PI),
        timing: false,
        ..ExperimentConfig::default()
    };
    for r in run_multiplicity_sweep(&cfg).unwrap() {
        println!(
            "eps={:<5} k={} m_eps={:.6} bound={:.4} pairs={} energies={:?}",
            r.eps,
            r.k.unwrap(),
            r.m_eps.unwrap(),
            r.empirical_bound.unwrap(),
            r.pair_count.unwrap(),
            r.pair_energies
        );
    }
}
