//! Empirical upper bound over the sampled test family for each regime,
//! written as CSV to stdout.
use std::f64::consts::PI;

use fracac::experiment::{run_bound_table, write_csv, ExperimentConfig};

fn main() {
    let cfg = ExperimentConfig {
        s_list: vec![0.25, 0.5, 0.75],
        eps_list: vec![0.2, 0.1, 0.05, 0.025],
        k_list: vec![1, 2, 3],
        sample_count: 128,
        domain: (0.0, PI),
        timing: false,
        ..ExperimentConfig::default()
    };
    let rows = run_bound_table(&cfg).unwrap();
    write_csv(&rows, std::io::stdout().lock()).unwrap();
}
