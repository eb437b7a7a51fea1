//! Histogram of zero counts of random unit cosine polynomials on [0, 2π].
use std::f64::consts::PI;

use fracac::{find_zeros, sample_sphere};

fn main() {
    for k in 1..=5 {
        let mut hist = vec![0usize; 2 * k + 1];
        let mut tangential = 0;
        for p in sample_sphere(k, 2000, 42) {
            let zs = find_zeros(&p, 0.0, 2.0 * PI);
            hist[zs.count()] += 1;
            tangential += zs.tangential.len();
        }
        println!("k={k}: counts {hist:?}, tangential touches {tangential}");
    }
}
