//! Discrete Gagliardo seminorm of `x` and of a unit step on (0, 1) against
//! their exact values at s = 1/4, with grid refinement.
use fracac::{seminorm, Field, Grid1D, KernelMatrix, RegimeParams};

fn main() {
    let params = RegimeParams::new(0.25, 0.1).unwrap();
    let exact_linear = 8.0 / 15.0;
    let exact_step = 8.0 * (4.0 * 2f64.sqrt() - 4.0);
    println!(
        "{:>6} {:>12} {:>10} {:>12} {:>10}",
        "cells", "u = x", "rel err", "u = step", "rel err"
    );
    for n in [64, 128, 256, 512, 1024] {
        let g = Grid1D::new(0.0, 1.0, n).unwrap();
        let km = KernelMatrix::build(&g, &params).unwrap();
        let lin = seminorm(&Field::from_fn(g, |x| x).unwrap(), &km).unwrap();
        let step = seminorm(&Field::from_fn(g, |x| (x - 0.5).signum()).unwrap(), &km).unwrap();
        println!(
            "{n:>6} {lin:>12.8} {:>10.2e} {step:>12.6} {:>10.2e}",
            (lin - exact_linear).abs() / exact_linear,
            (step - exact_step).abs() / exact_step
        );
    }
}
