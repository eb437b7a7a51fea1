//! Steepest descent of the extended energy from the single-interface member
//! `λ = (0, 1)`: the interface relaxes to a nonconstant critical point.
use std::f64::consts::PI;

use fracac::{
    build_member, descend, truncation_check, CosinePoly, DescentOptions, DoubleWell, Grid1D, KernelMatrix, RegimeParams,
};

fn main() {
    let g = Grid1D::new(0.0, PI, 256).unwrap();
    let params = RegimeParams::new(0.75, 0.05).unwrap();
    let km = KernelMatrix::build(&g, &params).unwrap();
    let u0 = build_member(&CosinePoly::axis(1, 1, false), 0.05, &g).unwrap();
    let rec = descend(&u0, &km, &params, &DoubleWell::extended(), &DescentOptions::default()).unwrap();
    println!(
        "converged={} after {} iterations, energy {:.10} (start {:.6}), |grad| {:.1e}",
        rec.converged, rec.iterations, rec.energy_value, rec.energy_trace[0], rec.grad_norm
    );
    println!(
        "inside [-1, 1]: {}, constant: {}",
        truncation_check(&rec),
        rec.is_constant
    );
    for (x, v) in g.nodes().zip(rec.field.values()).step_by(16) {
        println!("{x:>7.4} {v:>9.5}");
    }
}
