//! The zero-mean constrained minimum m_ε over fields with values in [-1, 1],
//! from the antisymmetric step and a few sampled members.
use std::f64::consts::PI;

use fracac::critical::{project_box_mean_zero, step_seed};
use fracac::{
    build_member, constrained_min, sample_sphere, DescentOptions, DoubleWell, Field, Grid1D, KernelMatrix, RegimeParams,
};

fn main() {
    let g = Grid1D::new(0.0, PI, 256).unwrap();
    let well = DoubleWell::extended();
    let opts = DescentOptions::default();
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let params = RegimeParams::new(0.75, eps).unwrap();
        let km = KernelMatrix::build(&g, &params).unwrap();
        let mut seeds = vec![step_seed(&g)];
        for p in sample_sphere(2, 4, 3).iter().skip(6) {
            let m = build_member(p, eps, &g).unwrap();
            seeds.push(Field::new(g, project_box_mean_zero(m.values())).unwrap());
        }
        let rec = constrained_min(&km, &params, &well, &opts, &seeds).unwrap();
        println!(
            "eps={eps:<5} m_eps={:.8} converged={} oscillation={:.3}",
            rec.energy_value,
            rec.converged,
            rec.field.oscillation()
        );
    }
}
