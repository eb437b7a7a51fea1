//! Pointwise fractional Laplacian of `cos x` at the centre of a wide domain.
//! With the kernel constant of the half Laplacian, 1/π, the exact value is
//! cos(0) = 1.
use std::f64::consts::PI;

use fracac::{frac_laplacian_diag, Field, Grid1D, RegimeParams};

fn main() {
    let params = RegimeParams::new(0.5, 0.1)
        .unwrap()
        .with_kernel_constant(1.0 / PI)
        .unwrap();
    for half_width in [2.0, 5.0, 10.0, 20.0] {
        let n = (400.0 * half_width) as usize + 1;
        let g = Grid1D::new(-half_width * PI, half_width * PI, n).unwrap();
        let u = Field::from_fn(g, f64::cos).unwrap();
        let v = frac_laplacian_diag(&u, n / 2, &params).unwrap();
        println!("domain (-{half_width}π, {half_width}π), {n} cells: {v:.6}");
    }
}
