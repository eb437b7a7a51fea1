//! Builds members of the cosine / mollified-sign family and prints one of
//! them together with the zeros of its cosine polynomial.
use std::f64::consts::PI;

use fracac::{build_member, find_zeros, sample_sphere, CosinePoly, Grid1D};

fn main() {
    let g = Grid1D::new(0.0, PI, 64).unwrap();
    let eps = 0.15;
    let p = CosinePoly::normalized(vec![0.2, -0.5, 1.0]).unwrap();
    let zs = find_zeros(&p, g.a() - eps, g.b() + eps);
    println!("zeros of φ: {:?}", zs.zeros);
    let u = build_member(&p, eps, &g).unwrap();
    for (x, v) in g.nodes().zip(u.values()).step_by(4) {
        println!("{x:>7.4} {v:>8.4} {}", "#".repeat(((v + 1.0) * 20.0).round() as usize));
    }

    // every sampled member is bounded by 1 and odd in λ
    let fine = Grid1D::new(0.0, PI, 256).unwrap();
    for q in sample_sphere(3, 16, 1) {
        let m = build_member(&q, 0.1, &fine).unwrap();
        assert!(m.max_abs() <= 1.0);
        assert_eq!(build_member(&q.neg(), 0.1, &fine).unwrap(), m.neg());
    }
    println!("checked 24 sampled members of degree 3");
}
