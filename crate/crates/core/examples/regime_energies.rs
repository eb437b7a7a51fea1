//! Energy of the zero field and of a single tanh-like interface in each of
//! the three regimes, as ε shrinks.
use fracac::{energy, DoubleWell, Field, Grid1D, KernelMatrix, RegimeParams};

fn main() {
    let g = Grid1D::new(0.0, 1.0, 256).unwrap();
    let well = DoubleWell::standard();
    println!(
        "{:>5} {:>6} {:>11} {:>10} {:>10}",
        "s", "eps", "regime", "F(0)", "F(front)"
    );
    for s in [0.25, 0.5, 0.75] {
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let params = RegimeParams::new(s, eps).unwrap();
            let km = KernelMatrix::build(&g, &params).unwrap();
            let zero = energy(&Field::constant(g, 0.0), &km, &params, &well).unwrap();
            let front = Field::from_fn(g, |x| ((x - 0.5) / eps).tanh()).unwrap();
            let e = energy(&front, &km, &params, &well).unwrap();
            println!("{s:>5} {eps:>6} {:>11} {zero:>10.4} {e:>10.4}", params.regime().tag());
        }
    }
}
