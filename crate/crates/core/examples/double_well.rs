//! Values of the standard and extended double wells around the two phases.
use fracac::DoubleWell;

fn main() {
    let standard = DoubleWell::standard();
    let extended = DoubleWell::extended_with_growth(2.0).unwrap();
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "W", "W'", "W_ext", "W_ext'");
    for i in -8..=8 {
        let t = i as f64 * 0.25;
        println!(
            "{t:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            standard.value(t),
            standard.deriv(t),
            extended.value(t),
            extended.deriv(t)
        );
    }
    println!("max of W on [-1, 1]: {}", standard.max_on_well());
}
