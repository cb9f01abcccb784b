//! Empirical measure of the non-resonant strip widths: scan a in [0.5, 1.5]
//! and mark the points where some |omega_Eq(a) . l| falls below its
//! Diophantine bound. The excluded fraction shrinks with gamma.
//!
//! cargo run --release --example cantor_scan

use electron_layer::dispersion::ModelParams;
use electron_layer::resonance::cantor_measure;

fn main() {
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let (tau, ell_max, grid) = (2.0, 20, 10_000);
    println!("a in [0.5, 1.5], tau = {tau}, |l| <= {ell_max}, {grid} grid points");
    println!("{:>10} {:>20} {:>10}", "gamma", "excluded fraction", "intervals");
    for gamma in [3e-2, 1e-2, 3e-3, 1e-3, 1e-4] {
        let scan = cantor_measure(&params, 0.5, 1.5, gamma, tau, ell_max, grid).unwrap();
        println!(
            "{:>10.0e} {:>20.6e} {:>10}",
            gamma,
            scan.excluded_fraction,
            scan.intervals.len()
        );
    }
    let scan = cantor_measure(&params, 0.5, 1.5, 3e-2, tau, ell_max, grid).unwrap();
    println!("\nwidest excluded intervals at gamma = 3e-2:");
    let mut iv = scan.intervals.clone();
    iv.sort_by(|x, y| (y.1 - y.0).partial_cmp(&(x.1 - x.0)).unwrap());
    for (lo, hi) in iv.iter().take(5) {
        println!("  [{lo:.6}, {hi:.6}]  width {:.2e}", hi - lo);
    }
}
