//! Exact linear theory at the flat strip: frequencies, coupling entries and
//! periodic bifurcation speeds.
//!
//! cargo run --release --example dispersion_relation

use electron_layer::dispersion::{bifurcation_speed, coupling, omega, symbol_expand, transfer};

fn main() {
    println!("strip half-width a = 1");
    println!("{:>4} {:>20} {:>20} {:>20}", "j", "Omega_j", "b_j", "c_j = Omega_j/j");
    for j in 1..=8i64 {
        println!(
            "{:>4} {:>20.15} {:>20.15} {:>20.15}",
            j,
            omega(1.0, j).unwrap(),
            coupling(1.0, j).unwrap(),
            bifurcation_speed(1.0, j).unwrap()
        );
    }

    let tp = transfer(1.0, 1).unwrap();
    println!("\ntransfer matrix at j = 1: det Q = {:.16}", tp.q.determinant());
    println!("b_1(1) = {:.16} (closed form 3 - 2 sqrt2 = {:.16})", tp.b, 3.0 - 2.0 * 2f64.sqrt());

    // homogeneous expansion of the dispersion symbol
    let e = symbol_expand(1.0, 6).unwrap();
    println!("\nsymbol expansion coefficients alpha_p (a = 1):");
    for (p, alpha) in e.alpha.iter().enumerate() {
        println!("  alpha_{} = {:+.12}", p + 1, alpha);
    }
    println!("truncation remainder at xi = 100 for M = 3: {:.3e}",
             symbol_expand(1.0, 3).unwrap().remainder(100.0));
}
