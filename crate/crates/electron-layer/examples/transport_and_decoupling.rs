//! The two reduction kernels of the linearized-operator analysis: the
//! straightened transport constants of a small wave, and one step of the
//! off-diagonal block decoupling.
//!
//! cargo run --release --example transport_and_decoupling

use electron_layer::dispersion::ModelParams;
use electron_layer::operlab::{decouple_step, transport_constant};
use electron_layer::spectral::{CheckFn, Lattice};
use electron_layer::wavesolver::solve;

fn main() {
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let sol = solve(&params, 8, 1e-11, &[1e-4]).unwrap();
    let (cp, cm) = transport_constant(&sol, &params).unwrap();
    println!("one-step straightened transport constants at eps = 1e-4:");
    println!("  c_+ - a = {:+.6e}", cp - params.a);
    println!("  c_- + a = {:+.6e}", cm + params.a);
    println!("  (bounded by C eps; the spectral drift itself is O(eps^4))");

    // one block-decoupling step on synthetic traveling coefficients
    let lat = Lattice::new(1, 6);
    let mut r_off = CheckFn::zeros(lat.clone());
    r_off.add_cosine(&[1], 0.12);
    r_off.add_cosine(&[2], -0.04);
    let mut f_plus = CheckFn::zeros(lat.clone());
    f_plus.add_cosine(&[1], 0.5);
    let mut f_minus = CheckFn::zeros(lat.clone());
    f_minus.add_cosine(&[2], -0.2);

    let p = decouple_step(&r_off, &f_plus, &f_minus, 0, 1, 1.0, 0.1).unwrap();
    println!("\ndecoupling step at m = 0, kappa = +:");
    println!("  p mean = {:+.6e}", p.mean());
    println!("  cos(psi) amplitude = {:+.6e}", p.cosine_amp(&[1]));
    println!("  odd (sine) content = {:.3e}  (parity rule (-1)^m)", p.odd_part_sup());

    // the denominator guard trips when eps (f_+ - f_-) approaches 2a
    match decouple_step(&r_off, &f_plus.scale(8.2), &f_minus, 0, 1, 1.0, 0.5) {
        Err(e) => println!("\nguard: {e}"),
        Ok(_) => println!("\nguard unexpectedly silent"),
    }
}
