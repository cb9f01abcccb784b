//! A two-frequency quasi-periodic traveling wave: one right-moving mode
//! (j = 1) and one left-moving mode (j = 2) on the 2-torus, solved at
//! cutoff L = 8 and cross-checked by direct time integration.
//!
//! cargo run --release --example solve_quasiperiodic_wave

use electron_layer::dispersion::ModelParams;
use electron_layer::wavesolver::{solve, to_solution_file, validate};

fn main() {
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let sol = solve(&params, 8, 1e-10, &[1e-5, 1e-4]).unwrap();

    println!(
        "omega = ({:.12}, {:.12})",
        sol.omega[0], sol.omega[1]
    );
    println!(
        "equilibrium target (sqrt2, -sqrt5) = ({:.12}, {:.12})",
        2f64.sqrt(),
        -(5f64.sqrt())
    );
    println!(
        "residual {:.3e}, {} stored torus modes at cutoff L = {}",
        sol.residual_norm,
        sol.wave.coeffs.len(),
        sol.wave.l_max
    );

    let report = validate(&sol, &params, 1.0, 5e-4).unwrap();
    println!(
        "simulator cross-check at t = 1: sup error {:.3e}",
        report.sim_error
    );

    let file = to_solution_file(&sol, &params);
    let json = serde_json::to_string_pretty(&file).unwrap();
    std::fs::write("qp_wave.json", &json).unwrap();
    println!("solution written to qp_wave.json ({} bytes)", json.len());
}
