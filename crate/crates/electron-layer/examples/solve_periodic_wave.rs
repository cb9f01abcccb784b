//! Newton-Galerkin continuation of a periodic traveling wave (d = 1) with
//! the frequency as unknown, starting from the linear bifurcation profile.
//!
//! cargo run --release --example solve_periodic_wave

use electron_layer::dispersion::ModelParams;
use electron_layer::wavesolver::{solve, validate};

fn main() {
    let params = ModelParams::new(1.0, 1e-3, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let sol = solve(&params, 8, 1e-11, &[1e-5, 1e-4, 1e-3]).unwrap();

    println!("continuation (bifurcation speed c_1(1) = sqrt2 = {:.12}):", 2f64.sqrt());
    for (eps, omega) in &sol.continuation {
        println!(
            "  eps = {eps:.0e}: omega = {:.15}, |omega - sqrt2| = {:.3e}",
            omega[0],
            (omega[0] - 2f64.sqrt()).abs()
        );
    }
    println!(
        "final residual {:.3e} after {} Newton iterations, {} stored modes",
        sol.residual_norm,
        sol.newton_iters,
        sol.wave.coeffs.len()
    );

    let report = validate(&sol, &params, 1.0, 1e-3).unwrap();
    println!(
        "validation: residual at 2L {:.3e} (growth {:.2}), simulator cross-check {:.3e} at t = {}",
        report.residual_norm_2l, report.residual_growth, report.sim_error, report.t_check
    );
    println!(
        "reversible: {}, momentum support clean: {}",
        report.reversible, report.momentum_supported
    );
}
