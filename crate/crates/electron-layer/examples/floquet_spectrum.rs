//! Floquet spectrum of the linearized operator at a computed traveling wave:
//! purely imaginary exponents at desk scale, plus the decay fit of the
//! KAM eigenvalue remainders.
//!
//! cargo run --release --example floquet_spectrum

use electron_layer::dispersion::{self, ModelParams};
use electron_layer::operlab::{linearized_floquet, spectrum, FloquetState};
use electron_layer::wavesolver::solve;

fn main() {
    let params = ModelParams::new(1.0, 1e-3, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let sol = solve(&params, 10, 1e-12, &[1e-3]).unwrap();

    let fm = linearized_floquet(&FloquetState::Wave(&sol), &params, 24, 26, Some(&[0])).unwrap();
    println!("momentum shell 0, matrix dimension {}", fm.matrix.nrows());

    let report = spectrum(&fm, 8).unwrap();
    println!(
        "max |Re| over interior modes: {:.3e}  (pure imaginarity at desk scale)",
        report.max_abs_real
    );
    println!(
        "remainder tail: |mu - kappa Omega_j| ~ C / |j|^p with p = {:.3}, C = {:.3e} ({} modes)",
        report.tail_fit.decay_exponent, report.tail_fit.c, report.tail_fit.points
    );

    println!("\nmatched Floquet exponents (kappa = +1 branch):");
    let mut rows: Vec<_> = report
        .matched
        .iter()
        .filter(|m| m.kappa == 1 && m.j >= 1 && m.j <= 8)
        .collect();
    rows.sort_by_key(|m| m.j);
    for m in rows {
        let om = dispersion::omega(params.a, m.j).unwrap();
        println!(
            "  j = {:2}: mu = {:+.12}   mu - Omega_j = {:+.3e}",
            m.j,
            m.mu_estimate,
            m.mu_estimate - om
        );
    }
}
