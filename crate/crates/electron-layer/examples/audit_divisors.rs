//! Divisor audits at the flat strip: Diophantine, transport and both
//! Melnikov families, plus a deliberately planted near-resonance that the
//! audit must flag.
//!
//! cargo run --release --example audit_divisors

use electron_layer::dispersion::{self, ModelParams};
use electron_layer::operlab::kam_audit;
use electron_layer::resonance::{DivisorParams, EquilibriumMu};

fn main() {
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let omega = dispersion::omega_eq(&params).unwrap();
    let mu = EquilibriumMu { a: params.a };
    let dp = DivisorParams::new(1e-6, 3.0);
    let summary = kam_audit(&mu, &params, &omega, &dp, 5, 10).unwrap();
    println!(
        "generic a = 1: {} tuples audited, pass rate {:.4}",
        summary.audits.len(),
        summary.pass_rate
    );

    // plant a resonance: -3 Omega_1(a) + Omega_2(a) + Omega_5(a) = 0
    let f = |a: f64| {
        -3.0 * (a * a + 1.0).sqrt() + (4.0 * a * a + 1.0).sqrt() + (25.0 * a * a + 1.0).sqrt()
    };
    let (mut lo, mut hi) = (0.3, 0.4);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a_star = 0.5 * (lo + hi);
    println!("\nplanted root: -3 Omega_1 + Omega_2 + Omega_5 = 0 at a = {a_star:.12}");
    let params = ModelParams::new(a_star, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let omega = dispersion::omega_eq(&params).unwrap();
    let mu = EquilibriumMu { a: a_star };
    let summary = kam_audit(&mu, &params, &omega, &dp, 4, 8).unwrap();
    println!("audit at the planted a: pass rate {:.5}", summary.pass_rate);
    for fail in &summary.failures {
        println!(
            "  FLAGGED {:?} l = {:?}, j = {:?}, j' = {:?}: |{:.3e}| <= {:.3e}",
            fail.kind, fail.ell, fail.j, fail.j_prime, fail.value, fail.bound
        );
    }
}
