//! Nonlinear layer evolution with conservation diagnostics.
//!
//! cargo run --release --example simulate_layer

use electron_layer::dispersion::{linear_wave, ModelParams};
use electron_layer::simulator::{run, Formulation, Scheme, SimConfig};
use electron_layer::spectral::{GridSpec, PairField, RealField1D};

fn main() {
    let params = ModelParams::new(1.0, 0.5, vec![1], vec![2], vec![0.05], vec![0.03]).unwrap();
    let n = 256;
    let cfg = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(n).unwrap(),
        dt: 1e-3,
        t_end: 5.0,
        scheme: Scheme::LawsonRk4,
        diag_stride: 1000,
        formulation: Formulation::Layer,
    };

    // start from the closed-form linear wave at t = 0
    let mut vp = vec![0.0; n];
    let mut vm = vec![0.0; n];
    for (k, (p, m)) in vp.iter_mut().zip(vm.iter_mut()).enumerate() {
        let x = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let w = linear_wave(&params, 0.0, x).unwrap();
        *p = w.0;
        *m = w.1;
    }
    let initial =
        PairField::zero_mean(RealField1D::from_values(&vp), RealField1D::from_values(&vm))
            .unwrap();

    let result = run(&cfg, &initial).unwrap();
    println!("{:>8} {:>22} {:>22} {:>12}", "t", "energy", "momentum", "max amp");
    for d in &result.diagnostics {
        println!(
            "{:>8.3} {:>22.16} {:>22.16} {:>12.5e}",
            d.t, d.energy, d.momentum, d.max_amplitude
        );
    }
    let e0 = result.diagnostics[0].energy;
    let ef = result.diagnostics.last().unwrap().energy;
    println!("\nrelative energy drift over t = 5: {:.3e}", ((ef - e0) / e0).abs());
}
