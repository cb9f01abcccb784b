//! The layer system and the electronic Euler-Poisson system with cubic
//! pressure are conjugate under rho = (eps/2a)(r_+ - r_-), u = (eps/2)(r_+ + r_-).
//! Evolve identical physical data in both formulations and compare.
//!
//! cargo run --release --example euler_poisson_bridge

use electron_layer::dispersion::{linear_wave, ModelParams};
use electron_layer::dynamics::{ep_rhs, rhs, to_euler_poisson};
use electron_layer::simulator::{run, Formulation, Scheme, SimConfig};
use electron_layer::spectral::{GridSpec, PairField, RealField1D};

fn main() {
    let params = ModelParams::new(1.0, 0.05, vec![1], vec![], vec![0.05], vec![]).unwrap();
    let n = 256;

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

    // vector-field level: the pushforward identity
    let dr = rhs(&initial, &params).unwrap();
    let s = to_euler_poisson(&initial, &params).unwrap();
    let (drho, du) = ep_rhs(&s, params.a).unwrap();
    let expect_drho = dr.plus.sub(&dr.minus).scale(params.eps / (2.0 * params.a));
    let expect_du = dr.plus.add(&dr.minus).scale(params.eps / 2.0);
    println!(
        "vector-field pushforward defect: d rho {:.3e}, d u {:.3e}",
        drho.sub(&expect_drho).sup_norm(),
        du.sub(&expect_du).sup_norm()
    );

    // trajectory level: evolve in both formulations to t = 1
    let mut cfg = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(n).unwrap(),
        dt: 1e-3,
        t_end: 1.0,
        scheme: Scheme::LawsonRk4,
        diag_stride: usize::MAX / 2,
        formulation: Formulation::Layer,
    };
    let layer = run(&cfg, &initial).unwrap().final_state;
    cfg.formulation = Formulation::EulerPoisson;
    let ep = run(&cfg, &initial).unwrap().final_state;
    println!(
        "trajectory sup mismatch at t = 1: {:.3e}",
        layer.sub(&ep).sup_norm()
    );
}
