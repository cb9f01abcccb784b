//! Closed-form reversible traveling quasi-periodic solutions of the
//! linearized system, and their exactness under the spectral linear operator
//! and the time integrator.
//!
//! cargo run --release --example linear_waves

use electron_layer::dispersion::{linear_wave, omega, ModelParams};
use electron_layer::dynamics::linear_rhs;
use electron_layer::simulator::{run, Formulation, Scheme, SimConfig};
use electron_layer::spectral::{GridSpec, PairField, RealField1D};

fn sample(params: &ModelParams, n: usize, t: f64) -> PairField {
    let mut vp = vec![0.0; n];
    let mut vm = vec![0.0; n];
    for (k, (p, m)) in vp.iter_mut().zip(vm.iter_mut()).enumerate() {
        let x = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let w = linear_wave(params, t, x).unwrap();
        *p = w.0;
        *m = w.1;
    }
    PairField::zero_mean(RealField1D::from_values(&vp), RealField1D::from_values(&vm)).unwrap()
}

fn main() {
    let params = ModelParams::new(
        0.9,
        0.1,
        vec![1, 3],
        vec![2],
        vec![0.4, -0.2],
        vec![0.7],
    )
    .unwrap();
    let n = 128;

    // reversibility: w(-t, -x) = w(t, x)
    let fwd = linear_wave(&params, 0.7, 1.3).unwrap();
    let bwd = linear_wave(&params, -0.7, -1.3).unwrap();
    println!("reversibility defect: {:.3e}", (fwd.0 - bwd.0).abs().max((fwd.1 - bwd.1).abs()));

    // the wave solves the linearized system: compare exact time derivative
    // (Richardson differences of the closed form) with J M_0 r
    let t = 0.37;
    let now = sample(&params, n, t);
    let lin = linear_rhs(&now, params.a).unwrap();
    let h = 1e-6;
    let (p1, p2, p3, p4) = (
        sample(&params, n, t + h),
        sample(&params, n, t - h),
        sample(&params, n, t + h / 2.0),
        sample(&params, n, t - h / 2.0),
    );
    let dt_wave = p3
        .sub(&p4)
        .scale(4.0 / h)
        .sub(&p1.sub(&p2).scale(1.0 / (2.0 * h)))
        .scale(1.0 / 3.0);
    println!(
        "linearized-system residual (spectral rhs vs d/dt): {:.3e}",
        dt_wave.sub(&lin).sup_norm()
    );

    // one period of the single-mode wave returns to itself
    let single = ModelParams::new(1.0, 0.1, vec![1], vec![], vec![1e-8], vec![]).unwrap();
    let period = 2.0 * std::f64::consts::PI / omega(1.0, 1).unwrap();
    let cfg = SimConfig {
        params: single.clone(),
        grid: GridSpec::line(64).unwrap(),
        dt: 1e-3,
        t_end: period,
        scheme: Scheme::LawsonRk4,
        diag_stride: usize::MAX / 2,
        formulation: Formulation::Layer,
    };
    let initial = sample(&single, 64, 0.0);
    let back = run(&cfg, &initial).unwrap().final_state;
    println!(
        "one-period return error at amplitude 1e-8: {:.3e}",
        back.sub(&initial).sup_norm() / initial.sup_norm()
    );
}
