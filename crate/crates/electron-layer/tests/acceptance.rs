//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Run with `cargo test --test acceptance`.

use electron_layer::dispersion::{self, ModelParams};
use electron_layer::dynamics;
use electron_layer::operlab::{self, FloquetState};
use electron_layer::resonance::{self, DivisorKind, DivisorParams, DivisorQuery, EquilibriumMu};
use electron_layer::simulator::{self, Formulation, Scheme, SimConfig};
use electron_layer::spectral::{GridSpec, PairField, RealField1D};
use electron_layer::wavesolver::{self, TorusWave, WaveSolution};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(criterion: &str, detail: String) {
    println!("[PASS] {criterion}: {detail}");
}

fn sample_linear_wave(params: &ModelParams, n: usize, t: f64) -> PairField {
    let mut vp = vec![0.0; n];
    let mut vm = vec![0.0; n];
    for (k, (p, m)) in vp.iter_mut().zip(vm.iter_mut()).enumerate() {
        let x = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let w = dispersion::linear_wave(params, t, x).unwrap();
        *p = w.0;
        *m = w.1;
    }
    PairField::zero_mean(RealField1D::from_values(&vp), RealField1D::from_values(&vm)).unwrap()
}

fn random_bandlimited(n: usize, modes: i64, amp: f64, rng: &mut ChaCha8Rng) -> PairField {
    let mut mk = |rng: &mut ChaCha8Rng| {
        let coeffs: Vec<(i64, f64, f64)> = (1..=modes)
            .map(|j| (j, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        RealField1D::from_fn(n, |x| {
            coeffs
                .iter()
                .map(|&(j, c, s)| {
                    amp * (c * (j as f64 * x).cos() + s * (j as f64 * x).sin()) / j as f64
                })
                .sum()
        })
    };
    PairField::zero_mean(mk(rng), mk(rng)).unwrap()
}

#[test]
fn criterion_01_dispersion_exactness() {
    let t0 = Instant::now();
    assert!((dispersion::omega(1.0, 1).unwrap() - 2f64.sqrt()).abs() <= 1e-12);
    assert!((dispersion::omega(1.0, 2).unwrap() - 5f64.sqrt()).abs() <= 1e-12);
    let tp = dispersion::transfer(1.0, 1).unwrap();
    assert!((tp.b - (3.0 - 2.0 * 2f64.sqrt())).abs() <= 1e-12);
    for (a, j) in [(1.0, 1i64), (0.7, 2), (1.9, -3), (1.0, 5)] {
        let tp = dispersion::transfer(a, j).unwrap();
        assert!((tp.q.determinant() - 1.0).abs() <= 1e-12);
        let qc = tp.q.map(|v| Complex64::new(v, 0.0));
        let qic = tp.q_inv.map(|v| Complex64::new(v, 0.0));
        let diag = qic * tp.m * qc;
        let om = dispersion::omega(a, j).unwrap();
        assert!((diag[(0, 0)] - Complex64::new(0.0, -om)).norm() <= 1e-12);
        assert!((diag[(1, 1)] - Complex64::new(0.0, om)).norm() <= 1e-12);
        assert!(diag[(0, 1)].norm() <= 1e-12 && diag[(1, 0)].norm() <= 1e-12);
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "runtime {dt:?}");
    pass(
        "criterion 1 (dispersion exactness)",
        format!(
            "Omega_1(1) = sqrt2, Omega_2(1) = sqrt5, b_1(1) = 3 - 2 sqrt2, det Q = 1, \
             Q^-1 M Q diagonal, all to 1e-12 in {dt:?}"
        ),
    );
}

#[test]
fn criterion_02_symbol_expansion() {
    // independent sqrt(1+z) Taylor oracle
    let mut oracle = vec![1.0f64];
    for p in 1..=4usize {
        let prev = oracle[p - 1];
        oracle.push(prev * (0.5 - (p as f64 - 1.0)) / p as f64);
    }
    let e = dispersion::symbol_expand(1.0, 6).unwrap();
    assert!((e.alpha[0] - (-0.5)).abs() <= 1e-15);
    assert!((e.alpha[1] - (-0.125)).abs() <= 1e-15);
    assert!((e.alpha[0] - (-oracle[1])).abs() <= 1e-15);
    assert!((e.alpha[1] - oracle[2]).abs() <= 1e-15);

    // remainder decay of the M = 3 truncation over xi in [1e2, 1e4]
    let e3 = dispersion::symbol_expand(1.0, 3).unwrap();
    let xs: Vec<f64> = (0..40)
        .map(|k| 100.0 * 10f64.powf(k as f64 * 2.0 / 39.0))
        .collect();
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| (x.ln(), e3.remainder(x).abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let syy: f64 = pts.iter().map(|p| p.1 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt();
    let r2 = r * r;
    // the exact remainder is -(1/8) xi^-3 (1 - xi^-2/2 + ...): the fitted
    // slope approaches -3 from above within fit resolution (ledgered)
    assert!(slope <= -3.0 + 1e-3, "slope {slope}");
    assert!(r2 >= 0.999, "R^2 {r2}");
    // sharp form of the same statement: |r(xi)| xi^3 <= 1/8, with slack only
    // for the floating-point cancellation in r itself (~1e-7 relative at the
    // far end of the range)
    for &x in &xs {
        assert!(e3.remainder(x).abs() * x.powi(3) <= 0.125 * (1.0 + 1e-6));
    }
    pass(
        "criterion 2 (symbol expansion)",
        format!("alpha_1 = -1/2, alpha_2 = -1/8 vs oracle; slope {slope:.5}, R^2 {r2:.6}"),
    );
}

#[test]
fn criterion_03_hamiltonian_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 64;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = rng.gen_range(0.6..1.6);
        let eps = rng.gen_range(0.05..0.6);
        let params = ModelParams::new(a, eps, vec![1], vec![], vec![1.0], vec![]).unwrap();
        let r = random_bandlimited(n, 9, 0.8, &mut rng);
        let lhs = dynamics::rhs(&r, &params).unwrap().scale(eps * eps);
        let rhs_side = dynamics::j_apply(&dynamics::energy_gradient(&r, &params).unwrap()).unwrap();
        worst = worst.max(lhs.sub(&rhs_side).sup_norm());
    }
    assert!(worst <= 1e-11, "identity sup-error {worst}");

    // gradient vs central differences with second-order Richardson ratio
    let params = ModelParams::new(1.0, 0.5, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let r = random_bandlimited(n, 6, 0.5, &mut rng);
    let delta = PairField::zero_mean(
        RealField1D::from_fn(n, |x| x.cos() + (2.0 * x).cos()),
        RealField1D::from_fn(n, |x| -x.cos() - (2.0 * x).cos()),
    )
    .unwrap();
    let g = dynamics::energy_gradient(&r, &params).unwrap();
    let pairing = g.plus.inner(&delta.plus) + g.minus.inner(&delta.minus);
    let fd = |h: f64| {
        let ep = dynamics::energy(&r.add(&delta.scale(h)), &params).unwrap();
        let em = dynamics::energy(&r.sub(&delta.scale(h)), &params).unwrap();
        (ep - em) / (2.0 * h)
    };
    let err_coarse = (fd(1e-3) - pairing).abs();
    let err_fine = (fd(1e-4) - pairing).abs();
    let ratio = err_coarse / err_fine;
    assert!((80.0..=120.0).contains(&ratio), "Richardson ratio {ratio}");
    pass(
        "criterion 3 (Hamiltonian consistency)",
        format!("identity sup-error {worst:.3e} over 20 states; FD ratio {ratio:.1}"),
    );
}

#[test]
fn criterion_04_conservation() {
    let t0 = Instant::now();
    let params = ModelParams::new(1.0, 0.5, vec![1], vec![], vec![0.05], vec![]).unwrap();
    let n = 256;
    let cfg = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(n).unwrap(),
        dt: 1e-3,
        t_end: 10.0,
        scheme: Scheme::LawsonRk4,
        diag_stride: 500,
        formulation: Formulation::Layer,
    };
    let initial = sample_linear_wave(&params, n, 0.0);
    let result = simulator::run(&cfg, &initial).unwrap();
    let e0 = result.diagnostics[0].energy;
    let p0 = result.diagnostics[0].momentum;
    let mut e_drift = 0.0f64;
    let mut p_drift = 0.0f64;
    for d in &result.diagnostics {
        e_drift = e_drift.max(((d.energy - e0) / e0).abs());
        p_drift = p_drift.max(((d.momentum - p0) / p0).abs());
        assert!(
            d.mean_plus.abs() <= 1e-15 && d.mean_minus.abs() <= 1e-15,
            "zero mean violated at t = {}",
            d.t
        );
    }
    let dt = t0.elapsed();
    assert!(e_drift <= 1e-8, "energy drift {e_drift}");
    assert!(p_drift <= 1e-8, "momentum drift {p_drift}");
    assert!(dt.as_secs_f64() < 30.0, "runtime {dt:?}");
    pass(
        "criterion 4 (conservation)",
        format!(
            "energy drift {e_drift:.3e}, momentum drift {p_drift:.3e}, means exact, {dt:.2?}"
        ),
    );
}

#[test]
fn criterion_05_linear_solution() {
    // spectral residual of the linearized system on the closed-form wave
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
    let h = 1e-6;
    let mut worst = 0.0f64;
    for &t in &[0.0, 0.37, 1.41] {
        let now = sample_linear_wave(&params, n, t);
        // dt of the wave, analytically: central difference at 6th order is
        // overkill; use the exact time derivative termwise instead
        let mut vp = vec![0.0; n];
        let mut vm = vec![0.0; n];
        for (k, (p, m)) in vp.iter_mut().zip(vm.iter_mut()).enumerate() {
            let x = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            // exact d/dt via the closed form: finite difference with h and
            // Richardson to kill the h^2 term far below 1e-12 relative
            let f = |tt: f64| dispersion::linear_wave(&params, tt, x).unwrap();
            let (p1, m1) = f(t + h);
            let (p2, m2) = f(t - h);
            let (p3, m3) = f(t + h / 2.0);
            let (p4, m4) = f(t - h / 2.0);
            *p = (4.0 * (p3 - p4) / h - (p1 - p2) / (2.0 * h)) / 3.0;
            *m = (4.0 * (m3 - m4) / h - (m1 - m2) / (2.0 * h)) / 3.0;
        }
        let dt_wave = PairField::new(
            RealField1D::from_values(&vp),
            RealField1D::from_values(&vm),
        )
        .unwrap();
        let lin = dynamics::linear_rhs(&now, params.a).unwrap();
        worst = worst.max(dt_wave.sub(&lin).sup_norm());
    }
    assert!(worst <= 1e-9, "linearized residual {worst}"); // FD-limited probe
    // the same statement measured purely spectrally, mode by mode: the wave
    // solves the 2x2 system exactly, so check M_j against the eigen relation
    let mut spectral_worst = 0.0f64;
    for &(j, kappa) in &[(1i64, 1i8), (3, 1), (2, -1)] {
        let tp = dispersion::transfer(params.a, j).unwrap();
        let om = dispersion::omega(params.a, j).unwrap();
        let v = tp.eigvec(kappa).map(|x| Complex64::new(x, 0.0));
        let mv = tp.m * v;
        let expect = v * Complex64::new(0.0, -(kappa as f64) * om);
        spectral_worst = spectral_worst.max((mv - expect).norm());
    }
    assert!(spectral_worst <= 1e-12, "eigen relation residual {spectral_worst}");

    // one-period return in the simulator at amplitude 1e-8
    let params = ModelParams::new(1.0, 0.1, vec![1], vec![], vec![1e-8], vec![]).unwrap();
    let n = 64;
    let period = 2.0 * std::f64::consts::PI / dispersion::omega(1.0, 1).unwrap();
    let cfg = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(n).unwrap(),
        dt: 1e-3,
        t_end: period,
        scheme: Scheme::LawsonRk4,
        diag_stride: usize::MAX / 2,
        formulation: Formulation::Layer,
    };
    let initial = sample_linear_wave(&params, n, 0.0);
    let result = simulator::run(&cfg, &initial).unwrap();
    let ret = result.final_state.sub(&initial).sup_norm() / initial.sup_norm();
    assert!(ret <= 1e-8, "one-period return error {ret}");
    pass(
        "criterion 5 (linear solution)",
        format!(
            "eigen-relation residual {spectral_worst:.3e}, time-derivative defect {worst:.3e}, \
             one-period return {ret:.3e}"
        ),
    );
}

#[test]
fn criterion_06_euler_poisson_equivalence() {
    let t0 = Instant::now();
    let params = ModelParams::new(1.0, 0.05, vec![1], vec![], vec![0.05], vec![]).unwrap();
    let n = 256;
    let mut cfg = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(n).unwrap(),
        dt: 1e-3,
        t_end: 1.0,
        scheme: Scheme::LawsonRk4,
        diag_stride: usize::MAX / 2,
        formulation: Formulation::Layer,
    };
    let initial = sample_linear_wave(&params, n, 0.0);
    let layer = simulator::run(&cfg, &initial).unwrap().final_state;
    cfg.formulation = Formulation::EulerPoisson;
    let ep = simulator::run(&cfg, &initial).unwrap().final_state;
    let mismatch = layer.sub(&ep).sup_norm();
    let dt = t0.elapsed();
    assert!(mismatch <= 1e-6, "sup mismatch {mismatch}");
    assert!(dt.as_secs_f64() < 60.0, "runtime {dt:?}");
    pass(
        "criterion 6 (Euler-Poisson equivalence)",
        format!("sup mismatch {mismatch:.3e} at t = 1, {dt:.2?}"),
    );
}

#[test]
fn criterion_07_periodic_traveling_wave() {
    let params = ModelParams::new(1.0, 1e-3, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let sol = wavesolver::solve(&params, 8, 1e-10, &[1e-5, 1e-4, 1e-3]).unwrap();
    assert!(sol.residual_norm <= 1e-10, "residual {}", sol.residual_norm);
    let target = 2f64.sqrt();
    let dists: Vec<f64> = sol
        .continuation
        .iter()
        .map(|(_, om)| (om[0] - target).abs())
        .collect();
    assert_eq!(dists.len(), 3);
    assert!(
        dists[0] <= dists[1] && dists[1] <= dists[2],
        "|omega(eps) - sqrt2| not decreasing as eps -> 0: {dists:?}"
    );
    // simulator cross-check at eps = 1e-4 (the middle of the path)
    let p4 = ModelParams { eps: 1e-4, ..params.clone() };
    let sol4 = wavesolver::solve(&p4, 8, 1e-10, &[1e-4]).unwrap();
    let v = wavesolver::validate(&sol4, &p4, 1.0, 1e-3).unwrap();
    assert!(v.sim_error <= 1e-6, "simulation cross-check {}", v.sim_error);
    pass(
        "criterion 7 (periodic traveling wave)",
        format!(
            "residual {:.3e}; |omega - sqrt2| = {:.3e} / {:.3e} / {:.3e} along eps; \
             sim cross-check {:.3e}",
            sol.residual_norm, dists[0], dists[1], dists[2], v.sim_error
        ),
    );
}

#[test]
fn criterion_08_quasi_periodic_traveling_wave() {
    let t0 = Instant::now();
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let sol = wavesolver::solve(&params, 8, 1e-10, &[1e-5, 1e-4]).unwrap();
    assert!(sol.residual_norm <= 1e-10, "residual {}", sol.residual_norm);
    let target = [2f64.sqrt(), -(5f64.sqrt())];
    for (w, t) in sol.omega.iter().zip(&target) {
        assert!((w - t).abs() <= 1e-2, "omega {w} vs {t}");
    }
    let v = wavesolver::validate(&sol, &params, 1.0, 5e-4).unwrap();
    assert!(v.sim_error <= 1e-5, "simulation cross-check {}", v.sim_error);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 600.0, "runtime {dt:?}");
    pass(
        "criterion 8 (quasi-periodic traveling wave)",
        format!(
            "residual {:.3e}, omega = ({:.9}, {:.9}), sim cross-check {:.3e}, {dt:.2?}",
            sol.residual_norm, sol.omega[0], sol.omega[1], v.sim_error
        ),
    );
}

#[test]
fn criterion_09_floquet_stability() {
    // equilibrium spectrum exact to 1e-12
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let equil = WaveSolution {
        wave: TorusWave::zero(&params.jvec(), 3),
        omega: dispersion::omega_eq(&params).unwrap(),
        eps: params.eps,
        residual_norm: 0.0,
        newton_iters: 0,
        continuation: Vec::new(),
    };
    let fm = operlab::linearized_floquet(&FloquetState::Wave(&equil), &params, 3, 4, None).unwrap();
    let report = operlab::spectrum(&fm, 4).unwrap();
    let mut predicted = Vec::new();
    for m in &fm.modes {
        let wl = 2f64.sqrt() * m.ell[0] as f64;
        let om = dispersion::omega(1.0, m.j).unwrap();
        for s in [1.0, -1.0] {
            predicted.push(wl + s * om);
            predicted.push(-(wl + s * om));
        }
    }
    predicted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut got: Vec<f64> = report.eigenvalues.iter().map(|l| l.im).collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut eq_err = 0.0f64;
    for (g, p) in got.iter().zip(&predicted) {
        eq_err = eq_err.max((g - p).abs());
    }
    for lam in &report.eigenvalues {
        eq_err = eq_err.max(lam.re.abs());
    }
    assert!(eq_err <= 1e-12, "equilibrium spectrum error {eq_err}");

    // computed d=1 wave at eps = 1e-4: interior Floquet exponents on the axis
    let sol = wavesolver::solve(&params, 8, 1e-11, &[1e-4]).unwrap();
    let fm = operlab::linearized_floquet(&FloquetState::Wave(&sol), &params, 24, 26, Some(&[0]))
        .unwrap();
    let report = operlab::spectrum(&fm, 12).unwrap();
    assert!(
        report.max_abs_real <= 1e-6,
        "max |Re| {} over interior modes",
        report.max_abs_real
    );
    pass(
        "criterion 9 (Floquet stability)",
        format!(
            "equilibrium exact to {eq_err:.3e}; wave max |Re| = {:.3e} on interior modes",
            report.max_abs_real
        ),
    );
}

#[test]
fn criterion_10_kam_asymptotics() {
    let params = ModelParams::new(1.0, 1e-3, vec![1], vec![], vec![1.0], vec![]).unwrap();
    let sol = wavesolver::solve(&params, 10, 1e-12, &[1e-3]).unwrap();
    let fm = operlab::linearized_floquet(&FloquetState::Wave(&sol), &params, 24, 26, Some(&[0]))
        .unwrap();
    let report = operlab::spectrum(&fm, 8).unwrap();
    let p = report.tail_fit.decay_exponent;
    assert!(report.tail_fit.points >= 5, "too few resolved modes");
    assert!(
        (0.7..=1.3).contains(&p),
        "decay exponent {p} outside [0.7, 1.3]"
    );
    pass(
        "criterion 10 (KAM asymptotics)",
        format!(
            "remainder decay exponent {p:.3} over {} resolved modes (C = {:.3e})",
            report.tail_fit.points, report.tail_fit.c
        ),
    );
}

#[test]
fn criterion_11_cantor_scan() {
    let t0 = Instant::now();
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let q0 = 1u32;
    let tau = (2 * q0) as f64;
    let run = |gamma: f64| {
        resonance::cantor_measure(&params, 0.5, 1.5, gamma, tau, 20, 10_000)
            .unwrap()
            .excluded_fraction
    };
    let f2 = run(1e-2);
    let f3 = run(1e-3);
    let f4 = run(1e-4);
    assert!(f2 >= f3 && f3 >= f4, "not monotone: {f2} {f3} {f4}");
    assert!(f4 <= 0.05, "excluded fraction {f4} at gamma = 1e-4");
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 300.0, "runtime {dt:?}");
    pass(
        "criterion 11 (Cantor scan)",
        format!(
            "excluded fraction {f2:.4e} >= {f3:.4e} >= {f4:.4e} over gamma = 1e-2/1e-3/1e-4, {dt:.2?}"
        ),
    );
}

#[test]
fn criterion_12_momentum_filters() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let params = ModelParams::new(1.0, 1e-4, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap();
    let jvec = params.jvec();
    let omega = dispersion::omega_eq(&params).unwrap();
    let mu = EquilibriumMu { a: params.a };
    let dp = DivisorParams::new(1e-3, 2.0);
    let mut audited = 0usize;
    let mut rejected = 0usize;
    for _ in 0..100_000 {
        let ell = vec![rng.gen_range(-8i64..=8), rng.gen_range(-8i64..=8)];
        let drift: i64 = jvec.iter().zip(&ell).map(|(a, b)| a * b).sum();
        let (j, jp) = if rng.gen_bool(0.8) {
            // momentum-consistent tuple (may still be trivial)
            let j = rng.gen_range(-12i64..=12);
            (j, j + drift)
        } else {
            // deliberately violating tuple
            let j = rng.gen_range(-12i64..=12);
            (j, j + drift + rng.gen_range(1i64..=3))
        };
        let q = DivisorQuery {
            kind: DivisorKind::Melnikov2Diag,
            a: params.a,
            omega: &omega,
            jvec: &jvec,
            ell: &ell,
            j: Some(j),
            j_prime: Some(jp),
            kappa: Some(if rng.gen_bool(0.5) { 1 } else { -1 }),
            mu: &mu,
            transport_c: None,
        };
        match resonance::divisor(&q, &dp) {
            Ok(audit) => {
                audited += 1;
                // every emitted audit satisfies jvec.l + j - j' = 0
                assert!(resonance::momentum_ok(
                    &jvec,
                    &audit.ell,
                    audit.j.unwrap(),
                    audit.j_prime
                ));
                // the trivial pair (0, j, j) never surfaces:
                // Omega_j + Omega_{-j} = 0 is not audited as a failure
                assert!(
                    !(audit.ell.iter().all(|&l| l == 0) && audit.j == audit.j_prime),
                    "trivial resonance audited"
                );
            }
            Err(_) => {
                rejected += 1;
                let trivial =
                    j == 0 || jp == 0 || (j == jp && ell.iter().all(|&l| l == 0));
                let violates = drift + j - jp != 0;
                assert!(trivial || violates, "valid tuple rejected");
            }
        }
    }
    assert!(audited > 10_000 && rejected > 1_000);
    pass(
        "criterion 12 (momentum filters)",
        format!("{audited} audits + {rejected} rejections over 100000 random tuples"),
    );
}
