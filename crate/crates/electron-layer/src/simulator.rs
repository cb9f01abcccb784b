//! Time integration of the layer system (and of the Euler-Poisson twin) with
//! conservation diagnostics.
//!
//! The default scheme is Lawson-RK4: the stiff skew part `J M_0(a)`, whose
//! mode-`j` eigenvalues are `-+ i sqrt(a^2 j^2 + 1)`, is integrated exactly by
//! the closed-form propagator `e^{M_j dt} = cos(w dt) I + sin(w dt)/w M_j`,
//! leaving only the quadratic transport to classical RK4 stages.

use crate::dispersion::ModelParams;
use crate::dynamics::{
    self, ep_linear_rhs, ep_rhs, from_euler_poisson, to_euler_poisson, EPState,
};
use crate::error::{Error, Result};
use crate::spectral::{GridSpec, PairField, RealField1D};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    LawsonRk4,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    Layer,
    EulerPoisson,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub diag_stride: usize,
    pub formulation: Formulation,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate()?;
        if !(self.dt > 0.0) {
            return Err(Error::validation(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_end < self.dt {
            return Err(Error::validation("t_end must be at least dt"));
        }
        if self.diag_stride == 0 {
            return Err(Error::validation("diag_stride must be positive"));
        }
        if self.scheme == Scheme::Rk4 {
            // stability guard: dt * max |linear eigenvalue on the grid| <= 1
            let j_max = (self.grid.n_x / 2) as i64;
            let eig = crate::dispersion::omega(self.params.a, j_max)?.abs();
            if self.dt * eig > 1.0 {
                return Err(Error::validation(format!(
                    "rk4 stability guard violated: dt * Omega_max = {:.3}",
                    self.dt * eig
                )));
            }
        }
        Ok(())
    }
}

/// One row of the conservation log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub momentum: f64,
    pub mean_plus: f64,
    pub mean_minus: f64,
    pub max_amplitude: f64,
}

/// Exact flow of the linear layer system over `dt`, mode by mode.
fn layer_propagate(r: &PairField, a: f64, dt: f64) -> PairField {
    let n = r.n();
    let mut plus = vec![Complex64::new(0.0, 0.0); n];
    let mut minus = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        if n % 2 == 0 && k == n / 2 {
            continue;
        }
        let j = RealField1D::freq_of(n, k);
        let jf = j as f64;
        let w = (a * a * jf * jf + 1.0).sqrt();
        let (c, s) = ((w * dt).cos(), (w * dt).sin() / w);
        // M_j = i sgn(j) [[-a|j| - h, h], [-h, a|j| + h]], h = 1/(2a|j|)
        let aj = a * jf.abs();
        let h = 1.0 / (2.0 * aj);
        let unit = Complex64::new(0.0, jf.signum());
        let m11 = unit * (-aj - h);
        let m12 = unit * h;
        let m21 = unit * (-h);
        let m22 = unit * (aj + h);
        let (p, q) = (r.plus.coeffs()[k], r.minus.coeffs()[k]);
        plus[k] = p * (c + s * m11) + q * (s * m12);
        minus[k] = p * (s * m21) + q * (c + s * m22);
    }
    PairField {
        plus: RealField1D::from_coeffs(plus),
        minus: RealField1D::from_coeffs(minus),
    }
}

/// Exact flow of the linear Euler-Poisson system over `dt`.
fn ep_propagate(s: &EPState, a: f64, dt: f64) -> EPState {
    let n = s.rho.n();
    let mut rho = vec![Complex64::new(0.0, 0.0); n];
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        if n % 2 == 0 && k == n / 2 {
            continue;
        }
        let j = RealField1D::freq_of(n, k) as f64;
        let w = (a * a * j * j + 1.0).sqrt();
        let (c, sn) = ((w * dt).cos(), (w * dt).sin() / w);
        // L_j = [[0, -ij], [-i(a^2 j + 1/j), 0]]
        let l12 = Complex64::new(0.0, -j);
        let l21 = Complex64::new(0.0, -(a * a * j + 1.0 / j));
        let (rr, uu) = (s.rho.coeffs()[k], s.u.coeffs()[k]);
        rho[k] = rr * c + uu * (sn * l12);
        u[k] = rr * (sn * l21) + uu * c;
    }
    EPState {
        rho: RealField1D::from_coeffs(rho),
        u: RealField1D::from_coeffs(u),
    }
}

fn check_finite(sup: f64, t: f64) -> Result<()> {
    if !sup.is_finite() {
        return Err(Error::BlowUp {
            t,
            reason: "non-finite amplitude".into(),
        });
    }
    Ok(())
}

fn project(r: PairField, grid: &GridSpec) -> PairField {
    let mut plus = r.plus;
    let mut minus = r.minus;
    plus.dealias(grid.dealias_fraction);
    minus.dealias(grid.dealias_fraction);
    // zero-mean re-projection is exact: the mean mode is simply dropped
    let strip = |f: RealField1D| {
        let mut c = f.coeffs().to_vec();
        c[0] = Complex64::new(0.0, 0.0);
        RealField1D::from_coeffs(c)
    };
    PairField {
        plus: strip(plus),
        minus: strip(minus),
    }
}

/// One step of the layer system with the configured scheme. `dt` may be
/// negative (used by the reversibility checks).
pub fn step_layer(state: &PairField, cfg: &SimConfig, dt: f64, t: f64) -> Result<PairField> {
    let a = cfg.params.a;
    let eps = cfg.params.eps;
    let nl = |r: &PairField| dynamics::nonlinear_rhs(r, eps);
    let out = match cfg.scheme {
        Scheme::LawsonRk4 => {
            let half = |r: &PairField| layer_propagate(r, a, dt / 2.0);
            let full = |r: &PairField| layer_propagate(r, a, dt);
            let k1 = nl(state)?;
            let u_half = half(state);
            let k2 = nl(&half(&state.add(&k1.scale(dt / 2.0))))?;
            let k3 = nl(&u_half.add(&k2.scale(dt / 2.0)))?;
            let k4 = nl(&full(state).add(&half(&k3).scale(dt)))?;
            full(state)
                .add(&full(&k1).scale(dt / 6.0))
                .add(&half(&k2.add(&k3)).scale(dt / 3.0))
                .add(&k4.scale(dt / 6.0))
        }
        Scheme::Rk4 => {
            let f = |r: &PairField| -> Result<PairField> {
                Ok(dynamics::linear_rhs(r, a)?.add(&nl(r)?))
            };
            let k1 = f(state)?;
            let k2 = f(&state.add(&k1.scale(dt / 2.0)))?;
            let k3 = f(&state.add(&k2.scale(dt / 2.0)))?;
            let k4 = f(&state.add(&k3.scale(dt)))?;
            state
                .add(&k1.add(&k4).scale(dt / 6.0))
                .add(&k2.add(&k3).scale(dt / 3.0))
        }
    };
    let out = project(out, &cfg.grid);
    check_finite(out.sup_norm(), t)?;
    Ok(out)
}

/// One step of the Euler-Poisson twin (always Lawson-RK4 stages around the
/// exact linear propagator, or plain RK4 when configured).
pub fn step_ep(state: &EPState, cfg: &SimConfig, dt: f64, t: f64) -> Result<EPState> {
    let a = cfg.params.a;
    let frac = cfg.grid.dealias_fraction;
    let nl = |s: &EPState| -> Result<EPState> {
        let (dr, du) = ep_rhs(s, a)?;
        let (lr, lu) = ep_linear_rhs(s, a)?;
        Ok(EPState {
            rho: dr.sub(&lr),
            u: du.sub(&lu),
        })
    };
    let add = |x: &EPState, y: &EPState, s: f64| EPState {
        rho: x.rho.add(&y.rho.scale(s)),
        u: x.u.add(&y.u.scale(s)),
    };
    let out = match cfg.scheme {
        Scheme::LawsonRk4 => {
            let half = |s: &EPState| ep_propagate(s, a, dt / 2.0);
            let full = |s: &EPState| ep_propagate(s, a, dt);
            let k1 = nl(state)?;
            let u_half = half(state);
            let k2 = nl(&half(&add(state, &k1, dt / 2.0)))?;
            let k3 = nl(&add(&u_half, &k2, dt / 2.0))?;
            let k4 = nl(&add(&full(state), &half(&k3), dt))?;
            let mut acc = full(state);
            acc = add(&acc, &full(&k1), dt / 6.0);
            acc = add(&acc, &half(&add(&k2, &k3, 1.0)), dt / 3.0);
            add(&acc, &k4, dt / 6.0)
        }
        Scheme::Rk4 => {
            let f = |s: &EPState| -> Result<EPState> {
                let (dr, du) = ep_rhs(s, a)?;
                Ok(EPState { rho: dr, u: du })
            };
            let k1 = f(state)?;
            let k2 = f(&add(state, &k1, dt / 2.0))?;
            let k3 = f(&add(state, &k2, dt / 2.0))?;
            let k4 = f(&add(state, &k3, dt))?;
            let mut acc = add(state, &k1, dt / 6.0);
            acc = add(&acc, &add(&k2, &k3, 1.0), dt / 3.0);
            add(&acc, &k4, dt / 6.0)
        }
    };
    let mut rho = out.rho;
    let mut u = out.u;
    rho.dealias(frac);
    u.dealias(frac);
    let strip = |f: RealField1D| {
        let mut c = f.coeffs().to_vec();
        c[0] = Complex64::new(0.0, 0.0);
        RealField1D::from_coeffs(c)
    };
    let out = EPState {
        rho: strip(rho),
        u: strip(u),
    };
    check_finite(out.rho.sup_norm().max(out.u.sup_norm()), t)?;
    Ok(out)
}

/// Trajectory snapshots (stored spectrally) plus the diagnostics series.
#[derive(Debug)]
pub struct RunResult {
    pub snapshots: Vec<(f64, PairField)>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub final_state: PairField,
    pub final_time: f64,
}

/// Integrate from `initial` to `cfg.t_end` (a shorter final step lands
/// exactly on `t_end`). Fails loudly on NaN or on amplitude growth past ten
/// times the initial amplitude.
pub fn run(cfg: &SimConfig, initial: &PairField) -> Result<RunResult> {
    cfg.validate()?;
    if initial.n() != cfg.grid.n_x {
        return Err(Error::validation("initial data does not match the grid"));
    }
    let tol = 1e-11 * initial.sup_norm().max(1.0);
    if initial.plus.mean().abs() > tol || initial.minus.mean().abs() > tol {
        return Err(Error::domain("initial data must be zero-mean"));
    }

    let initial_sup = initial.sup_norm();
    let guard = if initial_sup > 0.0 {
        10.0 * initial_sup
    } else {
        f64::INFINITY
    };

    let mut state = project(initial.clone(), &cfg.grid);
    let mut ep_state = match cfg.formulation {
        Formulation::EulerPoisson => Some(to_euler_poisson(&state, &cfg.params)?),
        Formulation::Layer => None,
    };

    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::new();
    let record = |t: f64, r: &PairField, snaps: &mut Vec<(f64, PairField)>,
                      diags: &mut Vec<DiagnosticsRecord>|
     -> Result<()> {
        let energy = dynamics::energy(r, &cfg.params)?;
        diags.push(DiagnosticsRecord {
            t,
            energy,
            momentum: dynamics::momentum(r),
            mean_plus: r.plus.mean(),
            mean_minus: r.minus.mean(),
            max_amplitude: r.sup_norm(),
        });
        snaps.push((t, r.clone()));
        Ok(())
    };

    record(0.0, &state, &mut snapshots, &mut diagnostics)?;

    let n_full = (cfg.t_end / cfg.dt + 1e-9).floor() as usize;
    let tail = cfg.t_end - n_full as f64 * cfg.dt;
    let mut t = 0.0;
    let mut steps_done = 0usize;
    let advance = |dt: f64,
                       t: &mut f64,
                       state: &mut PairField,
                       ep_state: &mut Option<EPState>|
     -> Result<()> {
        match ep_state {
            Some(s) => {
                *s = step_ep(s, cfg, dt, *t)?;
                *state = from_euler_poisson(s, &cfg.params)?;
            }
            None => {
                *state = step_layer(state, cfg, dt, *t)?;
            }
        }
        *t += dt;
        Ok(())
    };

    for k in 1..=n_full {
        advance(cfg.dt, &mut t, &mut state, &mut ep_state)?;
        steps_done += 1;
        let sup = state.sup_norm();
        check_finite(sup, t)?;
        if sup > guard {
            return Err(Error::BlowUp {
                t,
                reason: format!("amplitude {sup:.3e} exceeds 10x initial {initial_sup:.3e}"),
            });
        }
        if steps_done % cfg.diag_stride == 0 || (k == n_full && tail <= 1e-12) {
            record(t, &state, &mut snapshots, &mut diagnostics)?;
        }
    }
    if tail > 1e-12 {
        advance(tail, &mut t, &mut state, &mut ep_state)?;
        record(t, &state, &mut snapshots, &mut diagnostics)?;
    }
    if let Some(last) = diagnostics.last() {
        if last.t < t {
            record(t, &state, &mut snapshots, &mut diagnostics)?;
        }
    }
    Ok(RunResult {
        snapshots,
        diagnostics,
        final_state: state,
        final_time: t,
    })
}

/// 17-significant-digit float formatting used by every CSV/JSON emitter.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory CSV: header `t,x,r_plus,r_minus`, one row per grid point per
/// snapshot.
pub fn write_trajectory_csv(out: &mut impl Write, result: &RunResult, grid: &GridSpec) -> Result<()> {
    writeln!(out, "t,x,r_plus,r_minus")?;
    let xs = grid.x_points();
    for (t, snap) in &result.snapshots {
        let vp = snap.plus.values();
        let vm = snap.minus.values();
        for (i, &x) in xs.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(*t),
                fmt_f64(x),
                fmt_f64(vp[i]),
                fmt_f64(vm[i])
            )?;
        }
    }
    Ok(())
}

/// Diagnostics CSV: `t,energy,momentum,mean_plus,mean_minus,max_amp`.
pub fn write_diagnostics_csv(out: &mut impl Write, result: &RunResult) -> Result<()> {
    writeln!(out, "t,energy,momentum,mean_plus,mean_minus,max_amp")?;
    for d in &result.diagnostics {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(d.t),
            fmt_f64(d.energy),
            fmt_f64(d.momentum),
            fmt_f64(d.mean_plus),
            fmt_f64(d.mean_minus),
            fmt_f64(d.max_amplitude)
        )?;
    }
    Ok(())
}
