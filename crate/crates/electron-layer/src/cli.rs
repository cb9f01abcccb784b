//! Batch front door: structured config parsing, subcommand dispatch, and
//! deterministic CSV/JSON emission for every module.
//!
//! Config files are flat `section.key = value` text (`#` starts a comment);
//! unknown keys are rejected. Every config value can be overridden by a
//! flag. All floating output is printed with 17 significant digits so files
//! round-trip exactly.

use crate::dispersion::{self, ModelParams};
use crate::error::{Error, Result};
use crate::operlab::{self, FloquetState};
use crate::resonance::{
    self, divisor, DivisorAudit, DivisorKind, DivisorParams, DivisorQuery, EquilibriumMu,
};
use crate::simulator::{self, fmt_f64, Formulation, Scheme, SimConfig};
use crate::spectral::{GridSpec, PairField, RealField1D};
use crate::wavesolver::{self, WaveSolution};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Exit codes: 0 success, 1 usage, 2 validation failure, 3 numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_) | Error::Domain(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::BlowUp { .. }
        | Error::NewtonDiverged { .. }
        | Error::Conditioning(_)
        | Error::Numerical(_) => 3,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "elab",
    about = "Spectral laboratory for 1D Vlasov-Poisson electron layers",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonFlags {
    /// Structured config file (`section.key = value` lines)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Strip half-width
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Amplitude parameter in (0,1)
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Right-moving tangential modes, comma separated
    #[arg(long, value_delimiter = ',')]
    pub splus: Option<Vec<i64>>,
    /// Left-moving tangential modes, comma separated
    #[arg(long, value_delimiter = ',')]
    pub sminus: Option<Vec<i64>>,
    /// Amplitudes in jvec order, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub amps: Option<Vec<f64>>,
    /// Divisor bound size
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Divisor bound exponent
    #[arg(long)]
    pub tau: Option<f64>,
    /// Lattice cutoff for scans/audits
    #[arg(long)]
    pub ellmax: Option<i64>,
    /// Collocation points on the circle
    #[arg(long)]
    pub grid: Option<usize>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time
    #[arg(long, name = "t-end")]
    pub t_end: Option<f64>,
    /// Galerkin cutoff L of the wave solver
    #[arg(long)]
    pub cutoff: Option<i64>,
    /// Newton tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed recorded with the outputs
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate Omega_j, b_j and the bifurcation speed c_j over modes
    Dispersion {
        #[command(flatten)]
        common: CommonFlags,
        /// Modes to tabulate, comma separated
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<i64>>,
    },
    /// Integrate the layer (or Euler-Poisson) system with diagnostics
    Simulate {
        #[command(flatten)]
        common: CommonFlags,
        /// layer | euler_poisson
        #[arg(long)]
        formulation: Option<String>,
        /// lawson_rk4 | rk4
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Newton-Galerkin continuation of a traveling wave
    SolveWave {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Re-check a solved wave: refined residual, invariants, simulation
    ValidateWave {
        #[command(flatten)]
        common: CommonFlags,
        /// Solution JSON produced by solve-wave
        #[arg(long)]
        solution: PathBuf,
        /// Cross-check time
        #[arg(long, name = "t-check")]
        t_check: Option<f64>,
    },
    /// Measure the excluded set of the equilibrium Diophantine condition
    ScanCantor {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long, name = "a-min", allow_negative_numbers = true)]
        a_min: Option<f64>,
        #[arg(long, name = "a-max", allow_negative_numbers = true)]
        a_max: Option<f64>,
    },
    /// Dump Diophantine/transport/Melnikov divisor audits at equilibrium
    AuditDivisors {
        #[command(flatten)]
        common: CommonFlags,
        /// Largest |j|, |j'| in second-order tuples
        #[arg(long)]
        jmax: Option<i64>,
    },
    /// Floquet spectrum of the truncated linearized operator
    Spectrum {
        #[command(flatten)]
        common: CommonFlags,
        /// Solution JSON; the flat-strip equilibrium when absent
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Angle cutoff of the basis
        #[arg(long)]
        lphi: Option<i64>,
        /// Space cutoff of the basis
        #[arg(long)]
        lx: Option<i64>,
    },
    /// Evolve identical data in both formulations and compare (tol 1e-6)
    VerifyEp {
        #[command(flatten)]
        common: CommonFlags,
    },
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

const KNOWN_KEYS: &[&str] = &[
    "model.a",
    "model.eps",
    "model.splus",
    "model.sminus",
    "model.amps",
    "grid.nx",
    "sim.dt",
    "sim.t_end",
    "sim.scheme",
    "sim.formulation",
    "sim.diag_stride",
    "solver.cutoff",
    "solver.tol",
    "solver.eps_path",
    "scan.a_min",
    "scan.a_max",
    "scan.gamma",
    "scan.tau",
    "scan.ellmax",
    "scan.grid_per_unit",
    "audit.gamma",
    "audit.tau",
    "audit.ellmax",
    "audit.jmax",
    "spectrum.lphi",
    "spectrum.lx",
    "spectrum.j_interior",
    "dispersion.modes",
    "validate.t_check",
    "seed",
];

/// Parsed `section.key = value` file with unknown keys rejected.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::validation(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::validation(format!(
                    "config line {}: unknown key `{}`",
                    lineno + 1,
                    key
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::validation(format!("config key `{key}`: bad value `{raw}`"))),
        }
    }

    fn get_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim().parse::<T>())
                .collect::<std::result::Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| Error::validation(format!("config key `{key}`: bad list `{raw}`"))),
        }
    }
}

/// Fully resolved run options: config file values overridden by flags,
/// falling back to documented defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub a: f64,
    pub eps: f64,
    pub splus: Vec<i64>,
    pub sminus: Vec<i64>,
    pub amps: Vec<f64>,
    pub n_x: usize,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub formulation: Formulation,
    pub diag_stride: usize,
    pub cutoff: i64,
    pub tol: f64,
    pub eps_path: Vec<f64>,
    pub gamma: f64,
    pub tau: Option<f64>,
    pub ellmax: i64,
    pub jmax: i64,
    pub a_min: f64,
    pub a_max: f64,
    pub grid_per_unit: usize,
    pub lphi: i64,
    pub lx: i64,
    pub j_interior: i64,
    pub t_check: f64,
    pub modes: Vec<i64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(common: &CommonFlags) -> Result<Self> {
        let file = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let scheme = match file.entries.get("sim.scheme").map(String::as_str) {
            None | Some("lawson_rk4") => Scheme::LawsonRk4,
            Some("rk4") => Scheme::Rk4,
            Some(other) => {
                return Err(Error::validation(format!("unknown scheme `{other}`")));
            }
        };
        let formulation = match file.entries.get("sim.formulation").map(String::as_str) {
            None | Some("layer") => Formulation::Layer,
            Some("euler_poisson") => Formulation::EulerPoisson,
            Some(other) => {
                return Err(Error::validation(format!("unknown formulation `{other}`")));
            }
        };
        let eps = common
            .eps
            .or(file.get("model.eps")?)
            .unwrap_or(1e-4);
        Ok(RunConfig {
            a: common.a.or(file.get("model.a")?).unwrap_or(1.0),
            eps,
            splus: common
                .splus
                .clone()
                .or(file.get_list("model.splus")?)
                .unwrap_or_else(|| vec![1]),
            sminus: common
                .sminus
                .clone()
                .or(file.get_list("model.sminus")?)
                .unwrap_or_default(),
            amps: common
                .amps
                .clone()
                .or(file.get_list("model.amps")?)
                .unwrap_or_default(),
            n_x: common.grid.or(file.get("grid.nx")?).unwrap_or(256),
            dt: common.dt.or(file.get("sim.dt")?).unwrap_or(1e-3),
            t_end: common.t_end.or(file.get("sim.t_end")?).unwrap_or(1.0),
            scheme,
            formulation,
            diag_stride: file.get("sim.diag_stride")?.unwrap_or(100),
            cutoff: common.cutoff.or(file.get("solver.cutoff")?).unwrap_or(8),
            tol: common.tol.or(file.get("solver.tol")?).unwrap_or(1e-11),
            eps_path: file
                .get_list("solver.eps_path")?
                .unwrap_or_else(|| vec![eps]),
            gamma: common
                .gamma
                .or(file.get("scan.gamma")?)
                .or(file.get("audit.gamma")?)
                .unwrap_or(1e-4),
            tau: common.tau.or(file.get("scan.tau")?).or(file.get("audit.tau")?),
            ellmax: common
                .ellmax
                .or(file.get("scan.ellmax")?)
                .or(file.get("audit.ellmax")?)
                .unwrap_or(20),
            jmax: file.get("audit.jmax")?.unwrap_or(12),
            a_min: file.get("scan.a_min")?.unwrap_or(0.5),
            a_max: file.get("scan.a_max")?.unwrap_or(1.5),
            grid_per_unit: file.get("scan.grid_per_unit")?.unwrap_or(10_000),
            lphi: file.get("spectrum.lphi")?.unwrap_or(12),
            lx: file.get("spectrum.lx")?.unwrap_or(16),
            j_interior: file.get("spectrum.j_interior")?.unwrap_or(8),
            t_check: file.get("validate.t_check")?.unwrap_or(1.0),
            modes: file
                .get_list("dispersion.modes")?
                .unwrap_or_else(|| vec![1, 2, 3]),
            out: common.out.clone(),
            seed: common.seed.or(file.get("seed")?).unwrap_or(0),
        })
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let d = self.splus.len() + self.sminus.len();
        let amps = if self.amps.is_empty() {
            vec![1.0; d]
        } else if self.amps.len() == d {
            self.amps.clone()
        } else {
            return Err(Error::validation(format!(
                "{} amplitudes for {} tangential modes",
                self.amps.len(),
                d
            )));
        };
        let (ap, am) = amps.split_at(self.splus.len());
        ModelParams::new(
            self.a,
            self.eps,
            self.splus.clone(),
            self.sminus.clone(),
            ap.to_vec(),
            am.to_vec(),
        )
    }

    fn emit(&self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                fs::write(&path, contents)?;
                Ok(path)
            }
            None => {
                use std::io::Write;
                std::io::stdout().write_all(contents)?;
                Ok(PathBuf::from("-"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_dispersion(cfg: &RunConfig) -> Result<()> {
    let mut csv = String::from("j,omega,b,c\n");
    for &j in &cfg.modes {
        if j == 0 {
            return Err(Error::validation("mode 0 has no dispersion data"));
        }
        let omega = dispersion::omega(cfg.a, j)?;
        let b = dispersion::coupling(cfg.a, j)?;
        let c = omega / j as f64;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            j,
            fmt_f64(omega),
            fmt_f64(b),
            fmt_f64(c)
        ));
    }
    cfg.emit("dispersion.csv", csv.as_bytes())?;
    Ok(())
}

/// Initial data shared by `simulate` and `verify-ep`: the closed-form linear
/// wave at `t = 0` with the configured amplitudes.
fn initial_data(params: &ModelParams, n_x: usize) -> Result<PairField> {
    let mut vp = vec![0.0; n_x];
    let mut vm = vec![0.0; n_x];
    for (k, (p, m)) in vp.iter_mut().zip(vm.iter_mut()).enumerate() {
        let x = 2.0 * std::f64::consts::PI * k as f64 / n_x as f64;
        let (a, b) = dispersion::linear_wave(params, 0.0, x)?;
        *p = a;
        *m = b;
    }
    PairField::zero_mean(RealField1D::from_values(&vp), RealField1D::from_values(&vm))
}

fn cmd_simulate(cfg: &RunConfig, formulation: Formulation, scheme: Scheme) -> Result<()> {
    let params = cfg.model_params()?;
    let sim = SimConfig {
        params: params.clone(),
        grid: GridSpec::line(cfg.n_x)?,
        dt: cfg.dt,
        t_end: cfg.t_end,
        scheme,
        diag_stride: cfg.diag_stride,
        formulation,
    };
    let initial = initial_data(&params, cfg.n_x)?;
    let result = simulator::run(&sim, &initial)?;
    let mut traj = Vec::new();
    simulator::write_trajectory_csv(&mut traj, &result, &sim.grid)?;
    cfg.emit("trajectory.csv", &traj)?;
    let mut diag = Vec::new();
    simulator::write_diagnostics_csv(&mut diag, &result)?;
    cfg.emit("diagnostics.csv", &diag)?;
    Ok(())
}

fn cmd_solve_wave(cfg: &RunConfig) -> Result<()> {
    let params = cfg.model_params()?;
    let sol = wavesolver::solve(&params, cfg.cutoff, cfg.tol, &cfg.eps_path)?;
    let file = wavesolver::to_solution_file(&sol, &params);
    let text = serde_json::to_string_pretty(&file)?;
    cfg.emit("solution.json", text.as_bytes())?;
    let summary = json!({
        "omega": sol.omega,
        "residual_norm": sol.residual_norm,
        "newton_iters": sol.newton_iters,
        "continuation": sol.continuation,
        "seed": cfg.seed,
    });
    cfg.emit("solve_summary.json", serde_json::to_string_pretty(&summary)?.as_bytes())?;
    Ok(())
}

fn load_solution(path: &Path) -> Result<(WaveSolution, ModelParams)> {
    let text = fs::read_to_string(path)?;
    let file: wavesolver::SolutionFile = serde_json::from_str(&text)?;
    Ok(wavesolver::from_solution_file(file))
}

fn cmd_validate_wave(cfg: &RunConfig, solution: &Path, t_check: f64) -> Result<()> {
    let (sol, params) = load_solution(solution)?;
    let report = wavesolver::validate(&sol, &params, t_check, cfg.dt.min(1e-3))?;
    let text = serde_json::to_string_pretty(&report)?;
    cfg.emit("validation.json", text.as_bytes())?;
    eprintln!(
        "validate-wave: residual {:.3e} -> {:.3e} at 2L (growth {:.2}), sim error {:.3e} at t = {}",
        report.residual_norm,
        report.residual_norm_2l,
        report.residual_growth,
        report.sim_error,
        report.t_check
    );
    Ok(())
}

fn cmd_scan_cantor(cfg: &RunConfig, a_min: f64, a_max: f64) -> Result<()> {
    let params = cfg.model_params()?;
    let d = params.dim();
    let q0 = 1u32;
    let tau = cfg.tau.unwrap_or((d as u32 * q0) as f64);
    let grid_n = ((a_max - a_min) * cfg.grid_per_unit as f64).round() as usize;
    let scan = resonance::cantor_measure(
        &params,
        a_min,
        a_max,
        cfg.gamma,
        tau,
        cfg.ellmax,
        grid_n.max(10),
    )?;
    let text = serde_json::to_string_pretty(&scan)?;
    cfg.emit("scan.json", text.as_bytes())?;
    eprintln!(
        "scan-cantor: excluded fraction {:.4e} over [{a_min}, {a_max}] at gamma = {:.1e}, tau = {tau}",
        scan.excluded_fraction, cfg.gamma
    );
    Ok(())
}

fn cmd_audit_divisors(cfg: &RunConfig, jmax: i64) -> Result<()> {
    let params = cfg.model_params()?;
    let omega = dispersion::omega_eq(&params)?;
    let jvec = params.jvec();
    let mu = EquilibriumMu { a: params.a };
    let d = params.dim();
    let q0 = 1u32;
    let dp = DivisorParams {
        gamma: cfg.gamma,
        tau: cfg.tau.unwrap_or((d as u32 * q0) as f64),
        tau1: cfg.tau.unwrap_or((d as u32 * q0) as f64),
        upsilon: resonance::upsilon_default(q0),
    };
    let lat = crate::spectral::Lattice::new(d, cfg.ellmax);
    let mut audits: Vec<DivisorAudit> = Vec::new();
    // Diophantine rows over canonical representatives
    for ell in lat.half_lattice() {
        let q = DivisorQuery {
            kind: DivisorKind::Dioph,
            a: params.a,
            omega: &omega,
            jvec: &jvec,
            ell: &ell,
            j: None,
            j_prime: None,
            kappa: None,
            mu: &mu,
            transport_c: None,
        };
        audits.push(divisor(&q, &dp)?);
        // transport rows on the same lattice (j forced by momentum)
        let drift: i64 = jvec.iter().zip(&ell).map(|(a, b)| a * b).sum();
        if drift != 0 {
            for kappa in [1i8, -1] {
                let q = DivisorQuery {
                    kind: DivisorKind::Transport,
                    a: params.a,
                    omega: &omega,
                    jvec: &jvec,
                    ell: &ell,
                    j: Some(-drift),
                    j_prime: None,
                    kappa: Some(kappa),
                    mu: &mu,
                    transport_c: None,
                };
                audits.push(divisor(&q, &dp)?);
            }
        }
    }
    // Melnikov rows
    let summary = operlab::kam_audit(&mu, &params, &omega, &dp, cfg.ellmax, jmax)?;
    audits.extend(summary.audits);
    let mut csv = Vec::new();
    resonance::write_audit_csv(&mut csv, &audits)?;
    cfg.emit("audits.csv", &csv)?;
    let pass = audits.iter().filter(|a| a.pass).count();
    eprintln!(
        "audit-divisors: {}/{} tuples pass at gamma = {:.1e}",
        pass,
        audits.len(),
        cfg.gamma
    );
    Ok(())
}

fn cmd_spectrum(cfg: &RunConfig, solution: Option<&Path>) -> Result<()> {
    let (sol, params) = match solution {
        Some(path) => load_solution(path)?,
        None => {
            let params = cfg.model_params()?;
            (
                WaveSolution {
                    wave: wavesolver::TorusWave::zero(&params.jvec(), cfg.cutoff),
                    omega: dispersion::omega_eq(&params)?,
                    eps: params.eps,
                    residual_norm: 0.0,
                    newton_iters: 0,
                    continuation: Vec::new(),
                },
                params,
            )
        }
    };
    let fm = operlab::linearized_floquet(
        &FloquetState::Wave(&sol),
        &params,
        cfg.lphi,
        cfg.lx,
        Some(&[0]),
    )?;
    // the remainder fit keeps the equilibrium transport constants: the
    // measured spectral drift of reversible waves is far below the one-step
    // straightening estimate, which would pollute the tail
    let report = operlab::spectrum(&fm, cfg.j_interior)?;
    if !sol.wave.coeffs.is_empty() {
        let (cp, cm) = operlab::transport_constant(&sol, &params)?;
        eprintln!(
            "spectrum: one-step transport estimate c_+ - a = {:.3e}, c_- + a = {:.3e}",
            cp - params.a,
            cm + params.a
        );
    }
    let mut csv = Vec::new();
    operlab::write_spectrum_csv(&mut csv, &report)?;
    cfg.emit("spectrum.csv", &csv)?;
    eprintln!(
        "spectrum: {} eigenvalues, max |Re| = {:.3e} on |j| <= {}, tail decay exponent {:.3}",
        report.eigenvalues.len(),
        report.max_abs_real,
        report.j_interior,
        report.tail_fit.decay_exponent
    );
    Ok(())
}

const EP_AGREEMENT_TOL: f64 = 1e-6;

fn cmd_verify_ep(cfg: &RunConfig) -> Result<()> {
    let params = cfg.model_params()?;
    let grid = GridSpec::line(cfg.n_x)?;
    let initial = initial_data(&params, cfg.n_x)?;
    let mut sim = SimConfig {
        params: params.clone(),
        grid,
        dt: cfg.dt,
        t_end: cfg.t_end,
        scheme: Scheme::LawsonRk4,
        diag_stride: usize::MAX / 2,
        formulation: Formulation::Layer,
    };
    let layer = simulator::run(&sim, &initial)?.final_state;
    sim.formulation = Formulation::EulerPoisson;
    let ep = simulator::run(&sim, &initial)?.final_state;
    let mismatch = layer.sub(&ep).sup_norm();
    let report = json!({
        "t_end": cfg.t_end,
        "n_x": cfg.n_x,
        "dt": cfg.dt,
        "sup_mismatch": mismatch,
        "tolerance": EP_AGREEMENT_TOL,
        "pass": mismatch <= EP_AGREEMENT_TOL,
    });
    cfg.emit("verify_ep.json", serde_json::to_string_pretty(&report)?.as_bytes())?;
    eprintln!("verify-ep: sup mismatch {mismatch:.3e} at t = {}", cfg.t_end);
    if mismatch > EP_AGREEMENT_TOL {
        return Err(Error::validation(format!(
            "formulations disagree: {mismatch:.3e} > {EP_AGREEMENT_TOL:.1e}"
        )));
    }
    Ok(())
}

/// Dispatch a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = (|| -> Result<()> {
        match &cli.command {
            Command::Dispersion { common, modes } => {
                let mut cfg = RunConfig::resolve(common)?;
                if let Some(modes) = modes {
                    cfg.modes = modes.clone();
                }
                cmd_dispersion(&cfg)
            }
            Command::Simulate {
                common,
                formulation,
                scheme,
            } => {
                let cfg = RunConfig::resolve(common)?;
                let formulation = match formulation.as_deref() {
                    None => cfg.formulation,
                    Some("layer") => Formulation::Layer,
                    Some("euler_poisson") => Formulation::EulerPoisson,
                    Some(other) => {
                        return Err(Error::validation(format!("unknown formulation `{other}`")))
                    }
                };
                let scheme = match scheme.as_deref() {
                    None => cfg.scheme,
                    Some("lawson_rk4") => Scheme::LawsonRk4,
                    Some("rk4") => Scheme::Rk4,
                    Some(other) => {
                        return Err(Error::validation(format!("unknown scheme `{other}`")))
                    }
                };
                cmd_simulate(&cfg, formulation, scheme)
            }
            Command::SolveWave { common } => {
                let cfg = RunConfig::resolve(common)?;
                cmd_solve_wave(&cfg)
            }
            Command::ValidateWave {
                common,
                solution,
                t_check,
            } => {
                let cfg = RunConfig::resolve(common)?;
                let t = t_check.unwrap_or(cfg.t_check);
                cmd_validate_wave(&cfg, solution, t)
            }
            Command::ScanCantor {
                common,
                a_min,
                a_max,
            } => {
                let cfg = RunConfig::resolve(common)?;
                let lo = a_min.unwrap_or(cfg.a_min);
                let hi = a_max.unwrap_or(cfg.a_max);
                cmd_scan_cantor(&cfg, lo, hi)
            }
            Command::AuditDivisors { common, jmax } => {
                let cfg = RunConfig::resolve(common)?;
                let jmax = jmax.unwrap_or(cfg.jmax);
                cmd_audit_divisors(&cfg, jmax)
            }
            Command::Spectrum {
                common,
                solution,
                lphi,
                lx,
            } => {
                let mut cfg = RunConfig::resolve(common)?;
                if let Some(l) = lphi {
                    cfg.lphi = *l;
                }
                if let Some(l) = lx {
                    cfg.lx = *l;
                }
                cmd_spectrum(&cfg, solution.as_deref())
            }
            Command::VerifyEp { common } => {
                let cfg = RunConfig::resolve(common)?;
                cmd_verify_ep(&cfg)
            }
        }
    })();
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
