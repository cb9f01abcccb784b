//! Numerical audits of the non-resonance structure: momentum filters,
//! Diophantine / transport / Melnikov divisor checks, Russmann-style
//! transversality estimates, non-degeneracy of the frequency map, and
//! Cantor-set measure scans over the strip half-width `a`.
//!
//! Conventions. Angle brackets on lattice vectors are
//! `<l> = max(1, |l_1|, ..., |l_d|)`; on single integers `<j> = max(1, |j|)`.
//! The cross-Melnikov weight uses `<j,j'> = |j| + |j'|`, the reading implied
//! by the lower bound `Omega_|j| + Omega_|j'| >= a_0 (|j| + |j'|)` on
//! same-sign pairs.

use crate::dispersion::{self, ModelParams};
use crate::error::{Error, Result};
use crate::simulator::fmt_f64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Which non-resonance family a divisor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorKind {
    /// `|omega . l| > gamma / <l>^tau`, `l != 0`.
    Dioph,
    /// `|omega . l + j c_kappa| > gamma^upsilon / <l>^tau1` on `jvec.l + j = 0`.
    Transport,
    /// `|omega . l + mu_{j,kappa}| > gamma <j> / <l>^tau` on `jvec.l + j = 0`.
    Melnikov1,
    /// `|omega . l + mu_{j,kappa} - mu_{j',kappa}| > 2 gamma <j-j'> / <l>^tau`.
    Melnikov2Diag,
    /// `|omega . l + mu_{j,+} - mu_{j',-}| > 2 gamma <j,j'> / <l>^tau`.
    Melnikov2Cross,
}

impl DivisorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DivisorKind::Dioph => "dioph",
            DivisorKind::Transport => "transport",
            DivisorKind::Melnikov1 => "melnikov1",
            DivisorKind::Melnikov2Diag => "melnikov2_diag",
            DivisorKind::Melnikov2Cross => "melnikov2_cross",
        }
    }
}

/// One non-resonance record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisorAudit {
    pub kind: DivisorKind,
    pub ell: Vec<i64>,
    pub j: Option<i64>,
    pub j_prime: Option<i64>,
    /// Sign slot of the eigenvalue(s); `+1` or `-1`, absent for `dioph`.
    pub kappa: Option<i8>,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Knobs of the divisor bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisorParams {
    pub gamma: f64,
    pub tau: f64,
    /// Exponent of the transport family (its own Cantor set uses `tau_1`).
    pub tau1: f64,
    /// `gamma^upsilon` weakening of the transport bound; the KAM scheme fixes
    /// `upsilon = 1/(4 q0 + 1)`, exposed here as data.
    pub upsilon: f64,
}

impl DivisorParams {
    pub fn new(gamma: f64, tau: f64) -> Self {
        DivisorParams {
            gamma,
            tau,
            tau1: tau,
            upsilon: upsilon_default(1),
        }
    }
}

/// `upsilon = 1/(4 q0 + 1)`.
pub fn upsilon_default(q0: u32) -> f64 {
    1.0 / (4.0 * q0 as f64 + 1.0)
}

/// `max(1, |l|_inf)`.
pub fn bracket_ell(ell: &[i64]) -> f64 {
    ell.iter().map(|l| l.abs()).max().unwrap_or(0).max(1) as f64
}

/// `max(1, |j|)`.
pub fn bracket_j(j: i64) -> f64 {
    j.abs().max(1) as f64
}

/// The momentum condition `jvec . l + j - j' = 0` (absent indices count 0).
pub fn momentum_ok(jvec: &[i64], ell: &[i64], j: i64, j_prime: Option<i64>) -> bool {
    debug_assert_eq!(jvec.len(), ell.len(), "dimension mismatch");
    let dot: i64 = jvec.iter().zip(ell).map(|(a, b)| a * b).sum();
    dot + j - j_prime.unwrap_or(0) == 0
}

/// Eigenvalue provider `(j, kappa) -> mu_{j,kappa}`. At the flat strip the
/// provider is `kappa Omega_j(a)`.
pub trait MuProvider: Sync {
    fn mu(&self, j: i64, kappa: i8) -> Option<f64>;
}

/// Equilibrium eigenvalues `mu_{j,kappa} = kappa Omega_j(a)`.
pub struct EquilibriumMu {
    pub a: f64,
}

impl MuProvider for EquilibriumMu {
    fn mu(&self, j: i64, kappa: i8) -> Option<f64> {
        dispersion::omega(self.a, j).ok().map(|w| kappa as f64 * w)
    }
}

/// First-order perturbed eigenvalues `kappa Omega_j + (c_kappa - kappa a) j`.
pub struct TransportShiftedMu {
    pub a: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl MuProvider for TransportShiftedMu {
    fn mu(&self, j: i64, kappa: i8) -> Option<f64> {
        let w = dispersion::omega(self.a, j).ok()?;
        let c = if kappa > 0 { self.c_plus } else { self.c_minus };
        Some(kappa as f64 * w + (c - kappa as f64 * self.a) * j as f64)
    }
}

/// Arguments of one audit: the tuple and the eigenvalue data it draws on.
pub struct DivisorQuery<'a> {
    pub kind: DivisorKind,
    pub a: f64,
    pub omega: &'a [f64],
    pub jvec: &'a [i64],
    pub ell: &'a [i64],
    pub j: Option<i64>,
    pub j_prime: Option<i64>,
    pub kappa: Option<i8>,
    pub mu: &'a dyn MuProvider,
    /// Transport constants `c_+-`; defaults to the equilibrium `+-a`.
    pub transport_c: Option<(f64, f64)>,
}

fn dot_f(w: &[f64], l: &[i64]) -> f64 {
    w.iter().zip(l).map(|(a, &b)| a * b as f64).sum()
}

/// Evaluate one divisor and its lower bound. Tuples violating the kind's
/// momentum condition or falling in its trivial excluded set are errors.
pub fn divisor(q: &DivisorQuery, p: &DivisorParams) -> Result<DivisorAudit> {
    let ell = q.ell;
    let wl = dot_f(q.omega, ell);
    let lb = bracket_ell(ell);
    let (value, bound) = match q.kind {
        DivisorKind::Dioph => {
            if ell.iter().all(|&l| l == 0) {
                return Err(Error::domain("dioph divisor requires l != 0"));
            }
            (wl, p.gamma / lb.powf(p.tau))
        }
        DivisorKind::Transport => {
            let j = q.j.ok_or_else(|| Error::domain("transport needs j"))?;
            if !momentum_ok(q.jvec, ell, j, None) {
                return Err(Error::domain("momentum violation: jvec.l + j != 0"));
            }
            if j == 0 && ell.iter().all(|&l| l == 0) {
                return Err(Error::domain("(l, j) = (0, 0) excluded"));
            }
            let kappa = q.kappa.ok_or_else(|| Error::domain("transport needs kappa"))?;
            let (cp, cm) = q.transport_c.unwrap_or((q.a, -q.a));
            let c = if kappa > 0 { cp } else { cm };
            (
                wl + j as f64 * c,
                p.gamma.powf(p.upsilon) / lb.powf(p.tau1),
            )
        }
        DivisorKind::Melnikov1 => {
            let j = q.j.ok_or_else(|| Error::domain("melnikov1 needs j"))?;
            if j == 0 {
                return Err(Error::domain("melnikov1 requires j != 0"));
            }
            if !momentum_ok(q.jvec, ell, j, None) {
                return Err(Error::domain("momentum violation: jvec.l + j != 0"));
            }
            let kappa = q.kappa.ok_or_else(|| Error::domain("melnikov1 needs kappa"))?;
            let mu = q
                .mu
                .mu(j, kappa)
                .ok_or_else(|| Error::domain(format!("no eigenvalue for (j, kappa) = ({j}, {kappa})")))?;
            (wl + mu, p.gamma * bracket_j(j) / lb.powf(p.tau))
        }
        DivisorKind::Melnikov2Diag => {
            let j = q.j.ok_or_else(|| Error::domain("melnikov2 needs j"))?;
            let jp = q.j_prime.ok_or_else(|| Error::domain("melnikov2 needs j'"))?;
            if j == 0 || jp == 0 {
                return Err(Error::domain("melnikov2 requires j, j' != 0"));
            }
            if !momentum_ok(q.jvec, ell, j, Some(jp)) {
                return Err(Error::domain("momentum violation: jvec.l + j - j' != 0"));
            }
            if j == jp && ell.iter().all(|&l| l == 0) {
                return Err(Error::domain("trivial resonance (0, j, j) excluded"));
            }
            let kappa = q.kappa.ok_or_else(|| Error::domain("melnikov2 needs kappa"))?;
            let (mu1, mu2) = (
                q.mu.mu(j, kappa)
                    .ok_or_else(|| Error::domain(format!("no eigenvalue for j = {j}")))?,
                q.mu.mu(jp, kappa)
                    .ok_or_else(|| Error::domain(format!("no eigenvalue for j' = {jp}")))?,
            );
            (
                wl + mu1 - mu2,
                2.0 * p.gamma * bracket_j(j - jp) / lb.powf(p.tau),
            )
        }
        DivisorKind::Melnikov2Cross => {
            let j = q.j.ok_or_else(|| Error::domain("melnikov2 needs j"))?;
            let jp = q.j_prime.ok_or_else(|| Error::domain("melnikov2 needs j'"))?;
            if j == 0 || jp == 0 {
                return Err(Error::domain("melnikov2 requires j, j' != 0"));
            }
            if !momentum_ok(q.jvec, ell, j, Some(jp)) {
                return Err(Error::domain("momentum violation: jvec.l + j - j' != 0"));
            }
            let (mu1, mu2) = (
                q.mu.mu(j, 1)
                    .ok_or_else(|| Error::domain(format!("no eigenvalue for (j, +) = {j}")))?,
                q.mu.mu(jp, -1)
                    .ok_or_else(|| Error::domain(format!("no eigenvalue for (j', -) = {jp}")))?,
            );
            let weight = (j.abs() + jp.abs()) as f64; // <j,j'> = |j| + |j'|
            (wl + mu1 - mu2, 2.0 * p.gamma * weight / lb.powf(p.tau))
        }
    };
    Ok(DivisorAudit {
        kind: q.kind,
        ell: ell.to_vec(),
        j: q.j,
        j_prime: q.j_prime,
        kappa: q.kappa,
        value,
        bound,
        pass: value.abs() > bound,
    })
}

/// Audit CSV: `kind,ell,j,jprime,value,bound,pass`.
pub fn write_audit_csv(out: &mut impl Write, audits: &[DivisorAudit]) -> Result<()> {
    writeln!(out, "kind,ell,j,jprime,value,bound,pass")?;
    for a in audits {
        let ell = a
            .ell
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            a.kind.as_str(),
            ell,
            a.j.map_or(String::new(), |j| j.to_string()),
            a.j_prime.map_or(String::new(), |j| j.to_string()),
            fmt_f64(a.value),
            fmt_f64(a.bound),
            a.pass
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Transversality
// ---------------------------------------------------------------------------

/// Derivatives `d^k/da^k Omega_j(a)` for `k <= 4` in closed form; beyond that
/// by Richardson-extrapolated central differences on the fourth derivative.
pub fn omega_deriv(a: f64, j: i64, k: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::domain("omega_deriv undefined at j = 0"));
    }
    let sign = j.signum() as f64;
    let jf = j.abs() as f64;
    let j2 = jf * jf;
    let g = (a * a * j2 + 1.0).sqrt();
    let closed = |k: usize| -> f64 {
        match k {
            0 => g,
            1 => a * j2 / g,
            2 => j2 / (g * g * g),
            3 => -3.0 * a * j2 * j2 / g.powi(5),
            4 => -3.0 * j2 * j2 * (1.0 - 4.0 * a * a * j2) / g.powi(7),
            _ => unreachable!(),
        }
    };
    if k <= 4 {
        return Ok(sign * closed(k));
    }
    // Richardson central differences applied to the k-4-th derivative of
    // the closed-form fourth derivative
    let f4 = |a: f64| -> f64 {
        let g = (a * a * j2 + 1.0).sqrt();
        -3.0 * j2 * j2 * (1.0 - 4.0 * a * a * j2) / g.powi(7)
    };
    let mut d: Box<dyn Fn(f64) -> f64> = Box::new(f4);
    for _ in 0..(k - 4) {
        let prev = d;
        let h = 1e-4;
        d = Box::new(move |x: f64| {
            let coarse = (prev(x + h) - prev(x - h)) / (2.0 * h);
            let fine = (prev(x + h / 2.0) - prev(x - h / 2.0)) / h;
            (4.0 * fine - coarse) / 3.0
        });
    }
    Ok(sign * d(a))
}

/// The five momentum-admissible frequency combinations whose transversality
/// the KAM scheme needs, here as curves of `a`.
#[derive(Debug, Clone)]
pub enum FrequencyCurve {
    /// (i) `omega_Eq(a) . l`, `l != 0`.
    EqDot { ell: Vec<i64> },
    /// (ii) `(omega_Eq(a) - jvec a) . l`, `l != 0`.
    EqShifted { ell: Vec<i64> },
    /// (iii) `omega_Eq(a) . l + kappa Omega_j(a)` on `jvec.l + j = 0`.
    FirstOrder { ell: Vec<i64>, j: i64, kappa: i8 },
    /// (iv) `omega_Eq(a) . l + kappa (Omega_j - Omega_j')` on
    /// `jvec.l + j - j' = 0`, `(l, j, j') != (0, j, j)`.
    SecondOrderDiag {
        ell: Vec<i64>,
        j: i64,
        j_prime: i64,
        kappa: i8,
    },
    /// (v) `omega_Eq(a) . l + Omega_j + Omega_j'` on `jvec.l + j - j' = 0`
    /// (the cross combination `mu_{j,+} - mu_{j',-}` at the flat strip).
    SecondOrderCross { ell: Vec<i64>, j: i64, j_prime: i64 },
}

impl FrequencyCurve {
    pub fn ell(&self) -> &[i64] {
        match self {
            FrequencyCurve::EqDot { ell }
            | FrequencyCurve::EqShifted { ell }
            | FrequencyCurve::FirstOrder { ell, .. }
            | FrequencyCurve::SecondOrderDiag { ell, .. }
            | FrequencyCurve::SecondOrderCross { ell, .. } => ell,
        }
    }

    fn excluded_modes(params: &ModelParams, kappa: i8) -> Vec<i64> {
        let set = if kappa > 0 {
            &params.s_plus
        } else {
            &params.s_minus
        };
        set.iter().flat_map(|&j| [j, -j]).collect()
    }

    /// Momentum and excluded-index screening.
    pub fn admissible(&self, params: &ModelParams) -> Result<()> {
        let jvec = params.jvec();
        match self {
            FrequencyCurve::EqDot { ell } | FrequencyCurve::EqShifted { ell } => {
                if ell.iter().all(|&l| l == 0) {
                    return Err(Error::domain("l = 0 excluded"));
                }
                if ell.len() != jvec.len() {
                    return Err(Error::domain("dimension mismatch"));
                }
            }
            FrequencyCurve::FirstOrder { ell, j, kappa } => {
                if *j == 0 || Self::excluded_modes(params, *kappa).contains(j) {
                    return Err(Error::domain("j lies in the tangential set"));
                }
                if !momentum_ok(&jvec, ell, *j, None) {
                    return Err(Error::domain("momentum violation"));
                }
            }
            FrequencyCurve::SecondOrderDiag {
                ell,
                j,
                j_prime,
                kappa,
            } => {
                let excl = Self::excluded_modes(params, *kappa);
                if *j == 0 || *j_prime == 0 || excl.contains(j) || excl.contains(j_prime) {
                    return Err(Error::domain("index lies in the tangential set"));
                }
                if j == j_prime && ell.iter().all(|&l| l == 0) {
                    return Err(Error::domain("trivial tuple (0, j, j) excluded"));
                }
                if !momentum_ok(&jvec, ell, *j, Some(*j_prime)) {
                    return Err(Error::domain("momentum violation"));
                }
            }
            FrequencyCurve::SecondOrderCross { ell, j, j_prime } => {
                if *j == 0
                    || *j_prime == 0
                    || Self::excluded_modes(params, 1).contains(j)
                    || Self::excluded_modes(params, -1).contains(j_prime)
                {
                    return Err(Error::domain("index lies in the tangential set"));
                }
                if !momentum_ok(&jvec, ell, *j, Some(*j_prime)) {
                    return Err(Error::domain("momentum violation"));
                }
            }
        }
        Ok(())
    }

    /// `d^k/da^k` of the combination at `a`.
    pub fn deriv(&self, params: &ModelParams, a: f64, k: usize) -> Result<f64> {
        let kappas = params.kappas();
        let jvec = params.jvec();
        let eq_dot = |ell: &[i64], k: usize| -> Result<f64> {
            let mut acc = 0.0;
            for (slot, &l) in ell.iter().enumerate() {
                if l == 0 {
                    continue;
                }
                acc += kappas[slot] as f64 * l as f64 * omega_deriv(a, jvec[slot], k)?;
            }
            Ok(acc)
        };
        match self {
            FrequencyCurve::EqDot { ell } => eq_dot(ell, k),
            FrequencyCurve::EqShifted { ell } => {
                let mut acc = eq_dot(ell, k)?;
                let jl: i64 = jvec.iter().zip(ell).map(|(a, b)| a * b).sum();
                match k {
                    0 => acc -= a * jl as f64,
                    1 => acc -= jl as f64,
                    _ => {}
                }
                Ok(acc)
            }
            FrequencyCurve::FirstOrder { ell, j, kappa } => {
                Ok(eq_dot(ell, k)? + *kappa as f64 * omega_deriv(a, *j, k)?)
            }
            FrequencyCurve::SecondOrderDiag {
                ell,
                j,
                j_prime,
                kappa,
            } => Ok(eq_dot(ell, k)?
                + *kappa as f64 * (omega_deriv(a, *j, k)? - omega_deriv(a, *j_prime, k)?)),
            FrequencyCurve::SecondOrderCross { ell, j, j_prime } => {
                Ok(eq_dot(ell, k)? + omega_deriv(a, *j, k)? + omega_deriv(a, *j_prime, k)?)
            }
        }
    }
}

/// Result of a transversality scan: the inf over `a` of the max over
/// `k <= q0` of `|d^k f(a)|`, with the minimizing `a` and the `<l>` weight
/// for the ratio test against `rho_0 <l>`.
#[derive(Debug, Clone, Serialize)]
pub struct TransversalityEstimate {
    pub inf_max: f64,
    pub arg_min: f64,
    pub ell_bracket: f64,
}

pub fn transversality(
    curve: &FrequencyCurve,
    params: &ModelParams,
    a_lo: f64,
    a_hi: f64,
    q0: usize,
    grid_n: usize,
) -> Result<TransversalityEstimate> {
    if !(a_lo < a_hi) || a_lo <= 0.0 {
        return Err(Error::domain("need 0 < a_lo < a_hi"));
    }
    curve.admissible(params)?;
    let mut inf_max = f64::INFINITY;
    let mut arg_min = a_lo;
    for i in 0..=grid_n {
        let a = a_lo + (a_hi - a_lo) * i as f64 / grid_n as f64;
        let mut best = 0.0f64;
        for k in 0..=q0 {
            best = best.max(curve.deriv(params, a, k)?.abs());
        }
        if best < inf_max {
            inf_max = best;
            arg_min = a;
        }
    }
    Ok(TransversalityEstimate {
        inf_max,
        arg_min,
        ell_bracket: bracket_ell(curve.ell()),
    })
}

// ---------------------------------------------------------------------------
// Non-degeneracy
// ---------------------------------------------------------------------------

/// Certify non-degeneracy of `a -> omega_Eq(a)` over `[a_lo, a_hi]` through
/// the Vandermonde system in the squared modes: the matrix `(j_k^{2n})_{n,k}`
/// is invertible iff all `j_k^2` are distinct.
pub fn nondegeneracy(s_plus: &[i64], s_minus: &[i64], _a_lo: f64, _a_hi: f64) -> Result<bool> {
    if s_plus.iter().any(|j| s_minus.contains(j)) {
        return Err(Error::validation("tangential sets must be disjoint"));
    }
    let mut modes: Vec<i64> = s_plus.iter().chain(s_minus).copied().collect();
    if modes.is_empty() {
        return Err(Error::validation("no tangential modes"));
    }
    if modes.iter().any(|&j| j <= 0) {
        return Err(Error::validation("modes must be positive"));
    }
    modes.sort_unstable();
    let d = modes.len();
    // Vandermonde determinant in x_k = j_k^2: prod_{k<l} (x_l - x_k),
    // normalized by the node spread to give a scale-free invertibility test
    let xs: Vec<f64> = modes.iter().map(|&j| (j * j) as f64).collect();
    let mut det = 1.0f64;
    let mut scale = 1.0f64;
    for l in 1..d {
        for k in 0..l {
            det *= xs[l] - xs[k];
            scale *= xs[l].max(xs[k]);
        }
    }
    Ok(det.abs() > 1e-10 * scale)
}

// ---------------------------------------------------------------------------
// Cantor measure scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CantorScan {
    pub gamma: f64,
    pub tau: f64,
    pub ell_max: i64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub grid_n: usize,
    pub excluded_fraction: f64,
    /// Maximal merged intervals of excluded grid points.
    pub intervals: Vec<(f64, f64)>,
}

/// Scan `[a_lo, a_hi]`, marking `a` excluded when some `0 < <l> <= ell_max`
/// violates `|omega_Eq(a) . l| > gamma / <l>^tau`. By oddness of the divisor
/// only canonical representatives of `+-l` need checking.
pub fn cantor_measure(
    template: &ModelParams,
    a_lo: f64,
    a_hi: f64,
    gamma: f64,
    tau: f64,
    ell_max: i64,
    a_grid_n: usize,
) -> Result<CantorScan> {
    if !(a_lo < a_hi) || a_lo <= 0.0 {
        return Err(Error::domain("need 0 < a_lo < a_hi"));
    }
    template.validate()?;
    let d = template.dim();
    let lat = crate::spectral::Lattice::new(d, ell_max);
    let reps = lat.half_lattice();
    let kappas: Vec<f64> = template.kappas().iter().map(|&k| k as f64).collect();
    let jvec = template.jvec();

    let excluded: Vec<bool> = (0..=a_grid_n)
        .into_par_iter()
        .map(|i| {
            let a = a_lo + (a_hi - a_lo) * i as f64 / a_grid_n as f64;
            let omegas: Vec<f64> = jvec
                .iter()
                .zip(&kappas)
                .map(|(&j, &kap)| kap * (a * a * (j * j) as f64 + 1.0).sqrt())
                .collect();
            reps.iter().any(|ell| {
                let wl: f64 = omegas.iter().zip(ell).map(|(w, &l)| w * l as f64).sum();
                let lb = bracket_ell(ell);
                wl.abs() <= gamma / lb.powf(tau)
            })
        })
        .collect();

    let total = excluded.len();
    let count = excluded.iter().filter(|&&b| b).count();
    let step = (a_hi - a_lo) / a_grid_n as f64;
    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &b) in excluded.iter().enumerate() {
        match (b, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                intervals.push((a_lo + s as f64 * step, a_lo + (i - 1) as f64 * step));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((a_lo + s as f64 * step, a_hi));
    }
    Ok(CantorScan {
        gamma,
        tau,
        ell_max,
        a_lo,
        a_hi,
        grid_n: a_grid_n,
        excluded_fraction: count as f64 / total as f64,
        intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params_12() -> ModelParams {
        ModelParams::new(1.0, 0.1, vec![1], vec![2], vec![1.0], vec![1.0]).unwrap()
    }

    #[test]
    fn momentum_examples() {
        assert!(momentum_ok(&[1, 2], &[-2, 1], 0, None));
        assert!(momentum_ok(&[1], &[1], 2, Some(3)));
        assert!(!momentum_ok(&[1], &[1], 1, Some(1)));
    }

    #[test]
    fn melnikov2_diag_equilibrium_value() {
        // a=1, S+ = {1}, jvec = (1), kappa = +, l = 1, j = 2, j' = 3:
        // value = sqrt2 + sqrt5 - sqrt10 (direct arithmetic oracle)
        let p = ModelParams::new(1.0, 0.1, vec![1], vec![], vec![1.0], vec![]).unwrap();
        let mu = EquilibriumMu { a: 1.0 };
        let q = DivisorQuery {
            kind: DivisorKind::Melnikov2Diag,
            a: 1.0,
            omega: &dispersion::omega_eq(&p).unwrap(),
            jvec: &p.jvec(),
            ell: &[1],
            j: Some(2),
            j_prime: Some(3),
            kappa: Some(1),
            mu: &mu,
            transport_c: None,
        };
        let audit = divisor(&q, &DivisorParams::new(1e-2, 2.0)).unwrap();
        let oracle = 2f64.sqrt() + 5f64.sqrt() - 10f64.sqrt();
        assert_relative_eq!(audit.value, oracle, epsilon = 1e-12);
        assert_relative_eq!(audit.value, 0.48800, epsilon = 1e-5);
        assert!(audit.pass);
    }

    #[test]
    fn dioph_value() {
        let p = params_12();
        let mu = EquilibriumMu { a: 1.0 };
        let q = DivisorQuery {
            kind: DivisorKind::Dioph,
            a: 1.0,
            omega: &dispersion::omega_eq(&p).unwrap(),
            jvec: &p.jvec(),
            ell: &[1, -1],
            j: None,
            j_prime: None,
            kappa: None,
            mu: &mu,
            transport_c: None,
        };
        let audit = divisor(&q, &DivisorParams::new(0.1, 2.0)).unwrap();
        assert_relative_eq!(audit.value, 2f64.sqrt() + 5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(audit.value, 3.65028, epsilon = 1e-5);
        // |sqrt2 + sqrt5| = 3.650 > 0.1 / 2^2: not excluded
        assert!(audit.pass);
    }

    #[test]
    fn trivial_resonance_is_rejected() {
        let p = params_12();
        let mu = EquilibriumMu { a: 1.0 };
        let q = DivisorQuery {
            kind: DivisorKind::Melnikov2Diag,
            a: 1.0,
            omega: &dispersion::omega_eq(&p).unwrap(),
            jvec: &p.jvec(),
            ell: &[0, 0],
            j: Some(5),
            j_prime: Some(5),
            kappa: Some(1),
            mu: &mu,
            transport_c: None,
        };
        assert!(divisor(&q, &DivisorParams::new(0.1, 2.0)).is_err());
    }

    #[test]
    fn divisor_odd_symmetry_at_equilibrium() {
        let p = params_12();
        let omega = dispersion::omega_eq(&p).unwrap();
        let jvec = p.jvec();
        let mu = EquilibriumMu { a: 1.0 };
        let dp = DivisorParams::new(1e-3, 2.5);
        let eval = |e: &[i64], j: i64, jp: i64| {
            divisor(
                &DivisorQuery {
                    kind: DivisorKind::Melnikov2Diag,
                    a: 1.0,
                    omega: &omega,
                    jvec: &jvec,
                    ell: e,
                    j: Some(j),
                    j_prime: Some(jp),
                    kappa: Some(1),
                    mu: &mu,
                    transport_c: None,
                },
                &dp,
            )
            .unwrap()
            .value
        };
        for (ell, j, jp) in [(vec![1i64, 0], 2i64, 3i64), (vec![-1, 2], 6, 9), (vec![2, -1], 3, 3)] {
            let neg: Vec<i64> = ell.iter().map(|&l| -l).collect();
            assert_relative_eq!(eval(&ell, j, jp), -eval(&neg, -j, -jp), epsilon = 1e-12);
        }
    }

    #[test]
    fn same_sign_diag_divisor_has_transport_lower_bound() {
        // case analysis of the transversality proof: for j j' > 0 with the
        // momentum condition, |omega_Eq.l + kappa(Omega_j - Omega_j')|
        // >= a |j - j'| - |r_j| - |r_j'| - |omega_Eq . l|
        // >= a0 |j - j'| - C <l> with C = max_a |omega_Eq|_1 + 1/a0.
        let p = params_12();
        let a = 1.0;
        let omega = dispersion::omega_eq(&p).unwrap();
        let jvec = p.jvec();
        let mu = EquilibriumMu { a };
        let dp = DivisorParams::new(1e-3, 2.5);
        let c = omega.iter().map(|w| w.abs()).sum::<f64>() + 1.0 / a;
        for ell in [[1i64, 1], [2, -1], [-3, 2], [4, 0], [0, 3]] {
            let drift: i64 = jvec.iter().zip(&ell).map(|(x, y)| x * y).sum();
            for j in [3i64, 4, 5, 7, 11] {
                let jp = j + drift;
                if jp <= 0 || jp == 2 || j == jp && drift == 0 {
                    continue;
                }
                let q = DivisorQuery {
                    kind: DivisorKind::Melnikov2Diag,
                    a,
                    omega: &omega,
                    jvec: &jvec,
                    ell: &ell,
                    j: Some(j),
                    j_prime: Some(jp),
                    kappa: Some(1),
                    mu: &mu,
                    transport_c: None,
                };
                let audit = divisor(&q, &dp).unwrap();
                let lower = a * (j - jp).abs() as f64 - c * bracket_ell(&ell);
                assert!(
                    audit.value.abs() >= lower - 1e-12,
                    "tuple l={ell:?} j={j} j'={jp}: |{}| < {lower}",
                    audit.value
                );
            }
        }
    }

    #[test]
    fn omega_deriv_closed_forms() {
        // dOmega_1/da at a=1 is 1/sqrt2
        assert_relative_eq!(
            omega_deriv(1.0, 1, 1).unwrap(),
            1.0 / 2f64.sqrt(),
            epsilon = 1e-14
        );
        // cross-check all closed forms against central differences
        for j in [1i64, 2, 5, -3] {
            for k in 1..=4usize {
                let h = 1e-5;
                let fd = (omega_deriv(1.1 + h, j, k - 1).unwrap()
                    - omega_deriv(1.1 - h, j, k - 1).unwrap())
                    / (2.0 * h);
                assert_relative_eq!(
                    omega_deriv(1.1, j, k).unwrap(),
                    fd,
                    max_relative = 1e-8,
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn transversality_case_i_positive() {
        let p = params_12();
        let curve = FrequencyCurve::EqDot { ell: vec![1, 1] };
        let est = transversality(&curve, &p, 0.5, 1.5, 2, 400).unwrap();
        assert!(est.inf_max > 0.0);
        assert_eq!(est.ell_bracket, 1.0);
    }

    #[test]
    fn transversality_rejects_trivial_tuple() {
        let p = params_12();
        let curve = FrequencyCurve::SecondOrderDiag {
            ell: vec![0, 0],
            j: 5,
            j_prime: 5,
            kappa: 1,
        };
        assert!(transversality(&curve, &p, 0.5, 1.5, 2, 10).is_err());
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(nondegeneracy(&[1, 2], &[], 0.5, 1.5).unwrap());
        assert!(nondegeneracy(&[1], &[1], 0.5, 1.5).is_err());
        assert!(nondegeneracy(&[3], &[], 0.5, 1.5).unwrap());
        // independent product-formula oracle for the 2x2 case {1,2}:
        // det = j_2^2 - j_1^2 = 3 != 0
        let det = (2 * 2 - 1 * 1) as f64;
        assert!(det.abs() > 0.0);
    }

    #[test]
    fn cantor_scan_examples() {
        let p = params_12();
        // gamma = 0: nothing can be excluded on a generic grid
        let scan = cantor_measure(&p, 0.5, 1.5, 0.0, 2.0, 10, 200).unwrap();
        assert_eq!(scan.excluded_fraction, 0.0);
        assert!(scan.intervals.is_empty());

        // single check at a = 1, l = (1, -1): |sqrt2 + sqrt5| > 0.1/2^2
        let wl = 2f64.sqrt() + 5f64.sqrt();
        assert!(wl.abs() > 0.1 / 4.0);

        // monotonicity in gamma
        let coarse = cantor_measure(&p, 0.5, 1.5, 1e-2, 2.0, 20, 2000).unwrap();
        let fine = cantor_measure(&p, 0.5, 1.5, 1e-4, 2.0, 20, 2000).unwrap();
        assert!(coarse.excluded_fraction >= fine.excluded_fraction);
    }

    #[test]
    fn audit_csv_format() {
        let p = params_12();
        let mu = EquilibriumMu { a: 1.0 };
        let q = DivisorQuery {
            kind: DivisorKind::Dioph,
            a: 1.0,
            omega: &dispersion::omega_eq(&p).unwrap(),
            jvec: &p.jvec(),
            ell: &[1, -1],
            j: None,
            j_prime: None,
            kappa: None,
            mu: &mu,
            transport_c: None,
        };
        let audit = divisor(&q, &DivisorParams::new(0.1, 2.0)).unwrap();
        let mut buf = Vec::new();
        write_audit_csv(&mut buf, &[audit]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("kind,ell,j,jprime,value,bound,pass\n"));
        assert!(text.contains("dioph,1;-1,,,"));
    }

    proptest! {
        #[test]
        fn momentum_never_violated_in_emitted_audits(
            l1 in -6i64..6, l2 in -6i64..6, j in -12i64..12,
        ) {
            let p = params_12();
            let jvec = p.jvec();
            let omega = dispersion::omega_eq(&p).unwrap();
            let mu = EquilibriumMu { a: 1.0 };
            let ell = vec![l1, l2];
            let jp = jvec.iter().zip(&ell).map(|(a, b)| a * b).sum::<i64>() + j;
            let q = DivisorQuery {
                kind: DivisorKind::Melnikov2Diag,
                a: 1.0,
                omega: &omega,
                jvec: &jvec,
                ell: &ell,
                j: Some(j),
                j_prime: Some(jp),
                kappa: Some(1),
                mu: &mu,
                transport_c: None,
            };
            match divisor(&q, &DivisorParams::new(1e-3, 2.0)) {
                Ok(audit) => {
                    // every emitted audit satisfies its momentum condition
                    prop_assert!(momentum_ok(&jvec, &audit.ell, audit.j.unwrap(), audit.j_prime));
                }
                Err(_) => {
                    // rejected tuples are exactly the trivial/degenerate ones
                    let trivial = j == 0 || jp == 0 || (j == jp && l1 == 0 && l2 == 0);
                    prop_assert!(trivial);
                }
            }
        }
    }
}
