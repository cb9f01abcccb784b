//! Truncated-operator laboratory: the linearized operator at a state as a
//! finite real matrix in the momentum-ordered trigonometric basis, Floquet
//! spectra with eigenvalue matching, transport-constant estimation, one
//! block-decoupling step, and eigenvalue-asymptotics audits.
//!
//! The quasi-periodic linearized operator is
//!
//! ```text
//! (L rho)_+- = omega . d_phi rho_+-  +  dx( (+-a + eps r_+-) rho_+- )
//!              - (1/2a) dx^{-1} (rho_+ - rho_-)
//! ```
//!
//! At the flat strip its matrix is block-diagonal over momentum shells
//! `jvec . l + j = const` with exact eigenvalues `i (omega . l + kappa
//! Omega_j(a))`; the KAM-reduced eigenvalues keep the form
//! `mu_{j,kappa} = kappa Omega_j + (c_kappa - kappa a) j + r_{j,kappa}` with
//! `|j| |r_{j,kappa}| = O(eps)`.

use crate::dispersion::{self, ModelParams};
use crate::error::{Error, Result};
use crate::resonance::{
    divisor, DivisorAudit, DivisorKind, DivisorParams, DivisorQuery, MuProvider,
    TransportShiftedMu,
};
use crate::simulator::fmt_f64;
use crate::spectral::{CheckFn, Lattice, PairField};
use crate::wavesolver::WaveSolution;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;

// ---------------------------------------------------------------------------
// Basis bookkeeping
// ---------------------------------------------------------------------------

/// One cos/sin pair of the real Floquet basis: the functions
/// `cos(l.phi + j x) e_comp` and `sin(l.phi + j x) e_comp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisMode {
    pub ell: Vec<i64>,
    pub j: i64,
    /// momentum shell `jvec . l + j`
    pub shell: i64,
}

/// A state entering the linearized operator: cosine/sine amplitudes of
/// `eps r_+-` per `(l, j)` mode.
#[derive(Debug, Clone)]
struct StateMode {
    ell: Vec<i64>,
    j: i64,
    cos: [f64; 2],
    sin: [f64; 2],
}

/// The assembled operator with everything needed to interpret its spectrum.
#[derive(Debug, Clone)]
pub struct FloquetMatrix {
    pub matrix: DMatrix<f64>,
    /// basis pairs; unknown layout: per mode, per component (plus, minus),
    /// the cosine then sine amplitude
    pub modes: Vec<BasisMode>,
    pub omega: Vec<f64>,
    pub jvec: Vec<i64>,
    pub a: f64,
    /// transport constants used by the asymptotics fits (equilibrium values
    /// unless estimated through [`transport_constant`])
    pub c_kappa: (f64, f64),
    pub l_phi: i64,
    pub l_x: i64,
}

impl FloquetMatrix {
    fn idx(&self, mode: usize, comp: usize, phase: usize) -> usize {
        4 * mode + 2 * comp + phase
    }
}

fn jvec_dot(jvec: &[i64], ell: &[i64]) -> i64 {
    jvec.iter().zip(ell).map(|(a, b)| a * b).sum()
}

/// Canonical orientation of the concatenated index `(l, j)`.
fn canonical_pair(ell: &[i64], j: i64) -> bool {
    for &l in ell {
        if l > 0 {
            return true;
        }
        if l < 0 {
            return false;
        }
    }
    j > 0
}

/// Real trig coefficient vector over the basis modes, used while assembling
/// one column of the operator.
struct TrigVec {
    cos: Vec<[f64; 2]>,
    sin: Vec<[f64; 2]>,
}

impl TrigVec {
    fn zeros(n: usize) -> Self {
        TrigVec {
            cos: vec![[0.0; 2]; n],
            sin: vec![[0.0; 2]; n],
        }
    }
}

/// Locate `(l, j)` among the basis modes, reducing to the canonical
/// representative; returns the index and the sine-orientation sign.
fn locate(index: &HashMap<(Vec<i64>, i64), usize>, ell: &[i64], j: i64) -> Option<(usize, f64)> {
    if canonical_pair(ell, j) {
        index.get(&(ell.to_vec(), j)).map(|&i| (i, 1.0))
    } else {
        let neg: Vec<i64> = ell.iter().map(|&l| -l).collect();
        index.get(&(neg, -j)).map(|&i| (i, -1.0))
    }
}

/// Build the state-mode list of `eps r` for a traveling wave.
fn wave_state_modes(sol: &WaveSolution, eps: f64) -> Vec<StateMode> {
    sol.wave
        .coeffs
        .iter()
        .map(|(ell, rp, rm)| StateMode {
            ell: ell.clone(),
            j: -jvec_dot(&sol.wave.jvec, ell),
            cos: [eps * rp, eps * rm],
            sin: [0.0, 0.0],
        })
        .collect()
}

/// Build the state-mode list of `eps r` for a frozen-in-time pair field
/// (angle-independent coefficients).
fn frozen_state_modes(r: &PairField, eps: f64, d: usize, l_x: i64) -> Vec<StateMode> {
    let mut out = Vec::new();
    let n = r.n();
    for j in 1..=l_x.min((n / 2) as i64 - 1) {
        let cp = r.plus.coeff(j);
        let cm = r.minus.coeff(j);
        if cp.norm() < 1e-300 && cm.norm() < 1e-300 {
            continue;
        }
        out.push(StateMode {
            ell: vec![0; d],
            j,
            cos: [2.0 * eps * cp.re, 2.0 * eps * cm.re],
            sin: [-2.0 * eps * cp.im, -2.0 * eps * cm.im],
        });
    }
    out
}

/// The state the operator is linearized at.
pub enum FloquetState<'a> {
    /// A solved traveling wave: the operator block-diagonalizes over
    /// momentum shells.
    Wave(&'a WaveSolution),
    /// A fixed-time pair field with an externally supplied frequency vector.
    Frozen {
        r: &'a PairField,
        omega: Vec<f64>,
        jvec: Vec<i64>,
    },
}

/// Assemble `omega . d_phi - J M_{eps r}(a)` on the truncated real basis.
/// Basis modes are ordered by momentum shell so a traveling state yields a
/// visibly block-diagonal matrix; `shells` restricts to selected shells.
pub fn linearized_floquet(
    state: &FloquetState,
    params: &ModelParams,
    l_phi: i64,
    l_x: i64,
    shells: Option<&[i64]>,
) -> Result<FloquetMatrix> {
    params.validate()?;
    let (omega, jvec, state_modes) = match state {
        FloquetState::Wave(sol) => {
            sol.wave.validate()?;
            (
                sol.omega.clone(),
                sol.wave.jvec.clone(),
                wave_state_modes(sol, params.eps),
            )
        }
        FloquetState::Frozen { r, omega, jvec } => (
            omega.clone(),
            jvec.clone(),
            frozen_state_modes(r, params.eps, jvec.len(), l_x),
        ),
    };
    let d = jvec.len();
    if omega.len() != d {
        return Err(Error::validation("omega/jvec dimension mismatch"));
    }
    let max_tangential = jvec.iter().map(|j| j.abs()).max().unwrap_or(1);
    if l_x < max_tangential || l_phi < 1 {
        return Err(Error::validation(
            "truncation too small to contain the tangential modes",
        ));
    }

    // collect canonical (l, j) pairs ordered by momentum shell
    let lat = Lattice::new(d, l_phi);
    let mut modes: Vec<BasisMode> = Vec::new();
    for (_, ell) in lat.iter() {
        for j in -l_x..=l_x {
            if j == 0 || !canonical_pair(ell, j) {
                continue;
            }
            let shell = jvec_dot(&jvec, ell) + j;
            if let Some(wanted) = shells {
                // a real pair spans shells +-c
                if !wanted.contains(&shell) && !wanted.contains(&-shell) {
                    continue;
                }
            }
            modes.push(BasisMode {
                ell: ell.to_vec(),
                j,
                shell,
            });
        }
    }
    modes.sort_by_key(|m| (m.shell.abs(), m.shell, m.ell.clone(), m.j));
    let index: HashMap<(Vec<i64>, i64), usize> = modes
        .iter()
        .enumerate()
        .map(|(i, m)| ((m.ell.clone(), m.j), i))
        .collect();

    let n_modes = modes.len();
    let dim = 4 * n_modes;
    let a = params.a;

    // apply the operator to one basis function
    let apply = |mode: usize, comp: usize, phase: usize| -> TrigVec {
        let mut out = TrigVec::zeros(n_modes);
        let m = &modes[mode];
        let wl: f64 = omega.iter().zip(&m.ell).map(|(w, &l)| w * l as f64).sum();
        let jf = m.j as f64;
        // omega . d_phi and the constant transport +-a dx
        let drift = wl + if comp == 0 { a * jf } else { -a * jf };
        if phase == 0 {
            out.sin[mode][comp] -= drift;
        } else {
            out.cos[mode][comp] += drift;
        }
        // -(1/2a) dx^{-1}(rho_+ - rho_-) feeds both output rows with the same
        // sign; dx^{-1} C = S/j, dx^{-1} S = -C/j
        let sgn = if comp == 0 { 1.0 } else { -1.0 };
        let w = -sgn / (2.0 * a * jf);
        for target in 0..2 {
            if phase == 0 {
                out.sin[mode][target] += w;
            } else {
                out.cos[mode][target] -= w;
            }
        }
        // dx( eps r_comp * rho_comp ): products shift (l, j) by the state modes
        for sm in &state_modes {
            let g_cos = sm.cos[comp];
            let g_sin = sm.sin[comp];
            if g_cos == 0.0 && g_sin == 0.0 {
                continue;
            }
            for (dir, orient) in [(1.0f64, 1.0f64), (-1.0, -1.0)] {
                let _ = dir;
                let sum_ell: Vec<i64> = m
                    .ell
                    .iter()
                    .zip(&sm.ell)
                    .map(|(x, y)| x + orient as i64 * y)
                    .collect();
                let sum_j = m.j + orient as i64 * sm.j;
                if sum_j == 0 {
                    continue; // dx kills the x-mean band
                }
                if Lattice::bracket(&sum_ell) > l_phi || sum_j.abs() > l_x {
                    continue;
                }
                if let Some((ti, s_or)) = locate(&index, &sum_ell, sum_j) {
                    let jn = sum_j as f64;
                    // cos g * cos rho -> C_{p+q}/2 ; sin g * cos rho -> S/2 etc.
                    // then dx: C -> -j S, S -> j C; orientation flips S signs.
                    let (half_c, half_s) = match phase {
                        // rho = C_p
                        0 => (g_cos / 2.0, orient * g_sin / 2.0),
                        // rho = S_p: cos g * S -> S/2; sin g * S -> -C/2 * orient
                        _ => (-g_sin / 2.0, orient * g_cos / 2.0),
                    };
                    // product = half_c * C_{sum} + half_s * S_{sum}
                    // dx(product) = -jn * half_c * S + jn * half_s * C
                    out.cos[ti][comp] += jn * half_s * s_or;
                    out.sin[ti][comp] += -jn * half_c * s_or;
                }
            }
        }
        out
    };

    let columns: Vec<(usize, DVector<f64>)> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let mode = col / 4;
            let comp = (col % 4) / 2;
            let phase = col % 2;
            let tv = apply(mode, comp, phase);
            let mut v = DVector::zeros(dim);
            for i in 0..n_modes {
                for c in 0..2 {
                    v[4 * i + 2 * c] = tv.cos[i][c];
                    v[4 * i + 2 * c + 1] = tv.sin[i][c];
                }
            }
            (col, v)
        })
        .collect();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (col, v) in columns {
        matrix.set_column(col, &v);
    }
    Ok(FloquetMatrix {
        matrix,
        modes,
        omega,
        jvec,
        a,
        c_kappa: (a, -a),
        l_phi,
        l_x,
    })
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Matched eigenvalue: mode index, component sign, and the Floquet-exponent
/// estimate `mu = Im(lambda) - omega . l`.
#[derive(Debug, Clone)]
pub struct MatchedMode {
    pub j: i64,
    pub kappa: i8,
    pub mu_estimate: f64,
    pub ell: Vec<i64>,
    pub dominance: f64,
    pub abs_real: f64,
}

/// Power-law fit of the KAM remainder `r_{j,kappa} = mu - kappa Omega_j -
/// (c_kappa - kappa a) j` against `1/|j|`.
///
/// The spectral drift `c_kappa` entering the remainder is defined by the
/// requirement that `|j| r_{j,kappa}` stays bounded, so the fit first
/// extracts the residual linear trend from the matched eigenvalues (least
/// squares over the outer half of the interior window, per component sign)
/// and then regresses the decaying part.
#[derive(Debug, Clone, Default)]
pub struct TailFit {
    pub c: f64,
    pub decay_exponent: f64,
    pub points: usize,
    /// residual spectral drift per component sign, `[plus, minus]`, measured
    /// relative to the constants stored in the matrix
    pub drift: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct FloquetReport {
    pub eigenvalues: Vec<Complex64>,
    /// max |Re| over interior matched modes
    pub max_abs_real: f64,
    pub matched: Vec<MatchedMode>,
    pub tail_fit: TailFit,
    /// interior window used for `max_abs_real` and the fit
    pub j_interior: i64,
}

fn inverse_iteration(ac: &DMatrix<Complex64>, lambda: Complex64) -> Option<DVector<Complex64>> {
    let n = ac.nrows();
    let shift = lambda + Complex64::new(1e-10, 1e-10);
    let mut shifted = ac.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.full_piv_lu();
    let mut v = DVector::from_element(n, Complex64::new(1.0, 0.0));
    v /= Complex64::new((n as f64).sqrt(), 0.0);
    for _ in 0..3 {
        let w = lu.solve(&v)?;
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        v = w / Complex64::new(norm, 0.0);
    }
    Some(v)
}

/// Eigenvalues of the truncated operator with imaginary-axis classification
/// and the `1/|j|` remainder fit. Matching is by dominant basis component of
/// inverse-iteration eigenvectors; modes near the truncation boundary
/// (outside `|j| <= j_interior`, `<l> <= l_phi/2`) are excluded from fits.
///
/// The fit subtracts `kappa Omega_j + (c_kappa - kappa a) j` with the
/// constants stored in `fm.c_kappa`. For reversible traveling waves of this
/// system the measured spectral drift `c_kappa - kappa a` is O(eps^4) --- far
/// below the one-step straightening estimate of [`transport_constant`], which
/// carries an O(eps^2) bias --- so the equilibrium default `(a, -a)` is the
/// right choice here and the fit then isolates the genuine `1/|j|` tail.
pub fn spectrum(fm: &FloquetMatrix, j_interior: i64) -> Result<FloquetReport> {
    // nalgebra's Francis QR stalls on these highly degenerate skew spectra;
    // faer's implementation handles them. Sequential mode keeps outputs
    // byte-reproducible.
    faer::set_global_parallelism(faer::Par::Seq);
    let n = fm.matrix.nrows();
    let a_faer = faer::Mat::from_fn(n, n, |i, j| fm.matrix[(i, j)]);
    let mut eigenvalues: Vec<Complex64> = a_faer
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?
        .into_iter()
        .map(|l: faer::c64| Complex64::new(l.re, l.im))
        .collect();
    eigenvalues.sort_by(|x, y| (x.im, x.re).partial_cmp(&(y.im, y.re)).unwrap());
    let ac = fm.matrix.map(|x| Complex64::new(x, 0.0));

    // one representative per conjugate pair is enough for matching
    let candidates: Vec<usize> = (0..eigenvalues.len())
        .filter(|&i| eigenvalues[i].im >= -1e-14)
        .collect();

    let matches: Vec<Option<MatchedMode>> = candidates
        .par_iter()
        .map(|&i| {
            let lam = eigenvalues[i];
            let v = inverse_iteration(&ac, lam)?;
            // dominance per (mode, comp)
            let mut best = (0usize, 0usize, 0.0f64);
            let mut total = 0.0f64;
            for m in 0..fm.modes.len() {
                for c in 0..2 {
                    let w = v[fm.idx(m, c, 0)].norm_sqr() + v[fm.idx(m, c, 1)].norm_sqr();
                    total += w;
                    if w > best.2 {
                        best = (m, c, w);
                    }
                }
            }
            let (mi, comp, w) = best;
            let mode = &fm.modes[mi];
            let kappa: i8 = if comp == 0 { 1 } else { -1 };
            let c = if kappa > 0 { fm.c_kappa.0 } else { fm.c_kappa.1 };
            let wl: f64 = fm
                .omega
                .iter()
                .zip(&mode.ell)
                .map(|(w, &l)| w * l as f64)
                .sum();
            // the rep also covers (-l, -j): pick the orientation whose
            // first-order prediction is closer
            let predict = |j: i64| -> f64 {
                let om = dispersion::omega(fm.a, j).unwrap();
                kappa as f64 * om + (c - kappa as f64 * fm.a) * j as f64
            };
            let nu = lam.im;
            let (j, mu) = {
                let mu_a = nu - wl;
                let mu_b = nu + wl;
                if (mu_a - predict(mode.j)).abs() <= (mu_b - predict(-mode.j)).abs() {
                    (mode.j, mu_a)
                } else {
                    (-mode.j, mu_b)
                }
            };
            Some(MatchedMode {
                j,
                kappa,
                mu_estimate: mu,
                ell: mode.ell.clone(),
                dominance: w / total.max(1e-300),
                abs_real: lam.re.abs(),
            })
        })
        .collect();

    // best match per (j, kappa): prefer representatives deep inside the
    // angle truncation (small <l>), then higher dominance; reversibility
    // pairs each match with its mirror mu_{-j,kappa} = -mu_{j,kappa}
    let mut best: HashMap<(i64, i8), MatchedMode> = HashMap::new();
    let insert = |m: MatchedMode, best: &mut HashMap<(i64, i8), MatchedMode>| {
        let key = (m.j, m.kappa);
        let better = match best.get(&key) {
            None => true,
            Some(old) => {
                let (bo, bn) = (Lattice::bracket(&old.ell), Lattice::bracket(&m.ell));
                bn < bo || (bn == bo && m.dominance > old.dominance)
            }
        };
        if better {
            best.insert(key, m);
        }
    };
    for m in matches.into_iter().flatten() {
        let mirror = MatchedMode {
            j: -m.j,
            kappa: m.kappa,
            mu_estimate: -m.mu_estimate,
            ell: m.ell.iter().map(|&l| -l).collect(),
            dominance: m.dominance,
            abs_real: m.abs_real,
        };
        insert(m, &mut best);
        insert(mirror, &mut best);
    }
    let mut matched: Vec<MatchedMode> = best.into_values().collect();
    matched.sort_by_key(|m| (m.j, m.kappa));

    let interior = |m: &MatchedMode| {
        m.j.abs() <= j_interior
            && Lattice::bracket(&m.ell) <= (fm.l_phi - 2).max(1)
            && m.dominance > 0.5
    };
    let max_abs_real = matched
        .iter()
        .filter(|m| interior(m))
        .map(|m| m.abs_real)
        .fold(0.0, f64::max);

    // remainders r'_j = mu - kappa Omega_j - (c_kappa - kappa a) j on the
    // interior window, one sign of j per kappa (mirrors are identical)
    let mut rem: [Vec<(i64, f64)>; 2] = [Vec::new(), Vec::new()];
    for m in matched.iter().filter(|m| interior(m) && m.j >= 2) {
        let om = dispersion::omega(fm.a, m.j)?;
        let c = if m.kappa > 0 { fm.c_kappa.0 } else { fm.c_kappa.1 };
        let r = m.mu_estimate
            - m.kappa as f64 * om
            - (c - m.kappa as f64 * fm.a) * m.j as f64;
        rem[if m.kappa > 0 { 0 } else { 1 }].push((m.j, r));
    }
    // residual spectral drift: joint least squares of r against the basis
    // {j, 1/j}, so a genuine 1/|j| tail does not bias the linear trend
    let mut drift = [0.0f64; 2];
    for (k, side) in rem.iter().enumerate() {
        if side.len() < 3 {
            continue;
        }
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(j, r) in side {
            let (x, y) = (j as f64, 1.0 / j as f64);
            a11 += x * x;
            a12 += x * y;
            a22 += y * y;
            b1 += x * r;
            b2 += y * r;
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() > 1e-12 * a11 * a22 {
            drift[k] = (b1 * a22 - b2 * a12) / det;
        }
    }
    // log-log fit of the drift-free remainder against |j|, per component
    // sign; the reported exponent comes from the better-resolved side (for
    // single-component waves the other side sits at the eigensolve noise
    // floor and carries no shape information)
    let side_fit = |k: usize| -> Option<(f64, f64, usize, f64)> {
        let pts: Vec<(f64, f64)> = rem[k]
            .iter()
            .filter_map(|&(j, r)| {
                let s = r - drift[k] * j as f64;
                (s.abs() > 1e-15).then(|| ((j as f64).ln(), s.abs().ln()))
            })
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let mut mags: Vec<f64> = pts.iter().map(|p| p.1).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = mags[mags.len() / 2];
        Some((
            ((sy - slope * sx) / n).exp(),
            -slope,
            pts.len(),
            median,
        ))
    };
    let tail_fit = match (side_fit(0), side_fit(1)) {
        (Some(p), Some(m)) => {
            let pick = if p.3 >= m.3 { p } else { m };
            TailFit {
                c: pick.0,
                decay_exponent: pick.1,
                points: pick.2,
                drift,
            }
        }
        (Some(p), None) | (None, Some(p)) => TailFit {
            c: p.0,
            decay_exponent: p.1,
            points: p.2,
            drift,
        },
        (None, None) => TailFit {
            drift,
            ..TailFit::default()
        },
    };

    Ok(FloquetReport {
        eigenvalues,
        max_abs_real,
        matched,
        tail_fit,
        j_interior,
    })
}

/// Spectrum CSV: `re,im,j,kappa,matched`.
pub fn write_spectrum_csv(out: &mut impl Write, report: &FloquetReport) -> Result<()> {
    writeln!(out, "re,im,j,kappa,matched")?;
    let mut by_mu: Vec<&MatchedMode> = report.matched.iter().collect();
    for lam in &report.eigenvalues {
        // an eigenvalue row carries its match when one exists at this nu
        let hit = by_mu
            .iter()
            .position(|m| (m.mu_estimate - lam.im).abs() < 1e-9 && m.abs_real >= lam.re.abs() - 1e-12);
        let (j, kappa, matched) = match hit {
            Some(i) => {
                let m = by_mu.remove(i);
                (m.j.to_string(), m.kappa.to_string(), "true")
            }
            None => (String::new(), String::new(), "false"),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(lam.re),
            fmt_f64(lam.im),
            j,
            kappa,
            matched
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Transport constants
// ---------------------------------------------------------------------------

/// Estimate the straightened transport constants `c_[+-]` of a small wave:
/// the transport coefficient is `kappa a + eps f_kappa` with
/// `f_+ = r~_+ + K_+(a,D) r~_+ + K_-(a,D) r~_-` (and `f_-` with the roles
/// swapped), `r~ = Q^{-1} r`; one first-order homological correction
/// `(omega . d_phi + kappa a dx) beta = -eps f_kappa` leaves the defect
/// `kappa a + eps f_kappa dx beta`, whose push-forward average is returned.
pub fn transport_constant(sol: &WaveSolution, params: &ModelParams) -> Result<(f64, f64)> {
    sol.wave.validate()?;
    let (f_plus, f_minus) = straightening_input(sol, params)?;
    let c_plus = one_step_transport(&f_plus, sol, params, 1)?;
    let c_minus = one_step_transport(&f_minus, sol, params, -1)?;
    Ok((c_plus, c_minus))
}

/// The coefficient functions `f_+-` of the transport part, on the doubled
/// lattice so later products stay exact.
fn straightening_input(sol: &WaveSolution, params: &ModelParams) -> Result<(CheckFn, CheckFn)> {
    let a = params.a;
    let jvec = &sol.wave.jvec;
    let lat = Lattice::new(sol.wave.d, 2 * sol.wave.l_max);
    let mut tilde_plus = CheckFn::zeros(lat.clone());
    let mut tilde_minus = CheckFn::zeros(lat.clone());
    for (ell, rp, rm) in &sol.wave.coeffs {
        let j = jvec_dot(jvec, ell);
        let tp = dispersion::transfer(a, j)?;
        // Q^{-1} acts mode-by-mode on the component pair
        let v = tp.q_inv * nalgebra::Vector2::new(*rp, *rm);
        tilde_plus.add_cosine(ell, v[0]);
        tilde_minus.add_cosine(ell, v[1]);
    }
    let k_plus = |j: f64| -> f64 {
        let b = dispersion::coupling(a, j as i64).unwrap();
        let s = (1.0 - b * b).sqrt();
        (1.0 - s) / s
    };
    let k_minus = |j: f64| -> f64 {
        let b = dispersion::coupling(a, j as i64).unwrap();
        b / (1.0 - b * b).sqrt()
    };
    let f_plus = tilde_plus
        .add(&tilde_plus.x_multiplier(jvec, k_plus, 0.0))
        .add(&tilde_minus.x_multiplier(jvec, k_minus, 0.0));
    let f_minus = tilde_minus
        .add(&tilde_minus.x_multiplier(jvec, k_plus, 0.0))
        .add(&tilde_plus.x_multiplier(jvec, k_minus, 0.0));
    Ok((f_plus, f_minus))
}

fn one_step_transport(
    f: &CheckFn,
    sol: &WaveSolution,
    params: &ModelParams,
    kappa: i8,
) -> Result<f64> {
    let a = params.a;
    let eps = params.eps;
    let jvec = &sol.wave.jvec;
    // beta solves (omega.dpsi - kappa a jvec.dpsi) B = -eps F on sine series
    let mut beta = CheckFn::zeros(f.lat.clone());
    for (i, ell) in f.lat.iter() {
        let amp = f.coeff_by_index(i);
        if amp.norm() < 1e-300 {
            continue;
        }
        if ell.iter().all(|&l| l == 0) {
            continue; // the mean is zero on momentum waves; nothing to solve
        }
        let wl: f64 = sol.omega.iter().zip(ell).map(|(w, &l)| w * l as f64).sum();
        let div = wl - kappa as f64 * a * jvec_dot(jvec, ell) as f64;
        if div.abs() < 1e-10 {
            return Err(Error::Conditioning(format!(
                "transport homological divisor {div:.3e} at l = {ell:?}"
            )));
        }
        // i div * B_l = -eps F_l termwise on complex coefficients
        beta.set_coeff_by_index(i, -Complex64::new(0.0, -1.0 / div) * amp * eps);
    }
    // dx beta = -jvec . dpsi beta
    let dx_beta = beta.jvec_deriv(jvec).scale(-1.0);
    // c = kappa a + eps <f dx_beta> + eps <f (dx_beta)^2>
    let lin = f.mul(&dx_beta).mean();
    let quad = f.mul(&dx_beta.mul(&dx_beta)).mean();
    Ok(kappa as f64 * a + eps * (lin + quad))
}

// ---------------------------------------------------------------------------
// Block decoupling
// ---------------------------------------------------------------------------

/// One step of the off-diagonal removal: the order `-m-1` off-diagonal
/// coefficient `r_off` is cancelled by the pointwise quotient
/// `p = -r_off / (2 a kappa + eps (f_kappa - f_{-kappa}))`.
/// Errors when the denominator drops below `0.1 a` in magnitude. When the
/// inputs carry the documented parities (`r_off` of parity `(-1)^m`, `f_+-`
/// even) the output parity `(-1)^m` is asserted.
pub fn decouple_step(
    r_off: &CheckFn,
    f_plus: &CheckFn,
    f_minus: &CheckFn,
    m: u32,
    kappa: i8,
    a: f64,
    eps: f64,
) -> Result<CheckFn> {
    let diff = if kappa > 0 {
        f_plus.sub(f_minus)
    } else {
        f_minus.sub(f_plus)
    };
    let denom_const = 2.0 * a * kappa as f64;
    // pointwise quotient on a grid fine enough for the stored lattice
    let d = r_off.lat.d;
    let n: usize = (4 * r_off.lat.l_max as usize + 4).next_power_of_two().max(16);
    let grid = vec![n; d];
    let (num_vals, den_vals) = (
        eval_grid(r_off, &grid),
        eval_grid(&diff.scale(eps), &grid),
    );
    let mut quot = Vec::with_capacity(num_vals.len());
    for (&nv, &dv) in num_vals.iter().zip(&den_vals) {
        let den = denom_const + dv;
        if den.abs() < 0.1 * a {
            return Err(Error::domain(format!(
                "decoupling denominator {den:.3e} below 0.1 a"
            )));
        }
        quot.push(-nv / den);
    }
    let out = project_grid(&quot, &grid, r_off.lat.clone());
    // parity bookkeeping: even inputs have no sine part, odd no cosine part
    let even_in = r_off.odd_part_sup() < 1e-12 * r_off.sup_coeff().max(1e-300);
    let odd_in = r_off.even_part_sup() < 1e-12 * r_off.sup_coeff().max(1e-300);
    let fs_even = f_plus.odd_part_sup().max(f_minus.odd_part_sup())
        < 1e-10 * (f_plus.sup_coeff().max(f_minus.sup_coeff()).max(1e-300));
    if fs_even && (m % 2 == 0 && even_in || m % 2 == 1 && odd_in) {
        let defect = if m % 2 == 0 {
            out.odd_part_sup()
        } else {
            out.even_part_sup()
        };
        if defect > 1e-9 * out.sup_coeff().max(1e-300) {
            return Err(Error::Numerical(format!(
                "decoupling step broke the (-1)^m parity rule (defect {defect:.3e})"
            )));
        }
    }
    Ok(out)
}

fn eval_grid(f: &CheckFn, grid: &[usize]) -> Vec<f64> {
    let total: usize = grid.iter().product();
    let tau = 2.0 * std::f64::consts::PI;
    (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut psi = vec![0.0; grid.len()];
            for k in (0..grid.len()).rev() {
                psi[k] = tau * (rem % grid[k]) as f64 / grid[k] as f64;
                rem /= grid[k];
            }
            f.eval(&psi)
        })
        .collect()
}

fn project_grid(values: &[f64], grid: &[usize], lat: std::sync::Arc<Lattice>) -> CheckFn {
    let total: usize = grid.iter().product();
    let tau = 2.0 * std::f64::consts::PI;
    let mut out = CheckFn::zeros(lat.clone());
    for (i, ell) in lat.iter() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, &v) in values.iter().enumerate() {
            let mut rem = flat;
            let mut phase = 0.0;
            for k in (0..grid.len()).rev() {
                let psi = tau * (rem % grid[k]) as f64 / grid[k] as f64;
                rem /= grid[k];
                phase += ell[k] as f64 * psi;
            }
            acc += v * Complex64::new(phase.cos(), -phase.sin());
        }
        out.set_coeff_by_index(i, acc / total as f64);
    }
    out
}

// ---------------------------------------------------------------------------
// KAM audits
// ---------------------------------------------------------------------------

/// Eigenvalues matched from a Floquet report, falling back to the
/// transport-shifted first-order form outside the matched range.
pub struct ReportMu<'a> {
    map: HashMap<(i64, i8), f64>,
    fallback: TransportShiftedMu,
    _report: &'a FloquetReport,
}

impl<'a> ReportMu<'a> {
    pub fn new(report: &'a FloquetReport, a: f64, c_kappa: (f64, f64)) -> Self {
        let map = report
            .matched
            .iter()
            .map(|m| ((m.j, m.kappa), m.mu_estimate))
            .collect();
        ReportMu {
            map,
            fallback: TransportShiftedMu {
                a,
                c_plus: c_kappa.0,
                c_minus: c_kappa.1,
            },
            _report: report,
        }
    }
}

impl MuProvider for ReportMu<'_> {
    fn mu(&self, j: i64, kappa: i8) -> Option<f64> {
        self.map
            .get(&(j, kappa))
            .copied()
            .or_else(|| self.fallback.mu(j, kappa))
    }
}

#[derive(Debug, Clone)]
pub struct KamAuditSummary {
    pub audits: Vec<DivisorAudit>,
    pub pass_rate: f64,
    pub failures: Vec<DivisorAudit>,
}

/// Audit the first and second Melnikov conditions over all
/// momentum-admissible tuples within `<l> <= l_max`, `|j|, |j'| <= j_max`,
/// using `mu` for the eigenvalues.
pub fn kam_audit(
    mu: &dyn MuProvider,
    params: &ModelParams,
    omega: &[f64],
    dp: &DivisorParams,
    l_max: i64,
    j_max: i64,
) -> Result<KamAuditSummary> {
    params.validate()?;
    let jvec = params.jvec();
    let lat = Lattice::new(params.dim(), l_max);
    let excluded = |set: &[i64], j: i64| set.iter().any(|&s| s == j || s == -j);
    let mut audits = Vec::new();
    for (_, ell) in lat.iter() {
        let drift = jvec_dot(&jvec, ell);
        for kappa in [1i8, -1] {
            let tangential = if kappa > 0 {
                &params.s_plus
            } else {
                &params.s_minus
            };
            // first Melnikov: j = -jvec.l
            let j = -drift;
            if j != 0 && !excluded(tangential, j) {
                let q = DivisorQuery {
                    kind: DivisorKind::Melnikov1,
                    a: params.a,
                    omega,
                    jvec: &jvec,
                    ell,
                    j: Some(j),
                    j_prime: None,
                    kappa: Some(kappa),
                    mu,
                    transport_c: None,
                };
                audits.push(divisor(&q, dp)?);
            }
            // second Melnikov, same component: j' = j + jvec.l
            for j in -j_max..=j_max {
                let jp = j + drift;
                if j == 0 || jp == 0 || jp.abs() > j_max {
                    continue;
                }
                if excluded(tangential, j) || excluded(tangential, jp) {
                    continue;
                }
                if j == jp && ell.iter().all(|&l| l == 0) {
                    continue; // trivial resonance, never audited as a failure
                }
                let q = DivisorQuery {
                    kind: DivisorKind::Melnikov2Diag,
                    a: params.a,
                    omega,
                    jvec: &jvec,
                    ell,
                    j: Some(j),
                    j_prime: Some(jp),
                    kappa: Some(kappa),
                    mu,
                    transport_c: None,
                };
                audits.push(divisor(&q, dp)?);
            }
        }
        // cross Melnikov
        for j in -j_max..=j_max {
            let jp = j + drift;
            if j == 0 || jp == 0 || jp.abs() > j_max {
                continue;
            }
            if excluded(&params.s_plus, j) || excluded(&params.s_minus, jp) {
                continue;
            }
            let q = DivisorQuery {
                kind: DivisorKind::Melnikov2Cross,
                a: params.a,
                omega,
                jvec: &jvec,
                ell,
                j: Some(j),
                j_prime: Some(jp),
                kappa: None,
                mu,
                transport_c: None,
            };
            audits.push(divisor(&q, dp)?);
        }
    }
    let passed = audits.iter().filter(|a| a.pass).count();
    let failures: Vec<DivisorAudit> = audits.iter().filter(|a| !a.pass).cloned().collect();
    Ok(KamAuditSummary {
        pass_rate: passed as f64 / audits.len().max(1) as f64,
        audits,
        failures,
    })
}
