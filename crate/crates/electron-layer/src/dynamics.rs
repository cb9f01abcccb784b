//! The nonlinear electron-layer vector field, its Hamiltonian, and the
//! two-way bridge to the electronic Euler-Poisson system with cubic pressure.
//!
//! The boundary deformations obey
//!
//! ```text
//! dt r_+- = -dx[ (+-a + eps r_+-)^2 / (2 eps)
//!                - (1/2a) dxx^{-1} r_+ + (1/2a) dxx^{-1} r_- ]
//! ```
//!
//! which is Hamiltonian: `dt r = eps^{-2} J grad E(r)` with
//! `J = diag(-dx, dx)` and `E` the renormalized kinetic plus electrostatic
//! energy of the layer.

use crate::dispersion::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::{fft_inverse, PairField, RealField1D, DEALIAS_DEFAULT};
use num_complex::Complex64;

fn require_zero_mean(r: &PairField, what: &str) -> Result<()> {
    let tol = 1e-11 * r.sup_norm().max(1.0);
    if r.plus.mean().abs() > tol || r.minus.mean().abs() > tol {
        return Err(Error::domain(format!("{what} requires zero-mean input")));
    }
    Ok(())
}

/// The full vector field `dt r` of the layer system. The output is a total
/// `x`-derivative, hence exactly zero-mean.
pub fn rhs(r: &PairField, params: &ModelParams) -> Result<PairField> {
    require_zero_mean(r, "rhs")?;
    let a = params.a;
    let eps = params.eps;
    // dxx^{-1}(r_+ - r_-) enters both brackets with the same sign
    let corrector = r.plus.sub(&r.minus).deriv(-2)?.scale(1.0 / (2.0 * a));
    let sq_plus = r.plus.product_dealiased(&r.plus, DEALIAS_DEFAULT);
    let sq_minus = r.minus.product_dealiased(&r.minus, DEALIAS_DEFAULT);
    // (+-a + eps r)^2/(2 eps) = const +- a r + eps r^2/2; constants die under dx
    let bracket_plus = r.plus.scale(a).add(&sq_plus.scale(eps / 2.0)).sub(&corrector);
    let bracket_minus = r
        .minus
        .scale(-a)
        .add(&sq_minus.scale(eps / 2.0))
        .sub(&corrector);
    Ok(PairField {
        plus: bracket_plus.deriv(1)?.scale(-1.0),
        minus: bracket_minus.deriv(1)?.scale(-1.0),
    })
}

/// Linear part `J M_0(a) r` of the vector field at the flat strip.
pub fn linear_rhs(r: &PairField, a: f64) -> Result<PairField> {
    let corrector = r.plus.sub(&r.minus).deriv(-1)?.scale(1.0 / (2.0 * a));
    Ok(PairField {
        plus: r.plus.deriv(1)?.scale(-a).add(&corrector),
        minus: r.minus.deriv(1)?.scale(a).add(&corrector),
    })
}

/// Quadratic remainder `eps X_P(r) = -(eps/2) dx (r_+^2, r_-^2)`; the full
/// field is `rhs = linear_rhs + nonlinear_rhs`.
pub fn nonlinear_rhs(r: &PairField, eps: f64) -> Result<PairField> {
    let sq_plus = r.plus.product_dealiased(&r.plus, DEALIAS_DEFAULT);
    let sq_minus = r.minus.product_dealiased(&r.minus, DEALIAS_DEFAULT);
    Ok(PairField {
        plus: sq_plus.deriv(1)?.scale(-eps / 2.0),
        minus: sq_minus.deriv(1)?.scale(-eps / 2.0),
    })
}

/// Average of a pointwise cubic expression of bandlimited fields, computed on
/// a twice-refined grid so that no aliased mode can pollute the mean.
fn cubic_mean(f: impl Fn(f64, f64) -> f64, plus: &RealField1D, minus: &RealField1D) -> f64 {
    let n = plus.n();
    let pad = 2 * n;
    let embed = |field: &RealField1D| -> Vec<f64> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); pad];
        for k in 0..n {
            let j = RealField1D::freq_of(n, k);
            if n % 2 == 0 && k == n / 2 {
                continue;
            }
            let kk = j.rem_euclid(pad as i64) as usize;
            coeffs[kk] = field.coeffs()[k];
        }
        fft_inverse(&coeffs)
    };
    let vp = embed(plus);
    let vm = embed(minus);
    let sum: f64 = vp.iter().zip(&vm).map(|(&p, &m)| f(p, m)).sum();
    sum / pad as f64
}

/// Total energy `E(r) = 2a (E_kin + E_pot)` of the layer:
/// `E_kin = (1/2a) avg [ (a + eps r_+)^3 - (-a + eps r_-)^3 ] / 6` (the inner
/// velocity integral done in closed form) and
/// `E_pot = -(eps^2 / 8 a^2) avg (r_+ - r_-) dxx^{-1} (r_+ - r_-)`.
pub fn energy(r: &PairField, params: &ModelParams) -> Result<f64> {
    require_zero_mean(r, "energy")?;
    let a = params.a;
    let eps = params.eps;
    let e_kin = cubic_mean(
        |p, m| {
            let top = a + eps * p;
            let bot = -a + eps * m;
            (top * top * top - bot * bot * bot) / 6.0
        },
        &r.plus,
        &r.minus,
    ) / (2.0 * a);
    let w = r.plus.sub(&r.minus);
    let e_pot = -eps * eps / (8.0 * a * a) * w.inner(&w.deriv(-2)?);
    Ok(2.0 * a * (e_kin + e_pot))
}

/// L2 gradient of [`energy`] with respect to the normalized-average inner
/// product: `grad_+ = (eps/2)(a + eps r_+)^2 - (eps^2/2a) dxx^{-1}(r_+ - r_-)`
/// and `grad_- = -[(eps/2)(-a + eps r_-)^2 - (eps^2/2a) dxx^{-1}(r_+ - r_-)]`.
///
/// The squares carry the same dealiasing as [`rhs`], so the Hamiltonian
/// identity `eps^2 rhs(r) = J grad E(r)` holds spectrally, mode by mode.
pub fn energy_gradient(r: &PairField, params: &ModelParams) -> Result<PairField> {
    require_zero_mean(r, "energy_gradient")?;
    let a = params.a;
    let eps = params.eps;
    let corrector = r
        .plus
        .sub(&r.minus)
        .deriv(-2)?
        .scale(eps * eps / (2.0 * a));
    let sq_plus = r.plus.product_dealiased(&r.plus, DEALIAS_DEFAULT);
    let sq_minus = r.minus.product_dealiased(&r.minus, DEALIAS_DEFAULT);
    // (a + eps r_+)^2 = a^2 + 2 a eps r_+ + eps^2 r_+^2, kept with its constant
    let grad_plus = sq_plus
        .scale(eps * eps)
        .add(&r.plus.scale(2.0 * a * eps))
        .add_constant(a * a)
        .scale(eps / 2.0)
        .sub(&corrector);
    let grad_minus = sq_minus
        .scale(eps * eps)
        .add(&r.minus.scale(-2.0 * a * eps))
        .add_constant(a * a)
        .scale(eps / 2.0)
        .sub(&corrector)
        .scale(-1.0);
    Ok(PairField {
        plus: grad_plus,
        minus: grad_minus,
    })
}

/// `J grad` applied to a pair: `(-dx g_+, dx g_-)`.
pub fn j_apply(g: &PairField) -> Result<PairField> {
    Ok(PairField {
        plus: g.plus.deriv(1)?.scale(-1.0),
        minus: g.minus.deriv(1)?,
    })
}

/// Translation generator `P(r) = (1/2) avg (r_-^2 - r_+^2)`; conserved along
/// the flow by space-translation invariance.
pub fn momentum(r: &PairField) -> f64 {
    0.5 * (r.minus.inner(&r.minus) - r.plus.inner(&r.plus))
}

/// Euler-Poisson state: density deviation and velocity, both zero-mean.
#[derive(Debug, Clone)]
pub struct EPState {
    pub rho: RealField1D,
    pub u: RealField1D,
}

impl EPState {
    pub fn new(rho: RealField1D, u: RealField1D) -> Result<Self> {
        if rho.n() != u.n() {
            return Err(Error::validation("EPState components must share a grid"));
        }
        let s = EPState { rho, u };
        s.check_hyperbolic()?;
        Ok(s)
    }

    /// `1 + rho > 0` pointwise on the grid.
    pub fn check_hyperbolic(&self) -> Result<()> {
        let min = self.rho.values().iter().cloned().fold(f64::INFINITY, f64::min);
        if 1.0 + min <= 0.0 {
            return Err(Error::domain(format!(
                "density 1 + rho reaches {:.3e} <= 0",
                1.0 + min
            )));
        }
        Ok(())
    }
}

/// `rho = (eps/2a)(r_+ - r_-)`, `u = (eps/2)(r_+ + r_-)`.
pub fn to_euler_poisson(r: &PairField, params: &ModelParams) -> Result<EPState> {
    let eps = params.eps;
    let a = params.a;
    EPState::new(
        r.plus.sub(&r.minus).scale(eps / (2.0 * a)),
        r.plus.add(&r.minus).scale(eps / 2.0),
    )
}

/// Inverse map `r_+- = (u +- a rho)/eps`; requires `1 + rho > 0`.
pub fn from_euler_poisson(s: &EPState, params: &ModelParams) -> Result<PairField> {
    s.check_hyperbolic()?;
    let eps = params.eps;
    let a = params.a;
    Ok(PairField {
        plus: s.u.add(&s.rho.scale(a)).scale(1.0 / eps),
        minus: s.u.sub(&s.rho.scale(a)).scale(1.0 / eps),
    })
}

/// Euler-Poisson vector field with the cubic pressure `P(rho) = (a^2/3)(1+rho)^3`
/// in non-conservative velocity form:
/// `dt rho = -dx((1+rho) u)`,
/// `dt u = -a^2 dx rho - (1/2) dx(a^2 rho^2 + u^2) + dx^{-1} rho`.
pub fn ep_rhs(s: &EPState, a: f64) -> Result<(RealField1D, RealField1D)> {
    s.check_hyperbolic()?;
    let tol = 1e-11 * s.rho.sup_norm().max(1.0);
    if s.rho.mean().abs() > tol {
        return Err(Error::domain("neutrality requires zero-mean rho"));
    }
    let rho_u = s.rho.product_dealiased(&s.u, DEALIAS_DEFAULT);
    let flux = s.u.add(&rho_u); // (1 + rho) u, constant-free part
    let drho = flux.deriv(1)?.scale(-1.0);
    let rho_sq = s.rho.product_dealiased(&s.rho, DEALIAS_DEFAULT);
    let u_sq = s.u.product_dealiased(&s.u, DEALIAS_DEFAULT);
    let quad = rho_sq.scale(a * a).add(&u_sq);
    let du = s
        .rho
        .deriv(1)?
        .scale(-a * a)
        .sub(&quad.deriv(1)?.scale(0.5))
        .add(&s.rho.deriv(-1)?);
    Ok((drho, du))
}

/// Linear part of [`ep_rhs`] at the homogeneous state.
pub fn ep_linear_rhs(s: &EPState, a: f64) -> Result<(RealField1D, RealField1D)> {
    Ok((
        s.u.deriv(1)?.scale(-1.0),
        s.rho.deriv(1)?.scale(-a * a).add(&s.rho.deriv(-1)?),
    ))
}
