//! Exact linear theory at the flat strip.
//!
//! Each spatial Fourier mode `j != 0` of the linearized system evolves by a
//! 2x2 system with matrix `M_j(a)` whose eigenvalues are `-+ i Omega_j(a)`,
//! `Omega_j(a) = sgn(j) sqrt(a^2 j^2 + 1)`. The symplectic transfer matrix
//! `Q_j(a)` diagonalizes `M_j(a)` and its entry `b_j(a)` measures the
//! coupling between the two boundary deformations.

use crate::error::{Error, Result};
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Physical and combinatorial parameters of a wave construction.
///
/// `s_plus`/`s_minus` are the excited spatial modes of right/left traveling
/// components; `jvec` is their concatenation and couples angle shifts to
/// space translations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelParams {
    /// Strip half-width.
    pub a: f64,
    /// Amplitude parameter in `(0, 1)`.
    pub eps: f64,
    pub s_plus: Vec<i64>,
    pub s_minus: Vec<i64>,
    pub amps_plus: Vec<f64>,
    pub amps_minus: Vec<f64>,
}

impl ModelParams {
    pub fn new(
        a: f64,
        eps: f64,
        s_plus: Vec<i64>,
        s_minus: Vec<i64>,
        amps_plus: Vec<f64>,
        amps_minus: Vec<f64>,
    ) -> Result<Self> {
        let p = ModelParams {
            a,
            eps,
            s_plus,
            s_minus,
            amps_plus,
            amps_minus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::validation(format!(
                "strip half-width a must be positive, got {}",
                self.a
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::validation(format!(
                "eps must lie in (0,1), got {}",
                self.eps
            )));
        }
        for (name, set) in [("s_plus", &self.s_plus), ("s_minus", &self.s_minus)] {
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(Error::validation(format!("{name} has repeated modes")));
            }
            if set.iter().any(|&j| j <= 0) {
                return Err(Error::validation(format!(
                    "{name} must contain positive integers"
                )));
            }
        }
        if self.s_plus.iter().any(|j| self.s_minus.contains(j)) {
            return Err(Error::validation(
                "tangential sets must be disjoint",
            ));
        }
        if self.s_plus.is_empty() && self.s_minus.is_empty() {
            return Err(Error::validation("no tangential modes selected"));
        }
        if self.amps_plus.len() != self.s_plus.len() || self.amps_minus.len() != self.s_minus.len()
        {
            return Err(Error::validation(
                "amplitude lists must match the tangential sets",
            ));
        }
        Ok(())
    }

    /// Torus dimension `d = |s_plus| + |s_minus|`.
    pub fn dim(&self) -> usize {
        self.s_plus.len() + self.s_minus.len()
    }

    /// The velocity vector: `s_plus` then `s_minus`, in order.
    pub fn jvec(&self) -> Vec<i64> {
        let mut v = self.s_plus.clone();
        v.extend_from_slice(&self.s_minus);
        v
    }

    /// Amplitudes in `jvec` order.
    pub fn amps(&self) -> Vec<f64> {
        let mut v = self.amps_plus.clone();
        v.extend_from_slice(&self.amps_minus);
        v
    }

    /// Component signs in `jvec` order: `+1` for `s_plus` slots, `-1` after.
    pub fn kappas(&self) -> Vec<i8> {
        let mut v = vec![1i8; self.s_plus.len()];
        v.extend(std::iter::repeat(-1i8).take(self.s_minus.len()));
        v
    }
}

/// `Omega_j(a) = sgn(j) sqrt(a^2 j^2 + 1)`; odd in `j`, `|Omega_j| >= a|j|`.
pub fn omega(a: f64, j: i64) -> Result<f64> {
    if j == 0 {
        return Err(Error::domain("omega undefined at j = 0"));
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    let jf = j as f64;
    Ok(jf.signum() * (a * a * jf * jf + 1.0).sqrt())
}

/// `b_j(a) = 1 / (2a|j| (sqrt(a^2 j^2 + 1) + a|j| + 1/(2a|j|)))`, in `(0,1)`.
pub fn coupling(a: f64, j: i64) -> Result<f64> {
    if j == 0 {
        return Err(Error::domain("coupling undefined at j = 0"));
    }
    let aj = a * j.abs() as f64;
    Ok(1.0 / (2.0 * aj * ((aj * aj + 1.0).sqrt() + aj) + 1.0))
}

/// The diagonalization package of one spatial mode: `q^{-1} m q` is
/// `diag(-i Omega_j, +i Omega_j)` and `det q = 1`.
#[derive(Debug, Clone)]
pub struct TransferPair {
    pub b: f64,
    pub q: Matrix2<f64>,
    pub q_inv: Matrix2<f64>,
    pub m: Matrix2<Complex64>,
}

/// Transfer matrix data at mode `j`.
pub fn transfer(a: f64, j: i64) -> Result<TransferPair> {
    let b = coupling(a, j)?;
    let s = 1.0 / (1.0 - b * b).sqrt();
    let q = Matrix2::new(s, s * b, s * b, s);
    let q_inv = Matrix2::new(s, -s * b, -s * b, s);
    let aj = a * j.abs() as f64;
    let half = 1.0 / (2.0 * aj);
    let unit = Complex64::new(0.0, j.signum() as f64);
    let m = Matrix2::new(
        unit * (-aj - half),
        unit * half,
        unit * (-half),
        unit * (aj + half),
    );
    Ok(TransferPair { b, q, q_inv, m })
}

impl TransferPair {
    /// Eigen-columns: `q` applied to the unit vectors, i.e. `(1, b)^T` and
    /// `(b, 1)^T` scaled by `1/sqrt(1 - b^2)`.
    pub fn eigvec(&self, kappa: i8) -> Vector2<f64> {
        if kappa > 0 {
            self.q.column(0).into()
        } else {
            self.q.column(1).into()
        }
    }
}

/// Equilibrium frequency vector `(Omega_j)_{j in s_plus} ++ (-Omega_j)_{j in s_minus}`.
pub fn omega_eq(params: &ModelParams) -> Result<Vec<f64>> {
    params.validate()?;
    let mut w = Vec::with_capacity(params.dim());
    for &j in &params.s_plus {
        w.push(omega(params.a, j)?);
    }
    for &j in &params.s_minus {
        w.push(-omega(params.a, j)?);
    }
    Ok(w)
}

/// Bifurcation speed of the m-fold periodic branch: `sqrt(a^2 m^2 + 1)/m`.
pub fn bifurcation_speed(a: f64, m: i64) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain(format!("mode must be >= 1, got {m}")));
    }
    Ok(omega(a, m)? / m as f64)
}

/// Number of terms `N_M = max{p : 1 - 2p > -M}` kept by the homogeneous
/// expansion of the dispersion symbol at order `-M`.
pub fn expansion_terms(big_m: u32) -> usize {
    (1..)
        .take_while(|p| 1i64 - 2 * *p as i64 > -(big_m as i64))
        .count()
}

/// Homogeneous expansion of the dispersion symbol:
/// `i Omega(a, xi) = a (i xi) + sum_p alpha_p a^{1-2p} (i xi)^{1-2p} + S_M`,
/// with `alpha_p = ((-1)^p / p!) prod_{m=0}^{p-1} (1/2 - m)`.
#[derive(Debug, Clone)]
pub struct SymbolExpansion {
    pub a: f64,
    pub big_m: u32,
    /// `alpha_p` for `p = 1..=N_M`.
    pub alpha: Vec<f64>,
    /// `alpha_p a^{1-2p}` in the same order.
    pub scaled: Vec<f64>,
}

/// Binomial-series coefficient `c_p = (1/p!) prod_{m=0}^{p-1}(1/2 - m)`,
/// the `p`-th Taylor coefficient of `sqrt(1+z)`.
fn sqrt_taylor_coeff(p: usize) -> f64 {
    let mut c = 1.0;
    for m in 0..p {
        c *= 0.5 - m as f64;
    }
    for k in 1..=p {
        c /= k as f64;
    }
    c
}

pub fn symbol_expand(a: f64, big_m: u32) -> Result<SymbolExpansion> {
    if big_m < 1 {
        return Err(Error::domain("expansion order must be >= 1"));
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    let n = expansion_terms(big_m);
    let mut alpha = Vec::with_capacity(n);
    let mut scaled = Vec::with_capacity(n);
    for p in 1..=n {
        let ap = if p % 2 == 0 { 1.0 } else { -1.0 } * sqrt_taylor_coeff(p);
        alpha.push(ap);
        scaled.push(ap * a.powi(1 - 2 * p as i32));
    }
    Ok(SymbolExpansion {
        a,
        big_m,
        alpha,
        scaled,
    })
}

impl SymbolExpansion {
    /// The truncation remainder `s_M(a, xi)`: exact symbol minus the kept
    /// terms, evaluated in the real form
    /// `Omega(a,xi) - a xi - sum_p c_p a^{1-2p} xi^{1-2p}`
    /// whose magnitude equals the `i`-form difference. The leading
    /// subtraction is done as `a xi (sqrt(1+z) - 1) = a xi z/(sqrt(1+z)+1)`
    /// so no precision is lost at large `xi`.
    pub fn remainder(&self, xi: f64) -> f64 {
        let axi = self.a * xi;
        let z = 1.0 / (axi * axi);
        let mut acc = axi * z / ((1.0 + z).sqrt() + 1.0);
        for (p, alpha_p) in self.alpha.iter().enumerate() {
            let p = p + 1;
            // c_p = (-1)^p alpha_p
            let c_p = if p % 2 == 0 { *alpha_p } else { -*alpha_p };
            acc -= c_p * self.a.powi(1 - 2 * p as i32) * xi.powi(1 - 2 * p as i32);
        }
        acc
    }
}

/// The closed-form reversible traveling solution of the linearized system:
/// superposition of `cos(Omega_j t - jx)` modes over `s_plus` (right-moving)
/// and `cos(Omega_j t + jx)` over `s_minus` (left-moving), with eigenvector
/// weights `(1, b_j)` resp. `(b_j, 1)` scaled by `1/sqrt(1 - b_j^2)`.
pub fn linear_wave(params: &ModelParams, t: f64, x: f64) -> Result<(f64, f64)> {
    params.validate()?;
    let a = params.a;
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (&j, &amp) in params.s_plus.iter().zip(&params.amps_plus) {
        let b = coupling(a, j)?;
        let w = amp * (omega(a, j)? * t - j as f64 * x).cos() / (1.0 - b * b).sqrt();
        plus += w;
        minus += w * b;
    }
    for (&j, &amp) in params.s_minus.iter().zip(&params.amps_minus) {
        let b = coupling(a, j)?;
        let w = amp * (omega(a, j)? * t + j as f64 * x).cos() / (1.0 - b * b).sqrt();
        plus += w * b;
        minus += w;
    }
    Ok((plus, minus))
}
