//! Grids, Fourier calculus on `T` and `T^d x T`, and the traveling-wave
//! substitution underlying every other module.
//!
//! Conventions: the forward transform produces coefficients such that
//! `f(x) = sum_j c_j e^{ijx}`, so the circle average equals `c_0` and all
//! averages elsewhere in the crate are normalized integrals `(2pi)^{-1} int`.

mod field;
mod torus;

pub use field::{fft_forward, fft_inverse, PairField, RealField1D};
pub use torus::{is_canonical, traveling_substitute, CheckFn, Lattice, ProductSamples};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Collocation sizes for the circle and the `d`-torus, plus the kept-mode
/// fraction used by the dealiasing rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    /// Collocation points on `T` (even, at least 8).
    pub n_x: usize,
    /// Per-dimension collocation points on `T^d` (each even, at least 8).
    pub n_phi: Vec<usize>,
    /// Kept-mode fraction in `(0, 1]`; products zero all modes above
    /// `dealias_fraction * n/2`. The default 2/3 removes all aliasing from
    /// quadratic nonlinearities.
    pub dealias_fraction: f64,
}

pub const DEALIAS_DEFAULT: f64 = 2.0 / 3.0;

impl GridSpec {
    pub fn new(n_x: usize, n_phi: Vec<usize>) -> Result<Self> {
        let g = GridSpec {
            n_x,
            n_phi,
            dealias_fraction: DEALIAS_DEFAULT,
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid on `T` only.
    pub fn line(n_x: usize) -> Result<Self> {
        Self::new(n_x, vec![])
    }

    pub fn with_dealias(mut self, fraction: f64) -> Result<Self> {
        self.dealias_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x < 8 || self.n_x % 2 != 0 {
            return Err(Error::validation(format!(
                "n_x must be even and >= 8, got {}",
                self.n_x
            )));
        }
        for (k, &n) in self.n_phi.iter().enumerate() {
            if n < 8 || n % 2 != 0 {
                return Err(Error::validation(format!(
                    "n_phi[{k}] must be even and >= 8, got {n}"
                )));
            }
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::validation(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    /// Largest mode kept by the dealiasing rule on the `x` grid.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.n_x as f64 / 2.0) * self.dealias_fraction).floor() as i64
    }

    /// Uniform collocation points on `[0, 2pi)`.
    pub fn x_points(&self) -> Vec<f64> {
        let n = self.n_x;
        (0..n)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            .collect()
    }
}
