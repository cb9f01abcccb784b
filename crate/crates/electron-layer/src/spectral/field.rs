//! Real periodic fields on the circle in dual grid/spectral representation.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward transform: `c_j = (1/n) sum_k f(x_k) e^{-i j x_k}`, FFT layout
/// (index `k` holds frequency `k` for `k < n/2` and `k - n` otherwise).
pub fn fft_forward(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(n);
        fft.process(&mut buf);
    });
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse transform: `f(x_k) = sum_j c_j e^{i j x_k}`, returning real samples.
pub fn fft_inverse(coeffs: &[Complex64]) -> Vec<f64> {
    let mut buf = coeffs.to_vec();
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_inverse(buf.len());
        fft.process(&mut buf);
    });
    buf.iter().map(|c| c.re).collect()
}

/// A real `2pi`-periodic function held spectrally, with Hermitian symmetry
/// `c_{-j} = conj(c_j)` and an explicit zero-mean marker for deformation
/// fields (the boundary deformations satisfy `avg r_+- = 0`).
#[derive(Debug, Clone)]
pub struct RealField1D {
    coeffs: Vec<Complex64>,
    zero_mean: bool,
}

impl RealField1D {
    /// Build from grid samples at `n` uniform points on `[0, 2pi)`.
    pub fn from_values(values: &[f64]) -> Self {
        RealField1D {
            coeffs: fft_forward(values),
            zero_mean: false,
        }
    }

    /// Build a deformation field: the mean must vanish (tolerance `1e-12`
    /// relative to the amplitude) and is then projected out exactly.
    pub fn zero_mean_from_values(values: &[f64]) -> Result<Self> {
        let mut f = Self::from_values(values);
        f.require_small_mean()?;
        f.coeffs[0] = Complex64::new(0.0, 0.0);
        f.zero_mean = true;
        Ok(f)
    }

    /// Build from spectral coefficients in FFT layout. Hermitian symmetry is
    /// enforced by averaging `c_j` with `conj(c_{-j})`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        let mut f = RealField1D {
            coeffs,
            zero_mean: false,
        };
        f.symmetrize();
        f
    }

    pub fn zeros(n: usize) -> Self {
        RealField1D {
            coeffs: vec![Complex64::new(0.0, 0.0); n],
            zero_mean: true,
        }
    }

    /// Sample a closed-form profile on the grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = (0..n)
            .map(|k| f(2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self::from_values(&values)
    }

    fn symmetrize(&mut self) {
        let n = self.coeffs.len();
        self.coeffs[0] = Complex64::new(self.coeffs[0].re, 0.0);
        for k in 1..=(n - 1) / 2 {
            let a = self.coeffs[k];
            let b = self.coeffs[n - k].conj();
            let avg = (a + b) * 0.5;
            self.coeffs[k] = avg;
            self.coeffs[n - k] = avg.conj();
        }
        if n % 2 == 0 {
            let k = n / 2;
            self.coeffs[k] = Complex64::new(self.coeffs[k].re, 0.0);
        }
    }

    fn require_small_mean(&self) -> Result<()> {
        let scale = self.sup_norm().max(1.0);
        if self.coeffs[0].re.abs() > 1e-12 * scale {
            return Err(Error::domain(format!(
                "field mean {:.3e} is not zero",
                self.coeffs[0].re
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero_mean(&self) -> bool {
        self.zero_mean
    }

    /// Mark a field as zero-mean, projecting the constant mode out.
    /// Errors if the mean is not already negligible.
    pub fn into_zero_mean(mut self) -> Result<Self> {
        self.require_small_mean()?;
        self.coeffs[0] = Complex64::new(0.0, 0.0);
        self.zero_mean = true;
        Ok(self)
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Coefficient of `e^{ijx}`; zero outside the resolved band.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        if j.abs() > n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let k = j.rem_euclid(n) as usize;
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Signed frequency of FFT slot `k`.
    pub fn freq_of(n: usize, k: usize) -> i64 {
        if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        fft_inverse(&self.coeffs)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Signed derivative/antiderivative: coefficient `j` of the output is
    /// `(ij)^m c_j` for `j != 0`, and the zero mode is dropped. Negative `m`
    /// requires a zero-mean input.
    pub fn deriv(&self, m: i32) -> Result<RealField1D> {
        if m < 0 && !self.zero_mean {
            self.require_small_mean().map_err(|_| {
                Error::domain(format!(
                    "antiderivative of order {m} requires a zero-mean field"
                ))
            })?;
        }
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            let j = Self::freq_of(n, k);
            if n % 2 == 0 && k == n / 2 {
                continue; // Nyquist mode has no well-defined odd derivative
            }
            let ij = Complex64::new(0.0, j as f64);
            out[k] = ij.powi(m) * self.coeffs[k];
        }
        Ok(RealField1D {
            coeffs: out,
            zero_mean: true,
        })
    }

    /// Apply a real even Fourier multiplier `j -> s(|j|)` (zero mode fixed by
    /// `s0`).
    pub fn multiplier(&self, s: impl Fn(f64) -> f64, s0: f64) -> RealField1D {
        let n = self.coeffs.len();
        let mut out = self.coeffs.clone();
        out[0] *= s0;
        for (k, c) in out.iter_mut().enumerate().skip(1) {
            let j = Self::freq_of(n, k);
            *c *= s(j.unsigned_abs() as f64);
        }
        RealField1D {
            coeffs: out,
            zero_mean: self.zero_mean && s0 == 0.0 || self.zero_mean,
        }
    }

    /// Pointwise product followed by the dealiasing projection that keeps
    /// modes `|j| <= fraction * n/2`.
    pub fn product_dealiased(&self, other: &RealField1D, fraction: f64) -> RealField1D {
        let n = self.coeffs.len();
        assert_eq!(n, other.coeffs.len(), "grid mismatch");
        let a = self.values();
        let b = other.values();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut f = RealField1D::from_values(&prod);
        f.dealias(fraction);
        f
    }

    /// Zero all modes above `fraction * n/2` (and the Nyquist mode).
    pub fn dealias(&mut self, fraction: f64) {
        let n = self.coeffs.len();
        let cutoff = ((n as f64 / 2.0) * fraction).floor() as i64;
        for k in 0..n {
            let j = Self::freq_of(n, k);
            if j.abs() > cutoff || (n % 2 == 0 && k == n / 2) {
                self.coeffs[k] = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn scale(&self, s: f64) -> RealField1D {
        RealField1D {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            zero_mean: self.zero_mean,
        }
    }

    pub fn add(&self, other: &RealField1D) -> RealField1D {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "grid mismatch");
        RealField1D {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            zero_mean: self.zero_mean && other.zero_mean,
        }
    }

    pub fn sub(&self, other: &RealField1D) -> RealField1D {
        self.add(&other.scale(-1.0))
    }

    /// Shift by a constant: `f + c`.
    pub fn add_constant(&self, c: f64) -> RealField1D {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        RealField1D {
            coeffs,
            zero_mean: false,
        }
    }

    /// The reflection `(S f)(x) = f(-x)`.
    pub fn reflect(&self) -> RealField1D {
        RealField1D {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            zero_mean: self.zero_mean,
        }
    }

    /// Normalized-average inner product `(2pi)^{-1} int f g dx`.
    pub fn inner(&self, other: &RealField1D) -> f64 {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "grid mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    pub fn max_abs_coeff_above(&self, j_min: i64) -> f64 {
        let n = self.coeffs.len();
        (0..n)
            .filter(|&k| Self::freq_of(n, k).abs() >= j_min)
            .map(|k| self.coeffs[k].norm())
            .fold(0.0, f64::max)
    }
}

/// The deformation pair `r = (r_+, r_-)` on a shared grid.
#[derive(Debug, Clone)]
pub struct PairField {
    pub plus: RealField1D,
    pub minus: RealField1D,
}

impl PairField {
    pub fn new(plus: RealField1D, minus: RealField1D) -> Result<Self> {
        if plus.n() != minus.n() {
            return Err(Error::validation(
                "PairField components must share one grid",
            ));
        }
        Ok(PairField { plus, minus })
    }

    /// Both components checked/projected to zero mean.
    pub fn zero_mean(plus: RealField1D, minus: RealField1D) -> Result<Self> {
        Self::new(plus.into_zero_mean()?, minus.into_zero_mean()?)
    }

    pub fn zeros(n: usize) -> Self {
        PairField {
            plus: RealField1D::zeros(n),
            minus: RealField1D::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.plus.n()
    }

    pub fn is_zero_mean(&self) -> bool {
        self.plus.is_zero_mean() && self.minus.is_zero_mean()
    }

    pub fn scale(&self, s: f64) -> PairField {
        PairField {
            plus: self.plus.scale(s),
            minus: self.minus.scale(s),
        }
    }

    pub fn add(&self, other: &PairField) -> PairField {
        PairField {
            plus: self.plus.add(&other.plus),
            minus: self.minus.add(&other.minus),
        }
    }

    pub fn sub(&self, other: &PairField) -> PairField {
        PairField {
            plus: self.plus.sub(&other.plus),
            minus: self.minus.sub(&other.minus),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.plus.sup_norm().max(self.minus.sup_norm())
    }

    /// The reflection `(S r)(x) = r(-x)`.
    pub fn reflect(&self) -> PairField {
        PairField {
            plus: self.plus.reflect(),
            minus: self.minus.reflect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n)
            .map(|k| f(2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn round_trip_bandlimited() {
        let n = 64;
        let vals = sample(n, |x| 0.3 + (x).cos() - 2.0 * (3.0 * x).sin());
        let f = RealField1D::from_values(&vals);
        let back = f.values();
        for (a, b) in vals.iter().zip(&back) {
            assert_relative_eq!(a, b, max_relative = 1e-13, epsilon = 1e-13);
        }
    }

    #[test]
    fn deriv_sin_antiderivative() {
        // sin(x), m = -1 -> -cos(x): termwise (ij)^{-1} on the two modes
        let n = 64;
        let f = RealField1D::zero_mean_from_values(&sample(n, |x| x.sin())).unwrap();
        let g = f.deriv(-1).unwrap();
        let expect = sample(n, |x| -x.cos());
        for (a, b) in g.values().iter().zip(&expect) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn deriv_cos_second() {
        // cos(2x), m = 2 -> -4 cos(2x): (2i)^2 = -4
        let n = 64;
        let f = RealField1D::from_values(&sample(n, |x| (2.0 * x).cos()));
        let g = f.deriv(2).unwrap();
        let expect = sample(n, |x| -4.0 * (2.0 * x).cos());
        for (a, b) in g.values().iter().zip(&expect) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn deriv_negative_two_matches_symbolic_oracle() {
        // cos(x) + sin(3x), m = -2. Independent termwise oracle: integrating
        // twice maps cos(jx) -> -cos(jx)/j^2 and sin(jx) -> -sin(jx)/j^2.
        let n = 64;
        let f =
            RealField1D::zero_mean_from_values(&sample(n, |x| x.cos() + (3.0 * x).sin())).unwrap();
        let g = f.deriv(-2).unwrap();
        let expect = sample(n, |x| -x.cos() - (3.0 * x).sin() / 9.0);
        for (a, b) in g.values().iter().zip(&expect) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn deriv_negative_rejects_nonzero_mean() {
        let n = 64;
        let f = RealField1D::from_values(&sample(n, |x| 1.0 + x.cos()));
        assert!(f.deriv(-1).is_err());
        assert!(f.deriv(1).is_ok());
    }

    #[test]
    fn deriv_round_trip_all_orders() {
        let n = 128;
        let f = RealField1D::zero_mean_from_values(&sample(n, |x| {
            x.sin() + 0.5 * (4.0 * x).cos() - 0.25 * (7.0 * x).sin()
        }))
        .unwrap();
        for m in 1..=4 {
            let g = f.deriv(m).unwrap().deriv(-m).unwrap();
            let diff: f64 = f
                .values()
                .iter()
                .zip(g.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12, "order {m}: {diff}");
        }
    }

    #[test]
    fn product_dealiased_quadratic() {
        // (cos x)^2 = 1/2 + cos(2x)/2, fully resolved: dealiasing is harmless.
        let n = 64;
        let f = RealField1D::from_values(&sample(n, |x| x.cos()));
        let p = f.product_dealiased(&f, 2.0 / 3.0);
        assert_relative_eq!(p.mean(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(p.coeff(2).re, 0.25, epsilon = 1e-14);
        assert_relative_eq!(p.coeff(1).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn reflection_flips_sine() {
        let n = 64;
        let f = RealField1D::from_values(&sample(n, |x| x.sin() + (2.0 * x).cos()));
        let g = f.reflect();
        let expect = sample(n, |x| -x.sin() + (2.0 * x).cos());
        for (a, b) in g.values().iter().zip(&expect) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
    }
}
