//! Fourier calculus on the angle torus `T^d` and the traveling-wave
//! substitution `(phi, x) -> Rcheck(phi - jvec * x)`.

use crate::error::{Error, Result};
use crate::spectral::GridSpec;
use num_complex::Complex64;
use std::sync::Arc;

/// The box lattice `{ l in Z^d : |l|_inf <= l_max }` with O(1) index lookup.
///
/// The bracket convention used throughout is `<l> = max(1, |l_1|, ..., |l_d|)`,
/// so the box cutoff `|l|_inf <= L` is exactly `<l> <= L`.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub d: usize,
    pub l_max: i64,
    points: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(d: usize, l_max: i64) -> Arc<Self> {
        assert!(d >= 1 && l_max >= 0);
        let side = (2 * l_max + 1) as usize;
        let total = side.pow(d as u32);
        let mut points = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut l = vec![0i64; d];
            for lk in l.iter_mut().rev() {
                *lk = (rem % side) as i64 - l_max;
                rem /= side;
            }
            points.push(l);
        }
        Arc::new(Lattice { d, l_max, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> &[i64] {
        &self.points[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[i64])> {
        self.points.iter().enumerate().map(|(i, p)| (i, p.as_slice()))
    }

    /// Index of `l`, or `None` outside the box.
    pub fn index_of(&self, l: &[i64]) -> Option<usize> {
        let side = (2 * self.l_max + 1) as usize;
        let mut idx = 0usize;
        for &lk in l {
            if lk.abs() > self.l_max {
                return None;
            }
            idx = idx * side + (lk + self.l_max) as usize;
        }
        Some(idx)
    }

    /// `max(1, |l|_inf)`.
    pub fn bracket(l: &[i64]) -> i64 {
        l.iter().map(|lk| lk.abs()).max().unwrap_or(0).max(1)
    }

    /// Canonical representatives of the `+-l` pairs: first nonzero entry
    /// positive. The origin is excluded.
    pub fn half_lattice(&self) -> Vec<Vec<i64>> {
        self.points
            .iter()
            .filter(|l| is_canonical(l))
            .cloned()
            .collect()
    }
}

/// True when the first nonzero entry of `l` is positive.
pub fn is_canonical(l: &[i64]) -> bool {
    for &lk in l {
        if lk > 0 {
            return true;
        }
        if lk < 0 {
            return false;
        }
    }
    false
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_f(a: &[f64], l: &[i64]) -> f64 {
    a.iter().zip(l).map(|(x, &y)| x * y as f64).sum()
}

/// A real function on `T^d` held as full-lattice complex Fourier coefficients
/// `f(psi) = sum_l c_l e^{i l psi}` with `c_{-l} = conj(c_l)`.
#[derive(Debug, Clone)]
pub struct CheckFn {
    pub lat: Arc<Lattice>,
    coeffs: Vec<Complex64>,
}

impl CheckFn {
    pub fn zeros(lat: Arc<Lattice>) -> Self {
        let n = lat.len();
        CheckFn {
            lat,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Build from cosine amplitudes over canonical representatives:
    /// `f = sum a_l cos(l psi)`.
    pub fn from_cosine(lat: Arc<Lattice>, amps: &[(Vec<i64>, f64)]) -> Self {
        let mut f = CheckFn::zeros(lat);
        for (l, a) in amps {
            f.add_cosine(l, *a);
        }
        f
    }

    pub fn add_cosine(&mut self, l: &[i64], a: f64) {
        if l.iter().all(|&lk| lk == 0) {
            self.coeffs[self.lat.index_of(l).unwrap()] += Complex64::new(a, 0.0);
            return;
        }
        let idx = self.lat.index_of(l).expect("mode outside lattice");
        let neg: Vec<i64> = l.iter().map(|&lk| -lk).collect();
        let nidx = self.lat.index_of(&neg).unwrap();
        self.coeffs[idx] += Complex64::new(a / 2.0, 0.0);
        self.coeffs[nidx] += Complex64::new(a / 2.0, 0.0);
    }

    pub fn add_sine(&mut self, l: &[i64], b: f64) {
        if l.iter().all(|&lk| lk == 0) {
            return;
        }
        let idx = self.lat.index_of(l).expect("mode outside lattice");
        let neg: Vec<i64> = l.iter().map(|&lk| -lk).collect();
        let nidx = self.lat.index_of(&neg).unwrap();
        // sin(l psi) = (e^{il psi} - e^{-il psi}) / (2i)
        self.coeffs[idx] += Complex64::new(0.0, -b / 2.0);
        self.coeffs[nidx] += Complex64::new(0.0, b / 2.0);
    }

    pub fn coeff(&self, l: &[i64]) -> Complex64 {
        match self.lat.index_of(l) {
            Some(i) => self.coeffs[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn coeff_by_index(&self, idx: usize) -> Complex64 {
        self.coeffs[idx]
    }

    pub fn set_coeff_by_index(&mut self, idx: usize, value: Complex64) {
        self.coeffs[idx] = value;
    }

    /// Cosine amplitude at a canonical representative `l`.
    pub fn cosine_amp(&self, l: &[i64]) -> f64 {
        2.0 * self.coeff(l).re
    }

    /// Sine amplitude at a canonical representative `l`.
    pub fn sine_amp(&self, l: &[i64]) -> f64 {
        -2.0 * self.coeff(l).im
    }

    pub fn mean(&self) -> f64 {
        let origin = vec![0i64; self.lat.d];
        self.coeff(&origin).re
    }

    pub fn eval(&self, psi: &[f64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, l) in self.lat.iter() {
            let phase = dot_f(psi, l);
            acc += self.coeffs[i] * Complex64::new(phase.cos(), phase.sin());
        }
        acc.re
    }

    /// Directional derivative `w . d_psi`: `c_l -> i (w . l) c_l`.
    pub fn dir_deriv(&self, w: &[f64]) -> CheckFn {
        let mut out = self.clone();
        for (i, l) in self.lat.iter() {
            out.coeffs[i] = Complex64::new(0.0, dot_f(w, l)) * self.coeffs[i];
        }
        out
    }

    /// Integer directional derivative `jvec . d_psi`.
    pub fn jvec_deriv(&self, jvec: &[i64]) -> CheckFn {
        let w: Vec<f64> = jvec.iter().map(|&j| j as f64).collect();
        self.dir_deriv(&w)
    }

    /// `(jvec . d_psi)^{-2}`: `c_l -> -c_l / (jvec . l)^2`. Requires every
    /// active mode to satisfy `jvec . l != 0`.
    pub fn jvec_deriv_inv2(&self, jvec: &[i64]) -> Result<CheckFn> {
        let mut out = self.clone();
        for (i, l) in self.lat.iter() {
            let n = dot(jvec, l);
            if n == 0 {
                if self.coeffs[i].norm() > 1e-14 {
                    return Err(Error::domain(format!(
                        "mode {l:?} carries jvec.l = 0: (jvec d_psi)^{{-2}} undefined"
                    )));
                }
                out.coeffs[i] = Complex64::new(0.0, 0.0);
            } else {
                out.coeffs[i] = -self.coeffs[i] / (n * n) as f64;
            }
        }
        Ok(out)
    }

    /// Apply a real even multiplier in the transported `x` frequency
    /// `j = -jvec . l`: `c_l -> s(|jvec . l|) c_l`. Modes with `jvec.l = 0`
    /// get factor `s0`.
    pub fn x_multiplier(&self, jvec: &[i64], s: impl Fn(f64) -> f64, s0: f64) -> CheckFn {
        let mut out = self.clone();
        for (i, l) in self.lat.iter() {
            let n = dot(jvec, l);
            let factor = if n == 0 { s0 } else { s(n.abs() as f64) };
            out.coeffs[i] = self.coeffs[i] * factor;
        }
        out
    }

    /// Truncated product: convolution of coefficients, modes outside the
    /// lattice dropped. With supports `<= l_max/2` this is exact.
    pub fn mul(&self, other: &CheckFn) -> CheckFn {
        assert_eq!(self.lat.len(), other.lat.len(), "lattice mismatch");
        let mut out = CheckFn::zeros(self.lat.clone());
        let tol = 0.0;
        for (i, li) in self.lat.iter() {
            let a = self.coeffs[i];
            if a.norm_sqr() <= tol {
                continue;
            }
            for (k, lk) in other.lat.iter() {
                let b = other.coeffs[k];
                if b.norm_sqr() <= tol {
                    continue;
                }
                let sum: Vec<i64> = li.iter().zip(lk).map(|(x, y)| x + y).collect();
                if let Some(si) = out.lat.index_of(&sum) {
                    out.coeffs[si] += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> CheckFn {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn add(&self, other: &CheckFn) -> CheckFn {
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        out
    }

    pub fn sub(&self, other: &CheckFn) -> CheckFn {
        self.add(&other.scale(-1.0))
    }

    pub fn sup_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude among odd (sine) parts: zero iff the
    /// function is even (pure cosine).
    pub fn odd_part_sup(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude among even (cosine) parts.
    pub fn even_part_sup(&self) -> f64 {
        self.coeffs.iter().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient over modes with `jvec . l = 0` (the `x`-mean
    /// band under the traveling substitution).
    pub fn zero_momentum_sup(&self, jvec: &[i64]) -> f64 {
        self.lat
            .iter()
            .filter(|(_, l)| dot(jvec, l) == 0)
            .map(|(i, _)| self.coeffs[i].norm())
            .fold(0.0, f64::max)
    }
}

/// Samples of a traveling pair on the product grid `T^d_phi x T_x`,
/// row-major over `(phi_1, ..., phi_d, x)`.
#[derive(Debug, Clone)]
pub struct ProductSamples {
    pub n_phi: Vec<usize>,
    pub n_x: usize,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

impl ProductSamples {
    pub fn index(&self, phi_idx: &[usize], x_idx: usize) -> usize {
        let mut flat = 0usize;
        for (k, &i) in phi_idx.iter().enumerate() {
            flat = flat * self.n_phi[k] + i;
        }
        flat * self.n_x + x_idx
    }
}

/// Evaluate the traveling substitution `output(phi, x) = Rcheck(phi - jvec x)`
/// for a pair of check functions on the product grid.
pub fn traveling_substitute(
    plus: &CheckFn,
    minus: &CheckFn,
    jvec: &[i64],
    grid: &GridSpec,
) -> Result<ProductSamples> {
    let d = plus.lat.d;
    if jvec.len() != d || grid.n_phi.len() != d {
        return Err(Error::validation(format!(
            "dimension mismatch: wave d = {d}, jvec d = {}, grid d = {}",
            jvec.len(),
            grid.n_phi.len()
        )));
    }
    grid.validate()?;
    let total_phi: usize = grid.n_phi.iter().product();
    let n_x = grid.n_x;
    let mut out = ProductSamples {
        n_phi: grid.n_phi.clone(),
        n_x,
        plus: vec![0.0; total_phi * n_x],
        minus: vec![0.0; total_phi * n_x],
    };
    let tau = 2.0 * std::f64::consts::PI;
    let mut psi = vec![0.0; d];
    for flat in 0..total_phi {
        let mut rem = flat;
        let mut phi = vec![0.0; d];
        for k in (0..d).rev() {
            phi[k] = tau * (rem % grid.n_phi[k]) as f64 / grid.n_phi[k] as f64;
            rem /= grid.n_phi[k];
        }
        for ix in 0..n_x {
            let x = tau * ix as f64 / n_x as f64;
            for k in 0..d {
                psi[k] = phi[k] - jvec[k] as f64 * x;
            }
            out.plus[flat * n_x + ix] = plus.eval(&psi);
            out.minus[flat * n_x + ix] = minus.eval(&psi);
        }
    }
    Ok(out)
}
