//! Uniformly sampled complex-valued functions and the discrete transform
//! contract between them. Forward kernel is e^{-2 pi i x xi}.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// e^{2 pi i x} with the argument reduced mod 1 first, so integer arguments
/// give exactly 1 and large arguments keep full precision.
#[inline]
pub fn unit_phase(x: f64) -> Complex64 {
    let r = x - x.round();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarLabel {
    Space,
    Frequency,
}

/// A uniformly sampled complex function on origin + spacing * [0, len).
#[derive(Debug, Clone)]
pub struct GridFunction1D {
    pub origin: f64,
    pub spacing: f64,
    pub samples: Vec<Complex64>,
    pub label: VarLabel,
}

impl GridFunction1D {
    pub fn new(origin: f64, spacing: f64, samples: Vec<Complex64>, label: VarLabel) -> Self {
        assert!(spacing > 0.0 && samples.len() >= 2, "need spacing > 0 and >= 2 samples");
        Self { origin, spacing, samples, label }
    }

    pub fn from_fn(
        origin: f64,
        spacing: f64,
        len: usize,
        label: VarLabel,
        f: impl Fn(f64) -> Complex64,
    ) -> Self {
        let samples = (0..len).map(|m| f(origin + m as f64 * spacing)).collect();
        Self::new(origin, spacing, samples, label)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn coord(&self, idx: usize) -> f64 {
        self.origin + idx as f64 * self.spacing
    }

    /// Largest frequency the grid can represent.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.spacing
    }

    /// Riemann L^p norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let sum: f64 = self.samples.iter().map(|v| v.norm_sqr().powf(p / 2.0)).sum();
        (self.spacing * sum).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    /// Linear interpolation; zero outside the grid.
    pub fn interp(&self, x: f64) -> Complex64 {
        let t = (x - self.origin) / self.spacing;
        if t < 0.0 || t > (self.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = t.floor() as usize;
        if i + 1 >= self.len() {
            return self.samples[self.len() - 1];
        }
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// Forward transform: samples of f_hat(xi) = integral e^{-2 pi i x xi} f(x) dx
    /// on the frequency grid xi_k = k / (len * spacing), k in [-len/2, len/2).
    pub fn to_frequency(&self) -> GridFunction1D {
        let m = self.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let dxi = 1.0 / (m as f64 * self.spacing);
        let half = m / 2;
        let mut samples = vec![Complex64::new(0.0, 0.0); m];
        for (k_out, sample) in samples.iter_mut().enumerate() {
            let k = k_out as i64 - half as i64;
            let idx = k.rem_euclid(m as i64) as usize;
            let xi = k as f64 * dxi;
            *sample = buf[idx] * self.spacing * unit_phase(-self.origin * xi);
        }
        GridFunction1D::new(-(half as f64) * dxi, dxi, samples, VarLabel::Frequency)
    }

    /// Inverse transform matching `to_frequency`, producing samples on the
    /// spatial grid with the given origin.
    pub fn to_space(&self, space_origin: f64) -> GridFunction1D {
        let m = self.len();
        // multiply by e^{2 pi i origin_xi-dependent phases} then inverse DFT
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k_in, v) in self.samples.iter().enumerate() {
            let xi = self.origin + k_in as f64 * self.spacing;
            let k = (xi / self.spacing).round() as i64;
            let idx = k.rem_euclid(m as i64) as usize;
            buf[idx] = v * unit_phase(space_origin * xi);
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        let dx = 1.0 / (m as f64 * self.spacing);
        let samples = buf.into_iter().map(|v| v * self.spacing).collect();
        GridFunction1D::new(space_origin, dx, samples, VarLabel::Space)
    }

    /// Structured text form: header plus one "coord re im" row per sample.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let label = match self.label {
            VarLabel::Space => "x",
            VarLabel::Frequency => "xi",
        };
        let _ = writeln!(out, "# var = {label}");
        let _ = writeln!(out, "# origin = {:.17e}", self.origin);
        let _ = writeln!(out, "# spacing = {:.17e}", self.spacing);
        let _ = writeln!(out, "# len = {}", self.len());
        for (i, v) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{:.17e} {:.17e} {:.17e}", self.coord(i), v.re, v.im);
        }
        out
    }
}

/// Row-major complex samples on a rectangular (x, t) or (xi, s) grid.
#[derive(Debug, Clone)]
pub struct GridFunction2D {
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
    pub shape: (usize, usize), // (rows = second axis, cols = first axis)
    pub samples: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn new(origin: (f64, f64), spacing: (f64, f64), shape: (usize, usize)) -> Self {
        assert!(spacing.0 > 0.0 && spacing.1 > 0.0);
        Self { origin, spacing, shape, samples: vec![Complex64::new(0.0, 0.0); shape.0 * shape.1] }
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.samples[row * self.shape.1 + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        &mut self.samples[row * self.shape.1 + col]
    }

    pub fn coord(&self, row: usize, col: usize) -> (f64, f64) {
        (self.origin.0 + col as f64 * self.spacing.0, self.origin.1 + row as f64 * self.spacing.1)
    }

    /// Riemann L^p norm over the rectangle.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let cell = self.spacing.0 * self.spacing.1;
        let sum: f64 = self.samples.iter().map(|v| v.norm_sqr().powf(p / 2.0)).sum();
        (cell * sum).powf(1.0 / p)
    }
}

/// Rejects grids that cannot represent the requested band.
pub fn require_band(grid: &GridFunction1D, needed: f64) -> Result<()> {
    let available = grid.nyquist();
    if available < needed {
        return Err(Error::Aliasing { needed, available });
    }
    Ok(())
}
