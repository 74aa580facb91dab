//! Averaging operators A_t f = f * mu_t against the depth-J atomic measure,
//! single-scale and full maximal functions, and mixed-norm averages.
//!
//! Two I/O shapes: sampled grid functions (linear interpolation, used at
//! moderate frequencies), and exponential-sum probes (exact multiplier
//! action, used for the high-frequency trend experiments).

use num_complex::Complex64;

use crate::cantor::CantorTree;
use crate::error::{Error, Result};
use crate::operators::probes::ExpSumProbe;
use crate::spectral::{GridFunction1D, MeasureSpectrum};

/// (A_t f)(x) = N0^{-J} sum_{a in A_J} f(x - t a), f evaluated by linear
/// interpolation (zero off the grid).
pub fn averaging_op(f: &GridFunction1D, t: f64, tree: &CantorTree, level: u32) -> Result<GridFunction1D> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("dilation t = {t} must be positive")));
    }
    let atoms = tree.positions_f64(level)?;
    let inv = 1.0 / atoms.len() as f64;
    let mut out = f.clone();
    for (m, o) in out.samples.iter_mut().enumerate() {
        let x = f.coord(m);
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in &atoms {
            acc += f.interp(x - t * a);
        }
        *o = acc * inv;
    }
    Ok(out)
}

/// Multiplier action on an exponential sum: A_t maps e(xi x) to
/// mu_hat(t xi) e(xi x), exactly.
pub fn averaging_probe(probe: &ExpSumProbe, t: f64, spectrum: &MeasureSpectrum) -> ExpSumProbe {
    let factors: Vec<Complex64> =
        probe.freqs.iter().map(|&nu| spectrum.eval(t * nu as f64)).collect();
    probe.modulated(&factors)
}

/// Pointwise max of |A_t f| over an explicit t grid inside [1/N, 1].
pub fn single_scale_maximal(
    f: &GridFunction1D,
    tree: &CantorTree,
    level: u32,
    t_grid: &[f64],
) -> Result<GridFunction1D> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid("t grid"));
    }
    let n = tree.params.n as f64;
    for &t in t_grid {
        if t < 1.0 / n - 1e-12 || t > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!("t = {t} outside [1/N, 1]")));
        }
    }
    let mut out = f.clone();
    for v in out.samples.iter_mut() {
        *v = Complex64::new(0.0, 0.0);
    }
    for &t in t_grid {
        let at = averaging_op(f, t, tree, level)?;
        for (o, v) in out.samples.iter_mut().zip(&at.samples) {
            let m = v.norm();
            if m > o.re {
                *o = Complex64::new(m, 0.0);
            }
        }
    }
    Ok(out)
}

/// Max over scales k in [k_lo, k_hi] of the per-scale maxima with
/// t in [N^{-k-1}, N^{-k}] sampled at `per_scale` points.
pub fn full_maximal(
    f: &GridFunction1D,
    tree: &CantorTree,
    level: u32,
    k_lo: i32,
    k_hi: i32,
    per_scale: usize,
) -> Result<GridFunction1D> {
    if k_hi < k_lo {
        return Err(Error::EmptyGrid("scale range"));
    }
    let n = tree.params.n as f64;
    let mut out = f.clone();
    for v in out.samples.iter_mut() {
        *v = Complex64::new(0.0, 0.0);
    }
    for k in k_lo..=k_hi {
        let hi = n.powi(-k);
        let lo = n.powi(-k - 1);
        for i in 0..per_scale {
            let t = lo + (hi - lo) * (i as f64 + 0.5) / per_scale as f64;
            let at = averaging_op(f, t, tree, level)?;
            for (o, v) in out.samples.iter_mut().zip(&at.samples) {
                let m = v.norm();
                if m > o.re {
                    *o = Complex64::new(m, 0.0);
                }
            }
        }
    }
    Ok(out)
}

/// || || A_t f (x) ||_{L^r(t_grid, dt)} ||_{L^p(dx)} by nested Riemann sums.
pub fn mixed_norm_average(
    f: &GridFunction1D,
    tree: &CantorTree,
    level: u32,
    r: f64,
    p: f64,
    t_grid: &[f64],
) -> Result<f64> {
    if t_grid.len() < 2 {
        return Err(Error::EmptyGrid("t grid"));
    }
    let dt = t_grid[1] - t_grid[0];
    let averaged: Vec<GridFunction1D> =
        t_grid.iter().map(|&t| averaging_op(f, t, tree, level)).collect::<Result<_>>()?;
    let mut outer = 0.0f64;
    for m in 0..f.len() {
        let inner: f64 = averaged.iter().map(|g| g.samples[m].norm().powf(r)).sum::<f64>() * dt;
        outer += inner.powf(p / r);
    }
    Ok((outer * f.spacing).powf(1.0 / p))
}

/// L^p(R_x x [t_grid]) norm of the inverse transform in x of
/// (1+|xi|^2)^{gamma/2} f_hat(xi) mu_hat(t xi).
pub fn sobolev_average_norm(
    f: &GridFunction1D,
    spectrum: &MeasureSpectrum,
    gamma: f64,
    p: f64,
    t_grid: &[f64],
) -> Result<f64> {
    if t_grid.len() < 2 {
        return Err(Error::EmptyGrid("t grid"));
    }
    let dt = t_grid[1] - t_grid[0];
    let fhat = f.to_frequency();
    let mut acc = 0.0f64;
    for &t in t_grid {
        let mut weighted = fhat.clone();
        for k in 0..weighted.len() {
            let xi = weighted.coord(k);
            let w = (1.0 + xi * xi).powf(gamma / 2.0);
            weighted.samples[k] *= w * spectrum.eval(t * xi);
        }
        let slice = weighted.to_space(f.origin);
        acc += slice.lp_norm(p).powf(p) * dt;
    }
    Ok(acc.powf(1.0 / p))
}

/// Closed-form inner norm for a single-frequency probe:
/// || A_t e(xi .) ||_{L^r(t_grid)} = ( sum |mu_hat(t xi)|^r dt )^{1/r},
/// independent of x.
pub fn single_frequency_mixed_norm(
    spectrum: &MeasureSpectrum,
    xi: f64,
    r: f64,
    t_grid: &[f64],
) -> f64 {
    let dt = t_grid[1] - t_grid[0];
    let sum: f64 = t_grid.iter().map(|&t| spectrum.eval(t * xi).norm().powf(r)).sum();
    (sum * dt).powf(1.0 / r)
}
