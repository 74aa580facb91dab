//! Fourier transforms of Cantor measures: the self-similar product formula,
//! atomic sums at finite depth, Littlewood-Paley pieces of functions, and
//! the band-limited pieces sigma_j of the measure itself.

use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;

use super::bump::{phi_j, phi_j_support};
use super::grid::{require_band, unit_phase, GridFunction1D, VarLabel};
use crate::cantor::CantorTree;
use crate::error::{Error, Result};

/// Truncated product formula for the self-similar measure:
/// mu_hat(xi) = e^{-2 pi i xi} prod_{k=1..K} (1/N0) sum_{s in S} e^{-2 pi i s xi N^{-k}}.
pub fn mu_hat_selfsimilar(digits: &[u32], n: u32, xi: f64, truncation: u32) -> Complex64 {
    assert!(truncation >= 1);
    let n0 = digits.len() as f64;
    let mut acc = unit_phase(-xi);
    let mut scale = 1.0 / n as f64;
    for _ in 0..truncation {
        let factor: Complex64 =
            digits.iter().map(|&s| unit_phase(-(s as f64) * xi * scale)).sum::<Complex64>() / n0;
        acc *= factor;
        scale /= n as f64;
    }
    acc
}

/// Upper bound on the truncation error of `mu_hat_selfsimilar`: the omitted
/// factors differ from 1 by at most 2 pi |xi| max(S) N^{-k}, summed over k > K.
pub fn mu_hat_truncation_bound(digits: &[u32], n: u32, xi: f64, truncation: u32) -> f64 {
    let max_s = digits.iter().copied().max().unwrap_or(0) as f64;
    let nf = n as f64;
    2.0 * std::f64::consts::PI * xi.abs() * max_s * nf.powi(-(truncation as i32)) / (nf - 1.0)
}

/// Atomic approximation at depth J: N0^{-J} sum_{a in A_J} e^{-2 pi i a xi}.
pub fn mu_hat_atoms(tree: &CantorTree, level: u32, xi: f64) -> Result<Complex64> {
    let nodes = tree.nodes(level)?;
    let n = tree.params.n as f64;
    let njd = n.powi(level as i32);
    let sum: Complex64 = nodes
        .iter()
        .map(|node| {
            // a = 1 + M N^{-J}; split the phase so integer xi stays exact
            unit_phase(-xi) * unit_phase(-xi * node.offset_numerator as f64 / njd)
        })
        .sum();
    Ok(sum / nodes.len() as f64)
}

/// Cached evaluator for mu_hat: product formula in the self-similar case,
/// atomic sum at the built depth otherwise. The cache is per-instance; clone
/// the spectrum per worker for concurrent use.
pub struct MeasureSpectrum<'a> {
    tree: &'a CantorTree,
    pub truncation: u32,
    cache: RefCell<HashMap<u64, Complex64>>,
}

impl<'a> MeasureSpectrum<'a> {
    pub fn new(tree: &'a CantorTree, truncation: u32) -> Self {
        Self { tree, truncation, cache: RefCell::new(HashMap::new()) }
    }

    pub fn tree(&self) -> &CantorTree {
        self.tree
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        let key = xi.to_bits();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return v;
        }
        let v = if let crate::cantor::Selector::Constant(digits) = &self.tree.selector {
            mu_hat_selfsimilar(digits, self.tree.params.n, xi, self.truncation)
        } else {
            mu_hat_atoms(self.tree, self.tree.depth, xi).expect("depth is valid")
        };
        self.cache.borrow_mut().insert(key, v);
        v
    }
}

/// mu_hat of the self-similar measure along an arithmetic progression of
/// arguments eta_k = eta0 + k d_eta, via per-level digit phase recurrences
/// (one complex multiply per digit per level per step instead of fresh
/// exponentials).
pub fn mu_hat_progression(
    digits: &[u32],
    n: u32,
    eta0: f64,
    d_eta: f64,
    len: usize,
) -> Vec<Complex64> {
    let nf = n as f64;
    let max_eta = eta0.abs().max((eta0 + len as f64 * d_eta).abs()).max(1.0);
    let levels = (max_eta.log(nf).ceil() as i32 + 12).max(13) as usize;
    let n0 = digits.len() as f64;
    // leading factor e^{-2 pi i eta}
    let mut lead = unit_phase(-eta0);
    let lead_step = unit_phase(-d_eta);
    let mut cur: Vec<Complex64> = Vec::with_capacity(levels * digits.len());
    let mut step: Vec<Complex64> = Vec::with_capacity(levels * digits.len());
    for k in 1..=levels {
        let scale = nf.powi(-(k as i32));
        for &s in digits {
            cur.push(unit_phase(-(s as f64) * eta0 * scale));
            step.push(unit_phase(-(s as f64) * d_eta * scale));
        }
    }
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let mut prod = lead;
        for k in 0..levels {
            let mut factor = Complex64::new(0.0, 0.0);
            for d in 0..digits.len() {
                factor += cur[k * digits.len() + d];
            }
            prod *= factor / n0;
        }
        out.push(prod);
        lead *= lead_step;
        for (c, s) in cur.iter_mut().zip(&step) {
            *c *= s;
        }
    }
    out
}

/// sigma_hat_j(xi) = phi_j(xi) mu_hat(xi).
pub fn sigma_hat_j(spectrum: &MeasureSpectrum, j: u32, xi: f64) -> Complex64 {
    let cutoff = phi_j(xi, spectrum.tree().params.n, j);
    if cutoff == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    spectrum.eval(xi) * cutoff
}

/// Samples sigma_hat_j on a frequency grid. The grid must resolve the piece's
/// support band.
pub fn sigma_piece(spectrum: &MeasureSpectrum, j: u32, grid: &GridFunction1D) -> Result<GridFunction1D> {
    if grid.label != VarLabel::Frequency {
        return Err(Error::InvalidParameter("sigma_piece expects a frequency grid".into()));
    }
    let (_, hi) = phi_j_support(spectrum.tree().params.n, j);
    let last = grid.coord(grid.len() - 1).abs().max(grid.origin.abs());
    if last < hi {
        return Err(Error::Aliasing { needed: hi, available: last });
    }
    let samples = (0..grid.len()).map(|k| sigma_hat_j(spectrum, j, grid.coord(k))).collect();
    Ok(GridFunction1D::new(grid.origin, grid.spacing, samples, VarLabel::Frequency))
}

/// Littlewood-Paley piece of a sampled function: inverse transform of
/// phi_j * f_hat. Rejects grids that alias the piece's band.
pub fn littlewood_paley_piece(f: &GridFunction1D, j: u32, n: u32) -> Result<GridFunction1D> {
    let (_, hi) = phi_j_support(n, j);
    require_band(f, hi)?;
    let mut fhat = f.to_frequency();
    for k in 0..fhat.len() {
        let xi = fhat.coord(k);
        let c = phi_j(xi, n, j);
        fhat.samples[k] *= c;
    }
    Ok(fhat.to_space(f.origin))
}
