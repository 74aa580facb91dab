//! Operator-norm probing across frequency levels: measured ratios per level
//! and a least-squares growth exponent in N^{j beta}.

use num_complex::Complex64;

use crate::operators::probes::ExpSumProbe;
use crate::spectral::{mu_hat_progression, MeasureSpectrum};

/// Result of a norm-probing experiment.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    /// (j, max ratio over the probe family)
    pub per_level: Vec<(u32, f64)>,
    /// least-squares slope of ln(ratio) against j ln N
    pub beta: f64,
    pub intercept: f64,
    /// root-mean-square residual of the fit in ln space
    pub residual: f64,
}

pub fn fit_beta(n: u32, per_level: &[(u32, f64)]) -> NormEstimate {
    let ln_n = (n as f64).ln();
    let pts: Vec<(f64, f64)> =
        per_level.iter().map(|&(j, r)| (j as f64 * ln_n, r.ln())).collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    let (beta, intercept) = if denom.abs() < 1e-30 {
        (0.0, sy / m)
    } else {
        let b = (m * sxy - sx * sy) / denom;
        (b, (sy - b * sx) / m)
    };
    let residual = (pts
        .iter()
        .map(|&(x, y)| {
            let e = y - (beta * x + intercept);
            e * e
        })
        .sum::<f64>()
        / m)
        .sqrt();
    NormEstimate { per_level: per_level.to_vec(), beta, intercept, residual }
}

#[derive(Debug, Clone, Copy)]
pub struct MaximalProbeConfig {
    /// coarse t-grid size on [1/N, 1]
    pub coarse: usize,
    /// number of coarse local maxima refined per sample point
    pub refine_tops: usize,
    /// refinement spacing rule: dt * max frequency <= this
    pub dt_times_freq: f64,
    /// stratified x sample count on the torus
    pub x_samples: usize,
}

impl Default for MaximalProbeConfig {
    fn default() -> Self {
        Self { coarse: 6144, refine_tops: 5, dt_times_freq: 0.1, x_samples: 768 }
    }
}

/// || sup_{1/N <= t <= 1} |A_t f| ||_p / || f ||_p for an exponential-sum
/// probe: coarse scan over a shared t grid, then local refinement of the top
/// maxima per sample point down to the dt * maxfreq <= 0.1 rule.
pub fn maximal_probe_ratio(
    spectrum: &MeasureSpectrum,
    probe: &ExpSumProbe,
    p: f64,
    cfg: &MaximalProbeConfig,
) -> f64 {
    let tree = spectrum.tree();
    let digits = match &tree.selector {
        crate::cantor::Selector::Constant(d) => d.clone(),
        _ => panic!("maximal probe requires a self-similar tree"),
    };
    let n = tree.params.n;
    let t_lo = 1.0 / n as f64;
    let t_hi = 1.0;
    let dt = (t_hi - t_lo) / cfg.coarse as f64;
    // coarse multiplier table: mu_hat(t xi_i) along the t grid per frequency
    let table: Vec<Vec<Complex64>> = probe
        .freqs
        .iter()
        .map(|&nu| mu_hat_progression(&digits, n, t_lo * nu as f64, dt * nu as f64, cfg.coarse + 1))
        .collect();
    let maxfreq = probe.max_freq() as f64;
    let fine_dt = cfg.dt_times_freq / maxfreq;
    let fine_per_cell = ((2.0 * dt) / fine_dt).ceil().max(4.0) as usize;

    let m = probe.freqs.len();
    let mut sup_pow_sum = 0.0f64;
    let mut phases = vec![Complex64::new(0.0, 0.0); m];
    let mut coarse_vals = vec![0.0f64; cfg.coarse + 1];
    for k in 0..cfg.x_samples {
        let x = (k as f64 + 0.5) / cfg.x_samples as f64;
        for (ph, (&nu, c)) in phases.iter_mut().zip(probe.freqs.iter().zip(&probe.coeffs)) {
            *ph = c * crate::spectral::unit_phase(nu as f64 * x);
        }
        // coarse scan
        for (l, v) in coarse_vals.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, ph) in phases.iter().enumerate() {
                acc += ph * table[i][l];
            }
            *v = acc.norm();
        }
        // local maxima of the coarse scan
        let mut tops: Vec<(f64, usize)> = Vec::new();
        for l in 0..=cfg.coarse {
            let left = if l > 0 { coarse_vals[l - 1] } else { f64::MIN };
            let right = if l < cfg.coarse { coarse_vals[l + 1] } else { f64::MIN };
            if coarse_vals[l] >= left && coarse_vals[l] >= right {
                tops.push((coarse_vals[l], l));
            }
        }
        tops.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        tops.truncate(cfg.refine_tops);
        let mut sup = tops.first().map_or(0.0, |t| t.0);
        // refine each candidate window [t_{l-1}, t_{l+1}]
        for &(_, l) in &tops {
            let t0 = (t_lo + (l as f64 - 1.0) * dt).max(t_lo);
            let fine: Vec<Vec<Complex64>> = probe
                .freqs
                .iter()
                .map(|&nu| {
                    mu_hat_progression(
                        &digits,
                        n,
                        t0 * nu as f64,
                        fine_dt * nu as f64,
                        fine_per_cell + 1,
                    )
                })
                .collect();
            for step in 0..=fine_per_cell {
                if t0 + step as f64 * fine_dt > t_hi {
                    break;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, ph) in phases.iter().enumerate() {
                    acc += ph * fine[i][step];
                }
                sup = sup.max(acc.norm());
            }
        }
        sup_pow_sum += sup.powf(p);
    }
    let norm_sup = (sup_pow_sum / cfg.x_samples as f64).powf(1.0 / p);
    norm_sup / probe.lp_torus(p)
}

/// The operator under test in `operator_norm_probe`.
#[derive(Debug, Clone, Copy)]
pub enum OperatorTag {
    Identity,
    /// A_t at a fixed dilation
    Averaging(f64),
    /// single-scale maximal operator over [1/N, 1]
    Maximal,
}

/// Per-level max ratio over a probe family and the fitted growth exponent.
pub fn operator_norm_probe(
    spectrum: &MeasureSpectrum,
    tag: OperatorTag,
    p: f64,
    levels: &[u32],
    probes_for_level: impl Fn(u32) -> Vec<ExpSumProbe>,
    cfg: &MaximalProbeConfig,
) -> NormEstimate {
    let mut per_level = Vec::new();
    for &j in levels {
        let mut worst = 0.0f64;
        for probe in probes_for_level(j) {
            let ratio = match tag {
                OperatorTag::Identity => 1.0,
                OperatorTag::Averaging(t) => {
                    let factors: Vec<Complex64> =
                        probe.freqs.iter().map(|&nu| spectrum.eval(t * nu as f64)).collect();
                    probe.modulated(&factors).lp_torus(p) / probe.lp_torus(p)
                }
                OperatorTag::Maximal => maximal_probe_ratio(spectrum, &probe, p, cfg),
            };
            worst = worst.max(ratio);
        }
        per_level.push((j, worst));
    }
    fit_beta(spectrum.tree().params.n, &per_level)
}
