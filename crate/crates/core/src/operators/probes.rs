//! Band-limited probe functions represented as exponential sums with integer
//! frequencies. On the unit torus their L^2 and L^4 norms are exact finite
//! sums, which keeps high-frequency operator experiments affordable: applying
//! a Fourier multiplier only rescales the coefficients.

use num_complex::Complex64;
use rand::Rng;

use crate::rng::SeedStream;

/// f(x) = sum_i coeffs[i] e^{2 pi i freqs[i] x}, 1-periodic.
#[derive(Debug, Clone)]
pub struct ExpSumProbe {
    pub freqs: Vec<i64>,
    pub coeffs: Vec<Complex64>,
}

impl ExpSumProbe {
    pub fn new(freqs: Vec<i64>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(freqs.len(), coeffs.len());
        let mut seen = freqs.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), freqs.len(), "probe frequencies must be distinct");
        Self { freqs, coeffs }
    }

    pub fn max_freq(&self) -> i64 {
        self.freqs.iter().map(|f| f.abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.freqs
            .iter()
            .zip(&self.coeffs)
            .map(|(&nu, c)| c * crate::spectral::unit_phase(nu as f64 * x))
            .sum()
    }

    /// Probe with coefficients multiplied entrywise (the action of a Fourier
    /// multiplier on the exponential sum).
    pub fn modulated(&self, factors: &[Complex64]) -> Self {
        assert_eq!(factors.len(), self.coeffs.len());
        Self {
            freqs: self.freqs.clone(),
            coeffs: self.coeffs.iter().zip(factors).map(|(c, m)| c * m).collect(),
        }
    }

    /// Exact L^2([0,1]) norm: Parseval.
    pub fn l2_torus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Exact L^4([0,1]) norm via the quadruple frequency-match sum:
    /// ||f||_4^4 = sum over nu_i + nu_j = nu_k + nu_l of c_i c_j conj(c_k c_l).
    pub fn l4_torus(&self) -> f64 {
        let n = self.freqs.len();
        // bucket pair sums
        let mut pair: std::collections::HashMap<i64, Complex64> = std::collections::HashMap::new();
        for i in 0..n {
            for j in 0..n {
                *pair.entry(self.freqs[i] + self.freqs[j]).or_insert(Complex64::new(0.0, 0.0)) +=
                    self.coeffs[i] * self.coeffs[j];
            }
        }
        let total: f64 = pair.values().map(|v| v.norm_sqr()).sum();
        total.powf(0.25)
    }

    /// Exact L^p for the supported even exponents.
    pub fn lp_torus(&self, p: f64) -> f64 {
        if (p - 2.0).abs() < 1e-12 {
            self.l2_torus()
        } else if (p - 4.0).abs() < 1e-12 {
            self.l4_torus()
        } else {
            panic!("exact torus norms implemented for p in {{2, 4}}, got {p}")
        }
    }
}

/// Families of probes with spectrum in the dyadic-like band
/// N^j <= |xi| <= 2 N^{j+1}.
pub struct ProbeFamily;

impl ProbeFamily {
    /// Functions with Fourier support in an O(1) neighbourhood of N^j: the
    /// family that defeats Sobolev improvement when mu_hat(N^j) does not decay.
    pub fn adversarial(n: u32, j: u32, count: usize, seeds: &SeedStream) -> Vec<ExpSumProbe> {
        let base = (n as i64).pow(j);
        (0..count)
            .map(|t| {
                let mut rng = seeds.stream("probe.adversarial", t as u64);
                let m = 3 + (t % 3);
                let mut freqs: Vec<i64> = Vec::new();
                while freqs.len() < m {
                    let cand = base + rng.gen_range(0..6) as i64;
                    if !freqs.contains(&cand) {
                        freqs.push(cand);
                    }
                }
                let coeffs = random_unit_coeffs(freqs.len(), &mut rng);
                ExpSumProbe::new(freqs, coeffs)
            })
            .collect()
    }

    /// Random sparse spectra across the whole band.
    pub fn band_spread(n: u32, j: u32, count: usize, seeds: &SeedStream) -> Vec<ExpSumProbe> {
        let lo = (n as i64).pow(j);
        let hi = 2 * (n as i64).pow(j + 1);
        (0..count)
            .map(|t| {
                let mut rng = seeds.stream("probe.band", t as u64);
                let m = 4 + (t % 4);
                let mut freqs: Vec<i64> = Vec::new();
                while freqs.len() < m {
                    let cand = rng.gen_range(lo..=hi);
                    if !freqs.contains(&cand) {
                        freqs.push(cand);
                    }
                }
                let coeffs = random_unit_coeffs(freqs.len(), &mut rng);
                ExpSumProbe::new(freqs, coeffs)
            })
            .collect()
    }

    /// Single frequencies spread across the band (closed-form oracles).
    pub fn single_frequency(n: u32, j: u32) -> Vec<ExpSumProbe> {
        let lo = (n as i64).pow(j);
        let hi = 2 * (n as i64).pow(j + 1);
        [lo, (lo + hi) / 2, hi]
            .iter()
            .map(|&nu| ExpSumProbe::new(vec![nu], vec![Complex64::new(1.0, 0.0)]))
            .collect()
    }
}

fn random_unit_coeffs(m: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut c: Vec<Complex64> =
        (0..m).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let norm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in c.iter_mut() {
        *x /= norm;
    }
    c
}
