//! Sidon / Lambda(p) digit sets: explicit constructions, exact certification,
//! exact even-moment counts, and numerical lower bounds on Lambda(p)
//! constants by projected coefficient ascent.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{CubicExt, Gf};
use crate::rng::SeedStream;

/// A finite set of integer frequencies inside [0, base).
///
/// When used as Cantor digits the convention base-1 not in S is enforced at
/// tree construction; constructions like the greedy Sidon set may fill the
/// whole range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSet {
    pub base: u32,
    pub elements: Vec<u32>,
}

impl DigitSet {
    pub fn new(base: u32, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        let len = elements.len();
        elements.dedup();
        if elements.len() != len {
            return Err(Error::InvalidParameter("repeated element in digit set".into()));
        }
        if let Some(&max) = elements.last() {
            if max >= base {
                return Err(Error::DigitOutOfRange { digit: max as i64, base });
            }
        }
        Ok(Self { base, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_element(&self) -> u32 {
        *self.elements.last().unwrap_or(&0)
    }

    /// True when base-1 is absent, i.e. the set is usable as Cantor digits.
    pub fn avoids_top_digit(&self) -> bool {
        self.elements.last().map_or(true, |&m| m + 1 < self.base)
    }
}

/// Outcome of the exhaustive Sidon check.
#[derive(Debug, Clone)]
pub struct SidonCertificate {
    pub is_sidon: bool,
    /// A violating quadruple (a, b, c, d) with a + b = c + d when not Sidon.
    pub witness: Option<(u32, u32, u32, u32)>,
    /// Exact additive energy E_2(S).
    pub energy_e2: u128,
}

/// Exhaustive check that all pairwise sums a + b (a <= b) are distinct.
pub fn is_sidon(set: &DigitSet) -> SidonCertificate {
    let s = &set.elements;
    let energy = additive_energy(set, 2);
    let mut seen: std::collections::HashMap<u32, (u32, u32)> = std::collections::HashMap::new();
    let mut witness = None;
    'outer: for (i, &a) in s.iter().enumerate() {
        for &b in &s[i..] {
            if let Some(&(c, d)) = seen.get(&(a + b)) {
                witness = Some((a, b, c, d));
                break 'outer;
            }
            seen.insert(a + b, (a, b));
        }
    }
    let n = s.len() as u128;
    let is_sidon = witness.is_none();
    debug_assert_eq!(is_sidon, energy == 2 * n * n - n);
    SidonCertificate { is_sidon, witness, energy_e2: energy }
}

/// Singer perfect difference set: q + 1 residues mod N = q^2 + q + 1 such
/// that every nonzero residue arises exactly once as a difference. The
/// returned representative is the lexicographically smallest translate that
/// avoids the top digit N - 1.
pub fn singer_difference_set(q: u32) -> Result<DigitSet> {
    let field = Gf::new(q)?;
    let ext = CubicExt::new(field)?;
    let n = q * q + q + 1;
    let g = ext.primitive_element();
    let mut set = Vec::with_capacity((q + 1) as usize);
    let mut x = 1u64; // g^0
    for i in 0..n {
        if ext.trace(x) == 0 {
            set.push(i);
        }
        x = ext.mul(x, g);
    }
    if set.len() != (q + 1) as usize {
        return Err(Error::InvalidParameter(format!(
            "trace-zero line has {} points, expected {}",
            set.len(),
            q + 1
        )));
    }
    let best = best_translate(&set, n);
    let ds = DigitSet::new(n, best)?;
    debug_assert!(certify_perfect_difference_set(&ds));
    Ok(ds)
}

/// Lexicographically smallest translate mod n avoiding residue n - 1.
fn best_translate(set: &[u32], n: u32) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for c in 0..n {
        let mut t: Vec<u32> = set.iter().map(|&x| (x + c) % n).collect();
        t.sort_unstable();
        if *t.last().unwrap() == n - 1 {
            continue;
        }
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    best.expect("some translate avoids the top residue")
}

/// Checks that every nonzero residue mod base occurs exactly once as an
/// ordered difference of set elements.
pub fn certify_perfect_difference_set(set: &DigitSet) -> bool {
    let n = set.base;
    let mut counts = vec![0u32; n as usize];
    for &a in &set.elements {
        for &b in &set.elements {
            if a != b {
                counts[((a + n - b) % n) as usize] += 1;
            }
        }
    }
    counts[1..].iter().all(|&c| c == 1)
}

/// Greedy Sidon set in [0, limit): each candidate is kept when all pairwise
/// sums stay distinct.
pub fn mian_chowla_greedy(limit: u32) -> DigitSet {
    let mut elements: Vec<u32> = Vec::new();
    let mut sums = std::collections::HashSet::new();
    for cand in 0..limit {
        let mut new_sums: Vec<u32> = elements.iter().map(|&a| a + cand).collect();
        new_sums.push(cand + cand);
        new_sums.sort_unstable();
        let distinct =
            new_sums.windows(2).all(|w| w[0] != w[1]) && new_sums.iter().all(|s| !sums.contains(s));
        if distinct {
            for s in new_sums {
                sums.insert(s);
            }
            elements.push(cand);
        }
    }
    DigitSet { base: limit.max(1), elements }
}

/// Exact count of solutions of a_1 + .. + a_k = a_{k+1} + .. + a_{2k} with
/// all a_i in S, via iterated integer convolution of the indicator.
pub fn additive_energy(set: &DigitSet, k: u32) -> u128 {
    assert!(k >= 1, "half-exponent k must be >= 1");
    let max = set.max_element() as usize;
    let mut indicator = vec![0u128; max + 1];
    for &a in &set.elements {
        indicator[a as usize] = 1;
    }
    let mut rk = indicator.clone();
    for _ in 1..k {
        rk = convolve(&rk, &indicator);
    }
    rk.iter().map(|&r| r * r).sum()
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact unit-coefficient Lambda(2k) ratio E_k(S)^{1/2k} / |S|^{1/2}.
pub fn lambda_p_ratio_exact_even(set: &DigitSet, k: u32) -> f64 {
    let energy = additive_energy(set, k) as f64;
    energy.powf(1.0 / (2.0 * k as f64)) / (set.len() as f64).sqrt()
}

/// Result of the coefficient-space ascent for the Lambda(p) ratio.
#[derive(Debug, Clone)]
pub struct LambdaPEstimate {
    pub p: f64,
    /// Unit-coefficient ratio (exact for even p, quadrature otherwise).
    pub ratio_unit: f64,
    /// Best ratio found over all restarts; a lower bound for the constant.
    pub ratio_sup: f64,
    pub best_coefficients: Vec<Complex64>,
    pub trials: u32,
    pub steps: u32,
    pub converged: bool,
}

/// Quadrature grid for || sum c_a e(a x) ||_p on [0,1]: exact for p = 4
/// (trigonometric polynomial of degree <= 4 max S), refined for other p.
fn quadrature_points(set: &DigitSet, p: f64) -> usize {
    let m = set.max_element() as usize;
    if (p - 4.0).abs() < 1e-12 || (p - 2.0).abs() < 1e-12 {
        4 * m + 1
    } else {
        (16 * m).max(64)
    }
}

fn lp_norm_on_grid(values: &[Complex64], p: f64) -> f64 {
    let mean: f64 =
        values.iter().map(|v| v.norm_sqr().powf(p / 2.0)).sum::<f64>() / values.len() as f64;
    mean.powf(1.0 / p)
}

/// || sum_a c_a e(a x) ||_{L^p[0,1]} by equispaced quadrature.
pub fn exponential_sum_lp(set: &DigitSet, coeffs: &[Complex64], p: f64) -> f64 {
    let m = quadrature_points(set, p);
    let phases: Vec<Complex64> = (0..m)
        .map(|i| {
            let x = i as f64 / m as f64;
            set.elements
                .iter()
                .zip(coeffs)
                .map(|(&a, c)| c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 * x))
                .sum()
        })
        .collect();
    lp_norm_on_grid(&phases, p)
}

struct SphereAscent {
    /// phase[a][i] = e(a x_i) on the quadrature grid
    phase: Vec<Vec<Complex64>>,
    m: usize,
    p: f64,
}

impl SphereAscent {
    fn new(set: &DigitSet, p: f64) -> Self {
        let m = quadrature_points(set, p);
        let two_pi = 2.0 * std::f64::consts::PI;
        let phase = set
            .elements
            .iter()
            .map(|&a| {
                (0..m)
                    .map(|i| Complex64::from_polar(1.0, two_pi * a as f64 * i as f64 / m as f64))
                    .collect()
            })
            .collect();
        Self { phase, m, p }
    }

    fn eval(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.m];
        for (ca, row) in c.iter().zip(&self.phase) {
            for (o, ph) in out.iter_mut().zip(row) {
                *o += ca * ph;
            }
        }
        out
    }

    fn objective(&self, c: &[Complex64]) -> f64 {
        lp_norm_on_grid(&self.eval(c), self.p)
    }

    /// Wirtinger gradient of mean |P|^p with respect to conj(c_a):
    /// (p/2) mean( |P|^{p-2} P conj(e(ax)) ).
    fn gradient(&self, c: &[Complex64]) -> Vec<Complex64> {
        let values = self.eval(c);
        let weights: Vec<Complex64> = values
            .iter()
            .map(|v| v * v.norm_sqr().powf(self.p / 2.0 - 1.0))
            .collect();
        self.phase
            .iter()
            .map(|row| {
                row.iter().zip(&weights).map(|(ph, w)| w * ph.conj()).sum::<Complex64>()
                    * (self.p / (2.0 * self.m as f64))
            })
            .collect()
    }

    /// One restart: backtracking projected ascent. Returns (value, coeffs,
    /// converged).
    fn run(&self, start: Vec<Complex64>, steps: u32) -> (f64, Vec<Complex64>, bool) {
        let mut c = start;
        normalize(&mut c);
        let mut val = self.objective(&c);
        let mut step = 0.5;
        for _ in 0..steps {
            let grad = self.gradient(&c);
            let gnorm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                return (val, c, true);
            }
            let mut advanced = false;
            while step > 1e-13 {
                let mut cand: Vec<Complex64> =
                    c.iter().zip(&grad).map(|(x, g)| x + g * (step / gnorm)).collect();
                normalize(&mut cand);
                let cand_val = self.objective(&cand);
                if cand_val > val {
                    c = cand;
                    val = cand_val;
                    advanced = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if !advanced {
                return (val, c, true);
            }
        }
        (val, c, false)
    }
}

fn normalize(c: &mut [Complex64]) {
    let norm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in c.iter_mut() {
            *x /= norm;
        }
    } else {
        c[0] = Complex64::new(1.0, 0.0);
    }
}

/// Projected gradient ascent of ||sum c_a e(ax)||_p / ||c||_2 on the unit
/// sphere from random starts. Restart index fixes the random stream, so the
/// reported maximum is nondecreasing in `trials`.
pub fn lambda_p_ratio_search(
    set: &DigitSet,
    p: f64,
    trials: u32,
    steps: u32,
    seeds: &SeedStream,
) -> LambdaPEstimate {
    let n = set.len();
    let ascent = SphereAscent::new(set, p);
    let unit = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let ratio_unit = ascent.objective(&unit);

    let mut best = unit;
    let mut best_val = ratio_unit;
    let mut converged = true;
    for trial in 0..trials {
        let mut rng = seeds.stream("lambdap.search", trial as u64);
        let start: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let (val, c, ok) = ascent.run(start, steps);
        if !ok {
            converged = false;
        }
        if val > best_val {
            best_val = val;
            best = c;
        }
    }
    LambdaPEstimate {
        p,
        ratio_unit,
        ratio_sup: best_val,
        best_coefficients: best,
        trials,
        steps,
        converged,
    }
}

pub fn size_bounds_check(set: &DigitSet, n: u32, p: f64, c0: f64, c1: f64) -> bool {
    let target = (n as f64).powf(2.0 / p);
    let size = set.len() as f64;
    c0 * target <= size && size <= c1 * target
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Brute-force 2k-tuple count, the independent oracle for the
    /// convolution-based energy.
    fn energy_brute(set: &DigitSet, k: u32) -> u128 {
        let s = &set.elements;
        let mut left_sums: std::collections::HashMap<u64, u128> = std::collections::HashMap::new();
        fn rec(s: &[u32], k: u32, acc: u64, map: &mut std::collections::HashMap<u64, u128>) {
            if k == 0 {
                *map.entry(acc).or_insert(0) += 1;
                return;
            }
            for &a in s {
                rec(s, k - 1, acc + a as u64, map);
            }
        }
        rec(s, k, 0, &mut left_sums);
        left_sums.values().map(|&c| c * c).sum()
    }

    #[test]
    fn energy_examples() {
        let s = DigitSet::new(7, vec![1, 2, 4]).unwrap();
        assert_eq!(additive_energy(&s, 2), 15);
        let full = DigitSet::new(8, (0..8).collect()).unwrap();
        assert_eq!(additive_energy(&full, 2), 344);
        let single = DigitSet::new(10, vec![4]).unwrap();
        for k in 1..=4 {
            assert_eq!(additive_energy(&single, k), 1);
        }
    }

    #[test]
    fn energy_matches_brute_force() {
        let sets = [
            DigitSet::new(13, vec![0, 1, 3, 9]).unwrap(),
            DigitSet::new(12, vec![0, 1, 2, 5, 11]).unwrap(),
            DigitSet::new(9, vec![0, 2, 3, 4, 8]).unwrap(),
        ];
        for set in &sets {
            for k in 1..=3 {
                assert_eq!(additive_energy(set, k), energy_brute(set, k), "set {set:?} k={k}");
            }
        }
    }

    #[test]
    fn energy_translation_dilation_invariance() {
        let s = DigitSet::new(20, vec![1, 4, 9, 11]).unwrap();
        let translated = DigitSet::new(25, vec![6, 9, 14, 16]).unwrap();
        let dilated = DigitSet::new(40, vec![3, 12, 27, 33]).unwrap();
        for k in 1..=3 {
            let e = additive_energy(&s, k);
            assert_eq!(e, additive_energy(&translated, k));
            assert_eq!(e, additive_energy(&dilated, k));
        }
    }

    #[test]
    fn sidon_examples_and_energy_law() {
        let good = DigitSet::new(7, vec![1, 2, 4]).unwrap();
        let cert = is_sidon(&good);
        assert!(cert.is_sidon);
        assert_eq!(cert.energy_e2, 2 * 9 - 3);

        let bad = DigitSet::new(5, vec![0, 1, 2]).unwrap();
        let cert = is_sidon(&bad);
        assert!(!cert.is_sidon);
        let (a, b, c, d) = cert.witness.unwrap();
        assert_eq!(a + b, c + d);
        assert_ne!((a.min(b), a.max(b)), (c.min(d), c.max(d)));

        let singleton = DigitSet::new(3, vec![0]).unwrap();
        assert!(is_sidon(&singleton).is_sidon);
    }

    #[test]
    fn sidon_iff_energy_two_n_sq_minus_n() {
        // Both directions of the energy law on a small family.
        let families = [
            (vec![0, 1, 3, 7], true),
            (vec![0, 1, 3, 5], false), // 1+5 = 3+3
            (vec![0, 2, 7, 8, 11], true),
            (vec![0, 1, 2, 4], false),
        ];
        for (els, expect) in families {
            let n = els.len() as u128;
            let set = DigitSet::new(16, els).unwrap();
            let cert = is_sidon(&set);
            assert_eq!(cert.is_sidon, expect);
            assert_eq!(cert.is_sidon, cert.energy_e2 == 2 * n * n - n);
        }
    }

    #[test]
    fn singer_small_cases() {
        let s2 = singer_difference_set(2).unwrap();
        assert_eq!(s2.base, 7);
        assert_eq!(s2.len(), 3);
        assert!(certify_perfect_difference_set(&s2));
        assert!(is_sidon(&s2).is_sidon);

        let s3 = singer_difference_set(3).unwrap();
        assert_eq!(s3.base, 13);
        assert_eq!(s3.len(), 4);
        assert!(certify_perfect_difference_set(&s3));

        let s4 = singer_difference_set(4).unwrap();
        assert_eq!(s4.base, 21);
        assert_eq!(s4.len(), 5);
        assert!(certify_perfect_difference_set(&s4));
    }

    #[test]
    fn singer_rejects_bad_q() {
        assert!(singer_difference_set(6).is_err());
        assert!(singer_difference_set(10).is_err());
    }

    #[test]
    fn mian_chowla_examples() {
        assert_eq!(mian_chowla_greedy(14).elements, vec![0, 1, 3, 7, 12]);
        assert_eq!(mian_chowla_greedy(2).elements, vec![0, 1]);
        assert_eq!(mian_chowla_greedy(8).elements, vec![0, 1, 3, 7]);
        assert!(is_sidon(&mian_chowla_greedy(100)).is_sidon);
    }

    #[test]
    fn exact_even_ratio_examples() {
        let sidon = DigitSet::new(7, vec![1, 2, 4]).unwrap();
        assert_relative_eq!(
            lambda_p_ratio_exact_even(&sidon, 2),
            (5.0f64 / 3.0).powf(0.25),
            epsilon = 1e-12
        );
        let full = DigitSet::new(8, (0..8).collect()).unwrap();
        assert_relative_eq!(
            lambda_p_ratio_exact_even(&full, 2),
            (344.0f64).powf(0.25) / (8.0f64).sqrt(),
            epsilon = 1e-12
        );
        let single = DigitSet::new(4, vec![2]).unwrap();
        assert_relative_eq!(lambda_p_ratio_exact_even(&single, 3), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_moment_matches_exact_energy() {
        // L^4 quadrature of the unit-coefficient sum equals E_2 exactly.
        let set = DigitSet::new(13, vec![0, 1, 3, 9]).unwrap();
        let coeffs = vec![Complex64::new(1.0, 0.0); set.len()];
        let l4 = exponential_sum_lp(&set, &coeffs, 4.0);
        let energy = additive_energy(&set, 2) as f64;
        assert_relative_eq!(l4.powi(4), energy, max_relative = 1e-9);
    }

    #[test]
    fn search_soundness_and_monotonicity() {
        let set = DigitSet::new(7, vec![1, 2, 4]).unwrap();
        let seeds = SeedStream::new(42);
        let est10 = lambda_p_ratio_search(&set, 4.0, 10, 60, &seeds);
        let est25 = lambda_p_ratio_search(&set, 4.0, 25, 60, &seeds);
        let unit_oracle = lambda_p_ratio_exact_even(&set, 2);
        assert!(est10.ratio_sup >= unit_oracle - 1e-9);
        assert!(est25.ratio_sup >= est10.ratio_sup - 1e-12, "monotone in trials");
        // crude degree bound |S|^{1/2 - 1/p}
        let crude = (set.len() as f64).powf(0.5 - 0.25) + 1e-9;
        assert!(est25.ratio_sup <= crude);
        assert_relative_eq!(est10.ratio_unit, unit_oracle, max_relative = 1e-9);
    }

    #[test]
    fn search_p2_is_parseval() {
        let set = DigitSet::new(16, vec![0, 1, 3, 7, 12]).unwrap();
        let seeds = SeedStream::new(5);
        let est = lambda_p_ratio_search(&set, 2.0, 5, 40, &seeds);
        assert_relative_eq!(est.ratio_sup, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn size_bounds_examples() {
        let s3 = singer_difference_set(3).unwrap();
        assert!(size_bounds_check(&s3, 13, 4.0, 1.0, 1.2));
        let lone = DigitSet::new(100, vec![7]).unwrap();
        assert!(!size_bounds_check(&lone, 100, 4.0, 1.0, 1.2));
        let n = 49u32;
        let target = (n as f64).sqrt().ceil() as u32;
        let synthetic = DigitSet::new(n, (0..target).collect()).unwrap();
        assert!(size_bounds_check(&synthetic, n, 4.0, 0.9, 1.1));
    }
}
