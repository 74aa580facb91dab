//! The branch operators F_{j,a} acting on exponential-sum probes.
//!
//! For f = sum_i c_i e(xi_i x) the operator acts frequency by frequency:
//! F_{j,a} f (x, t) = sum_i c_i e(xi_i x) G_i(t), where
//! G_i = <D_t>^gamma [ rho(.) sigma_hat_{j,a}(. xi_i) ]. Each G_i is one
//! short 1D FFT pipeline, and the L^p(dx dt) norm reduces to exact torus
//! norms in x integrated over the t lattice.

use num_complex::Complex64;

use crate::cantor::NodeAddress;
use crate::error::Result;
use crate::operators::multiplier::mu_hat_restricted;
use crate::operators::probes::ExpSumProbe;
use crate::spectral::{phi_j, GridFunction1D, MeasureSpectrum, PlateauWindow, VarLabel};

/// G(t) for one probe frequency on a uniform t grid.
pub struct BranchProfile {
    pub grid: GridFunction1D,
}

/// Builds G(t) = <D_t>^gamma [rho(t) sigma_hat_{j,a}(t xi)] on a window wide
/// enough for the gamma-weight tails.
pub fn branch_profile(
    spectrum: &MeasureSpectrum,
    j: u32,
    branch: &NodeAddress,
    gamma: f64,
    xi: f64,
    window: f64,
) -> Result<BranchProfile> {
    let n = spectrum.tree().params.n;
    let rho = PlateauWindow::rho(n);
    // carrier rate: the branch sits at positions <= 2, so the t-frequency
    // content of rho sigma_hat_{j,a}(t xi) is bounded by ~2.2 |xi|
    let rate = 2.5 * (2.2 * xi.abs() + 4.0);
    let dt = 1.0 / rate.log2().ceil().exp2();
    let len = ((2.0 * window) / dt).round() as usize;
    let h = GridFunction1D::from_fn(-window, dt, len, VarLabel::Space, |t| {
        let w = rho.eval(t);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let cutoff = phi_j(t * xi, n, j);
        if cutoff == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        mu_hat_restricted(spectrum, j, branch, t * xi) * (w * cutoff)
    });
    let mut hhat = h.to_frequency();
    for k in 0..hhat.len() {
        let s = hhat.coord(k);
        hhat.samples[k] *= (1.0 + s * s).powf(gamma / 2.0);
    }
    Ok(BranchProfile { grid: hhat.to_space(-window) })
}

/// || F_{j,a} f ||_{L^p(dx dt)} for an exponential-sum probe (x on the unit
/// torus, t over the profile window), p in {2, 4}.
pub fn fja_probe_norm(
    spectrum: &MeasureSpectrum,
    j: u32,
    branch: &NodeAddress,
    gamma: f64,
    probe: &ExpSumProbe,
    p: f64,
    window: f64,
) -> Result<f64> {
    let tree = spectrum.tree();
    let alpha = tree.params.alpha();
    let scale = (tree.params.n as f64).powf(j as f64 * (gamma - alpha));
    let profiles: Vec<BranchProfile> = probe
        .freqs
        .iter()
        .map(|&nu| branch_profile(spectrum, j, branch, gamma, nu as f64, window))
        .collect::<Result<_>>()?;
    let len = profiles[0].grid.len();
    let dt = profiles[0].grid.spacing;
    let mut acc = 0.0f64;
    let mut factors = vec![Complex64::new(0.0, 0.0); probe.freqs.len()];
    for l in 0..len {
        for (fi, prof) in factors.iter_mut().zip(&profiles) {
            *fi = prof.grid.samples[l];
        }
        let slice = probe.modulated(&factors);
        acc += slice.lp_torus(p).powf(p) * dt;
    }
    Ok(acc.powf(1.0 / p) * scale)
}

/// Measured constant of || F_{j,a} f ||_p <= C N^{j(gamma - alpha)} || f ||_p.
pub fn falp_constant(
    spectrum: &MeasureSpectrum,
    j: u32,
    branch: &NodeAddress,
    gamma: f64,
    probe: &ExpSumProbe,
    p: f64,
    window: f64,
) -> Result<f64> {
    let tree = spectrum.tree();
    let alpha = tree.params.alpha();
    let expected = (tree.params.n as f64).powf(j as f64 * (gamma - alpha));
    let norm = fja_probe_norm(spectrum, j, branch, gamma, probe, p, window)?;
    Ok(norm / (probe.lp_torus(p) * expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{build_self_similar, CantorParams};
    use crate::operators::kernel::{kernel_field, KernelConfig};
    use crate::rng::SeedStream;
    use rand::Rng;

    #[test]
    fn profile_concentrates_on_rho_support() {
        let tree =
            build_self_similar(&[1, 2, 4], CantorParams::new(7, 3, 4.0).unwrap(), 3).unwrap();
        let spec = MeasureSpectrum::new(&tree, 40);
        let a = tree.nodes(1).unwrap()[0].clone();
        let prof = branch_profile(&spec, 1, &a, 0.3, 20.0, 8.0).unwrap();
        let g = &prof.grid;
        let peak = g.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(peak > 0.0);
        // the gamma-weighted profile decays away from [1/(2N), 2]
        let far: f64 = g
            .samples
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let t = g.coord(*i);
                !(-2.0..=5.0).contains(&t)
            })
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(far < 1e-4 * peak, "far tail {far:e} vs peak {peak:e}");
    }

    /// Two-representation consistency: the multiplier route above against an
    /// honest kernel-side convolution using the sampled K_{j,a}.
    #[test]
    fn multiplier_and_kernel_representations_agree() {
        let tree =
            build_self_similar(&[1, 2, 4], CantorParams::new(7, 3, 4.0).unwrap(), 3).unwrap();
        let spec = MeasureSpectrum::new(&tree, 40);
        let branch = tree.nodes(1).unwrap()[1].clone();
        let gamma = 0.3;
        let n = 7.0f64;
        let alpha = tree.params.alpha();
        let scale = n.powf(gamma - alpha); // j = 1

        // random band-limited probe inside the j=1 multiplier band
        let mut rng = SeedStream::new(23).stream("fjop.two-rep", 0);
        let freqs: Vec<i64> = vec![9, 17, 26, 41];
        let coeffs: Vec<Complex64> =
            freqs.iter().map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let probe = ExpSumProbe::new(freqs.clone(), coeffs.clone());

        // multiplier route
        let profiles: Vec<BranchProfile> = freqs
            .iter()
            .map(|&nu| branch_profile(&spec, 1, &branch, gamma, nu as f64, 8.0).unwrap())
            .collect();

        // kernel route: F f(x,t) = N^{j(gamma-alpha)} int f(x - t a - u) K(u,t) du
        let cfg = KernelConfig {
            u_count: 160,
            u_half_scaled: 20.0,
            t_count: 48,
            t_half: 3.0,
            xi_oversample: 44.0,
            ..Default::default()
        };
        let (kernel, _) = kernel_field(&spec, 1, &branch, &cfg, None).unwrap();
        let du = kernel.u_grid[1] - kernel.u_grid[0];
        let a_pos = branch.position_f64(7);

        let mut worst = 0.0f64;
        let mut ref_mag = 0.0f64;
        for (ti, &t) in kernel.t_grid.iter().enumerate() {
            if !(0.05..=2.2).contains(&t) {
                continue;
            }
            for &x in &[0.13, 0.41, 0.87] {
                // kernel side
                let mut conv = Complex64::new(0.0, 0.0);
                for (ui, &u) in kernel.u_grid.iter().enumerate() {
                    conv += probe.eval(x - t * a_pos - u) * kernel.values[ti][ui];
                }
                let kernel_side = conv * du * scale;
                // multiplier side: find the matching lattice point of each profile
                let mut mult_side = Complex64::new(0.0, 0.0);
                for ((c, prof), &nu) in coeffs.iter().zip(&profiles).zip(&freqs) {
                    let g = &prof.grid;
                    let idx = ((t - g.origin) / g.spacing).round() as usize;
                    let gt = g.samples[idx];
                    mult_side +=
                        c * gt * crate::spectral::unit_phase(nu as f64 * x) * scale;
                }
                worst = worst.max((kernel_side - mult_side).norm());
                ref_mag = ref_mag.max(mult_side.norm());
            }
        }
        assert!(ref_mag > 0.0);
        assert!(
            worst <= 1e-6 * ref_mag.max(1.0),
            "two representations disagree: {worst:e} vs scale {ref_mag:e}"
        );
    }

    #[test]
    fn falp_scaling_stable_across_levels() {
        let tree =
            build_self_similar(&[1, 2, 4], CantorParams::new(7, 3, 4.0).unwrap(), 3).unwrap();
        let spec = MeasureSpectrum::new(&tree, 40);
        let gamma = 0.3;
        let seeds = SeedStream::new(31);
        let mut constants = Vec::new();
        for j in 1..=2u32 {
            let branch = tree.nodes(j).unwrap()[0].clone();
            // mid-band frequencies ~ N^{j+1}, where rho and phi_j overlap fully
            let mid = 7i64.pow(j + 1);
            let probe = {
                let mut rng = seeds.stream("fjop.falp", j as u64);
                let freqs: Vec<i64> =
                    [6, 9, 13, 19].iter().map(|&w| mid * w / 10).collect();
                let coeffs =
                    freqs.iter().map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
                ExpSumProbe::new(freqs, coeffs)
            };
            constants.push(falp_constant(&spec, j, &branch, gamma, &probe, 4.0, 8.0).unwrap());
        }
        let ratio = constants[1] / constants[0];
        assert!(
            (0.25..=4.0).contains(&ratio),
            "falp constants unstable: {constants:?} ratio {ratio}"
        );
    }
}
