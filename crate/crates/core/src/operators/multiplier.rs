//! The time-averaging multiplier mtilde_j(xi, s) = <s>^gamma int e^{-2 pi i t s}
//! rho(t) sigma_hat_j(t xi) dt, its branch-localized versions, and an
//! independent evaluation route through sigma_j in space paired against a
//! precomputed table of rho_hat.

use num_complex::Complex64;

use crate::cantor::NodeAddress;
use crate::error::{Error, Result};
use crate::operators::quad;
use crate::spectral::{
    phi_j, sigma_hat_j, unit_phase, GridFunction1D, MeasureSpectrum, PlateauWindow, VarLabel,
};

/// <u> = (1 + u^2)^{1/2} raised to gamma.
#[inline]
pub fn bracket_pow(u: f64, gamma: f64) -> f64 {
    (1.0 + u * u).powf(gamma / 2.0)
}

/// xi-support of mtilde_j: zero outside N^j / 2 <= |xi| <= 4 N^{j+2},
/// because sigma_hat_j(t xi) vanishes for every t in supp rho.
pub fn mtilde_support(n: u32, j: u32) -> (f64, f64) {
    let nf = n as f64;
    (0.5 * nf.powi(j as i32), 4.0 * nf.powi(j as i32 + 2))
}

/// Node budget for the oscillatory t-integral. At least the floor
/// 64 (1 + |s| + 2 N^{-j} |xi|), raised to resolve the true carrier 2|xi|.
pub fn mtilde_nodes(n: u32, j: u32, xi: f64, s: f64) -> usize {
    let floor = 64.0 * (1.0 + s.abs() + 2.0 * (n as f64).powi(-(j as i32)) * xi.abs());
    let resolve = 16.0 * (1.0 + s.abs() + 2.0 * xi.abs());
    floor.max(resolve).ceil() as usize
}

pub const QUADRATURE_CAP: usize = 8_000_000;

/// mtilde_j by the t-integral route.
pub fn mtilde(
    spectrum: &MeasureSpectrum,
    j: u32,
    gamma: f64,
    xi: f64,
    s: f64,
) -> Result<Complex64> {
    let n = spectrum.tree().params.n;
    let (lo, hi) = mtilde_support(n, j);
    if xi.abs() < lo || xi.abs() > hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let nodes = mtilde_nodes(n, j, xi, s);
    if nodes > QUADRATURE_CAP {
        return Err(Error::QuadratureBudget { requested: nodes, cap: QUADRATURE_CAP });
    }
    let rho = PlateauWindow::rho(n);
    let integral = quad::trapezoid(rho.left_outer, rho.right_outer, nodes, |t| {
        let w = rho.eval(t);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            unit_phase(-t * s) * w * sigma_hat_j(spectrum, j, t * xi)
        }
    });
    Ok(integral * bracket_pow(s, gamma))
}

/// Fourier transform of the restricted measure mu_{j,a} for a self-similar
/// tree: mass N0^{-j} on a + [0, N^{-j}], a rescaled copy of mu.
pub fn mu_hat_restricted(spectrum: &MeasureSpectrum, j: u32, a: &NodeAddress, eta: f64) -> Complex64 {
    let tree = spectrum.tree();
    let n = tree.params.n as f64;
    let scale = n.powi(-(j as i32));
    if let crate::cantor::Selector::Constant(_) = &tree.selector {
        let mass = (tree.params.n0 as f64).powi(-(j as i32));
        let shift = a.position_f64(tree.params.n) - scale;
        mass * unit_phase(-eta * shift) * spectrum.eval(eta * scale)
    } else {
        // atomic sum over the deepest-level nodes below a
        let deep = tree.nodes(tree.depth).expect("depth valid");
        let lo = a.offset_numerator * (tree.params.n as i128).pow(tree.depth - a.level);
        let hi = (a.offset_numerator + 1) * (tree.params.n as i128).pow(tree.depth - a.level);
        let njd = n.powi(tree.depth as i32);
        let total = deep.len() as f64;
        let sum: Complex64 = deep
            .iter()
            .filter(|node| node.offset_numerator >= lo && node.offset_numerator < hi)
            .map(|node| unit_phase(-eta) * unit_phase(-eta * node.offset_numerator as f64 / njd))
            .sum();
        sum / total
    }
}

/// Branch-localized multiplier mtilde_{j,a} by the t-integral route.
pub fn mtilde_localized(
    spectrum: &MeasureSpectrum,
    j: u32,
    a: &NodeAddress,
    gamma: f64,
    xi: f64,
    s: f64,
) -> Result<Complex64> {
    if a.level != j {
        return Err(Error::InvalidParameter(format!(
            "node at level {} is not a level-{j} branch",
            a.level
        )));
    }
    let n = spectrum.tree().params.n;
    let (lo, hi) = mtilde_support(n, j);
    if xi.abs() < lo || xi.abs() > hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let nodes = mtilde_nodes(n, j, xi, s);
    if nodes > QUADRATURE_CAP {
        return Err(Error::QuadratureBudget { requested: nodes, cap: QUADRATURE_CAP });
    }
    let rho = PlateauWindow::rho(n);
    let integral = quad::trapezoid(rho.left_outer, rho.right_outer, nodes, |t| {
        let w = rho.eval(t);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let cutoff = phi_j(t * xi, n, j);
        if cutoff == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        unit_phase(-t * s) * w * cutoff * mu_hat_restricted(spectrum, j, a, t * xi)
    });
    Ok(integral * bracket_pow(s, gamma))
}

/// Sheared, normalized localized multiplier
/// m_{j,a}(xi, tau) = N^{j(alpha - gamma)} mtilde_{j,a}(xi, s = tau - a xi).
pub fn localized_multiplier(
    spectrum: &MeasureSpectrum,
    j: u32,
    a: &NodeAddress,
    gamma: f64,
    xi: f64,
    tau: f64,
) -> Result<Complex64> {
    let tree = spectrum.tree();
    let alpha = tree.params.alpha();
    let n = tree.params.n as f64;
    let a_pos = a.position_f64(tree.params.n);
    let s = tau - a_pos * xi;
    let scale = n.powf(j as f64 * (alpha - gamma));
    Ok(mtilde_localized(spectrum, j, a, gamma, xi, s)? * scale)
}

/// Table of rho_hat(u) = int e^{-2 pi i t u} rho(t) dt on a uniform grid,
/// with 6-point Lagrange interpolation between samples.
pub struct RhoHatTable {
    max_u: f64,
    du: f64,
    values: Vec<Complex64>, // u = -max_u .. max_u step du
}

impl RhoHatTable {
    pub fn build(n: u32, max_u: f64) -> Self {
        let rho = PlateauWindow::rho(n);
        let du = 1.0 / 64.0;
        // sample rho on [0, window) and transform by FFT. The t spacing sets
        // the aliasing floor; the exp(-1/x) profile only decays like
        // exp(-c sqrt(omega * width)) so the Nyquist margin is generous.
        let dt = 1.0 / (8.0 * max_u).max(65536.0);
        let window = 64.0f64; // zero padding sets the output spacing 1/window
        let m = (window / dt).ceil() as usize;
        let mut buf: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new(rho.eval(i as f64 * dt), 0.0))
            .collect();
        rustfft::FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let dxi = 1.0 / (m as f64 * dt);
        // read off u = k * du for |u| <= max_u; du must be a multiple of dxi
        let stride = (du / dxi).round() as usize;
        debug_assert!((stride as f64 * dxi - du).abs() < 1e-12);
        let half = (max_u / du).ceil() as usize;
        let mut values = Vec::with_capacity(2 * half + 1);
        for k in -(half as i64)..=(half as i64) {
            let idx = (k * stride as i64).rem_euclid(m as i64) as usize;
            values.push(buf[idx] * dt);
        }
        Self { max_u: half as f64 * du, du, values }
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        if u.abs() >= self.max_u - 3.0 * self.du {
            // beyond tabulated range rho_hat has decayed below tolerance
            return Complex64::new(0.0, 0.0);
        }
        let t = (u + self.max_u) / self.du;
        let base = t.floor() as usize;
        let start = base.saturating_sub(2).min(self.values.len() - 6);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..6 {
            let node = start + i;
            let mut w = 1.0;
            for k in 0..6 {
                if k != i {
                    let nk = (start + k) as f64;
                    w *= (t - nk) / (node as f64 - nk);
                }
            }
            acc += self.values[node] * w;
        }
        acc
    }
}

/// sigma_j sampled in space, synthesized from phi_j mu_hat on a frequency
/// grid. Window and resolution are chosen from the largest |xi| and |s| the
/// y-integral will see.
pub struct SigmaSpaceGrid {
    pub grid: GridFunction1D,
}

impl SigmaSpaceGrid {
    pub fn build(spectrum: &MeasureSpectrum, j: u32, max_xi: f64, max_s: f64) -> Self {
        let window = 8.0f64; // y in [-2.5, 5.5]
        let rate = 4.0 * (2.0 * max_xi + max_s + 1.0);
        let mut m = (window * rate).ceil() as usize;
        m = m.next_power_of_two();
        let dxi = 1.0 / window;
        let half = m / 2;
        let freq = GridFunction1D::from_fn(
            -(half as f64) * dxi,
            dxi,
            m,
            VarLabel::Frequency,
            |xi| sigma_hat_j(spectrum, j, xi),
        );
        Self { grid: freq.to_space(-2.5) }
    }

    /// Largest |sigma_j| within a margin of the window edges, a measured
    /// bound on the truncation incurred by the finite window.
    pub fn edge_magnitude(&self) -> f64 {
        let m = self.grid.len();
        let edge = m / 64;
        let mut worst = 0.0f64;
        for i in 0..edge {
            worst = worst.max(self.grid.samples[i].norm());
            worst = worst.max(self.grid.samples[m - 1 - i].norm());
        }
        worst
    }
}

/// mtilde_j by the dual route: <s>^gamma int sigma_j(y) rho_hat(xi y + s) dy.
pub fn mtilde_y_form(
    sigma: &SigmaSpaceGrid,
    rho_hat: &RhoHatTable,
    gamma: f64,
    xi: f64,
    s: f64,
) -> Complex64 {
    let g = &sigma.grid;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in g.samples.iter().enumerate() {
        let y = g.coord(i);
        acc += v * rho_hat.eval(xi * y + s);
    }
    acc * g.spacing * bracket_pow(s, gamma)
}
