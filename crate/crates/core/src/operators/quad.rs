//! Quadrature helpers.

use num_complex::Complex64;

/// Uniform trapezoid rule with `nodes` interior steps. For integrands that
/// vanish to all orders at both endpoints (the compactly supported windows
/// used throughout) this converges spectrally once oscillation is resolved.
pub fn trapezoid(a: f64, b: f64, nodes: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let n = nodes.max(8);
    let h = (b - a) / n as f64;
    let mut acc = (f(a) + f(b)) * 0.5;
    for i in 1..n {
        acc += f(a + i as f64 * h);
    }
    acc * h
}

/// Real-valued variant.
pub fn trapezoid_real(a: f64, b: f64, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = nodes.max(8);
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..n {
        acc += f(a + i as f64 * h);
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_smooth_window() {
        // int_0^1 sin(pi t)^2 dt = 1/2 (vanishing endpoints)
        let v = trapezoid_real(0.0, 1.0, 256, |t| (std::f64::consts::PI * t).sin().powi(2));
        assert_relative_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_complex_integral() {
        // int_0^1 e^{-2 pi i 5 t} sin(pi t)^2 dt has closed form; compare to
        // a much finer grid instead of deriving it.
        let f = |t: f64| {
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * 5.0 * t)
                * (std::f64::consts::PI * t).sin().powi(2)
        };
        let coarse = trapezoid(0.0, 1.0, 400, f);
        let fine = trapezoid(0.0, 1.0, 40_000, f);
        assert!((coarse - fine).norm() < 1e-10);
    }
}
