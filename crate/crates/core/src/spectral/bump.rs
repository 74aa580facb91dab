//! Smooth plateau cutoffs built from the exp(-1/x) transition.

/// Smooth step: 0 for x <= 0, 1 for x >= 1, h(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}).
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Symmetric plateau bump: 1 on [-inner, inner], 0 outside [-outer, outer].
#[derive(Debug, Clone, Copy)]
pub struct BumpSpec {
    pub inner: f64,
    pub outer: f64,
}

impl BumpSpec {
    pub fn new(inner: f64, outer: f64) -> Self {
        assert!(0.0 < inner && inner < outer, "need 0 < inner < outer");
        Self { inner, outer }
    }

    /// The standard cutoff phi: 1 on |u| <= 1, supported in |u| <= 2.
    pub fn standard() -> Self {
        Self::new(1.0, 2.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let r = u.abs();
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            1.0 - smooth_step((r - self.inner) / (self.outer - self.inner))
        }
    }
}

/// One-sided plateau window: 0 outside (left_outer, right_outer), 1 on
/// [left_inner, right_inner], smooth transitions in between. Used for the
/// time cutoff rho supported in (1/(2N), 2) with plateau [1/N, 1].
#[derive(Debug, Clone, Copy)]
pub struct PlateauWindow {
    pub left_outer: f64,
    pub left_inner: f64,
    pub right_inner: f64,
    pub right_outer: f64,
}

impl PlateauWindow {
    pub fn new(left_outer: f64, left_inner: f64, right_inner: f64, right_outer: f64) -> Self {
        assert!(
            left_outer < left_inner && left_inner < right_inner && right_inner < right_outer,
            "window corners must increase"
        );
        Self { left_outer, left_inner, right_inner, right_outer }
    }

    /// rho for branching base N.
    pub fn rho(n: u32) -> Self {
        let n = n as f64;
        Self::new(1.0 / (2.0 * n), 1.0 / n, 1.0, 2.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.left_outer || t >= self.right_outer {
            0.0
        } else if t < self.left_inner {
            smooth_step((t - self.left_outer) / (self.left_inner - self.left_outer))
        } else if t <= self.right_inner {
            1.0
        } else {
            1.0 - smooth_step((t - self.right_inner) / (self.right_outer - self.right_inner))
        }
    }
}

/// Littlewood-Paley piece phi_j for base N: phi_0(xi) = phi(xi/N) and
/// phi_j(xi) = phi(N^{-j-1} xi) - phi(N^{-j} xi), supported in
/// N^j <= |xi| <= 2 N^{j+1} for j >= 1.
pub fn phi_j(xi: f64, n: u32, j: u32) -> f64 {
    let phi = BumpSpec::standard();
    let n = n as f64;
    if j == 0 {
        phi.eval(xi / n)
    } else {
        phi.eval(xi / n.powi(j as i32 + 1)) - phi.eval(xi / n.powi(j as i32))
    }
}

/// Support bounds of phi_j: the piece vanishes for |xi| outside (lo, hi).
pub fn phi_j_support(n: u32, j: u32) -> (f64, f64) {
    let n = n as f64;
    if j == 0 {
        (0.0, 2.0 * n)
    } else {
        (n.powi(j as i32), 2.0 * n.powi(j as i32 + 1))
    }
}
