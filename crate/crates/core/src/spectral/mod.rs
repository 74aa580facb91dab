pub mod bump;
pub mod grid;
pub mod measure;

pub use bump::{phi_j, phi_j_support, smooth_step, BumpSpec, PlateauWindow};
pub use grid::{require_band, unit_phase, GridFunction1D, GridFunction2D, VarLabel};
pub use measure::{
    littlewood_paley_piece, mu_hat_atoms, mu_hat_progression, mu_hat_selfsimilar,
    mu_hat_truncation_bound, sigma_hat_j, sigma_piece, MeasureSpectrum,
};
