pub mod averaging;
pub mod fjop;
pub mod kernel;
pub mod multiplier;
pub mod norms;
pub mod probes;
pub mod quad;

pub use averaging::{
    averaging_op, averaging_probe, full_maximal, mixed_norm_average, single_frequency_mixed_norm,
    single_scale_maximal, sobolev_average_norm,
};
pub use fjop::{branch_profile, falp_constant, fja_probe_norm, BranchProfile};
pub use kernel::{
    kernel_field, truncation_tail, verify_kernel_decay, KernelConfig, KernelDecayReport,
    LocalizedKernel,
};
pub use multiplier::{
    bracket_pow, localized_multiplier, mtilde, mtilde_localized, mtilde_support, mtilde_y_form,
    mu_hat_restricted, RhoHatTable, SigmaSpaceGrid,
};
pub use norms::{
    fit_beta, maximal_probe_ratio, operator_norm_probe, MaximalProbeConfig, NormEstimate,
    OperatorTag,
};
pub use probes::{ExpSumProbe, ProbeFamily};
