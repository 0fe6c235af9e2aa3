//! Structure of the polyanalytic Bergman spaces: basis, kernels,
//! projections and Wirtinger derivatives.

mod basis;
mod extended;
mod field;
mod kernel;
mod wirtinger;

pub use basis::{
    basis_block, basis_e, basis_e_fast, basis_e_normalized, basis_norm, omega, omega_derivative, omega_via_laplace, psi_beta,
    psi_beta_printed,
};
pub use field::{
    grid_moments, project_true, project_true_kernel, project_true_plain, synthesize_channel, FieldRepr, GalerkinSystem,
    PolyField, PolyFieldCoeffs, MAX_CONDITION, MAX_GRAM_DEVIATION,
};
pub use kernel::{
    calibrate_rodrigues, kernel_poly, kernel_rodrigues_raw, kernel_true, kernel_true_columns, kernel_wavelet,
    rodrigues_constants,
    KernelEval, KernelMethod, KernelSpec, RodriguesConstants, KERNEL_MODES,
};
pub use wirtinger::{dbar_power, polyanalytic_degree, DbarEstimate, MIN_STEP};
