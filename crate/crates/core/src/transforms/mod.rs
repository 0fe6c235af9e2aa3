//! Analyzing profiles, wavelet transforms and Bergman transforms.

mod bergman;
mod profile;
mod signal;
mod wavelet;

pub(crate) use bergman::gamma_ratio;
pub use bergman::{
    ber_alpha, ber_derivative, ber_mode, laguerre_laplace, poly_ber, sigma, true_ber, true_ber_literal,
    true_ber_oracle, TrueBerMethod,
};
pub use profile::{admissibility, cross_admissibility, psi_admissibility_closed, AnalyzerProfile, ProfileKind};
pub use signal::{fit_laguerre, Basis, ChannelSet, RPlusCoeffs};
pub use wavelet::{cwt, vector_cwt};
