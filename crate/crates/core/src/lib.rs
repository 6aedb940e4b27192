//! Quantum-scissor assisted continuous-variable QKD.
//!
//! The closed-form layers ([`model`], [`scissor`], [`gaussian`]) are generic
//! over [`Real`]; the numerical layers (entropies, key rates, the Fock-space
//! oracle) work in `f64`. Concrete `f64` aliases live at the crate root.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod info;
pub mod keyrate;
pub mod model;
pub mod optimize;
pub mod quadrature;
pub mod scalar;
pub mod scissor;

pub use error::{Error, Result};
pub use scalar::Real;

pub use gaussian::{
    cm_triplet, holevo_bound, mutual_information_gaussian, noqs_triplet, symplectic_spectrum, tl_plob_bound,
};
pub use info::{conditional_density, mutual_information_exact, output_density, QuadratureDensity};
pub use keyrate::{
    crossover_distance, gg02_key_rate, optimize_point, qs_key_rate, sweep, Crossover, OptBounds, RatePoint, RateStatus,
};
pub use model::{noise_factors, DEFAULT_LOSS_DB_PER_KM};
pub use scissor::{
    conditional_state, post_selected_state, rl_approx_success, success_probability, thermal_post_selected_state,
};

/// Complex amplitude in double precision.
pub type Complex64 = num_complex::Complex<f64>;

pub type ChannelParams = model::ChannelParams<f64>;
pub type QSParams = model::QSParams<f64>;
pub type ProtocolParams = model::ProtocolParams<f64>;
pub type NoiseFactors = model::NoiseFactors<f64>;
pub type QubitState = scissor::QubitState<f64>;
pub type CovarianceTriplet = gaussian::CovarianceTriplet<f64>;
pub type SymplecticSpectrum = gaussian::SymplecticSpectrum<f64>;
