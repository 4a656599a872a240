//! Haar-random protocols and their spectra.
//!
//! The random protocol shares `|Phi_d>` and encodes message `i` of `n = d^2`
//! with an independent Haar unitary. [`esd`] returns the spectrum of
//! `Q = sum_i |psi_i><psi_i|`, whose mean square root equals the
//! Holevo-Curlander quantity of the ensemble and tends to `8 / (3 pi)`.

mod ensemble;
mod experiment;
mod haar;
mod moments;
mod mp;

pub use ensemble::{esd, mean_sqrt_esd, random_protocol_ensemble, random_protocol_esd, ESDSample};
pub use experiment::{
    distinguishability_experiment, distinguishability_experiment_with, ExperimentOptions,
    ExperimentStats, TrialStats,
};
pub use haar::{complex_gaussian, ginibre, haar_ket, haar_unitary, random_density};
pub use moments::{
    m_operator_closed_form, m_operator_monte_carlo, pseudo_isotropy_bound,
    pseudo_isotropy_variance, quadrant_projector, swap_operator, MOperator,
};
pub use mp::{kolmogorov_distance, mp_cdf, mp_density, mp_quantile, sup_distance, MPParams};

use crate::numkit::NumError;
use crate::protocol::ProtocolError;

/// `8 / (3 pi)`, the limit of the mean square-root eigenvalue.
pub const MP1_MEAN_SQRT: f64 = 8.0 / (3.0 * std::f64::consts::PI);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RandError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("empty sample")]
    EmptySample,
    #[error("eigenvalue {0:e} is negative")]
    NegativeEigenvalue(f64),
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
