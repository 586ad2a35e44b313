//! Spectral-efficiency analysis for spatial-modulation layered division
//! multiplexing (SM-LDM) with maximum-ratio combining.
//!
//! Two broadcast services share the same time-frequency resources at
//! different power levels (a mobile layer `ml` and a fixed layer `fl`,
//! split by the injection level), and each service maps its symbols onto
//! a single active transmit antenna per channel use. The crate computes
//! per-antenna SINR values for that arrangement, turns them into
//! spectral-efficiency lower bounds (constellation term plus a
//! spatial-index term), and cross-checks the closed forms against a
//! Monte Carlo engine that draws Rayleigh channels and samples the exact
//! spatial mutual information of the equivalent Gaussian-mixture channel.
//!
//! Module map:
//!
//! * [`model`] — system configuration, power allocation, scheme identity.
//! * [`sinr`] — per-antenna SINR: the generic moment-ratio form for any
//!   linear combiner and the MRC closed forms per scheme.
//! * [`capacity`] — SINR vectors to bits: constellation MI, the
//!   bias-corrected spatial MI lower bound, and scheme-level SE.
//! * [`montecarlo`] — channel draws, empirical moment estimation, and
//!   sampled spatial MI with reproducible counter-based substreams.
//! * [`experiments`] — declarative sweeps and the rate-region comparison,
//!   emitted as deterministic result tables.
//!
//! SNR convention: `SNR = total transmit power / per-receive-antenna
//! noise variance`, so `sigma^2 = P_u / 10^(SNR_dB/10)`. All SINR and SE
//! values are linear/bits internally; dB appears only at the boundaries.
//!
//! With the default `parallel` feature the Monte Carlo loops fan out over
//! a rayon pool; results are bit-identical for any worker count (fixed
//! chunking, ordered reduction, one RNG substream per trial). Building
//! with `--no-default-features` swaps in a sequential driver with the
//! same chunking, producing the same bits.

pub mod capacity;
mod exec;
pub mod experiments;
pub mod model;
pub mod montecarlo;
pub mod sinr;

pub use model::{Layer, PowerSplit, Scheme, SystemConfig, TdmFdmShare};
pub use sinr::SinrVector;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or input violated a stated constraint.
    #[error("invalid {field}: {reason}")]
    Validation {
        /// Name of the offending parameter or field.
        field: &'static str,
        reason: String,
    },
    /// A computation hit a numerically degenerate intermediate value.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
