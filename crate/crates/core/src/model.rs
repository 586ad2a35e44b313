//! System configuration, power allocation and scheme identity.
//!
//! Everything here is an immutable value object after construction and is
//! safe to share across workers. Constructors validate the physical
//! parameters; the rest of the crate assumes configurations that passed
//! [`SystemConfig::validate`].

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Hard cap on transmit antennas; the dense per-antenna moment matrices
/// and mixture covariances are sized `n_t x n_t`.
pub const MAX_TRANSMIT_ANTENNAS: usize = 64;

/// The two superposed service layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    /// Mobile layer: high power, robust, sees the fixed layer as interference.
    Ml,
    /// Fixed layer: low power, decoded after the mobile layer is cancelled.
    Fl,
}

impl Layer {
    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Ml => "ml",
            Layer::Fl => "fl",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Multiplexing scheme under analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Spatial modulation on both layers, power-superposed.
    SmLdm,
    /// Conventional single-transmit-antenna layered transmission.
    SingleTaLdm,
    /// Spatial multiplexing (all antennas active) on both layers.
    SmxLdm,
    /// Spatial modulation with orthogonal time/frequency sharing instead
    /// of power superposition.
    SmTdmFdm,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::SmLdm,
        Scheme::SingleTaLdm,
        Scheme::SmxLdm,
        Scheme::SmTdmFdm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::SmLdm => "sm-ldm",
            Scheme::SingleTaLdm => "single-ta",
            Scheme::SmxLdm => "smx-ldm",
            Scheme::SmTdmFdm => "sm-tdm-fdm",
        }
    }

    /// Antenna count seen by all downstream formulas. Single-TA forces 1.
    pub fn effective_n_t(self, n_t: usize) -> usize {
        match self {
            Scheme::SingleTaLdm => 1,
            _ => n_t,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sm-ldm" => Ok(Scheme::SmLdm),
            "single-ta" | "single-ta-ldm" => Ok(Scheme::SingleTaLdm),
            "smx-ldm" => Ok(Scheme::SmxLdm),
            "sm-tdm-fdm" | "sm-tdmfdm" => Ok(Scheme::SmTdmFdm),
            other => Err(Error::invalid(
                "scheme",
                format!("unknown scheme `{other}` (expected sm-ldm, single-ta, smx-ldm or sm-tdm-fdm)"),
            )),
        }
    }
}

/// Physical parameters of one two-layer link.
///
/// `total_power` is the linear sum power `P_u`; the per-layer powers come
/// from [`power_split`]. Noise variances are derived from the dB SNRs via
/// the crate-wide convention `sigma^2 = P_u / 10^(SNR_dB/10)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Transmit antennas (1..=64).
    pub n_t: usize,
    /// Receive antennas at the mobile-layer receiver.
    pub n_rm: usize,
    /// Receive antennas at the fixed-layer receiver.
    pub n_rf: usize,
    /// Injection level in dB; strictly positive (the mobile layer always
    /// gets the larger power share).
    pub injection_level_db: f64,
    /// Mobile-layer SNR in dB.
    pub snr_ml_db: f64,
    /// Fixed-layer SNR in dB.
    pub snr_fl_db: f64,
    /// Total transmit power `P_u` in linear units.
    pub total_power: f64,
}

impl SystemConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_t: usize,
        n_rm: usize,
        n_rf: usize,
        injection_level_db: f64,
        snr_ml_db: f64,
        snr_fl_db: f64,
        total_power: f64,
    ) -> Result<Self> {
        let cfg = SystemConfig {
            n_t,
            n_rm,
            n_rf,
            injection_level_db,
            snr_ml_db,
            snr_fl_db,
            total_power,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t < 1 || self.n_t > MAX_TRANSMIT_ANTENNAS {
            return Err(Error::invalid(
                "nt",
                format!(
                    "transmit antenna count must be in 1..={MAX_TRANSMIT_ANTENNAS}, got {}",
                    self.n_t
                ),
            ));
        }
        if self.n_rm < 1 {
            return Err(Error::invalid("nrm", "receive antenna count must be >= 1"));
        }
        if self.n_rf < 1 {
            return Err(Error::invalid("nrf", "receive antenna count must be >= 1"));
        }
        if !(self.injection_level_db > 0.0) || !self.injection_level_db.is_finite() {
            return Err(Error::invalid(
                "il-db",
                format!(
                    "injection level must exceed 0 dB, got {}",
                    self.injection_level_db
                ),
            ));
        }
        if !self.snr_ml_db.is_finite() {
            return Err(Error::invalid("snr-ml-db", "SNR must be finite"));
        }
        if !self.snr_fl_db.is_finite() {
            return Err(Error::invalid("snr-fl-db", "SNR must be finite"));
        }
        if !(self.total_power > 0.0) || !self.total_power.is_finite() {
            return Err(Error::invalid(
                "total-power",
                format!("total power must be positive, got {}", self.total_power),
            ));
        }
        Ok(())
    }

    /// Per-layer powers for this configuration.
    pub fn power_split(&self) -> Result<PowerSplit> {
        power_split(self.total_power, self.injection_level_db)
    }

    /// Mobile-layer noise variance.
    pub fn sigma2_ml(&self) -> f64 {
        linear_noise_variance(self.snr_ml_db, self.total_power)
    }

    /// Fixed-layer noise variance.
    pub fn sigma2_fl(&self) -> f64 {
        linear_noise_variance(self.snr_fl_db, self.total_power)
    }
}

/// Linear per-layer transmit powers; `rho_ml + rho_fl = P_u` and
/// `rho_ml / rho_fl = 10^(IL_dB/10)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub rho_ml: f64,
    pub rho_fl: f64,
}

/// Time or bandwidth shares for orthogonal (TDM/FDM) layering. Only the
/// fractions `l / (l_ml + l_fl)` enter any formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdmFdmShare {
    pub l_ml: f64,
    pub l_fl: f64,
}

impl TdmFdmShare {
    pub fn new(l_ml: f64, l_fl: f64) -> Result<Self> {
        let share = TdmFdmShare { l_ml, l_fl };
        share.validate()?;
        Ok(share)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l_ml >= 0.0) || !(self.l_fl >= 0.0) {
            return Err(Error::invalid("share", "shares must be nonnegative"));
        }
        if !(self.l_ml + self.l_fl > 0.0) {
            return Err(Error::invalid("share", "total share must be positive"));
        }
        Ok(())
    }

    pub fn ml_fraction(&self) -> f64 {
        self.l_ml / (self.l_ml + self.l_fl)
    }

    pub fn fl_fraction(&self) -> f64 {
        self.l_fl / (self.l_ml + self.l_fl)
    }
}

/// Splits `total_power` across the two layers so that the sum equals
/// `total_power` and the ratio equals the linear injection level.
pub fn power_split(total_power: f64, injection_level_db: f64) -> Result<PowerSplit> {
    if !(total_power > 0.0) || !total_power.is_finite() {
        return Err(Error::invalid(
            "total-power",
            format!("total power must be positive, got {total_power}"),
        ));
    }
    if !(injection_level_db > 0.0) || !injection_level_db.is_finite() {
        return Err(Error::invalid(
            "il-db",
            format!("injection level must exceed 0 dB, got {injection_level_db}"),
        ));
    }
    let il = 10f64.powf(injection_level_db / 10.0);
    let rho_fl = total_power / (1.0 + il);
    // Subtraction keeps the sum constraint exact in floating point.
    let rho_ml = total_power - rho_fl;
    Ok(PowerSplit { rho_ml, rho_fl })
}

/// Noise variance for a layer quoted at `snr_db`:
/// `sigma^2 = total_power / 10^(snr_db/10)`.
pub fn noise_variance(snr_db: f64, total_power: f64) -> Result<f64> {
    if !(total_power > 0.0) || !total_power.is_finite() {
        return Err(Error::invalid(
            "total-power",
            format!("total power must be positive, got {total_power}"),
        ));
    }
    Ok(linear_noise_variance(snr_db, total_power))
}

fn linear_noise_variance(snr_db: f64, total_power: f64) -> f64 {
    total_power / 10f64.powf(snr_db / 10.0)
}
