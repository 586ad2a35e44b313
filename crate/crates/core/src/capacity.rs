//! From SINR vectors to spectral efficiency.
//!
//! The per-layer SE of a spatial-modulation link splits into a
//! constellation term (Shannon capacity of the active subchannel) and a
//! spatial term (mutual information carried by the antenna index). The
//! spatial term has no closed form; this module computes its Jensen
//! lower bound with a constant shift that makes the estimator
//! asymptotically unbiased at both SINR extremes. The exact value lives
//! in [`crate::montecarlo`] as a sampled oracle.
//!
//! All determinants are diagonal closed forms evaluated in the log
//! domain, which keeps the bound exact and overflow-free for SINR
//! spanning `1e-8..1e8`.

use crate::model::TdmFdmShare;
use crate::sinr::SinrVector;
use crate::Result;

const LN_2: f64 = std::f64::consts::LN_2;

/// Diagonal covariance of the equivalent additive-noise model given one
/// active antenna: `diag(1/SINR_1, ..., 1/SINR_{n_t})` with the active
/// antenna's entry increased by `n_t`.
#[derive(Debug, Clone, Copy)]
pub struct ComponentCovariance<'a> {
    inv_sinr: &'a [f64],
    boosted: usize,
}

impl<'a> ComponentCovariance<'a> {
    /// `inv_sinr` holds `1/SINR_k`; `boosted` is the active antenna index.
    pub fn new(inv_sinr: &'a [f64], boosted: usize) -> Self {
        debug_assert!(boosted < inv_sinr.len());
        ComponentCovariance { inv_sinr, boosted }
    }

    fn boost(&self) -> f64 {
        self.inv_sinr.len() as f64
    }

    /// `log det = sum_k ln(base_k) + ln(1 + n_t / base_boosted)`.
    pub fn log_det(&self) -> f64 {
        let base: f64 = self.inv_sinr.iter().map(|b| b.ln()).sum();
        base + (self.boost() / self.inv_sinr[self.boosted]).ln_1p()
    }

    /// `log det` of the entrywise sum of two component covariances over
    /// the same SINR vector.
    pub fn log_det_sum_with(&self, other: &ComponentCovariance<'_>) -> f64 {
        debug_assert_eq!(self.inv_sinr.len(), other.inv_sinr.len());
        let boost = self.boost();
        let base: f64 = self.inv_sinr.iter().map(|b| (2.0 * b).ln()).sum();
        if self.boosted == other.boosted {
            base + (boost / self.inv_sinr[self.boosted]).ln_1p()
        } else {
            base + (boost / (2.0 * self.inv_sinr[self.boosted])).ln_1p()
                + (boost / (2.0 * self.inv_sinr[other.boosted])).ln_1p()
        }
    }
}

/// `log2(1 + x)` through `ln_1p`, accurate for small x.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Per-layer spectral-efficiency breakdown in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeBreakdown {
    pub constellation_mi: f64,
    pub spatial_mi: f64,
    /// Always the exact sum of the two components.
    pub total_se: f64,
    /// Standard error of the Monte Carlo spatial term; `None` on
    /// closed-form paths.
    pub stderr: Option<f64>,
}

impl SeBreakdown {
    pub fn new(constellation_mi: f64, spatial_mi: f64, stderr: Option<f64>) -> Self {
        SeBreakdown {
            constellation_mi,
            spatial_mi,
            total_se: constellation_mi + spatial_mi,
            stderr,
        }
    }

    /// Scales every component (and the stderr) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        SeBreakdown::new(
            factor * self.constellation_mi,
            factor * self.spatial_mi,
            self.stderr.map(|e| factor * e),
        )
    }
}

/// Diagnostic flags from the spatial-bound evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpatialMiDetail {
    /// Reported (clamped) value in bits.
    pub value: f64,
    /// Value before clamping to `[0, log2 n_t]`.
    pub unclamped: f64,
    /// The clamp changed the value.
    pub clamped: bool,
    /// A zero SINR entry short-circuited the bound to its limit value 0.
    pub zero_sinr: bool,
}

/// Constellation-domain MI: `(1/n_t) * sum_n log2(1 + n_t * SINR_n)`.
pub fn constellation_mi(s: &SinrVector) -> f64 {
    let nt = s.len() as f64;
    s.values().iter().map(|v| log2_1p(nt * v)).sum::<f64>() / nt
}

/// Spatial-domain MI lower bound in bits, clamped to `[0, log2 n_t]`.
///
/// For `n_t = 1` the spatial domain carries no information and the bound
/// is exactly 0. A zero SINR entry (with `n_t >= 2`) yields the limit
/// value 0, flagged in [`SpatialMiDetail::zero_sinr`].
pub fn spatial_mi_lower_bound(s: &SinrVector) -> f64 {
    spatial_mi_lower_bound_detailed(s).value
}

/// As [`spatial_mi_lower_bound`] but exposing clamp diagnostics.
pub fn spatial_mi_lower_bound_detailed(s: &SinrVector) -> SpatialMiDetail {
    let n = s.len();
    if n == 1 {
        return SpatialMiDetail::default();
    }
    if s.values().iter().any(|v| *v == 0.0) {
        return SpatialMiDetail {
            zero_sinr: true,
            ..SpatialMiDetail::default()
        };
    }
    let raw = unshifted_jensen_sum(s);
    let log2_n = (n as f64).log2();
    let unclamped = log2_n - n as f64 - raw / n as f64;
    let value = unclamped.clamp(0.0, log2_n);
    SpatialMiDetail {
        value,
        unclamped,
        clamped: value != unclamped,
        zero_sinr: false,
    }
}

/// The spatial bound before the asymptotic bias shift; it sits exactly
/// `n_t * (log2 e - 1)` below [`spatial_mi_lower_bound_detailed`]'s
/// unclamped value.
pub fn spatial_mi_lower_bound_unshifted(s: &SinrVector) -> f64 {
    let n = s.len();
    if n == 1 {
        return 0.0;
    }
    let raw = unshifted_jensen_sum(s);
    (n as f64).log2() - n as f64 * std::f64::consts::LOG2_E - raw / n as f64
}

/// `sum_n log2( sum_{n'} det(S_n) / det(S_n + S_{n'}) )` over the
/// mixture components of the equivalent model.
///
/// Each determinant ratio is a product of per-diagonal factors; pairing
/// the entries before taking logs keeps every factor finite even when
/// individual `1/SINR` entries are 0 (infinite SINR test vectors).
fn unshifted_jensen_sum(s: &SinrVector) -> f64 {
    let n = s.len();
    let boost = n as f64;
    let inv: Vec<f64> = s.values().iter().map(|v| 1.0 / v).collect();
    let mut acc = 0.0;
    for nn in 0..n {
        let exponents = (0..n).map(|np| {
            let mut e = 0.0;
            for (k, b) in inv.iter().enumerate() {
                let num = b + if k == nn { boost } else { 0.0 };
                let den = 2.0 * b
                    + if k == nn { boost } else { 0.0 }
                    + if k == np { boost } else { 0.0 };
                e += (num / den).ln();
            }
            e
        });
        acc += log_sum_exp(exponents) / LN_2;
    }
    acc
}

/// Jensen upper bound on the expected log2-density of the equivalent
/// Gaussian mixture (the intractable cross-entropy term inside the
/// spatial MI). The sampled counterpart lives in the Monte Carlo module.
pub fn mixture_log_density_jensen_bound(s: &SinrVector) -> f64 {
    let n = s.len();
    let nf = n as f64;
    let inv: Vec<f64> = s.values().iter().map(|v| 1.0 / v).collect();
    let mut acc = 0.0;
    for nn in 0..n {
        let own = ComponentCovariance::new(&inv, nn);
        let terms = (0..n).map(|np| {
            -own.log_det_sum_with(&ComponentCovariance::new(&inv, np)) - nf.ln()
        });
        acc += log_sum_exp(terms) / LN_2;
    }
    acc / nf - nf * std::f64::consts::PI.log2()
}

/// Spectral-efficiency lower bound for a spatial-modulation layer: the
/// constellation term plus the clamped spatial term. The same path
/// serves both layers; only the SINR vector differs.
pub fn sm_se_lower_bound(s: &SinrVector) -> SeBreakdown {
    sm_se_lower_bound_detailed(s).0
}

/// As [`sm_se_lower_bound`], also returning the spatial-bound diagnostics.
pub fn sm_se_lower_bound_detailed(s: &SinrVector) -> (SeBreakdown, SpatialMiDetail) {
    let detail = spatial_mi_lower_bound_detailed(s);
    (
        SeBreakdown::new(constellation_mi(s), detail.value, None),
        detail,
    )
}

/// Exact SE of single-transmit-antenna layering: `log2(1 + SINR)` per
/// layer; only the constellation symbols carry information.
pub fn single_ta_se(s_ml: &SinrVector, s_fl: &SinrVector) -> (f64, f64) {
    debug_assert_eq!(s_ml.len(), 1);
    debug_assert_eq!(s_fl.len(), 1);
    (log2_1p(s_ml.values()[0]), log2_1p(s_fl.values()[0]))
}

/// Exact SE of spatial multiplexing: plain sum of per-antenna capacities
/// (no `1/n_t` average and no `n_t` gain inside the log).
pub fn smx_se(s_ml: &SinrVector, s_fl: &SinrVector) -> (f64, f64) {
    let sum = |s: &SinrVector| s.values().iter().map(|v| log2_1p(*v)).sum::<f64>();
    (sum(s_ml), sum(s_fl))
}

/// SE lower bounds of orthogonal TDM/FDM layering: the share fraction
/// times the spatial-modulation bound on the full-power SINR vectors.
pub fn tdmfdm_se(
    s_ml: &SinrVector,
    s_fl: &SinrVector,
    share: &TdmFdmShare,
) -> Result<(SeBreakdown, SeBreakdown)> {
    share.validate()?;
    Ok((
        sm_se_lower_bound(s_ml).scaled(share.ml_fraction()),
        sm_se_lower_bound(s_fl).scaled(share.fl_fraction()),
    ))
}
