//! Per-antenna SINR values.
//!
//! Two routes produce the same numbers: the generic moment-ratio
//! assembly, which accepts expectations of combiner/channel inner
//! products from any linear combiner, and the MRC closed forms per
//! scheme. Feeding the analytic Rayleigh/MRC moments into the generic
//! route reproduces the closed forms to machine precision; the Monte
//! Carlo engine feeds it empirical moments instead.

use num_complex::Complex64;

use crate::model::{Layer, PowerSplit, SystemConfig};
use crate::{Error, Result};

/// Per-transmit-antenna linear SINR values for one layer.
///
/// Entries are finite and nonnegative; the unchecked [`SinrVector::from_raw`]
/// constructor exists for asymptotic test vectors only.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrVector {
    layer: Layer,
    values: Vec<f64>,
}

impl SinrVector {
    pub fn new(layer: Layer, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sinr", "SINR vector must be nonempty"));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid(
                    "sinr",
                    format!("entry {i} must be finite and nonnegative, got {v}"),
                ));
            }
        }
        Ok(SinrVector { layer, values })
    }

    /// Unchecked constructor for asymptotic tests (admits infinities).
    pub fn from_raw(layer: Layer, values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        SinrVector { layer, values }
    }

    pub fn uniform(layer: Layer, value: f64, n_t: usize) -> Result<Self> {
        SinrVector::new(layer, vec![value; n_t])
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Empirical expectations of the combiner/channel inner products that
/// enter the moment-ratio SINR.
///
/// Shapes are per transmit antenna: vectors of length `n_t`, matrices
/// `n_t x n_t`. `cross_isi` is present for the mobile layer only (the
/// fixed layer sees no cross-layer interference after cancellation).
/// The `*_stderr` companions let convergence checks test the analytic
/// moment identities at a stated number of standard errors.
#[derive(Debug, Clone)]
pub struct MomentEstimates {
    /// `|E{g_n^H h_n}|^2` per antenna.
    pub desired_gain: Vec<f64>,
    /// `E{g_n^H h_n}` before squaring (real for MRC up to noise).
    pub mean_inner: Vec<Complex64>,
    /// Standard error of the real part of `mean_inner`.
    pub mean_inner_stderr: Vec<f64>,
    /// `E{|g_n^H h_{n'}|^2}` over same-layer symbol indices.
    pub self_isi: Vec<Vec<f64>>,
    pub self_isi_stderr: Vec<Vec<f64>>,
    /// `E{|g_n^H h_m|^2}` against the other layer's symbol indices
    /// (mobile layer only; interference arrives through the same channel).
    pub cross_isi: Option<Vec<Vec<f64>>>,
    pub cross_isi_stderr: Option<Vec<Vec<f64>>>,
    /// `E{||g_n||^2}` per antenna.
    pub combiner_norm: Vec<f64>,
    pub combiner_norm_stderr: Vec<f64>,
    pub n_trials: u64,
}

impl MomentEstimates {
    /// Analytic Rayleigh/MRC moments for `n_t` transmit and `n_r` receive
    /// antennas: mean inner product `n_r`, independent-column second
    /// moment `n_r`, aligned fourth moment `n_r (n_r + 1)`.
    pub fn analytic_mrc(layer: Layer, n_t: usize, n_r: usize) -> Self {
        let nr = n_r as f64;
        let mut isi = vec![vec![nr; n_t]; n_t];
        for (n, row) in isi.iter_mut().enumerate() {
            row[n] = nr * (nr + 1.0);
        }
        let cross = matches!(layer, Layer::Ml).then(|| isi.clone());
        let zeros_m = vec![vec![0.0; n_t]; n_t];
        MomentEstimates {
            desired_gain: vec![nr * nr; n_t],
            mean_inner: vec![Complex64::new(nr, 0.0); n_t],
            mean_inner_stderr: vec![0.0; n_t],
            self_isi: isi,
            self_isi_stderr: zeros_m.clone(),
            cross_isi: cross,
            cross_isi_stderr: matches!(layer, Layer::Ml).then_some(zeros_m),
            combiner_norm: vec![nr; n_t],
            combiner_norm_stderr: vec![0.0; n_t],
            n_trials: 0,
        }
    }

    fn check_shape(&self, n_t: usize, want_cross: bool) -> Result<()> {
        let vec_ok = self.desired_gain.len() == n_t
            && self.combiner_norm.len() == n_t
            && self.self_isi.len() == n_t
            && self.self_isi.iter().all(|r| r.len() == n_t);
        if !vec_ok {
            return Err(Error::invalid(
                "moments",
                format!("estimates are not shaped for {n_t} transmit antennas"),
            ));
        }
        if want_cross {
            let cross_ok = self
                .cross_isi
                .as_ref()
                .is_some_and(|m| m.len() == n_t && m.iter().all(|r| r.len() == n_t));
            if !cross_ok {
                return Err(Error::invalid(
                    "moments",
                    "mobile-layer assembly needs an n_t x n_t cross_isi matrix",
                ));
            }
        }
        let nonneg = |v: &f64| v.is_finite() && *v >= 0.0;
        let all_ok = self.desired_gain.iter().all(nonneg)
            && self.combiner_norm.iter().all(nonneg)
            && self.self_isi.iter().flatten().all(nonneg)
            && self
                .cross_isi
                .iter()
                .flat_map(|m| m.iter().flatten())
                .all(nonneg);
        if !all_ok {
            return Err(Error::invalid(
                "moments",
                "moment entries must be finite and nonnegative",
            ));
        }
        Ok(())
    }
}

/// Mobile-layer SINR from moment estimates.
///
/// Per antenna `n` the desired power is `(rho_ml/n_t) * desired_gain[n]`;
/// the denominator collects own-layer ISI (total second moment minus the
/// coherent part), the other layer's ISI, and noise scaled by the
/// combiner norm.
pub fn sinr_from_moments_ml(
    m: &MomentEstimates,
    split: &PowerSplit,
    n_t: usize,
    sigma2_ml: f64,
) -> Result<SinrVector> {
    m.check_shape(n_t, true)?;
    let cross = m.cross_isi.as_ref().expect("shape-checked");
    assemble(m, split.rho_ml, n_t, sigma2_ml, Layer::Ml, |n| {
        cross[n].iter().sum::<f64>() * split.rho_fl / n_t as f64
    })
}

/// Fixed-layer SINR from moment estimates: identical assembly with the
/// cross-layer sum absent (perfect cancellation of the mobile layer).
pub fn sinr_from_moments_fl(
    m: &MomentEstimates,
    split: &PowerSplit,
    n_t: usize,
    sigma2_fl: f64,
) -> Result<SinrVector> {
    m.check_shape(n_t, false)?;
    assemble(m, split.rho_fl, n_t, sigma2_fl, Layer::Fl, |_| 0.0)
}

fn assemble(
    m: &MomentEstimates,
    rho_own: f64,
    n_t: usize,
    sigma2: f64,
    layer: Layer,
    other_layer_isi: impl Fn(usize) -> f64,
) -> Result<SinrVector> {
    let ntf = n_t as f64;
    let per_antenna = rho_own / ntf;
    let mut values = Vec::with_capacity(n_t);
    for n in 0..n_t {
        let numerator = per_antenna * m.desired_gain[n];
        let own_isi = per_antenna * (m.self_isi[n].iter().sum::<f64>() - m.desired_gain[n]);
        let denominator = own_isi + other_layer_isi(n) + sigma2 * m.combiner_norm[n];
        if !(denominator > 0.0) {
            return Err(Error::Degenerate(format!(
                "nonpositive SINR denominator {denominator} at antenna {n}; \
                 moment estimates are inconsistent"
            )));
        }
        values.push(numerator / denominator);
    }
    SinrVector::new(layer, values)
}

/// Closed-form MRC SINR for the mobile layer of SM-LDM:
/// `rho_ml N_rm / (rho_ml N_t + rho_fl (N_t + N_rm) + N_t sigma_ml^2)`,
/// identical on every antenna index.
pub fn mrc_sinr_ml(cfg: &SystemConfig, split: &PowerSplit) -> SinrVector {
    let (nt, nrm) = (cfg.n_t as f64, cfg.n_rm as f64);
    let v = split.rho_ml * nrm
        / (split.rho_ml * nt + split.rho_fl * (nt + nrm) + nt * cfg.sigma2_ml());
    debug_assert!(v.is_finite() && v >= 0.0);
    SinrVector::from_raw(Layer::Ml, vec![v; cfg.n_t])
}

/// Closed-form MRC SINR for the fixed layer of SM-LDM:
/// `rho_fl N_rf / (rho_fl N_t + N_t sigma_fl^2)`.
pub fn mrc_sinr_fl(cfg: &SystemConfig, split: &PowerSplit) -> SinrVector {
    let (nt, nrf) = (cfg.n_t as f64, cfg.n_rf as f64);
    let v = split.rho_fl * nrf / (split.rho_fl * nt + nt * cfg.sigma2_fl());
    debug_assert!(v.is_finite() && v >= 0.0);
    SinrVector::from_raw(Layer::Fl, vec![v; cfg.n_t])
}

/// Single-transmit-antenna LDM: the SM-LDM forms at `N_t = 1`.
pub fn single_ta_sinr(cfg: &SystemConfig, split: &PowerSplit) -> (SinrVector, SinrVector) {
    let nrm = cfg.n_rm as f64;
    let nrf = cfg.n_rf as f64;
    let ml = split.rho_ml * nrm
        / (split.rho_ml + split.rho_fl * (1.0 + nrm) + cfg.sigma2_ml());
    let fl = split.rho_fl * nrf / (split.rho_fl + cfg.sigma2_fl());
    (
        SinrVector::from_raw(Layer::Ml, vec![ml]),
        SinrVector::from_raw(Layer::Fl, vec![fl]),
    )
}

/// Spatial multiplexing LDM: per-antenna power divides `N_t`, so the
/// noise terms pick up an extra factor of `N_t` relative to SM-LDM.
pub fn smx_sinr(cfg: &SystemConfig, split: &PowerSplit) -> (SinrVector, SinrVector) {
    let (nt, nrm, nrf) = (cfg.n_t as f64, cfg.n_rm as f64, cfg.n_rf as f64);
    let ml = split.rho_ml * nrm
        / (split.rho_ml * nt + split.rho_fl * (nt + nrm) + nt * nt * cfg.sigma2_ml());
    let fl = split.rho_fl * nrf / (split.rho_fl * nt + nt * nt * cfg.sigma2_fl());
    (
        SinrVector::from_raw(Layer::Ml, vec![ml; cfg.n_t]),
        SinrVector::from_raw(Layer::Fl, vec![fl; cfg.n_t]),
    )
}

/// Orthogonal TDM/FDM layering: each layer transmits alone at full power,
/// so only own-layer ISI and noise remain.
pub fn tdmfdm_sinr(cfg: &SystemConfig) -> (SinrVector, SinrVector) {
    let (nt, nrm, nrf) = (cfg.n_t as f64, cfg.n_rm as f64, cfg.n_rf as f64);
    let pu = cfg.total_power;
    let ml = pu * nrm / (nt * (pu + cfg.sigma2_ml()));
    let fl = pu * nrf / (nt * (pu + cfg.sigma2_fl()));
    (
        SinrVector::from_raw(Layer::Ml, vec![ml; cfg.n_t]),
        SinrVector::from_raw(Layer::Fl, vec![fl; cfg.n_t]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(n_t: usize, n_rm: usize, n_rf: usize, il: f64, snr_ml: f64, snr_fl: f64) -> SystemConfig {
        SystemConfig::new(n_t, n_rm, n_rf, il, snr_ml, snr_fl, 1.0).unwrap()
    }

    #[test]
    fn mrc_ml_reference_point() {
        // Hand evaluation: 1.519494 / (1.519494 + 0.961012 + 2).
        let c = cfg(2, 2, 2, 5.0, 0.0, 20.0);
        let split = c.power_split().unwrap();
        let s = mrc_sinr_ml(&c, &split);
        for v in s.values() {
            assert_relative_eq!(*v, 0.33913441998370525, max_relative = 1e-12);
        }
    }

    #[test]
    fn mrc_fl_reference_point() {
        // Hand evaluation: 0.480506 / 0.500506.
        let c = cfg(2, 2, 2, 5.0, 0.0, 20.0);
        let split = c.power_split().unwrap();
        let s = mrc_sinr_fl(&c, &split);
        for v in s.values() {
            assert_relative_eq!(*v, 0.9600404507882604, max_relative = 1e-12);
        }
    }

    #[test]
    fn mrc_ml_dominant_term_limit() {
        // With no fixed layer and vanishing noise the ratio tends to N_rm/N_t.
        let c = cfg(2, 4, 2, 300.0, 300.0, 20.0);
        let split = c.power_split().unwrap();
        let s = mrc_sinr_ml(&c, &split);
        assert_relative_eq!(s.values()[0], 2.0, max_relative = 1e-9);
    }

    #[test]
    fn mrc_ml_increases_with_receive_antennas() {
        let split = cfg(2, 2, 2, 5.0, 0.0, 20.0).power_split().unwrap();
        let mut last = 0.0;
        for n_rm in [1, 2, 4, 8, 16] {
            let c = cfg(2, n_rm, 2, 5.0, 0.0, 20.0);
            let v = mrc_sinr_ml(&c, &split).values()[0];
            assert!(v > last, "SINR must increase with N_rm: {v} !> {last}");
            last = v;
        }
    }

    #[test]
    fn mrc_fl_saturation_and_zero_power() {
        // sigma -> 0 drives the ratio to N_rf/N_t regardless of rho_fl.
        let c = cfg(2, 2, 2, 5.0, 0.0, 280.0);
        let split = c.power_split().unwrap();
        assert_relative_eq!(mrc_sinr_fl(&c, &split).values()[0], 1.0, max_relative = 1e-9);

        let zero = PowerSplit { rho_ml: 1.0, rho_fl: 0.0 };
        assert_eq!(mrc_sinr_fl(&c, &zero).values()[0], 0.0);
    }

    #[test]
    fn single_ta_matches_nt1_closed_forms() {
        let c1 = cfg(1, 3, 2, 7.0, 2.0, 18.0);
        let split = c1.power_split().unwrap();
        let (ml, fl) = single_ta_sinr(&c1, &split);
        assert_eq!(ml.len(), 1);
        assert_eq!(fl.len(), 1);
        assert_relative_eq!(ml.values()[0], mrc_sinr_ml(&c1, &split).values()[0]);
        assert_relative_eq!(fl.values()[0], mrc_sinr_fl(&c1, &split).values()[0]);
    }

    #[test]
    fn single_ta_interference_dominated_limit() {
        // N_rm = 1 and rho_fl >> rho_ml pushes the mobile layer to zero.
        let nrm = 1.0;
        let huge = PowerSplit { rho_ml: 1.0, rho_fl: 1e12 };
        let ml = huge.rho_ml * nrm / (huge.rho_ml + huge.rho_fl * (1.0 + nrm) + 1.0);
        assert!(ml < 1e-9);
    }

    #[test]
    fn smx_coincides_with_single_ta_at_nt1_and_is_below_sm() {
        let c1 = cfg(1, 2, 2, 5.0, 0.0, 20.0);
        let split = c1.power_split().unwrap();
        let (ml_smx, fl_smx) = smx_sinr(&c1, &split);
        let (ml_st, fl_st) = single_ta_sinr(&c1, &split);
        assert_relative_eq!(ml_smx.values()[0], ml_st.values()[0]);
        assert_relative_eq!(fl_smx.values()[0], fl_st.values()[0]);

        for n_t in [2usize, 4, 8] {
            let c = cfg(n_t, 2, 2, 5.0, 0.0, 20.0);
            let split = c.power_split().unwrap();
            let (ml_smx, fl_smx) = smx_sinr(&c, &split);
            assert!(ml_smx.values()[0] < mrc_sinr_ml(&c, &split).values()[0]);
            assert!(fl_smx.values()[0] < mrc_sinr_fl(&c, &split).values()[0]);
        }
    }

    #[test]
    fn smx_approaches_sm_as_noise_vanishes() {
        let c = cfg(4, 2, 2, 5.0, 290.0, 290.0);
        let split = c.power_split().unwrap();
        let (ml_smx, fl_smx) = smx_sinr(&c, &split);
        assert_relative_eq!(
            ml_smx.values()[0],
            mrc_sinr_ml(&c, &split).values()[0],
            max_relative = 1e-9
        );
        assert_relative_eq!(
            fl_smx.values()[0],
            mrc_sinr_fl(&c, &split).values()[0],
            max_relative = 1e-9
        );
    }

    #[test]
    fn tdmfdm_reference_point_and_full_power_identity() {
        let c = cfg(2, 2, 2, 5.0, 0.0, 20.0);
        let (ml, fl) = tdmfdm_sinr(&c);
        assert_relative_eq!(ml.values()[0], 0.5, max_relative = 1e-12);

        // Structurally the same as MRC with the whole budget on one layer.
        let all_ml = PowerSplit { rho_ml: 1.0, rho_fl: 0.0 };
        let expected_fl = {
            let all_fl = PowerSplit { rho_ml: 0.0, rho_fl: 1.0 };
            mrc_sinr_fl(&c, &all_fl).values()[0]
        };
        assert_relative_eq!(ml.values()[0], mrc_sinr_ml(&c, &all_ml).values()[0]);
        assert_relative_eq!(fl.values()[0], expected_fl);
    }

    #[test]
    fn moment_assembly_reproduces_closed_forms() {
        for (n_t, n_rm, n_rf, il, snr_ml, snr_fl) in [
            (2usize, 2usize, 2usize, 5.0, 0.0, 20.0),
            (4, 2, 2, 20.0, -5.0, 30.0),
            (1, 8, 3, 9.0, 4.0, 12.0),
            (8, 1, 1, 3.0, 0.0, 0.0),
        ] {
            let c = cfg(n_t, n_rm, n_rf, il, snr_ml, snr_fl);
            let split = c.power_split().unwrap();

            let m = MomentEstimates::analytic_mrc(Layer::Ml, n_t, n_rm);
            let got = sinr_from_moments_ml(&m, &split, n_t, c.sigma2_ml()).unwrap();
            let want = mrc_sinr_ml(&c, &split);
            for (g, w) in got.values().iter().zip(want.values()) {
                assert_relative_eq!(g, w, max_relative = 1e-12);
            }

            let m = MomentEstimates::analytic_mrc(Layer::Fl, n_t, n_rf);
            let got = sinr_from_moments_fl(&m, &split, n_t, c.sigma2_fl()).unwrap();
            let want = mrc_sinr_fl(&c, &split);
            for (g, w) in got.values().iter().zip(want.values()) {
                assert_relative_eq!(g, w, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn moment_assembly_edge_cases() {
        let n_t = 2;
        let split = PowerSplit { rho_ml: 1.0, rho_fl: 0.0 };

        // No cross interference and rho_fl = 0 reduces to the single-layer
        // assembly with mobile-layer parameters.
        let mut m = MomentEstimates::analytic_mrc(Layer::Ml, n_t, 2);
        m.cross_isi = Some(vec![vec![0.0; n_t]; n_t]);
        let ml = sinr_from_moments_ml(&m, &split, n_t, 0.5).unwrap();
        let fl_form = sinr_from_moments_fl(
            &MomentEstimates::analytic_mrc(Layer::Fl, n_t, 2),
            &PowerSplit { rho_ml: 0.0, rho_fl: 1.0 },
            n_t,
            0.5,
        )
        .unwrap();
        for (a, b) in ml.values().iter().zip(fl_form.values()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }

        // Zero desired gain (and zero ISI) with a live combiner norm gives 0.
        let mut m = MomentEstimates::analytic_mrc(Layer::Ml, n_t, 2);
        m.desired_gain = vec![0.0; n_t];
        m.self_isi = vec![vec![0.0; n_t]; n_t];
        m.cross_isi = Some(vec![vec![0.0; n_t]; n_t]);
        let s = sinr_from_moments_ml(&m, &split, n_t, 1.0).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));

        // Degenerate: nothing in the denominator at all.
        let mut m = MomentEstimates::analytic_mrc(Layer::Fl, n_t, 2);
        m.self_isi = vec![vec![0.0; n_t]; n_t];
        m.desired_gain = vec![0.0; n_t];
        m.combiner_norm = vec![0.0; n_t];
        assert!(matches!(
            sinr_from_moments_fl(&m, &PowerSplit { rho_ml: 0.0, rho_fl: 1.0 }, n_t, 0.0),
            Err(Error::Degenerate(_))
        ));

        // Mobile-layer assembly without a cross matrix is a shape error.
        let mut m = MomentEstimates::analytic_mrc(Layer::Ml, n_t, 2);
        m.cross_isi = None;
        assert!(sinr_from_moments_ml(&m, &split, n_t, 1.0).is_err());
    }

    #[test]
    fn sinr_vector_validation() {
        assert!(SinrVector::new(Layer::Ml, vec![]).is_err());
        assert!(SinrVector::new(Layer::Ml, vec![1.0, -0.1]).is_err());
        assert!(SinrVector::new(Layer::Ml, vec![f64::INFINITY]).is_err());
        assert!(SinrVector::new(Layer::Ml, vec![0.0, 2.5]).is_ok());
    }
}
