//! Monte Carlo ground truth.
//!
//! Draws Rayleigh channels, builds MRC combiners, estimates the SINR
//! moment terms empirically, and samples the exact spatial mutual
//! information of the equivalent Gaussian-mixture channel.
//!
//! Reproducibility contract: every trial (or mixture sample) runs on its
//! own counter-based RNG substream, `stream_id = base + index`, so a
//! given [`RngSpec`] produces bit-identical results for any worker count
//! and for the sequential build.

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::capacity::{self, SeBreakdown};
use crate::exec;
use crate::model::{Layer, PowerSplit, Scheme, SystemConfig};
use crate::sinr::{self, MomentEstimates, SinrVector};
use crate::{Error, Result};

/// Seed plus stream identifier; `(seed, stream_id)` fully determines a
/// sample sequence and distinct streams are statistically independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngSpec { seed, stream_id }
    }

    /// The same seed on a shifted stream block.
    pub fn with_stream_offset(&self, offset: u64) -> Self {
        RngSpec {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(offset),
        }
    }

    fn rng_at(&self, offset: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id.wrapping_add(offset));
        rng
    }
}

/// Stream offset separating the moment-estimation block from the
/// MI-sampling block inside one simulation run. Budgets must stay below
/// this (2^31 trials/samples), and callers spacing whole runs should use
/// multiples of 2^32.
pub const STREAM_BLOCK: u64 = 1 << 31;

/// One Rayleigh channel realization, `n_r x n_t`, stored column-major;
/// entries are i.i.d. circularly symmetric complex Gaussian with unit
/// variance (real/imaginary parts each variance 1/2).
#[derive(Debug, Clone)]
pub struct ChannelMatrix {
    n_r: usize,
    n_t: usize,
    entries: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_r
    }

    pub fn n_cols(&self) -> usize {
        self.n_t
    }

    /// Channel column for transmit antenna `j`.
    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.entries[j * self.n_r..(j + 1) * self.n_r]
    }
}

/// The MRC combining vectors; with perfect channel knowledge each one is
/// exactly the corresponding channel column.
#[derive(Debug, Clone)]
pub struct CombinerSet {
    vectors: Vec<Vec<Complex64>>,
}

impl CombinerSet {
    pub fn vector(&self, n: usize) -> &[Complex64] {
        &self.vectors[n]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Builds the MRC combiners for a channel realization.
pub fn mrc_combiners(h: &ChannelMatrix) -> CombinerSet {
    CombinerSet {
        vectors: (0..h.n_cols()).map(|j| h.column(j).to_vec()).collect(),
    }
}

/// Mean, standard error and sample count of one Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `sqrt(n_samples)`.
    pub stderr: f64,
    pub n_samples: u64,
}

impl McEstimate {
    pub fn new(mean: f64, stderr: f64, n_samples: u64) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::invalid("samples", "estimate needs at least 2 samples"));
        }
        Ok(McEstimate {
            mean,
            stderr,
            n_samples,
        })
    }

    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Result<Self> {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        McEstimate::new(mean, (var / nf).sqrt(), n)
    }
}

/// Where a simulation gets its SINR vector from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinrSource {
    /// The MRC closed forms.
    ClosedForm,
    /// Empirical moments from raw channel draws.
    Empirical { trials: u64 },
}

fn draw_complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn draw_channel_with(rng: &mut ChaCha8Rng, n_r: usize, n_t: usize) -> ChannelMatrix {
    let entries = (0..n_r * n_t).map(|_| draw_complex_gaussian(rng)).collect();
    ChannelMatrix { n_r, n_t, entries }
}

/// Draws one channel realization; deterministic for a given [`RngSpec`].
pub fn draw_channel(n_r: usize, n_t: usize, rng: &RngSpec) -> Result<ChannelMatrix> {
    if n_r < 1 || n_t < 1 {
        return Err(Error::invalid("nt", "antenna counts must be >= 1"));
    }
    Ok(draw_channel_with(&mut rng.rng_at(0), n_r, n_t))
}

#[derive(Clone)]
struct MomentAccum {
    n_t: usize,
    inner_re: Vec<f64>,
    inner_im: Vec<f64>,
    inner_re_sq: Vec<f64>,
    isi: Vec<f64>,
    isi_sq: Vec<f64>,
    norm: Vec<f64>,
    norm_sq: Vec<f64>,
    trials: u64,
}

impl MomentAccum {
    fn zero(n_t: usize) -> Self {
        MomentAccum {
            n_t,
            inner_re: vec![0.0; n_t],
            inner_im: vec![0.0; n_t],
            inner_re_sq: vec![0.0; n_t],
            isi: vec![0.0; n_t * n_t],
            isi_sq: vec![0.0; n_t * n_t],
            norm: vec![0.0; n_t],
            norm_sq: vec![0.0; n_t],
            trials: 0,
        }
    }

    fn absorb_trial(&mut self, h: &ChannelMatrix) {
        let n_t = self.n_t;
        for n in 0..n_t {
            let g = h.column(n);
            for m in 0..n_t {
                let inner: Complex64 = g
                    .iter()
                    .zip(h.column(m))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let p = inner.norm_sqr();
                self.isi[n * n_t + m] += p;
                self.isi_sq[n * n_t + m] += p * p;
                if m == n {
                    self.inner_re[n] += inner.re;
                    self.inner_im[n] += inner.im;
                    self.inner_re_sq[n] += inner.re * inner.re;
                    // g_n = h_n under MRC, so the norm is the diagonal inner product.
                    self.norm[n] += inner.re;
                    self.norm_sq[n] += inner.re * inner.re;
                }
            }
        }
        self.trials += 1;
    }

    fn merge(mut self, other: MomentAccum) -> MomentAccum {
        let add = |a: &mut Vec<f64>, b: &[f64]| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        };
        add(&mut self.inner_re, &other.inner_re);
        add(&mut self.inner_im, &other.inner_im);
        add(&mut self.inner_re_sq, &other.inner_re_sq);
        add(&mut self.isi, &other.isi);
        add(&mut self.isi_sq, &other.isi_sq);
        add(&mut self.norm, &other.norm);
        add(&mut self.norm_sq, &other.norm_sq);
        self.trials += other.trials;
        self
    }
}

fn mean_stderr(sum: f64, sum_sq: f64, n: f64) -> (f64, f64) {
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Estimates the moment terms of the SINR assembly for one layer by
/// drawing that layer's channel per trial and applying MRC combiners.
///
/// For the mobile layer the other layer's symbols arrive through the
/// same channel matrix, so the cross terms reuse the same inner products.
pub fn estimate_moments(
    layer: Layer,
    cfg: &SystemConfig,
    trials: u64,
    rng: &RngSpec,
) -> Result<MomentEstimates> {
    cfg.validate()?;
    if trials < 1000 {
        return Err(Error::invalid("trials", "need at least 1000 trials"));
    }
    let n_r = match layer {
        Layer::Ml => cfg.n_rm,
        Layer::Fl => cfg.n_rf,
    };
    let n_t = cfg.n_t;
    let rng = *rng;

    let acc = exec::map_reduce(
        trials,
        |range| {
            let mut acc = MomentAccum::zero(n_t);
            for i in range {
                let mut trial_rng = rng.rng_at(i);
                let h = draw_channel_with(&mut trial_rng, n_r, n_t);
                acc.absorb_trial(&h);
            }
            acc
        },
        MomentAccum::merge,
    )
    .expect("trials >= 1000");

    let nf = acc.trials as f64;
    let mut mean_inner = Vec::with_capacity(n_t);
    let mut mean_inner_stderr = Vec::with_capacity(n_t);
    let mut desired_gain = Vec::with_capacity(n_t);
    let mut combiner_norm = Vec::with_capacity(n_t);
    let mut combiner_norm_stderr = Vec::with_capacity(n_t);
    for n in 0..n_t {
        let (re, re_err) = mean_stderr(acc.inner_re[n], acc.inner_re_sq[n], nf);
        let im = acc.inner_im[n] / nf;
        let mean = Complex64::new(re, im);
        mean_inner.push(mean);
        mean_inner_stderr.push(re_err);
        desired_gain.push(mean.norm_sqr());
        let (nm, nm_err) = mean_stderr(acc.norm[n], acc.norm_sq[n], nf);
        combiner_norm.push(nm);
        combiner_norm_stderr.push(nm_err);
    }
    let mut self_isi = vec![vec![0.0; n_t]; n_t];
    let mut self_isi_stderr = vec![vec![0.0; n_t]; n_t];
    for n in 0..n_t {
        for m in 0..n_t {
            let (v, e) = mean_stderr(acc.isi[n * n_t + m], acc.isi_sq[n * n_t + m], nf);
            self_isi[n][m] = v;
            self_isi_stderr[n][m] = e;
        }
    }
    let (cross_isi, cross_isi_stderr) = match layer {
        Layer::Ml => (Some(self_isi.clone()), Some(self_isi_stderr.clone())),
        Layer::Fl => (None, None),
    };

    Ok(MomentEstimates {
        desired_gain,
        mean_inner,
        mean_inner_stderr,
        self_isi,
        self_isi_stderr,
        cross_isi,
        cross_isi_stderr,
        combiner_norm,
        combiner_norm_stderr,
        n_trials: acc.trials,
    })
}

/// Empirical moments piped through the moment-ratio assembly; converges
/// to the MRC closed forms.
pub fn empirical_sinr(
    layer: Layer,
    cfg: &SystemConfig,
    split: &PowerSplit,
    trials: u64,
    rng: &RngSpec,
) -> Result<SinrVector> {
    let m = estimate_moments(layer, cfg, trials, rng)?;
    match layer {
        Layer::Ml => sinr::sinr_from_moments_ml(&m, split, cfg.n_t, cfg.sigma2_ml()),
        Layer::Fl => sinr::sinr_from_moments_fl(&m, split, cfg.n_t, cfg.sigma2_fl()),
    }
}

enum MixtureStat {
    MutualInfo,
    LogDensity,
}

/// Samples the equivalent-model Gaussian mixture defined by a SINR
/// vector: draw the active antenna uniformly, draw the observation from
/// that component, and score either the MI integrand or the mixture
/// log-density.
fn sample_mixture(
    s: &SinrVector,
    samples: u64,
    rng: &RngSpec,
    stat: MixtureStat,
) -> Result<McEstimate> {
    if samples < 10_000 {
        return Err(Error::invalid("mi-samples", "need at least 1e4 samples"));
    }
    let n_t = s.len();
    for v in s.values() {
        if !(*v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(
                "sinr",
                format!("mixture sampling needs strictly positive finite SINR, got {v}"),
            ));
        }
    }

    // Per-component diagonal variances, their inverses and log-norm constants.
    let nf = n_t as f64;
    let ln_n = nf.ln();
    let mut variances = vec![0.0f64; n_t * n_t];
    let mut inv_var = vec![0.0f64; n_t * n_t];
    let mut log_norm = vec![0.0f64; n_t];
    for c in 0..n_t {
        for k in 0..n_t {
            let v = 1.0 / s.values()[k] + if k == c { nf } else { 0.0 };
            variances[c * n_t + k] = v;
            inv_var[c * n_t + k] = 1.0 / v;
            log_norm[c] -= (std::f64::consts::PI * v).ln();
        }
    }
    let rng = *rng;

    let (sum, sum_sq) = exec::map_reduce(
        samples,
        |range| {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut y2 = vec![0.0f64; n_t];
            let mut logp = vec![0.0f64; n_t];
            for i in range {
                let mut sample_rng = rng.rng_at(i);
                let comp = sample_rng.gen_range(0..n_t);
                for (k, y) in y2.iter_mut().enumerate() {
                    let z = draw_complex_gaussian(&mut sample_rng);
                    *y = z.norm_sqr() * variances[comp * n_t + k];
                }
                let mut max = f64::NEG_INFINITY;
                for (c, lp) in logp.iter_mut().enumerate() {
                    let mut acc = log_norm[c];
                    for (k, y) in y2.iter().enumerate() {
                        acc -= y * inv_var[c * n_t + k];
                    }
                    *lp = acc;
                    max = max.max(acc);
                }
                let lse = max + logp.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
                let log_mix = lse - ln_n;
                let value = match stat {
                    MixtureStat::MutualInfo => (logp[comp] - log_mix) / std::f64::consts::LN_2,
                    MixtureStat::LogDensity => log_mix / std::f64::consts::LN_2,
                };
                sum += value;
                sum_sq += value * value;
            }
            (sum, sum_sq)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )
    .expect("samples >= 1e4");

    McEstimate::from_sums(sum, sum_sq, samples)
}

/// Monte Carlo estimate of the exact spatial-domain MI of the equivalent
/// model. For a single antenna the MI is identically zero and no
/// sampling happens.
pub fn spatial_mi_exact(s: &SinrVector, samples: u64, rng: &RngSpec) -> Result<McEstimate> {
    if samples < 10_000 {
        return Err(Error::invalid("mi-samples", "need at least 1e4 samples"));
    }
    if s.len() == 1 {
        return McEstimate::new(0.0, 0.0, samples);
    }
    sample_mixture(s, samples, rng, MixtureStat::MutualInfo)
}

/// Monte Carlo estimate of the expected log2-density of the equivalent
/// mixture (the term the Jensen bound
/// [`capacity::mixture_log_density_jensen_bound`] upper-bounds).
pub fn sampled_mixture_log_density(
    s: &SinrVector,
    samples: u64,
    rng: &RngSpec,
) -> Result<McEstimate> {
    sample_mixture(s, samples, rng, MixtureStat::LogDensity)
}

/// Simulated per-layer SE: exact constellation term plus sampled spatial
/// term, with the SINR vector taken from the closed form or re-estimated
/// from raw channels.
///
/// Orthogonal-share scaling for `SmTdmFdm` is the caller's business; the
/// returned breakdown covers the full resource.
pub fn simulated_se(
    layer: Layer,
    scheme: Scheme,
    cfg: &SystemConfig,
    split: &PowerSplit,
    sinr_source: SinrSource,
    mi_samples: u64,
    rng: &RngSpec,
) -> Result<SeBreakdown> {
    cfg.validate()?;
    let s = match scheme {
        Scheme::SmLdm | Scheme::SingleTaLdm => {
            let eff = scheme.effective_n_t(cfg.n_t);
            let eff_cfg = SystemConfig { n_t: eff, ..*cfg };
            match sinr_source {
                SinrSource::ClosedForm => match layer {
                    Layer::Ml => sinr::mrc_sinr_ml(&eff_cfg, split),
                    Layer::Fl => sinr::mrc_sinr_fl(&eff_cfg, split),
                },
                SinrSource::Empirical { trials } => {
                    empirical_sinr(layer, &eff_cfg, split, trials, rng)?
                }
            }
        }
        Scheme::SmxLdm | Scheme::SmTdmFdm => {
            if let SinrSource::Empirical { .. } = sinr_source {
                return Err(Error::invalid(
                    "sinr-source",
                    "empirical SINR is defined for sm-ldm and single-ta only",
                ));
            }
            match scheme {
                Scheme::SmxLdm => {
                    let (ml, fl) = sinr::smx_sinr(cfg, split);
                    match layer {
                        Layer::Ml => ml,
                        Layer::Fl => fl,
                    }
                }
                _ => {
                    let (ml, fl) = sinr::tdmfdm_sinr(cfg);
                    match layer {
                        Layer::Ml => ml,
                        Layer::Fl => fl,
                    }
                }
            }
        }
    };

    match scheme {
        Scheme::SmxLdm => {
            // Exact: all antennas carry constellation symbols, no index term.
            let (ml, fl) = capacity::smx_se(&s, &s);
            let total = match layer {
                Layer::Ml => ml,
                Layer::Fl => fl,
            };
            Ok(SeBreakdown::new(total, 0.0, Some(0.0)))
        }
        Scheme::SingleTaLdm => {
            let total = capacity::log2_1p(s.values()[0]);
            Ok(SeBreakdown::new(total, 0.0, Some(0.0)))
        }
        Scheme::SmLdm | Scheme::SmTdmFdm => {
            let constellation = capacity::constellation_mi(&s);
            if s.len() == 1 {
                return Ok(SeBreakdown::new(constellation, 0.0, Some(0.0)));
            }
            let mi_rng = rng.with_stream_offset(STREAM_BLOCK);
            let mi = spatial_mi_exact(&s, mi_samples, &mi_rng)?;
            Ok(SeBreakdown::new(constellation, mi.mean, Some(mi.stderr)))
        }
    }
}
